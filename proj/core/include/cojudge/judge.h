// Copyright 2026 The cojudge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COJUDGE_JUDGE_H_
#define COJUDGE_JUDGE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cojudge/split.h"

namespace cojudge {

inline constexpr std::size_t kMaxRationaleChars = 2000;

/// One judge's schema-constrained verdict for one attempt.
///
/// When `error` is set the numeric fields are absent and the record never
/// passes verification; a later successful call for the same attempt_id
/// replaces it.
struct JudgeOutput {
  std::string attempt_id;
  std::string judge;
  std::optional<double> p_ac;
  std::optional<int> s_algo;
  std::optional<int> s_robust;
  std::string rationale;
  std::optional<std::string> error;
  std::string raw_response;
  std::string received_at;

  bool ok() const { return !error.has_value(); }
  friend bool operator==(JudgeOutput const&, JudgeOutput const&) = default;
};

/// Parses a provider reply against the strict schema
/// {"p_ac": number in [0,1], "s_algo": int 1..5, "s_robust": int 1..5,
///  "rationale": string}.
///
/// A single repair pass (strip code fences, take the first balanced JSON
/// object) runs before a parse error is declared. Errors are reported in
/// the `error` slot with messages such as "p out of range" or
/// "missing field s_robust"; the raw text is kept verbatim.
JudgeOutput ParseJudgeResponse(std::string_view raw, std::string attempt_id,
                               std::string judge);

/// Extracts the first balanced {...} object, ignoring braces inside
/// strings; code fences are stripped first. Empty when none is found.
std::string ExtractJsonObject(std::string_view text);

enum class Provider { kMock, kOpenAI, kDeepSeek, kAnthropic, kGemini };
std::string_view ProviderName(Provider p);
absl::StatusOr<Provider> ProviderFromName(std::string_view name);

/// Failure injection for the offline mock judge.
struct MockBehavior {
  enum class Mode { kNone, kAlways, kTransient };
  Mode mode = Mode::kNone;
  // Fraction of attempt_ids (chosen by hash) affected by the failure mode.
  double fail_fraction = 1.0;
  // kTransient: calls per affected id that fail before one succeeds.
  int transient_failures = 1;
};

struct JudgeAdapterSpec {
  std::string name;
  Provider provider = Provider::kMock;
  std::string model;
  // Base URL, e.g. "https://api.openai.com". Empty selects the provider
  // default.
  std::string endpoint;
  double temperature = 0.0;
  std::optional<int> max_output_tokens;
  // Budget for a provider-side repair request issued after a parse
  // failure; unset disables the repair request.
  std::optional<int> repair_max_output_tokens;
  // Environment variable holding the API key.
  std::string credential_env;
  // Per-adapter pacing override; unset uses the pipeline default.
  std::optional<double> sleep_seconds;
  double timeout_seconds = 120.0;

  std::uint64_t mock_seed = 0;
  MockBehavior mock;

  absl::Status Validate() const;
};

/// Versioned judge instruction; mirrors the output schema.
inline constexpr std::string_view kInstructionVersion = "nonblind-v1";
std::string JudgeInstruction();
std::string RenderJudgePrompt(JudgeRequest const& request);

class JudgeAdapter {
 public:
  virtual ~JudgeAdapter() = default;
  virtual JudgeAdapterSpec const& spec() const = 0;
  // Transport and schema failures are reported in JudgeOutput::error.
  virtual JudgeOutput Infer(JudgeRequest const& request) = 0;
  // Remote adapters are paced; local ones are not.
  virtual bool remote() const { return true; }
};

/// Calls the adapter and converts any escaping exception into an error
/// record, so nothing propagates past the orchestrator.
JudgeOutput AdapterInfer(JudgeAdapter& adapter, JudgeRequest const& request);

/// Deterministic pseudo-judge: scores derive from a stable hash of
/// (attempt_id, seed) and the reply goes through ParseJudgeResponse.
JudgeOutput MockJudge(JudgeRequest const& request, std::uint64_t seed,
                      std::string judge = "mock");

class MockJudgeAdapter : public JudgeAdapter {
 public:
  explicit MockJudgeAdapter(JudgeAdapterSpec spec);

  JudgeAdapterSpec const& spec() const override { return spec_; }
  JudgeOutput Infer(JudgeRequest const& request) override;
  bool remote() const override { return false; }

  int calls() const;

 private:
  bool Affected(std::string const& attempt_id) const;

  JudgeAdapterSpec spec_;
  mutable std::mutex mu_;
  std::map<std::string, int> calls_per_id_;
  int calls_ = 0;
};

/// HTTP adapter for the chat/messages style JSON APIs of OpenAI, DeepSeek
/// (OpenAI compatible), Anthropic and Gemini.
absl::StatusOr<std::unique_ptr<JudgeAdapter>> MakeHttpJudgeAdapter(
    JudgeAdapterSpec spec);

/// Mock specs build a MockJudgeAdapter; everything else goes over HTTP.
absl::StatusOr<std::unique_ptr<JudgeAdapter>> MakeJudgeAdapter(
    JudgeAdapterSpec spec);

}  // namespace cojudge

#endif  // COJUDGE_JUDGE_H_
