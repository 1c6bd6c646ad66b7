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

#include "cojudge/judge.h"

#include <cctype>
#include <cmath>
#include <exception>

#include "absl/strings/str_cat.h"
#include "cojudge/io.h"
#include "cojudge/text.h"
#include "nlohmann/json.hpp"

namespace cojudge {
namespace {

using Json = nlohmann::json;

std::optional<Json> ParseObject(std::string_view text) {
  auto j = Json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

std::string StripCodeFences(std::string_view text) {
  std::string out;
  for (auto const& line : SplitLines(text)) {
    if (StartsWith(Trim(line), "```")) continue;
    out += line;
    out.push_back('\n');
  }
  return out;
}

// Returns an error message, or nullopt when the score is valid.
std::optional<std::string> ReadScore(Json const& obj, std::string const& key,
                                     std::optional<int>& out) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return "missing field " + key;
  if (!it->is_number()) return key + " not a number";
  double const v = it->get<double>();
  if (std::floor(v) != v) return key + " not an integer";
  if (v < 1 || v > 5) return key + " out of range";
  out = static_cast<int>(v);
  return std::nullopt;
}

}  // namespace

std::string ExtractJsonObject(std::string_view text) {
  auto const stripped = StripCodeFences(text);
  std::size_t start = stripped.find('{');
  while (start != std::string::npos) {
    int depth = 0;
    bool in_string = false;
    bool escape = false;
    for (std::size_t i = start; i < stripped.size(); ++i) {
      char const c = stripped[i];
      if (in_string) {
        if (escape) {
          escape = false;
        } else if (c == '\\') {
          escape = true;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}' && --depth == 0) {
        return stripped.substr(start, i - start + 1);
      }
    }
    start = stripped.find('{', start + 1);
  }
  return {};
}

JudgeOutput ParseJudgeResponse(std::string_view raw, std::string attempt_id,
                               std::string judge) {
  JudgeOutput out;
  out.attempt_id = std::move(attempt_id);
  out.judge = std::move(judge);
  out.raw_response = std::string(raw);

  auto obj = ParseObject(raw);
  if (!obj) {
    auto const candidate = ExtractJsonObject(raw);
    if (!candidate.empty()) obj = ParseObject(candidate);
  }
  auto fail = [&](std::string message) {
    out.p_ac.reset();
    out.s_algo.reset();
    out.s_robust.reset();
    out.error = std::move(message);
    return out;
  };
  if (!obj) return fail("malformed JSON response");

  auto p = obj->find("p_ac");
  if (p == obj->end() || p->is_null()) return fail("missing field p_ac");
  if (!p->is_number()) return fail("p not a number");
  double const pv = p->get<double>();
  if (!(pv >= 0.0 && pv <= 1.0)) return fail("p out of range");
  if (auto e = ReadScore(*obj, "s_algo", out.s_algo)) return fail(*e);
  if (auto e = ReadScore(*obj, "s_robust", out.s_robust)) return fail(*e);
  auto r = obj->find("rationale");
  if (r == obj->end() || r->is_null()) return fail("missing field rationale");
  if (!r->is_string()) return fail("rationale not a string");
  out.p_ac = pv;
  out.rationale = Utf8Prefix(r->get<std::string>(), kMaxRationaleChars);
  return out;
}

std::string_view ProviderName(Provider p) {
  switch (p) {
    case Provider::kMock:
      return "mock";
    case Provider::kOpenAI:
      return "openai";
    case Provider::kDeepSeek:
      return "deepseek";
    case Provider::kAnthropic:
      return "anthropic";
    case Provider::kGemini:
      return "gemini";
  }
  return "mock";
}

absl::StatusOr<Provider> ProviderFromName(std::string_view name) {
  auto const n = ToLower(name);
  if (n == "mock") return Provider::kMock;
  if (n == "openai") return Provider::kOpenAI;
  if (n == "deepseek") return Provider::kDeepSeek;
  if (n == "anthropic" || n == "claude") return Provider::kAnthropic;
  if (n == "gemini" || n == "google") return Provider::kGemini;
  return absl::InvalidArgumentError(absl::StrCat("unknown provider '", std::string(name), "'"));
}

absl::Status JudgeAdapterSpec::Validate() const {
  if (name.empty()) return absl::InvalidArgumentError("judge name is empty");
  for (char c : name) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')) {
      return absl::InvalidArgumentError(
          absl::StrCat("judge name '", name, "' must be [A-Za-z0-9_-]"));
    }
  }
  if (temperature != 0.0) {
    return absl::InvalidArgumentError(
        absl::StrCat("judge ", name, ": temperature must be 0"));
  }
  if (max_output_tokens && *max_output_tokens <= 0) {
    return absl::InvalidArgumentError("max_output_tokens must be positive");
  }
  if (provider != Provider::kMock && model.empty()) {
    return absl::InvalidArgumentError(absl::StrCat("judge ", name, ": model is empty"));
  }
  if (mock.fail_fraction < 0 || mock.fail_fraction > 1) {
    return absl::InvalidArgumentError("mock fail_fraction must be in [0,1]");
  }
  return absl::OkStatus();
}

std::string JudgeInstruction() {
  return
      "You are evaluating one submission from a programming contest in which "
      "participants worked with AI assistants.\n"
      "You receive the problem id, the programming language, the submitted "
      "source code and the participant's aggregated prompt history.\n"
      "Estimate how likely the submission is to be accepted by the contest "
      "judge and rate it on two rubrics:\n"
      "- s_algo (1-5): algorithmic adequacy; 1 = fundamentally wrong "
      "approach, 5 = correct and efficient approach.\n"
      "- s_robust (1-5): robustness and constraint handling (edge cases, "
      "limits, I/O format); 1 = severely inadequate, 5 = highly adequate.\n"
      "Reply with exactly one JSON object and nothing else:\n"
      "{\"p_ac\": <number in [0,1]>, \"s_algo\": <integer 1-5>, "
      "\"s_robust\": <integer 1-5>, \"rationale\": <short string>}";
}

std::string RenderJudgePrompt(JudgeRequest const& request) {
  return absl::StrCat("problem_id: ", request.problem_id, "\nlanguage: ",
                      request.language, "\n\nsource_code:\n", request.source_code,
                      "\n\nprompt_text:\n", request.prompt_text, "\n");
}

JudgeOutput AdapterInfer(JudgeAdapter& adapter, JudgeRequest const& request) {
  try {
    auto out = adapter.Infer(request);
    out.attempt_id = request.attempt_id;
    out.judge = adapter.spec().name;
    return out;
  } catch (std::exception const& e) {
    JudgeOutput out;
    out.attempt_id = request.attempt_id;
    out.judge = adapter.spec().name;
    out.error = absl::StrCat("TransportFailure: ", e.what());
    return out;
  }
}

JudgeOutput MockJudge(JudgeRequest const& request, std::uint64_t seed,
                      std::string judge) {
  std::uint64_t const h =
      SplitMix64(Fnv1a64(request.attempt_id) ^ SplitMix64(seed));
  std::uint64_t const h1 = SplitMix64(h);
  std::uint64_t const h2 = SplitMix64(h1);
  std::uint64_t const h3 = SplitMix64(h2);
  double const p = static_cast<double>(h1 >> 11) * 0x1.0p-53;
  Json reply = {{"p_ac", p},
                {"s_algo", 1 + static_cast<int>(h2 % 5)},
                {"s_robust", 1 + static_cast<int>(h3 % 5)},
                {"rationale", absl::StrCat("mock judge (seed ", seed, ")")}};
  return ParseJudgeResponse(reply.dump(), request.attempt_id, std::move(judge));
}

MockJudgeAdapter::MockJudgeAdapter(JudgeAdapterSpec spec) : spec_(std::move(spec)) {}

int MockJudgeAdapter::calls() const {
  std::lock_guard<std::mutex> lock(mu_);
  return calls_;
}

bool MockJudgeAdapter::Affected(std::string const& attempt_id) const {
  if (spec_.mock.fail_fraction >= 1.0) return true;
  std::uint64_t const h = SplitMix64(Fnv1a64(attempt_id) ^ 0x5eedfa11ULL);
  return static_cast<double>(h >> 11) * 0x1.0p-53 < spec_.mock.fail_fraction;
}

JudgeOutput MockJudgeAdapter::Infer(JudgeRequest const& request) {
  int call_index;
  {
    std::lock_guard<std::mutex> lock(mu_);
    ++calls_;
    call_index = calls_per_id_[request.attempt_id]++;
  }
  using Mode = MockBehavior::Mode;
  bool const fails =
      spec_.mock.mode != Mode::kNone && Affected(request.attempt_id) &&
      (spec_.mock.mode == Mode::kAlways ||
       call_index < spec_.mock.transient_failures);
  if (fails) {
    JudgeOutput out;
    out.attempt_id = request.attempt_id;
    out.judge = spec_.name;
    out.error = "RateLimited: injected mock failure";
    return out;
  }
  return MockJudge(request, spec_.mock_seed, spec_.name);
}

absl::StatusOr<std::unique_ptr<JudgeAdapter>> MakeJudgeAdapter(JudgeAdapterSpec spec) {
  if (auto s = spec.Validate(); !s.ok()) return s;
  if (spec.provider == Provider::kMock) {
    return std::unique_ptr<JudgeAdapter>(
        std::make_unique<MockJudgeAdapter>(std::move(spec)));
  }
  return MakeHttpJudgeAdapter(std::move(spec));
}

}  // namespace cojudge
