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

#include "cojudge/config.h"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "absl/strings/str_cat.h"
#include "cojudge/io.h"
#include "cojudge/text.h"
#include "nlohmann/json.hpp"

namespace cojudge {
namespace {

using Json = nlohmann::json;
namespace fs = std::filesystem;

absl::Status Invalid(std::string_view what) {
  return absl::InvalidArgumentError(absl::StrCat("config: ", std::string(what)));
}

bool HasInterpolation(Json const& j) {
  if (j.is_string()) return j.get<std::string>().find("${") != std::string::npos;
  if (j.is_structured()) {
    for (auto const& v : j) {
      if (HasInterpolation(v)) return true;
    }
  }
  return false;
}

absl::StatusOr<MockBehavior::Mode> ModeFromName(std::string const& s) {
  if (s == "none") return MockBehavior::Mode::kNone;
  if (s == "always") return MockBehavior::Mode::kAlways;
  if (s == "transient") return MockBehavior::Mode::kTransient;
  return Invalid(absl::StrCat("unknown mock mode '", s, "'"));
}

std::string_view ModeName(MockBehavior::Mode m) {
  switch (m) {
    case MockBehavior::Mode::kNone:
      return "none";
    case MockBehavior::Mode::kAlways:
      return "always";
    case MockBehavior::Mode::kTransient:
      return "transient";
  }
  return "none";
}

absl::StatusOr<JudgeAdapterSpec> ParseJudge(Json const& j, std::uint64_t seed) {
  JudgeAdapterSpec spec;
  spec.name = j.value("name", "");
  if (spec.name.empty()) return Invalid("judge without a name");
  auto provider = ProviderFromName(j.value("provider", "mock"));
  if (!provider.ok()) return provider.status();
  spec.provider = *provider;
  spec.model = j.value("model", "");
  spec.endpoint = j.value("endpoint", "");
  spec.temperature = j.value("temperature", 0.0);
  if (j.contains("max_output_tokens")) spec.max_output_tokens = j["max_output_tokens"].get<int>();
  if (j.contains("repair_max_output_tokens")) {
    spec.repair_max_output_tokens = j["repair_max_output_tokens"].get<int>();
  }
  if (j.contains("sleep_seconds")) spec.sleep_seconds = j["sleep_seconds"].get<double>();
  spec.timeout_seconds = j.value("timeout_seconds", spec.timeout_seconds);
  spec.credential_env = j.value("credential_env", "");
  if (j.contains("api_key")) {
    auto const key = j["api_key"].get<std::string>();
    if (!(StartsWith(key, "${") && EndsWith(key, "}") && key.size() > 3)) {
      return Invalid(absl::StrCat("judge ", spec.name,
                                  ": api_key must be an ${ENV_VAR} reference"));
    }
    spec.credential_env = key.substr(2, key.size() - 3);
  }
  spec.mock_seed = j.value("mock_seed", Fnv1a64(spec.name) ^ seed);
  if (j.contains("mock")) {
    auto const& m = j["mock"];
    auto mode = ModeFromName(m.value("mode", "none"));
    if (!mode.ok()) return mode.status();
    spec.mock.mode = *mode;
    spec.mock.fail_fraction = m.value("fail_fraction", 1.0);
    spec.mock.transient_failures = m.value("transient_failures", 1);
  }
  if (auto s = spec.Validate(); !s.ok()) return s;
  return spec;
}

}  // namespace

absl::Status PipelineConfig::Validate() const {
  if (auto s = split.Validate(); !s.ok()) return s;
  if (auto s = codebleu.Validate(); !s.ok()) return s;
  if (max_code_chars == 0 || max_prompt_chars == 0) return Invalid("budgets must be positive");
  if (sleep_seconds < 0) return Invalid("sleep_seconds must be >= 0");
  if (save_every < 1) return Invalid("save_every must be >= 1");
  if (max_retries < 0) return Invalid("max_retries must be >= 0");
  if (ece_bins < 1) return Invalid("ece_bins must be >= 1");
  if (judges.empty()) return Invalid("no judges configured");
  std::set<std::string> names;
  for (auto const& j : judges) {
    if (auto s = j.Validate(); !s.ok()) return s;
    if (!names.insert(j.name).second) return Invalid(absl::StrCat("duplicate judge ", j.name));
  }
  if (record_separator.empty()) return Invalid("record_separator must be non-empty");
  return absl::OkStatus();
}

std::vector<std::string> DefaultJudgeNames() {
  return {"openai", "deepseek", "gemini", "claude"};
}

JudgeAdapterSpec MockSpecFor(std::string const& name, std::uint64_t seed) {
  JudgeAdapterSpec spec;
  spec.name = name;
  spec.provider = Provider::kMock;
  spec.model = "mock";
  spec.mock_seed = Fnv1a64(name) ^ seed;
  spec.sleep_seconds = 0.0;
  return spec;
}

PipelineConfig DefaultConfig() {
  PipelineConfig c;
  for (auto const& name : DefaultJudgeNames()) c.judges.push_back(MockSpecFor(name, c.seed));
  return c;
}

std::optional<std::string> ProcessEnv(std::string const& name) {
  char const* v = std::getenv(name.c_str());
  if (v == nullptr) return std::nullopt;
  return std::string(v);
}

absl::StatusOr<PipelineConfig> ParseConfig(std::string_view json_text,
                                           fs::path const& base_dir) {
  auto j = Json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return Invalid("not a JSON object");
  PipelineConfig c;
  try {
    for (auto const& [key, value] : j.items()) {
      if (key != "judges" && HasInterpolation(value)) {
        return Invalid(absl::StrCat("${...} interpolation is only allowed for judge api_key (in '",
                                    key, "')"));
      }
    }
    auto path = [&](char const* key) -> fs::path {
      if (!j.contains(key)) return {};
      fs::path p = j[key].get<std::string>();
      return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    };
    c.input_dir = path("input_dir");
    c.work_dir = path("work_dir");
    c.seed = j.value("seed", std::uint64_t{0});
    c.split.seed = c.seed;
    if (j.contains("split")) {
      auto const& s = j["split"];
      if (s.contains("ratios")) {
        auto r = s["ratios"].get<std::vector<double>>();
        if (r.size() != 3) return Invalid("split.ratios needs 3 entries");
        c.split.ratios = {r[0], r[1], r[2]};
      }
      c.split.stratify = s.value("stratify", c.split.stratify);
      if (s.contains("seed")) c.split.seed = s["seed"].get<std::uint64_t>();
    }
    if (j.contains("budgets")) {
      auto const& b = j["budgets"];
      c.max_code_chars = b.value("max_code_chars", c.max_code_chars);
      c.max_prompt_chars = b.value("max_prompt_chars", c.max_prompt_chars);
    }
    if (j.contains("pacing")) {
      auto const& p = j["pacing"];
      c.sleep_seconds = p.value("sleep_seconds", c.sleep_seconds);
      c.save_every = p.value("save_every", c.save_every);
    }
    if (j.contains("retry")) {
      auto const& r = j["retry"];
      c.max_retries = r.value("max_retries", c.max_retries);
      c.backoff.base_seconds = r.value("base_seconds", c.backoff.base_seconds);
      c.backoff.factor = r.value("factor", c.backoff.factor);
      c.backoff.jitter = r.value("jitter", c.backoff.jitter);
      c.backoff.cap_seconds = r.value("cap_seconds", c.backoff.cap_seconds);
    }
    c.backoff.seed = c.seed;
    c.ece_bins = j.value("ece_bins", c.ece_bins);
    if (j.contains("codebleu")) {
      auto const& cb = j["codebleu"];
      if (cb.contains("weights")) {
        auto w = cb["weights"].get<std::vector<double>>();
        if (w.size() != 4) return Invalid("codebleu.weights needs 4 entries");
        c.codebleu.weights = {w[0], w[1], w[2], w[3]};
      }
      c.codebleu.max_ngram = cb.value("max_ngram", c.codebleu.max_ngram);
      c.codebleu.keyword_weight = cb.value("keyword_weight", c.codebleu.keyword_weight);
      if (cb.contains("grammars")) {
        for (auto const& [lang, g] : cb["grammars"].items()) {
          if (g.is_null()) {
            c.codebleu.grammar_overrides[ToLower(lang)] = std::nullopt;
            continue;
          }
          auto grammar = GrammarFromName(g.get<std::string>());
          if (!grammar) return Invalid(absl::StrCat("unknown grammar for ", lang));
          c.codebleu.grammar_overrides[ToLower(lang)] = grammar;
        }
      }
    }
    if (j.contains("ingest")) {
      auto const& in = j["ingest"];
      c.record_separator = in.value("record_separator", c.record_separator);
      if (in.contains("labels")) {
        auto const& l = in["labels"];
        auto set = [&](char const* key, std::vector<std::string>& dst) {
          if (l.contains(key)) dst = l[key].get<std::vector<std::string>>();
        };
        set("participant", c.labels.participant);
        set("problem", c.labels.problem);
        set("verdict", c.labels.verdict);
        set("timestamp", c.labels.timestamp);
        set("language", c.labels.language);
      }
    }
    if (j.contains("judges")) {
      for (auto const& jj : j["judges"]) {
        for (auto const& [key, value] : jj.items()) {
          if (key != "api_key" && HasInterpolation(value)) {
            return Invalid(absl::StrCat("${...} interpolation is only allowed for api_key (in '",
                                        key, "')"));
          }
        }
        auto spec = ParseJudge(jj, c.seed);
        if (!spec.ok()) return spec.status();
        c.judges.push_back(*std::move(spec));
      }
    } else {
      for (auto const& name : DefaultJudgeNames()) c.judges.push_back(MockSpecFor(name, c.seed));
    }
  } catch (Json::exception const& e) {
    return Invalid(e.what());
  }
  if (auto s = c.Validate(); !s.ok()) return s;
  return c;
}

absl::StatusOr<PipelineConfig> LoadConfig(fs::path const& path) {
  auto text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseConfig(*text, path.parent_path());
}

std::string CanonicalConfigJson(PipelineConfig const& c) {
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  j["split"] = {{"ratios", c.split.ratios}, {"seed", c.split.seed}, {"stratify", c.split.stratify}};
  j["budgets"] = {{"max_code_chars", c.max_code_chars}, {"max_prompt_chars", c.max_prompt_chars}};
  j["pacing"] = {{"sleep_seconds", c.sleep_seconds}, {"save_every", c.save_every}};
  j["retry"] = {{"max_retries", c.max_retries},
                {"base_seconds", c.backoff.base_seconds},
                {"factor", c.backoff.factor},
                {"jitter", c.backoff.jitter},
                {"cap_seconds", c.backoff.cap_seconds}};
  j["ece_bins"] = c.ece_bins;
  nlohmann::ordered_json grammars = nlohmann::ordered_json::object();
  for (auto const& [lang, g] : c.codebleu.grammar_overrides) {
    grammars[lang] = g ? nlohmann::ordered_json(std::string(GrammarName(*g)))
                       : nlohmann::ordered_json(nullptr);
  }
  j["codebleu"] = {{"weights", c.codebleu.weights},
                   {"max_ngram", c.codebleu.max_ngram},
                   {"keyword_weight", c.codebleu.keyword_weight},
                   {"grammars", grammars}};
  j["ingest"] = {{"record_separator", c.record_separator},
                 {"labels",
                  {{"participant", c.labels.participant},
                   {"problem", c.labels.problem},
                   {"verdict", c.labels.verdict},
                   {"timestamp", c.labels.timestamp},
                   {"language", c.labels.language}}}};
  auto judges = nlohmann::ordered_json::array();
  for (auto const& s : c.judges) {
    nlohmann::ordered_json jj;
    jj["name"] = s.name;
    jj["provider"] = std::string(ProviderName(s.provider));
    jj["model"] = s.model;
    jj["temperature"] = s.temperature;
    jj["max_output_tokens"] = s.max_output_tokens ? nlohmann::ordered_json(*s.max_output_tokens)
                                                  : nlohmann::ordered_json(nullptr);
    jj["repair_max_output_tokens"] = s.repair_max_output_tokens
                                         ? nlohmann::ordered_json(*s.repair_max_output_tokens)
                                         : nlohmann::ordered_json(nullptr);
    jj["instruction"] = std::string(kInstructionVersion);
    if (s.provider == Provider::kMock) {
      jj["mock_seed"] = s.mock_seed;
      jj["mock_mode"] = std::string(ModeName(s.mock.mode));
      jj["mock_fail_fraction"] = s.mock.fail_fraction;
      jj["mock_transient_failures"] = s.mock.transient_failures;
    }
    judges.push_back(std::move(jj));
  }
  j["judges"] = std::move(judges);
  return j.dump(2);
}

void MakeOffline(PipelineConfig& config) {
  for (auto& spec : config.judges) {
    if (spec.provider == Provider::kMock) {
      spec.sleep_seconds = 0.0;
      continue;
    }
    spec = MockSpecFor(spec.name, config.seed);
  }
}

absl::Status SelectJudges(PipelineConfig& config, std::vector<std::string> const& names) {
  std::vector<JudgeAdapterSpec> selected;
  for (auto const& n : names) {
    auto it = std::find_if(config.judges.begin(), config.judges.end(),
                           [&](auto const& s) { return s.name == n; });
    if (it == config.judges.end()) {
      return absl::NotFoundError(absl::StrCat("judge '", n, "' is not configured"));
    }
    selected.push_back(*it);
  }
  config.judges = std::move(selected);
  return absl::OkStatus();
}

}  // namespace cojudge
