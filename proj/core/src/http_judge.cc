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

// HTTP judge adapters. Only this translation unit includes httplib.
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <chrono>
#include <cstdlib>
#include <ctime>

#include "absl/strings/str_cat.h"
#include "cojudge/judge.h"
#include "nlohmann/json.hpp"

namespace cojudge {
namespace {

using Json = nlohmann::json;

struct Reply {
  std::string text;
  std::optional<std::string> error;  // transport / HTTP / truncation
};

std::string DefaultEndpoint(Provider p) {
  switch (p) {
    case Provider::kOpenAI:
      return "https://api.openai.com";
    case Provider::kDeepSeek:
      return "https://api.deepseek.com";
    case Provider::kAnthropic:
      return "https://api.anthropic.com";
    case Provider::kGemini:
      return "https://generativelanguage.googleapis.com";
    case Provider::kMock:
      break;
  }
  return {};
}

class HttpJudgeAdapter : public JudgeAdapter {
 public:
  HttpJudgeAdapter(JudgeAdapterSpec spec, std::string api_key)
      : spec_(std::move(spec)), api_key_(std::move(api_key)) {
    if (spec_.endpoint.empty()) spec_.endpoint = DefaultEndpoint(spec_.provider);
  }

  JudgeAdapterSpec const& spec() const override { return spec_; }

  JudgeOutput Infer(JudgeRequest const& request) override {
    auto const user = RenderJudgePrompt(request);
    auto reply = Call(user, spec_.max_output_tokens);
    if (reply.error) return ErrorOutput(request, *reply.error, reply.text);
    auto out = ParseJudgeResponse(reply.text, request.attempt_id, spec_.name);
    if (out.ok() || !spec_.repair_max_output_tokens) return out;

    // Provider-side repair: one re-request with the larger budget.
    auto const repair_prompt = absl::StrCat(
        user, "\n\nYour previous reply could not be parsed (", *out.error,
        "). Reply again with only the JSON object.");
    auto repaired = Call(repair_prompt, spec_.repair_max_output_tokens);
    auto const raw = absl::StrCat(reply.text, "\n--- repair ---\n", repaired.text);
    if (repaired.error) return ErrorOutput(request, *repaired.error, raw);
    auto second = ParseJudgeResponse(repaired.text, request.attempt_id, spec_.name);
    second.raw_response = raw;
    return second;
  }

 private:
  JudgeOutput ErrorOutput(JudgeRequest const& request, std::string error,
                          std::string raw) const {
    JudgeOutput out;
    out.attempt_id = request.attempt_id;
    out.judge = spec_.name;
    out.error = std::move(error);
    out.raw_response = std::move(raw);
    return out;
  }

  Reply Call(std::string const& user, std::optional<int> max_tokens) {
    std::string path;
    Json body;
    httplib::Headers headers;
    switch (spec_.provider) {
      case Provider::kOpenAI:
      case Provider::kDeepSeek:
        path = spec_.provider == Provider::kOpenAI ? "/v1/chat/completions"
                                                   : "/chat/completions";
        body = {{"model", spec_.model},
                {"temperature", spec_.temperature},
                {"messages",
                 Json::array({{{"role", "system"}, {"content", JudgeInstruction()}},
                              {{"role", "user"}, {"content", user}}})},
                {"response_format", {{"type", "json_object"}}}};
        if (max_tokens) {
          body[spec_.provider == Provider::kOpenAI ? "max_completion_tokens"
                                                   : "max_tokens"] = *max_tokens;
        }
        headers.emplace("Authorization", "Bearer " + api_key_);
        break;
      case Provider::kAnthropic:
        path = "/v1/messages";
        body = {{"model", spec_.model},
                {"temperature", spec_.temperature},
                {"max_tokens", max_tokens.value_or(1024)},
                {"system", JudgeInstruction()},
                {"messages", Json::array({{{"role", "user"}, {"content", user}}})}};
        headers.emplace("x-api-key", api_key_);
        headers.emplace("anthropic-version", "2023-06-01");
        break;
      case Provider::kGemini: {
        path = absl::StrCat("/v1beta/models/", spec_.model, ":generateContent");
        Json config = {{"temperature", spec_.temperature},
                       {"responseMimeType", "application/json"}};
        if (max_tokens) config["maxOutputTokens"] = *max_tokens;
        body = {{"systemInstruction", {{"parts", Json::array({{{"text", JudgeInstruction()}}})}}},
                {"contents",
                 Json::array({{{"role", "user"},
                               {"parts", Json::array({{{"text", user}}})}}})},
                {"generationConfig", config}};
        headers.emplace("x-goog-api-key", api_key_);
        break;
      }
      case Provider::kMock:
        return {{}, "TransportFailure: mock provider has no HTTP endpoint"};
    }

    // "https://host[:port][/prefix]": httplib takes the origin, the prefix
    // goes in front of the API path.
    std::string origin = spec_.endpoint;
    std::string prefix;
    auto const scheme = origin.find("://");
    auto const slash = origin.find('/', scheme == std::string::npos ? 0 : scheme + 3);
    if (slash != std::string::npos) {
      prefix = origin.substr(slash);
      origin.resize(slash);
      while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    }
    httplib::Client client(origin);
    auto const timeout = std::chrono::duration<double>(spec_.timeout_seconds);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::seconds>(timeout));
    auto res = client.Post(prefix + path, headers, body.dump(), "application/json");
    if (!res) {
      return {{}, absl::StrCat("TransportFailure: ", httplib::to_string(res.error()))};
    }
    if (res->status == 429) {
      return {res->body, "RateLimited: HTTP 429"};
    }
    if (res->status < 200 || res->status >= 300) {
      return {res->body, absl::StrCat("TransportFailure: HTTP ", res->status)};
    }
    return Extract(res->body);
  }

  // Pulls the model text out of the provider envelope.
  Reply Extract(std::string const& envelope) const {
    auto j = Json::parse(envelope, nullptr, false);
    if (j.is_discarded()) return {envelope, "TransportFailure: non-JSON envelope"};
    try {
      switch (spec_.provider) {
        case Provider::kOpenAI:
        case Provider::kDeepSeek: {
          auto const& choice = j.at("choices").at(0);
          auto const& content = choice.at("message").at("content");
          std::string text = content.is_string() ? content.get<std::string>() : "";
          if (choice.value("finish_reason", "") == "length") {
            return {text, "Truncated: finish_reason=length"};
          }
          return {text, std::nullopt};
        }
        case Provider::kAnthropic: {
          std::string text;
          for (auto const& block : j.at("content")) {
            if (block.value("type", "") == "text") text += block.value("text", "");
          }
          if (j.value("stop_reason", "") == "max_tokens") {
            return {text, "Truncated: stop_reason=max_tokens"};
          }
          return {text, std::nullopt};
        }
        case Provider::kGemini: {
          auto const& cand = j.at("candidates").at(0);
          std::string text;
          for (auto const& part : cand.at("content").at("parts")) {
            text += part.value("text", "");
          }
          if (cand.value("finishReason", "") == "MAX_TOKENS") {
            return {text, "Truncated: finishReason=MAX_TOKENS"};
          }
          return {text, std::nullopt};
        }
        case Provider::kMock:
          break;
      }
    } catch (Json::exception const& e) {
      return {envelope, absl::StrCat("TransportFailure: unexpected envelope: ", e.what())};
    }
    return {envelope, "TransportFailure: unsupported provider"};
  }

  JudgeAdapterSpec spec_;
  std::string api_key_;
};

}  // namespace

absl::StatusOr<std::unique_ptr<JudgeAdapter>> MakeHttpJudgeAdapter(
    JudgeAdapterSpec spec) {
  if (auto s = spec.Validate(); !s.ok()) return s;
  if (spec.provider == Provider::kMock) {
    return absl::InvalidArgumentError("mock specs have no HTTP adapter");
  }
  if (spec.credential_env.empty()) {
    spec.credential_env =
        absl::StrCat("COJUDGE_API_KEY_", [&] {
          std::string up(ProviderName(spec.provider));
          for (auto& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
          return up;
        }());
  }
  char const* key = std::getenv(spec.credential_env.c_str());
  if (key == nullptr || *key == '\0') {
    return absl::FailedPreconditionError(absl::StrCat(
        "judge ", spec.name, ": credential variable ", spec.credential_env,
        " is not set"));
  }
  return std::unique_ptr<JudgeAdapter>(
      std::make_unique<HttpJudgeAdapter>(std::move(spec), key));
}

}  // namespace cojudge
