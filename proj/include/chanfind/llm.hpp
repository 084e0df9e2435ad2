#pragma once

// Remote language-model backend speaking the chat-completion wire protocol
// with JSON-schema constrained responses. Transport is pluggable so recorded
// exchanges can be replayed without a network.

#include <cstdlib>
#include <deque>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "chanfind/errors.hpp"
#include "chanfind/json_schema.hpp"
#include "chanfind/selector.hpp"

namespace chanfind {

struct HttpResponse {
  int status = 0;
  std::string body;
};

using HttpHeaders = std::vector<std::pair<std::string, std::string>>;

class Transport {
 public:
  virtual ~Transport() = default;
  // Throws TransportError when no response could be obtained.
  virtual HttpResponse post(const std::string& url, const HttpHeaders& headers, const std::string& body) = 0;
};

// Replays canned responses in order and records every request body.
class FixtureTransport : public Transport {
 public:
  FixtureTransport() = default;
  explicit FixtureTransport(std::vector<HttpResponse> responses) : queue_(responses.begin(), responses.end()) {}

  void push(HttpResponse r) {
    std::lock_guard<std::mutex> lock(mutex_);
    queue_.push_back(std::move(r));
  }

  HttpResponse post(const std::string& url, const HttpHeaders& headers, const std::string& body) override {
    std::lock_guard<std::mutex> lock(mutex_);
    requests_.push_back({url, headers, body});
    if (queue_.empty()) throw TransportError("fixture transport exhausted");
    auto r = std::move(queue_.front());
    queue_.pop_front();
    return r;
  }

  struct Recorded {
    std::string url;
    HttpHeaders headers;
    std::string body;
  };
  std::vector<Recorded> requests() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return requests_;
  }

 private:
  mutable std::mutex mutex_;
  std::deque<HttpResponse> queue_;
  std::vector<Recorded> requests_;
};

struct LlmConfig {
  std::string url;  // full chat-completions endpoint
  std::string api_key;
  std::string model = "gpt-4o-mini";
  double temperature = 0.0;

  // CHANFIND_LLM_URL, CHANFIND_LLM_KEY, optional CHANFIND_LLM_MODEL.
  static LlmConfig from_env() {
    LlmConfig c;
    if (const char* u = std::getenv("CHANFIND_LLM_URL")) c.url = u;
    if (const char* k = std::getenv("CHANFIND_LLM_KEY")) c.api_key = k;
    if (const char* m = std::getenv("CHANFIND_LLM_MODEL")) c.model = m;
    return c;
  }
};

inline nlohmann::json choice_schema(const ChoiceRequest& req) {
  nlohmann::json ids = nlohmann::json::array();
  for (const auto& o : req.options) ids.push_back(o.id);
  nlohmann::json selected = {{"type", "array"}, {"items", {{"type", "string"}, {"enum", ids}}}};
  if (!req.multi_select) {
    selected["maxItems"] = 1;
  } else if (req.max_selected) {
    selected["maxItems"] = req.max_selected;
  }
  return {{"type", "object"},
          {"properties", {{"selected", selected}, {"abstain", {{"type", "boolean"}}}, {"rationale", {{"type", "string"}}}}},
          {"required", {"selected", "abstain", "rationale"}},
          {"additionalProperties", false}};
}

inline std::string choice_prompt(const ChoiceRequest& req) {
  std::string p = req.context;
  if (!p.empty()) p += "\n\n";
  p += "Query: " + req.query + "\n";
  if (!req.resolved.empty()) p += "Already selected: " + join(req.resolved, " > ") + "\n";
  p += req.multi_select ? "Select every option that the query needs.\n" : "Select the single best option.\n";
  if (req.allow_abstain) p += "If no option fits, set abstain to true and select nothing.\n";
  p += "Options:\n";
  for (const auto& o : req.options) {
    p += "- " + o.id + ": " + o.label;
    if (!o.description.empty()) p += " - " + o.description;
    p += "\n";
  }
  return p;
}

// Parses a chat-completion response body into the structured document
// carried in choices[0].message.content. Throws TransportError on envelope
// damage; returns nullopt-like null json when the content is not JSON.
inline nlohmann::json extract_structured_content(const std::string& body) {
  nlohmann::json env;
  try {
    env = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error&) {
    throw TransportError("response body is not JSON");
  }
  if (!env.contains("choices") || !env.at("choices").is_array() || env.at("choices").empty())
    throw TransportError("response has no choices");
  const auto& msg = env.at("choices").at(0).value("message", nlohmann::json::object());
  const auto content = msg.value("content", nlohmann::json());
  if (content.is_object()) return content;
  if (!content.is_string()) return nullptr;
  try {
    return nlohmann::json::parse(content.get<std::string>());
  } catch (const nlohmann::json::parse_error&) {
    return nullptr;
  }
}

class RemoteLlmBackend : public SelectorBackend {
 public:
  RemoteLlmBackend(LlmConfig config, std::shared_ptr<Transport> transport)
      : config_(std::move(config)), transport_(std::move(transport)) {}

  BackendKind kind() const override { return BackendKind::kRemoteLLM; }

  nlohmann::json request_body(const std::string& prompt, const nlohmann::json& schema, const std::string& name) const {
    return {{"model", config_.model},
            {"temperature", config_.temperature},
            {"messages",
             {{{"role", "system"},
               {"content", "You map operator requests to control-system channels. Answer only with JSON that "
                           "matches the response schema."}},
              {{"role", "user"}, {"content", prompt}}}},
            {"response_format",
             {{"type", "json_schema"}, {"json_schema", {{"name", name}, {"strict", true}, {"schema", schema}}}}}};
  }

  // Validates the reply against `schema`; one retry on violation.
  nlohmann::json complete_structured(const std::string& prompt, const nlohmann::json& schema,
                                     const std::string& name = "response") {
    const std::string body = request_body(prompt, schema, name).dump();
    std::string last_error;
    for (int attempt = 0; attempt < 2; ++attempt) {
      const auto doc = extract_structured_content(send(body));
      if (doc.is_null()) {
        last_error = "model reply is not a JSON document";
        continue;
      }
      last_error = schema_violation(doc, schema);
      if (last_error.empty()) return doc;
    }
    throw SchemaViolationAfterRetry(last_error);
  }

  ChoiceResponse choose(const ChoiceRequest& req) override {
    const auto doc = complete_structured(choice_prompt(req), choice_schema(req), "choice");
    ChoiceResponse r;
    for (const auto& id : doc.at("selected")) r.selected.push_back(id.get<std::string>());
    r.abstained = doc.at("abstain").get<bool>();
    r.rationale = doc.at("rationale").get<std::string>();
    return r;
  }

  std::vector<std::string> decompose(const std::string& query) override {
    static const nlohmann::json schema = {
        {"type", "object"},
        {"properties", {{"subqueries", {{"type", "array"}, {"minItems", 1}, {"items", {{"type", "string"}}}}}}},
        {"required", {"subqueries"}},
        {"additionalProperties", false}};
    const std::string prompt =
        "Split the request into atomic sub-queries, one per requested quantity. Keep single-target requests "
        "unchanged.\nRequest: " +
        query;
    const auto doc = complete_structured(prompt, schema, "decomposition");
    std::vector<std::string> out;
    for (const auto& s : doc.at("subqueries")) out.push_back(s.get<std::string>());
    return out;
  }

  std::vector<std::string> name_channels(const std::vector<std::string>& descriptions) override {
    const nlohmann::json schema = {
        {"type", "object"},
        {"properties",
         {{"names",
           {{"type", "array"},
            {"minItems", descriptions.size()},
            {"maxItems", descriptions.size()},
            {"items", {{"type", "string"}, {"minLength", 1}}}}}}},
        {"required", {"names"}},
        {"additionalProperties", false}};
    std::string prompt =
        "For each legacy channel description, extract the salient semantic components and assemble a PascalCase "
        "channel name. Return names in input order.\n";
    for (std::size_t i = 0; i < descriptions.size(); ++i)
      prompt += std::to_string(i + 1) + ". " + descriptions[i] + "\n";
    const auto doc = complete_structured(prompt, schema, "channel_names");
    std::vector<std::string> out;
    for (const auto& s : doc.at("names")) out.push_back(s.get<std::string>());
    return out;
  }

 private:
  std::string send(const std::string& body) {
    if (config_.url.empty()) throw TransportError("CHANFIND_LLM_URL is not set");
    HttpHeaders headers = {{"Content-Type", "application/json"}};
    if (!config_.api_key.empty()) headers.emplace_back("Authorization", "Bearer " + config_.api_key);
    HttpResponse resp;
    {
      std::lock_guard<std::mutex> lock(transport_mutex_);
      resp = transport_->post(config_.url, headers, body);
    }
    if (resp.status == 401 || resp.status == 403) throw AuthError("endpoint rejected credentials (HTTP " + std::to_string(resp.status) + ")");
    if (resp.status < 200 || resp.status >= 300) throw TransportError("HTTP " + std::to_string(resp.status));
    return resp.body;
  }

  LlmConfig config_;
  std::shared_ptr<Transport> transport_;
  std::mutex transport_mutex_;
};

}  // namespace chanfind
