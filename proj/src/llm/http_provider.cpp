#include <cstdlib>

#include "httplib.h"
#include "synsym/llm.hpp"

namespace synsym::llm {
namespace {

struct Endpoint {
  std::string origin;     // scheme://host[:port]
  std::string base_path;  // without trailing slash
};

Endpoint split_endpoint(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(Errc::kInvalidArgument, "endpoint must start with http:// or https://: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  Endpoint ep;
  ep.origin = url.substr(0, path_start);
  ep.base_path = path_start == std::string::npos ? std::string() : url.substr(path_start);
  while (!ep.base_path.empty() && ep.base_path.back() == '/') ep.base_path.pop_back();
  return ep;
}

// Chat-completions wire shape: messages with roles, temperature, max_tokens;
// reply text at choices[0].message.content.
class HttpChatBackend final : public Backend {
 public:
  explicit HttpChatBackend(const ProviderConfig& cfg)
      : endpoint_(split_endpoint(cfg.endpoint)), model_(cfg.model), timeout_(cfg.timeout_seconds) {
    const char* key = std::getenv(cfg.api_key_env.c_str());
    if (key == nullptr || *key == '\0') {
      throw Error(Errc::kAuthMissing, "environment variable " + cfg.api_key_env + " is not set");
    }
    api_key_ = key;
  }

  std::string id() const override { return "http:" + model_; }

  std::string attempt(const GenRequest& req) override {
    Json body{{"model", model_},
              {"messages", Json::array({Json{{"role", "system"}, {"content", req.system_prompt}},
                                        Json{{"role", "user"}, {"content", req.user_prompt}}})},
              {"temperature", req.temperature},
              {"max_tokens", req.max_output_tokens}};

    httplib::Client client(endpoint_.origin);
    client.set_connection_timeout(timeout_, 0);
    client.set_read_timeout(timeout_, 0);
    client.set_write_timeout(timeout_, 0);
    httplib::Headers headers{{"Authorization", "Bearer " + api_key_}};
    auto res = client.Post(endpoint_.base_path + "/chat/completions", headers, body.dump(), "application/json");
    if (!res) {
      throw Error(Errc::kTransient, "transport error: " + httplib::to_string(res.error()));
    }
    if (res->status == 429 || res->status >= 500) {
      throw Error(Errc::kTransient, "HTTP " + std::to_string(res->status));
    }
    if (res->status == 401 || res->status == 403) {
      throw Error(Errc::kAuthMissing, "endpoint rejected credentials (HTTP " + std::to_string(res->status) + ")");
    }
    if (res->status != 200) {
      throw Error(Errc::kProviderExhausted, "HTTP " + std::to_string(res->status) + ": " + res->body);
    }
    Json reply = Json::parse(res->body, nullptr, false);
    if (reply.is_discarded()) throw Error(Errc::kMalformedReply, "reply is not JSON");
    const Json* content = nullptr;
    if (reply.contains("choices") && reply["choices"].is_array() && !reply["choices"].empty()) {
      const Json& first = reply["choices"][0];
      if (first.contains("message") && first["message"].contains("content")) content = &first["message"]["content"];
    }
    if (content == nullptr || !content->is_string()) {
      throw Error(Errc::kMalformedReply, "reply lacks choices[0].message.content");
    }
    return content->get<std::string>();
  }

 private:
  Endpoint endpoint_;
  std::string model_;
  int timeout_;
  std::string api_key_;
};

}  // namespace

std::unique_ptr<Backend> make_http_backend(const ProviderConfig& cfg) {
  return std::make_unique<HttpChatBackend>(cfg);
}

}  // namespace synsym::llm
