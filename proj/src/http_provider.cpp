#include "claimex/gateway.hpp"
#include "claimex/jsonl.hpp"

#include <httplib.h>

#include <cstdlib>

namespace claimex {

namespace {

std::string env_or_empty(const std::string& name) {
  const char* value = std::getenv(name.c_str());
  return value ? value : "";
}

// "https://host[:port]/path" -> {scheme://host[:port], /path}
std::pair<std::string, std::string> split_url(const std::string& url) {
  const std::size_t scheme_end = url.find("://");
  const std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const std::size_t path_start = url.find('/', host_start);
  if (path_start == std::string::npos) return {url, ""};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

HttpChatProvider::HttpChatProvider(std::string base_url, std::string api_key_env)
    : base_url_(std::move(base_url)) {
  if (base_url_.empty()) base_url_ = "https://api.openai.com/v1";
  if (api_key_env.empty()) api_key_env = "CLAIMEX_API_KEY";
  api_key_ = env_or_empty(api_key_env);
  if (api_key_.empty()) api_key_ = env_or_empty("OPENAI_API_KEY");
  if (api_key_.empty()) {
    throw std::runtime_error("live provider selected but no API key in $" + api_key_env +
                             " or $OPENAI_API_KEY");
  }
}

std::string HttpChatProvider::generate(const PromptRequest& req, int ordinal) {
  (void)ordinal;  // sampling variation comes from the provider; the ordinal only keys the cache
  const auto [origin, base_path] = split_url(base_url_);

  httplib::Client client(origin);
  client.set_connection_timeout(30);
  client.set_read_timeout(120);

  json body;
  body["model"] = req.model_id;
  body["messages"] = json::array({json{{"role", "system"}, {"content", req.system_text}},
                                  json{{"role", "user"}, {"content", req.user_text}}});
  body["temperature"] = req.temperature;
  body["n"] = 1;

  httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};
  auto res = client.Post(base_path + "/chat/completions", headers, body.dump(),
                         "application/json");
  if (!res) {
    throw TransportError("chat completion request failed: " +
                         httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw TransportError("chat completion HTTP " + std::to_string(res->status) + ": " +
                         res->body);
  }

  try {
    const auto payload = json::parse(res->body);
    return payload.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const json::exception& ex) {
    throw TransportError(std::string("malformed chat completion response: ") + ex.what());
  }
}

}  // namespace claimex
