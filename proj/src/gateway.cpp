#include "claimex/gateway.hpp"

#include "claimex/digest.hpp"
#include "claimex/jsonl.hpp"

#include <fstream>
#include <sstream>

namespace claimex {

std::string completion_cache_key(const PromptRequest& req, int ordinal) {
  char temp[32];
  std::snprintf(temp, sizeof(temp), "%.6f", req.temperature);
  return sha256_fields(
      {req.model_id, req.system_text, req.user_text, std::to_string(ordinal), temp});
}

CompletionCache::CompletionCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::optional<std::string> CompletionCache::get(const std::string& key) const {
  const auto path = dir_ / (key + ".txt");
  std::ifstream in(path, std::ios::binary);
  if (!in.is_open()) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void CompletionCache::put(const std::string& key, const std::string& text) const {
  write_text_atomic(dir_ / (key + ".txt"), text);
}

Gateway::Gateway(std::shared_ptr<ChatProvider> provider, CompletionCache cache, bool cache_only,
                 int max_in_flight)
    : provider_(std::move(provider)),
      cache_(std::move(cache)),
      cache_only_(cache_only),
      provider_id_(cache_only ? "cache-only" : provider_ ? provider_->id() : "none"),
      in_flight_(std::make_unique<std::counting_semaphore<>>(std::max(1, max_in_flight))) {}

Completion Gateway::fetch(const PromptRequest& req, int ordinal) {
  Completion completion;
  completion.ordinal = ordinal;
  completion.cache_key = completion_cache_key(req, ordinal);

  if (auto cached = cache_.get(completion.cache_key)) {
    completion.text = std::move(*cached);
    completion.from_cache = true;
    return completion;
  }
  if (cache_only_ || !provider_) {
    throw CacheMissError(completion.cache_key);
  }

  in_flight_->acquire();
  try {
    completion.text = provider_->generate(req, ordinal);
  } catch (...) {
    in_flight_->release();
    throw;
  }
  in_flight_->release();
  provider_calls_.fetch_add(1);

  cache_.put(completion.cache_key, completion.text);
  return completion;
}

std::vector<Completion> Gateway::complete(const PromptRequest& req) {
  std::vector<Completion> completions;
  completions.reserve(static_cast<std::size_t>(req.n_completions));
  for (int ordinal = 0; ordinal < req.n_completions; ++ordinal) {
    completions.push_back(fetch(req, ordinal));
  }
  return completions;
}

std::string CacheOnlyChatProvider::generate(const PromptRequest& req, int ordinal) {
  throw CacheMissError(completion_cache_key(req, ordinal));
}

std::shared_ptr<ChatProvider> make_chat_provider(const std::string& name,
                                                 const std::string& base_url,
                                                 const std::string& api_key_env,
                                                 const std::string& mock_script_path) {
  if (name == "mock") {
    if (!mock_script_path.empty()) {
      return std::make_shared<MockChatProvider>(
          MockChatProvider::from_script_file(mock_script_path));
    }
    return std::make_shared<MockChatProvider>();
  }
  if (name == "live") {
    return std::make_shared<HttpChatProvider>(base_url, api_key_env);
  }
  if (name == "cache-only") {
    return std::make_shared<CacheOnlyChatProvider>();
  }
  throw std::invalid_argument("unknown provider: " + name +
                              " (expected live, mock, or cache-only)");
}

}  // namespace claimex
