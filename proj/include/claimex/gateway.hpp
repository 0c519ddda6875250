#pragma once

#include "claimex/parsers.hpp"
#include "claimex/prompts.hpp"

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <vector>

namespace claimex {

struct PromptRequest {
  std::string model_id;
  std::string system_text;
  std::string user_text;
  int n_completions = 1;
  double temperature = 0.0;
  // Metadata for scripted providers; not part of the cache key.
  PromptKind kind = PromptKind::unknown;
};

struct Completion {
  std::string text;
  std::string cache_key;
  int ordinal = 0;
  bool from_cache = false;
};

// Pure function of (model_id, system, user, ordinal, temperature); retried
// generations use fresh ordinals so a rejected completion never shadows the
// canonical answer for its slot.
std::string completion_cache_key(const PromptRequest& req, int ordinal);

struct TransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CacheMissError : std::runtime_error {
  explicit CacheMissError(const std::string& key)
      : std::runtime_error("cache miss in cache-only mode for key " + key), key(key) {}
  std::string key;
};

class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  virtual std::string generate(const PromptRequest& req, int ordinal) = 0;
  virtual std::string id() const = 0;
};

// One file per cache key holding the raw completion text. Writes are atomic
// (temp file + rename).
class CompletionCache {
 public:
  explicit CompletionCache(std::filesystem::path dir);

  std::optional<std::string> get(const std::string& key) const;
  void put(const std::string& key, const std::string& text) const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

struct StageFailure {
  std::vector<std::string> rejected_texts;
  std::string error;
};

template <typename T>
struct CallResult {
  std::optional<T> value;
  std::string transcript;  // the accepted completion
  StageFailure failure;    // populated when value is empty

  bool ok() const { return value.has_value(); }
};

class Gateway {
 public:
  Gateway(std::shared_ptr<ChatProvider> provider, CompletionCache cache,
          bool cache_only = false, int max_in_flight = 8);

  // Exactly n_completions completions, ordinals 0..n-1. In cache-only mode a
  // miss is a hard error naming the key.
  std::vector<Completion> complete(const PromptRequest& req);

  Completion fetch(const PromptRequest& req, int ordinal);

  // Reissues with fresh ordinals (slot + attempt * n_completions) up to
  // max_retries extra times while the parser rejects; the Failure side
  // carries every rejected transcript.
  template <typename T>
  CallResult<T> call_with_retries(const PromptRequest& req,
                                  const std::function<ParseOutcome<T>(const std::string&)>& parser,
                                  int max_retries, int slot = 0) {
    CallResult<T> result;
    for (int attempt = 0; attempt <= max_retries; ++attempt) {
      const int ordinal = slot + attempt * std::max(1, req.n_completions);
      const Completion completion = fetch(req, ordinal);
      auto parsed = parser(completion.text);
      if (parsed.ok()) {
        result.value = std::move(parsed.value);
        result.transcript = completion.text;
        return result;
      }
      result.failure.rejected_texts.push_back(completion.text);
      result.failure.error = parsed.error;
    }
    return result;
  }

  std::int64_t provider_calls() const { return provider_calls_.load(); }
  const std::string& provider_id() const { return provider_id_; }

 private:
  std::shared_ptr<ChatProvider> provider_;
  CompletionCache cache_;
  bool cache_only_;
  std::string provider_id_;
  std::atomic<std::int64_t> provider_calls_{0};
  std::unique_ptr<std::counting_semaphore<>> in_flight_;
};

// Deterministic scripted provider. Script entries match on a substring of the
// user text and are returned verbatim; unmatched requests fall back to a
// rule-based synthesizer keyed on the prompt kind, so whole pipelines can run
// offline.
class MockChatProvider : public ChatProvider {
 public:
  struct ScriptEntry {
    std::string match;  // substring of the user text
    std::string text;
    int ordinal = -1;  // -1 matches any completion ordinal
  };

  MockChatProvider() = default;
  explicit MockChatProvider(std::vector<ScriptEntry> script) : script_(std::move(script)) {}
  static MockChatProvider from_script_file(const std::filesystem::path& path);

  std::string generate(const PromptRequest& req, int ordinal) override;
  std::string id() const override { return "mock"; }

 private:
  std::vector<ScriptEntry> script_;
};

// Chat-completions HTTP provider (system + user message pair). Reads the API
// key from the environment; base URL and key env name are configurable.
class HttpChatProvider : public ChatProvider {
 public:
  HttpChatProvider(std::string base_url, std::string api_key_env);

  std::string generate(const PromptRequest& req, int ordinal) override;
  std::string id() const override { return "http:" + base_url_; }

 private:
  std::string base_url_;
  std::string api_key_;
};

// Never generates: every completion must already be cached.
class CacheOnlyChatProvider : public ChatProvider {
 public:
  std::string generate(const PromptRequest& req, int ordinal) override;
  std::string id() const override { return "cache-only"; }
};

std::shared_ptr<ChatProvider> make_chat_provider(const std::string& name,
                                                 const std::string& base_url,
                                                 const std::string& api_key_env,
                                                 const std::string& mock_script_path);

}  // namespace claimex
