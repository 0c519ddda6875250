#pragma once

#include "claimex/gateway.hpp"

#include <memory>
#include <string>
#include <vector>

namespace claimex {

struct SearchResult {
  std::string title;
  std::string url;
  std::string snippet;
};

class SearchProvider {
 public:
  virtual ~SearchProvider() = default;
  virtual std::vector<SearchResult> search(const std::string& query, int max_results) = 0;
  virtual std::string id() const = 0;
};

// Caches ranked results per (provider id, query) alongside LLM completions,
// so retrieval replays deterministically too.
class CachedSearch {
 public:
  CachedSearch(std::shared_ptr<SearchProvider> provider, CompletionCache cache,
               bool cache_only = false);

  std::vector<SearchResult> search(const std::string& query, int max_results);

  std::int64_t provider_calls() const { return provider_calls_.load(); }
  const std::string& provider_id() const { return provider_id_; }

 private:
  std::shared_ptr<SearchProvider> provider_;
  CompletionCache cache_;
  bool cache_only_;
  std::string provider_id_;
  std::atomic<std::int64_t> provider_calls_{0};
};

// Deterministic offline search: snippets echo the query terms. Queries
// containing "mythical" return no results, which downstream verification
// treats as not-supported.
class MockSearchProvider : public SearchProvider {
 public:
  std::vector<SearchResult> search(const std::string& query, int max_results) override;
  std::string id() const override { return "mock"; }
};

// Serper-style JSON API: POST {"q": query} with an X-API-KEY header.
class HttpSearchProvider : public SearchProvider {
 public:
  HttpSearchProvider(std::string endpoint, std::string api_key_env);

  std::vector<SearchResult> search(const std::string& query, int max_results) override;
  std::string id() const override { return "http:" + endpoint_; }

 private:
  std::string endpoint_;
  std::string api_key_;
};

class CacheOnlySearchProvider : public SearchProvider {
 public:
  std::vector<SearchResult> search(const std::string& query, int max_results) override;
  std::string id() const override { return "cache-only"; }
};

std::shared_ptr<SearchProvider> make_search_provider(const std::string& name,
                                                     const std::string& endpoint,
                                                     const std::string& api_key_env);

}  // namespace claimex
