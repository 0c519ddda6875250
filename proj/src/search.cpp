#include "claimex/search.hpp"

#include "claimex/digest.hpp"
#include "claimex/jsonl.hpp"
#include "claimex/strings.hpp"

#include <httplib.h>

#include <cstdlib>

namespace claimex {

namespace {

json results_to_json(const std::vector<SearchResult>& results) {
  json arr = json::array();
  for (const auto& r : results) {
    arr.push_back(json{{"title", r.title}, {"url", r.url}, {"snippet", r.snippet}});
  }
  return arr;
}

std::vector<SearchResult> results_from_json(const json& arr) {
  std::vector<SearchResult> results;
  for (const auto& item : arr) {
    results.push_back(SearchResult{item.value("title", ""), item.value("url", ""),
                                   item.value("snippet", "")});
  }
  return results;
}

}  // namespace

CachedSearch::CachedSearch(std::shared_ptr<SearchProvider> provider, CompletionCache cache,
                           bool cache_only)
    : provider_(std::move(provider)),
      cache_(std::move(cache)),
      cache_only_(cache_only),
      provider_id_(cache_only ? "cache-only" : provider_ ? provider_->id() : "none") {}

std::vector<SearchResult> CachedSearch::search(const std::string& query, int max_results) {
  const std::string key =
      sha256_fields({"search", provider_id_, query, std::to_string(max_results)});
  if (auto cached = cache_.get(key)) {
    return results_from_json(json::parse(*cached));
  }
  if (cache_only_ || !provider_) throw CacheMissError(key);

  auto results = provider_->search(query, max_results);
  provider_calls_.fetch_add(1);
  cache_.put(key, results_to_json(results).dump());
  return results;
}

std::vector<SearchResult> MockSearchProvider::search(const std::string& query,
                                                     int max_results) {
  if (icontains(query, "mythical")) return {};
  // Queries on contested topics return only tangential snippets unless the
  // query itself carries clarifying context.
  const bool thin = icontains(query, "contested") && !icontains(query, "in the context of");

  std::vector<SearchResult> results;
  const std::string slug = sha256_hex(query).substr(0, 12);
  for (int i = 0; i < max_results; ++i) {
    SearchResult r;
    r.title = "Result " + std::to_string(i + 1) + " for " + query.substr(0, 40);
    r.url = "https://search.example/" + slug + "/" + std::to_string(i + 1);
    if (i == 0 && !thin) {
      r.snippet = query;
    } else {
      r.snippet = "Background discussion touching on the topic.";
    }
    results.push_back(std::move(r));
  }
  return results;
}

HttpSearchProvider::HttpSearchProvider(std::string endpoint, std::string api_key_env)
    : endpoint_(std::move(endpoint)) {
  if (endpoint_.empty()) endpoint_ = "https://google.serper.dev/search";
  if (api_key_env.empty()) api_key_env = "CLAIMEX_SEARCH_API_KEY";
  const char* key = std::getenv(api_key_env.c_str());
  api_key_ = key ? key : "";
  if (api_key_.empty()) {
    throw std::runtime_error("live search provider selected but $" + api_key_env + " is unset");
  }
}

std::vector<SearchResult> HttpSearchProvider::search(const std::string& query,
                                                     int max_results) {
  const std::size_t scheme_end = endpoint_.find("://");
  const std::size_t host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const std::size_t path_start = endpoint_.find('/', host_start);
  const std::string origin =
      path_start == std::string::npos ? endpoint_ : endpoint_.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : endpoint_.substr(path_start);

  httplib::Client client(origin);
  client.set_connection_timeout(30);
  client.set_read_timeout(60);

  const json body{{"q", query}, {"num", max_results}};
  httplib::Headers headers = {{"X-API-KEY", api_key_}};
  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res) {
    throw TransportError("search request failed: " + httplib::to_string(res.error()));
  }
  if (res->status < 200 || res->status >= 300) {
    throw TransportError("search HTTP " + std::to_string(res->status) + ": " + res->body);
  }

  std::vector<SearchResult> results;
  try {
    const auto payload = json::parse(res->body);
    if (payload.contains("organic")) {
      for (const auto& item : payload.at("organic")) {
        if (static_cast<int>(results.size()) >= max_results) break;
        results.push_back(SearchResult{item.value("title", ""), item.value("link", ""),
                                       item.value("snippet", "")});
      }
    }
  } catch (const json::exception& ex) {
    throw TransportError(std::string("malformed search response: ") + ex.what());
  }
  return results;
}

std::vector<SearchResult> CacheOnlySearchProvider::search(const std::string& query,
                                                          int max_results) {
  throw CacheMissError(sha256_fields({"search", "cache-only", query, std::to_string(max_results)}));
}

std::shared_ptr<SearchProvider> make_search_provider(const std::string& name,
                                                     const std::string& endpoint,
                                                     const std::string& api_key_env) {
  if (name == "mock") return std::make_shared<MockSearchProvider>();
  if (name == "live") return std::make_shared<HttpSearchProvider>(endpoint, api_key_env);
  if (name == "cache-only") return std::make_shared<CacheOnlySearchProvider>();
  throw std::invalid_argument("unknown search provider: " + name);
}

}  // namespace claimex
