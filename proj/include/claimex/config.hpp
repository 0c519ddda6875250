#pragma once

#include "claimex/decontext.hpp"
#include "claimex/jsonl.hpp"
#include "claimex/pipeline.hpp"

#include <map>
#include <string>

namespace claimex {

// Context shown to the entailment judge; the window parameters depend on how
// the claim method built its own context.
struct EntailmentContext {
  std::string mode = "window";  // none | window | paragraph | full_answer
  int preceding = 5;
  int following = 5;
};

struct RunConfig {
  std::string model_id = "offline-model";
  std::string provider = "mock";  // live | mock | cache-only
  std::string search_provider = "mock";
  std::string cache_dir = ".claimex-cache";
  int workers = 1;
  std::string method_id = "pipeline";
  std::string mock_script;

  std::string api_base_url;
  std::string api_key_env = "CLAIMEX_API_KEY";
  std::string search_endpoint;
  std::string search_api_key_env = "CLAIMEX_SEARCH_API_KEY";

  PipelineConfig pipeline;
  int eval_max_retries = 2;
  int eval_context_preceding = 5;  // standardized context for coverage/decontext
  std::map<std::string, EntailmentContext> entailment_contexts;  // "default" is the fallback
  RetrievalConfig retrieval;

  json raw = json::object();

  std::string config_digest() const;
  EntailmentContext entailment_context_for(const std::string& method) const;
};

RunConfig config_from_json(const json& raw);
RunConfig load_config(const std::string& path);  // empty path -> defaults

}  // namespace claimex
