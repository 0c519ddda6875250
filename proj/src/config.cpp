#include "claimex/config.hpp"

#include "claimex/digest.hpp"

namespace claimex {

namespace {

StageConfig stage_from_json(const json& node, StageConfig defaults) {
  StageConfig cfg = defaults;
  cfg.max_retries = node.value("max_retries", cfg.max_retries);
  cfg.max_preceding_sentences = node.value("max_preceding_sentences", cfg.max_preceding_sentences);
  cfg.max_following_sentences = node.value("max_following_sentences", cfg.max_following_sentences);
  cfg.completions = node.value("completions", cfg.completions);
  cfg.min_successes = node.value("min_successes", cfg.min_successes);
  if (cfg.min_successes < 1 || cfg.min_successes > cfg.completions) {
    throw std::invalid_argument("stage config requires 1 <= min_successes <= completions");
  }
  return cfg;
}

EntailmentContext context_from_json(const json& node) {
  EntailmentContext ctx;
  ctx.mode = node.value("mode", ctx.mode);
  ctx.preceding = node.value("preceding", ctx.preceding);
  ctx.following = node.value("following", ctx.following);
  if (ctx.mode != "none" && ctx.mode != "window" && ctx.mode != "paragraph" &&
      ctx.mode != "full_answer") {
    throw std::invalid_argument("unknown entailment context mode: " + ctx.mode);
  }
  return ctx;
}

}  // namespace

RunConfig config_from_json(const json& raw) {
  RunConfig cfg;
  cfg.raw = raw;

  cfg.model_id = raw.value("model_id", cfg.model_id);
  cfg.provider = raw.value("provider", cfg.provider);
  cfg.search_provider = raw.value("search_provider", cfg.search_provider);
  cfg.cache_dir = raw.value("cache_dir", cfg.cache_dir);
  cfg.workers = raw.value("workers", cfg.workers);
  cfg.method_id = raw.value("method_id", cfg.method_id);
  cfg.mock_script = raw.value("mock_script", cfg.mock_script);
  cfg.api_base_url = raw.value("api_base_url", cfg.api_base_url);
  cfg.api_key_env = raw.value("api_key_env", cfg.api_key_env);
  cfg.search_endpoint = raw.value("search_endpoint", cfg.search_endpoint);
  cfg.search_api_key_env = raw.value("search_api_key_env", cfg.search_api_key_env);

  cfg.pipeline.model_id = cfg.model_id;
  if (raw.contains("stages")) {
    const auto& stages = raw.at("stages");
    if (stages.contains("selection")) {
      cfg.pipeline.selection = stage_from_json(stages.at("selection"), cfg.pipeline.selection);
    }
    if (stages.contains("disambiguation")) {
      cfg.pipeline.disambiguation =
          stage_from_json(stages.at("disambiguation"), cfg.pipeline.disambiguation);
    }
    if (stages.contains("decomposition")) {
      cfg.pipeline.decomposition =
          stage_from_json(stages.at("decomposition"), cfg.pipeline.decomposition);
    }
  }
  if (raw.contains("ablations")) {
    const auto& ablations = raw.at("ablations");
    cfg.pipeline.ablations.skip_selection =
        ablations.value("skip_selection", cfg.pipeline.ablations.skip_selection);
    cfg.pipeline.ablations.selection_detect_only =
        ablations.value("selection_detect_only", cfg.pipeline.ablations.selection_detect_only);
    cfg.pipeline.ablations.skip_disambiguation =
        ablations.value("skip_disambiguation", cfg.pipeline.ablations.skip_disambiguation);
  }
  cfg.pipeline.keep_transcripts = raw.value("keep_transcripts", cfg.pipeline.keep_transcripts);

  cfg.eval_max_retries = raw.value("eval_max_retries", cfg.eval_max_retries);
  cfg.eval_context_preceding = raw.value("eval_context_preceding", cfg.eval_context_preceding);
  if (raw.contains("entailment_contexts")) {
    for (const auto& [method, node] : raw.at("entailment_contexts").items()) {
      cfg.entailment_contexts[method] = context_from_json(node);
    }
  }
  if (raw.contains("retrieval")) {
    const auto& retrieval = raw.at("retrieval");
    const std::string strategy = retrieval.value("strategy", "iterative");
    if (strategy == "iterative") {
      cfg.retrieval.strategy = RetrievalStrategy::iterative;
    } else if (strategy == "single") {
      cfg.retrieval.strategy = RetrievalStrategy::single;
    } else {
      throw std::invalid_argument("unknown retrieval strategy: " + strategy);
    }
    cfg.retrieval.queries = retrieval.value("queries", cfg.retrieval.queries);
    cfg.retrieval.results_per_query =
        retrieval.value("results_per_query", cfg.retrieval.results_per_query);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  if (path.empty()) return config_from_json(json::object());
  return config_from_json(json::parse(read_text(path)));
}

std::string RunConfig::config_digest() const { return sha256_hex(raw.dump()); }

EntailmentContext RunConfig::entailment_context_for(const std::string& method) const {
  auto it = entailment_contexts.find(method);
  if (it != entailment_contexts.end()) return it->second;
  it = entailment_contexts.find("default");
  if (it != entailment_contexts.end()) return it->second;
  return EntailmentContext{};
}

}  // namespace claimex
