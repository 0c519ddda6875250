#pragma once

#include "claimex/gateway.hpp"
#include "claimex/search.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace claimex {

struct CmaxOutcome {
  bool already_maximal = false;
  std::string text;  // set when generated
  std::string transcript;
  std::string error;  // set when the record is excluded
  bool ok() const { return error.empty(); }
};

// Either confirms the claim is already maximally decontextualized or produces
// the maximally decontextualized version, given the sentence, its context,
// the question, and the claim's siblings.
CmaxOutcome generate_cmax(Gateway& gateway, const std::string& model_id,
                          const std::string& claim, const std::string& sentence,
                          const std::string& excerpt, const std::string& question,
                          const std::vector<std::string>& sibling_claims, int max_retries = 2);

struct EvidenceSet {
  std::vector<SearchResult> snippets;
  std::vector<std::string> queries_used;
  bool provider_failed = false;
};

enum class RetrievalStrategy { iterative, single };

struct RetrievalConfig {
  RetrievalStrategy strategy = RetrievalStrategy::iterative;
  int queries = 5;            // iterative strategy only; single always issues one
  int results_per_query = 3;  // snippet cap per query
};

// Generates search queries for the statement (iteratively conditioned on
// prior results under the iterative strategy), strips quotation marks, and
// collects the top snippets per query. Persistent provider failure yields an
// empty, flagged evidence set.
EvidenceSet gather_evidence(Gateway& gateway, CachedSearch& search, const std::string& model_id,
                            const std::string& statement, const RetrievalConfig& cfg,
                            int max_retries = 2);

struct SupportVerdict {
  bool supported = false;
  std::string transcript;
  std::string error;
  bool ok() const { return error.empty(); }
};

// Judges whether the statement is supported by the snippet knowledge; an
// empty evidence set is not-supported without a judge call.
SupportVerdict verify_support(Gateway& gateway, const std::string& model_id,
                              const std::string& statement, const EvidenceSet& evidence,
                              int max_retries = 2);

struct SupportChecks {
  bool already_maximal = false;
  std::optional<bool> ec_supports_c;
  std::optional<bool> emax_supports_cmax;
  std::optional<bool> ec_supports_cmax;  // present iff ec_supports_c is true
};

// Maps the legal verdict shapes onto result types 1..7. Inconsistent inputs
// (e.g. the lazy third check present when the first failed) throw.
int classify_result(const SupportChecks& checks);

// Types 1, 2, 4, and 7 keep the claim and its maximal version aligned.
bool is_desirable(int result_type);

struct DecontextRecord {
  std::string method_id;
  std::string answer_id;
  int sentence_index = 0;
  int claim_ordinal = 0;
  std::string claim_text;
  std::string retrieval_config;  // e.g. "iterative" / "single"
  SupportChecks checks;
  int result_type = 0;
  std::string cmax_text;
};

struct MethodDistribution {
  long n_records = 0;
  double type_pct[8] = {0, 0, 0, 0, 0, 0, 0, 0};  // index 1..7
  double desirable_pct = 0.0;
};

// Percentage distribution of result types per (method, retrieval config).
// Type-1 records carry no retrieval config; they are counted once and folded
// into every config's distribution for their method.
std::map<std::string, std::map<std::string, MethodDistribution>> decontext_report(
    const std::vector<DecontextRecord>& records);

}  // namespace claimex
