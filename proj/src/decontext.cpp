#include "claimex/decontext.hpp"

#include "claimex/entailment.hpp"
#include "claimex/strings.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

namespace claimex {

CmaxOutcome generate_cmax(Gateway& gateway, const std::string& model_id,
                          const std::string& claim, const std::string& sentence,
                          const std::string& excerpt, const std::string& question,
                          const std::vector<std::string>& sibling_claims, int max_retries) {
  std::ostringstream all_claims;
  all_claims << "[";
  for (std::size_t i = 0; i < sibling_claims.size(); ++i) {
    if (i > 0) all_claims << ", ";
    all_claims << "\"" << sibling_claims[i] << "\"";
  }
  all_claims << "]";

  const PromptPair prompt = prompt_pair(PromptKind::decontext);
  PromptRequest req;
  req.model_id = model_id;
  req.system_text = prompt.system_text;
  req.user_text = render_template(prompt.user_text, {{"question", question},
                                                     {"excerpt", excerpt},
                                                     {"sentence", sentence},
                                                     {"claims", all_claims.str()},
                                                     {"claim", claim}});
  req.kind = PromptKind::decontext;

  auto result = gateway.call_with_retries<CmaxResult>(req, parse_cmax, max_retries);
  CmaxOutcome outcome;
  if (!result.ok()) {
    outcome.error = result.failure.error;
    return outcome;
  }
  outcome.transcript = result.transcript;
  outcome.already_maximal = result.value->already_maximal;
  outcome.text = result.value->text;
  // The judge's marker decides; textual equality with the claim is not
  // second-guessed.
  return outcome;
}

namespace {

std::string strip_quotation_marks(const std::string& query) {
  static const char* kQuoteSeqs[] = {"\"", "\xe2\x80\x9c", "\xe2\x80\x9d"};  // " “ ”
  std::string out = query;
  for (const char* seq : kQuoteSeqs) out = replace_all(std::move(out), seq, "");
  return collapse_whitespace(out);
}

std::string render_previous_searches(const EvidenceSet& evidence) {
  if (evidence.queries_used.empty()) return "None";
  std::ostringstream out;
  for (std::size_t i = 0; i < evidence.queries_used.size(); ++i) {
    out << "Query: " << evidence.queries_used[i] << "\n";
  }
  int shown = 0;
  for (const auto& snippet : evidence.snippets) {
    out << "Result: " << snippet.snippet << "\n";
    if (++shown >= 6) break;  // keep the refinement context bounded
  }
  return out.str();
}

}  // namespace

EvidenceSet gather_evidence(Gateway& gateway, CachedSearch& search, const std::string& model_id,
                            const std::string& statement, const RetrievalConfig& cfg,
                            int max_retries) {
  EvidenceSet evidence;
  const int rounds = cfg.strategy == RetrievalStrategy::single ? 1 : std::max(1, cfg.queries);
  const PromptPair prompt = prompt_pair(PromptKind::query_generation);

  for (int round = 0; round < rounds; ++round) {
    PromptRequest req;
    req.model_id = model_id;
    req.system_text = prompt.system_text;
    req.user_text = render_template(
        prompt.user_text,
        {{"statement", statement}, {"previous_searches", render_previous_searches(evidence)}});
    req.kind = PromptKind::query_generation;

    auto generated = gateway.call_with_retries<std::string>(req, parse_query, max_retries);
    if (!generated.ok()) {
      evidence.provider_failed = true;
      break;
    }
    const std::string query = strip_quotation_marks(*generated.value);
    evidence.queries_used.push_back(query);

    try {
      auto results = search.search(query, cfg.results_per_query);
      for (auto& result : results) evidence.snippets.push_back(std::move(result));
    } catch (const CacheMissError&) {
      throw;
    } catch (const std::exception&) {
      evidence.provider_failed = true;
    }
  }
  return evidence;
}

SupportVerdict verify_support(Gateway& gateway, const std::string& model_id,
                              const std::string& statement, const EvidenceSet& evidence,
                              int max_retries) {
  SupportVerdict verdict;
  if (evidence.snippets.empty()) {
    // No search results: not supported, per the retrieval rule.
    verdict.supported = false;
    return verdict;
  }

  std::ostringstream knowledge;
  for (std::size_t i = 0; i < evidence.snippets.size(); ++i) {
    const auto& snippet = evidence.snippets[i];
    knowledge << (i + 1) << ". " << snippet.title << ": " << snippet.snippet << "\n";
  }

  const PromptPair prompt = prompt_pair(PromptKind::verification);
  PromptRequest req;
  req.model_id = model_id;
  req.system_text = prompt.system_text;
  req.user_text = render_template(
      prompt.user_text, {{"statement", statement}, {"knowledge", knowledge.str()}});
  req.kind = PromptKind::verification;

  auto result = gateway.call_with_retries<bool>(req, parse_support, max_retries);
  if (!result.ok()) {
    verdict.error = result.failure.error;
    return verdict;
  }
  verdict.supported = *result.value;
  verdict.transcript = result.transcript;
  return verdict;
}

int classify_result(const SupportChecks& checks) {
  if (checks.already_maximal) {
    if (checks.ec_supports_c || checks.emax_supports_cmax || checks.ec_supports_cmax) {
      throw std::invalid_argument("support verdicts present on an already-maximal record");
    }
    return 1;
  }
  if (!checks.ec_supports_c.has_value() || !checks.emax_supports_cmax.has_value()) {
    throw std::invalid_argument("missing support verdicts");
  }
  const bool ec_c = *checks.ec_supports_c;
  if (checks.ec_supports_cmax.has_value() != ec_c) {
    throw std::invalid_argument(
        ec_c ? "ec=>cmax verdict missing although ec=>c holds"
             : "ec=>cmax verdict present although ec=>c failed (lazy-check violation)");
  }
  const bool emax_cmax = *checks.emax_supports_cmax;
  if (ec_c) {
    const bool ec_cmax = *checks.ec_supports_cmax;
    if (emax_cmax) return ec_cmax ? 2 : 3;
    return ec_cmax ? 4 : 5;
  }
  return emax_cmax ? 6 : 7;
}

bool is_desirable(int result_type) {
  return result_type == 1 || result_type == 2 || result_type == 4 || result_type == 7;
}

std::map<std::string, std::map<std::string, MethodDistribution>> decontext_report(
    const std::vector<DecontextRecord>& records) {
  // method -> config -> type counts; type-1 records are config-independent.
  std::map<std::string, std::map<std::string, std::array<long, 8>>> counts;
  std::map<std::string, long> type1;
  std::set<std::string> configs;

  for (const auto& record : records) {
    if (record.result_type == 1) {
      ++type1[record.method_id];
    } else {
      auto& per_config = counts[record.method_id][record.retrieval_config];
      ++per_config[static_cast<std::size_t>(record.result_type)];
      configs.insert(record.retrieval_config);
    }
  }
  if (configs.empty()) configs.insert("default");

  std::map<std::string, std::map<std::string, MethodDistribution>> report;
  std::set<std::string> methods;
  for (const auto& [method, _] : counts) methods.insert(method);
  for (const auto& [method, _] : type1) methods.insert(method);

  for (const auto& method : methods) {
    for (const auto& config : configs) {
      std::array<long, 8> tally{};
      auto method_it = counts.find(method);
      if (method_it != counts.end()) {
        auto config_it = method_it->second.find(config);
        if (config_it != method_it->second.end()) tally = config_it->second;
      }
      tally[1] = type1.count(method) ? type1.at(method) : 0;

      MethodDistribution dist;
      for (int t = 1; t <= 7; ++t) dist.n_records += tally[static_cast<std::size_t>(t)];
      if (dist.n_records == 0) continue;
      double desirable = 0.0;
      for (int t = 1; t <= 7; ++t) {
        dist.type_pct[t] = percent_1dp(tally[static_cast<std::size_t>(t)], dist.n_records);
        if (is_desirable(t)) desirable += dist.type_pct[t];
      }
      dist.desirable_pct = desirable;
      report[method][config] = dist;
    }
  }
  return report;
}

}  // namespace claimex
