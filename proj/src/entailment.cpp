#include "claimex/entailment.hpp"

#include <cmath>

namespace claimex {

EntailmentVerdict classify_entailment(Gateway& gateway, const std::string& model_id,
                                      const std::string& claim, const std::string& sentence,
                                      const std::string& excerpt, const std::string& question,
                                      int max_retries) {
  const PromptPair prompt = prompt_pair(PromptKind::entailment);
  PromptRequest req;
  req.model_id = model_id;
  req.system_text = prompt.system_text;
  req.user_text = render_template(prompt.user_text, {{"question", question},
                                                     {"excerpt", excerpt},
                                                     {"sentence", sentence},
                                                     {"claim", claim}});
  req.kind = PromptKind::entailment;

  auto result = gateway.call_with_retries<bool>(req, parse_entailment, max_retries);
  EntailmentVerdict verdict;
  if (!result.ok()) {
    verdict.error = result.failure.error;
    return verdict;
  }
  verdict.entailed = *result.value;
  verdict.transcript = result.transcript;
  return verdict;
}

double percent_1dp(long numerator, long denominator) {
  if (denominator == 0) return 0.0;
  const double pct = 100.0 * static_cast<double>(numerator) / static_cast<double>(denominator);
  return std::round(pct * 10.0) / 10.0;
}

std::map<std::string, MethodEntailment> entailment_report(
    const std::vector<std::pair<std::string, bool>>& verdicts_by_method) {
  std::map<std::string, MethodEntailment> report;
  for (const auto& [method, entailed] : verdicts_by_method) {
    auto& entry = report[method];
    ++entry.n_claims;
    if (entailed) ++entry.n_entailed;
  }
  for (auto& [method, entry] : report) {
    entry.pct_entailed = percent_1dp(entry.n_entailed, entry.n_claims);
  }
  return report;
}

}  // namespace claimex
