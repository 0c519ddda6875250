#pragma once

#include "claimex/gateway.hpp"
#include "claimex/jsonl.hpp"

#include <map>
#include <string>
#include <vector>

namespace claimex {

struct EntailmentVerdict {
  bool entailed = false;
  std::string transcript;
  std::string error;  // set when the verdict is unknown after retries
  bool known() const { return error.empty(); }
};

// Judges whether the source sentence (with its context and the question)
// entails the claim; the verdict comes solely from the final phrase of the
// judge output.
EntailmentVerdict classify_entailment(Gateway& gateway, const std::string& model_id,
                                      const std::string& claim, const std::string& sentence,
                                      const std::string& excerpt, const std::string& question,
                                      int max_retries = 2);

struct MethodEntailment {
  long n_claims = 0;
  long n_entailed = 0;
  double pct_entailed = 0.0;  // one decimal
};

// Per-method entailment rates; empty groups are omitted.
std::map<std::string, MethodEntailment> entailment_report(
    const std::vector<std::pair<std::string, bool>>& verdicts_by_method);

// Percentage with one decimal, matching the report format.
double percent_1dp(long numerator, long denominator);

}  // namespace claimex
