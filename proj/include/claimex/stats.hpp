#pragma once

#include <optional>
#include <string>
#include <vector>

namespace claimex {

struct ProportionPair {
  long x1 = 0, n1 = 0;
  long x2 = 0, n2 = 0;
};

struct ZTestResult {
  double z = 0.0;
  double p_value = 1.0;  // two-sided
  bool degenerate = false;  // pooled proportion was 0 or 1
};

double normal_cdf(double z);

// Pooled-variance two-proportion Z-test. Degenerate pools (all successes or
// all failures) return p = 1 with the flag set. Invalid counts throw.
ZTestResult two_proportion_z_test(const ProportionPair& pair);

struct HolmResult {
  std::vector<double> adjusted;  // in the input order
  std::vector<bool> reject;
};

// Step-down adjustment: sorted ascending, adjusted_i is the running max of
// min(1, (m-i)*p_(i)); hypotheses are rejected while adjusted < alpha.
HolmResult holm_bonferroni(const std::vector<double>& p_values, double alpha);

struct AgreementReport {
  double alpha = 0.0;
  int n_items = 0;       // items with at least two annotations
  int n_annotators = 0;
};

// Nominal Krippendorff's alpha via the coincidence-matrix formulation;
// missing entries are excluded pairwise. Throws when no item has two or more
// annotations.
AgreementReport krippendorff_alpha(const std::vector<std::vector<std::optional<int>>>& labels);

enum class AnnotatorTag { high_contains, low_lean_contains, low_lean_against };

AnnotatorTag annotator_tag_from_name(const std::string& name);

struct AggregatedLabel {
  bool contains = false;
  bool high_confidence = true;
};

// Tag precedence: high-confidence contains, then lean-contains, then
// lean-against; an untagged sentence is a high-confidence not-contains.
AggregatedLabel aggregate_annotator_tags(const std::vector<AnnotatorTag>& tags);

}  // namespace claimex
