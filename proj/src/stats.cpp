#include "claimex/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace claimex {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

ZTestResult two_proportion_z_test(const ProportionPair& pair) {
  if (pair.n1 < 1 || pair.n2 < 1 || pair.x1 < 0 || pair.x2 < 0 || pair.x1 > pair.n1 ||
      pair.x2 > pair.n2) {
    throw std::invalid_argument("two_proportion_z_test: counts must satisfy 0 <= x <= n, n >= 1");
  }

  ZTestResult result;
  const double pooled = static_cast<double>(pair.x1 + pair.x2) /
                        static_cast<double>(pair.n1 + pair.n2);
  if (pooled <= 0.0 || pooled >= 1.0) {
    result.degenerate = true;
    return result;  // z = 0, p = 1
  }

  const double p1 = static_cast<double>(pair.x1) / static_cast<double>(pair.n1);
  const double p2 = static_cast<double>(pair.x2) / static_cast<double>(pair.n2);
  const double se = std::sqrt(pooled * (1.0 - pooled) *
                              (1.0 / static_cast<double>(pair.n1) +
                               1.0 / static_cast<double>(pair.n2)));
  result.z = (p1 - p2) / se;
  result.p_value = 2.0 * (1.0 - normal_cdf(std::fabs(result.z)));
  return result;
}

HolmResult holm_bonferroni(const std::vector<double>& p_values, double alpha) {
  if (p_values.empty()) throw std::invalid_argument("holm_bonferroni: empty p-value list");
  for (double p : p_values) {
    if (p < 0.0 || p > 1.0 || std::isnan(p)) {
      throw std::invalid_argument("holm_bonferroni: p-values must lie in [0, 1]");
    }
  }

  const std::size_t m = p_values.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

  HolmResult result;
  result.adjusted.resize(m);
  result.reject.assign(m, false);

  double running_max = 0.0;
  bool rejecting = true;
  for (std::size_t rank = 0; rank < m; ++rank) {
    const std::size_t index = order[rank];
    const double scaled = std::min(1.0, static_cast<double>(m - rank) * p_values[index]);
    running_max = std::max(running_max, scaled);
    result.adjusted[index] = running_max;
    if (rejecting && running_max < alpha) {
      result.reject[index] = true;
    } else {
      rejecting = false;
    }
  }
  return result;
}

AgreementReport krippendorff_alpha(
    const std::vector<std::vector<std::optional<int>>>& labels) {
  AgreementReport report;

  // Coincidence matrix accumulated over items with >= 2 annotations: each
  // ordered pair of values within an item contributes 1/(m_u - 1).
  std::map<std::pair<int, int>, double> coincidence;
  std::map<int, double> marginals;
  double n_total = 0.0;
  std::size_t n_annotators = 0;

  for (const auto& item : labels) {
    n_annotators = std::max(n_annotators, item.size());
    std::vector<int> values;
    for (const auto& entry : item) {
      if (entry.has_value()) values.push_back(*entry);
    }
    const std::size_t m_u = values.size();
    if (m_u < 2) continue;

    ++report.n_items;
    const double weight = 1.0 / static_cast<double>(m_u - 1);
    for (std::size_t a = 0; a < m_u; ++a) {
      for (std::size_t b = 0; b < m_u; ++b) {
        if (a == b) continue;
        coincidence[{values[a], values[b]}] += weight;
        marginals[values[a]] += weight;
        n_total += weight;
      }
    }
  }
  report.n_annotators = static_cast<int>(n_annotators);

  if (report.n_items == 0 || n_total <= 1.0) {
    throw std::invalid_argument("krippendorff_alpha: no overlapping annotations");
  }

  double observed_disagreement = 0.0;
  for (const auto& [pair, count] : coincidence) {
    if (pair.first != pair.second) observed_disagreement += count;
  }

  double expected_disagreement = 0.0;
  for (const auto& [c, n_c] : marginals) {
    for (const auto& [k, n_k] : marginals) {
      if (c != k) expected_disagreement += n_c * n_k;
    }
  }
  expected_disagreement /= (n_total - 1.0);

  if (expected_disagreement == 0.0) {
    // A single category observed everywhere: no disagreement is possible.
    report.alpha = 1.0;
    return report;
  }
  report.alpha = 1.0 - observed_disagreement / expected_disagreement;
  if (observed_disagreement == 0.0) report.alpha = 1.0;
  return report;
}

AnnotatorTag annotator_tag_from_name(const std::string& name) {
  if (name == "high_contains") return AnnotatorTag::high_contains;
  if (name == "low_lean_contains") return AnnotatorTag::low_lean_contains;
  if (name == "low_lean_against") return AnnotatorTag::low_lean_against;
  throw std::invalid_argument("unknown annotator tag: " + name);
}

AggregatedLabel aggregate_annotator_tags(const std::vector<AnnotatorTag>& tags) {
  bool high_contains = false, lean_contains = false, lean_against = false;
  for (const auto tag : tags) {
    switch (tag) {
      case AnnotatorTag::high_contains: high_contains = true; break;
      case AnnotatorTag::low_lean_contains: lean_contains = true; break;
      case AnnotatorTag::low_lean_against: lean_against = true; break;
    }
  }
  if (high_contains) return {true, true};
  if (lean_contains) return {true, false};
  if (lean_against) return {false, false};
  return {false, true};
}

}  // namespace claimex
