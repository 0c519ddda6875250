#pragma once

#include "claimex/gateway.hpp"
#include "claimex/parsers.hpp"
#include "claimex/postprocess.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace claimex {

struct Element {
  std::string text;
  bool verifiable = false;
  std::string mixed_note;  // optional "X is not verifiable, but the rest ..." annotation
};

enum class ConfusionCell { tp, tn, fp, fn };

const char* confusion_cell_name(ConfusionCell cell);
const char* coverage_label_name(CoverageLabel label);
CoverageLabel coverage_label_from_name(const std::string& name);

// Verifiable elements are positives: covered (explicitly or implicitly) is a
// true positive, uncovered a false negative. Unverifiable elements count
// against a method only when covered explicitly.
ConfusionCell confusion_cell(bool verifiable, CoverageLabel label);

struct CellCounts {
  long tp = 0, tn = 0, fp = 0, fn = 0;
  long total() const { return tp + tn + fp + fn; }
};

struct ScoreCard {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double precision_v = 0.0;
  double recall_v = 0.0;
  double precision_uv = 0.0;
  double recall_uv = 0.0;
};

// Accuracy, per-class precision/recall over the verifiable (positive) and
// unverifiable (negative) classes, and their mean F1. Zero denominators score
// 0. Throws on empty input.
ScoreCard element_level_scores(const CellCounts& cells);

// Prediction for extraction methods is "at least one claim extracted".
ScoreCard sentence_level_scores(const std::vector<bool>& predicted,
                                const std::vector<bool>& gold);

struct ElementExtraction {
  std::vector<Element> elements;
  std::string transcript;
  std::string error;  // set when the sentence is excluded
  bool ok() const { return error.empty(); }
};

ElementExtraction extract_elements(Gateway& gateway, const std::string& model_id,
                                   const std::string& sentence, const std::string& excerpt,
                                   const std::string& question, int max_retries = 2);

struct CoverageJudgement {
  std::vector<std::optional<CoverageLabel>> labels;  // unset = excluded element
  std::vector<std::string> diagnostics;
  std::string transcript;
  std::string error;  // set when the whole judgement is excluded
  bool ok() const { return error.empty(); }
};

// Labels each element against the method's claims. An empty claim set is all
// NotCovered without a judge call.
CoverageJudgement label_coverage(Gateway& gateway, const std::string& model_id,
                                 const std::vector<Element>& elements,
                                 const std::vector<std::string>& claims,
                                 const std::string& excerpt, const std::string& question,
                                 int max_retries = 2);

// Keeps sentences where having at least one verifiable element agrees with
// the gold verifiable label.
std::vector<std::size_t> consistency_filter(const std::vector<std::vector<Element>>& elements,
                                            const std::vector<bool>& gold_verifiable);

}  // namespace claimex
