#include "claimex/coverage.hpp"

#include <sstream>
#include <stdexcept>

namespace claimex {

const char* confusion_cell_name(ConfusionCell cell) {
  switch (cell) {
    case ConfusionCell::tp: return "TP";
    case ConfusionCell::tn: return "TN";
    case ConfusionCell::fp: return "FP";
    case ConfusionCell::fn: return "FN";
  }
  return "TN";
}

const char* coverage_label_name(CoverageLabel label) {
  switch (label) {
    case CoverageLabel::not_covered: return "NotCovered";
    case CoverageLabel::implicit: return "Implicit";
    case CoverageLabel::explicit_: return "Explicit";
  }
  return "NotCovered";
}

CoverageLabel coverage_label_from_name(const std::string& name) {
  if (name == "NotCovered") return CoverageLabel::not_covered;
  if (name == "Implicit") return CoverageLabel::implicit;
  if (name == "Explicit") return CoverageLabel::explicit_;
  throw std::invalid_argument("unknown coverage label: " + name);
}

ConfusionCell confusion_cell(bool verifiable, CoverageLabel label) {
  if (verifiable) {
    return label == CoverageLabel::not_covered ? ConfusionCell::fn : ConfusionCell::tp;
  }
  return label == CoverageLabel::explicit_ ? ConfusionCell::fp : ConfusionCell::tn;
}

namespace {

double ratio(long numerator, long denominator) {
  return denominator == 0 ? 0.0 : static_cast<double>(numerator) / static_cast<double>(denominator);
}

double f1(double precision, double recall) {
  return precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
}

}  // namespace

ScoreCard element_level_scores(const CellCounts& cells) {
  if (cells.total() == 0) throw std::invalid_argument("no confusion cells to score");

  ScoreCard card;
  card.accuracy = ratio(cells.tp + cells.tn, cells.total());
  card.precision_v = ratio(cells.tp, cells.tp + cells.fp);
  card.recall_v = ratio(cells.tp, cells.tp + cells.fn);
  card.precision_uv = ratio(cells.tn, cells.tn + cells.fn);
  card.recall_uv = ratio(cells.tn, cells.tn + cells.fp);
  card.macro_f1 =
      (f1(card.precision_v, card.recall_v) + f1(card.precision_uv, card.recall_uv)) / 2.0;
  return card;
}

ScoreCard sentence_level_scores(const std::vector<bool>& predicted,
                                const std::vector<bool>& gold) {
  if (predicted.empty() || predicted.size() != gold.size()) {
    throw std::invalid_argument("predicted/gold size mismatch or empty input");
  }
  CellCounts cells;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (gold[i]) {
      (predicted[i] ? cells.tp : cells.fn) += 1;
    } else {
      (predicted[i] ? cells.fp : cells.tn) += 1;
    }
  }
  return element_level_scores(cells);
}

ElementExtraction extract_elements(Gateway& gateway, const std::string& model_id,
                                   const std::string& sentence, const std::string& excerpt,
                                   const std::string& question, int max_retries) {
  const PromptPair prompt = prompt_pair(PromptKind::element_extraction);
  PromptRequest req;
  req.model_id = model_id;
  req.system_text = prompt.system_text;
  req.user_text = render_template(
      prompt.user_text,
      {{"question", question}, {"excerpt", excerpt}, {"sentence", sentence}});
  req.kind = PromptKind::element_extraction;

  auto result =
      gateway.call_with_retries<std::vector<ElementLine>>(req, parse_elements, max_retries);
  ElementExtraction extraction;
  if (!result.ok()) {
    extraction.error = result.failure.error;
    return extraction;
  }
  extraction.transcript = result.transcript;
  for (const auto& line : *result.value) {
    extraction.elements.push_back(Element{line.text, line.verifiable, line.mixed_note});
  }
  return extraction;
}

CoverageJudgement label_coverage(Gateway& gateway, const std::string& model_id,
                                 const std::vector<Element>& elements,
                                 const std::vector<std::string>& claims,
                                 const std::string& excerpt, const std::string& question,
                                 int max_retries) {
  CoverageJudgement judgement;
  if (elements.empty()) {
    judgement.error = "no elements to label";
    return judgement;
  }
  if (claims.empty()) {
    judgement.labels.assign(elements.size(), CoverageLabel::not_covered);
    return judgement;
  }

  auto to_dict = [](const std::vector<std::string>& items) {
    std::ostringstream out;
    out << "{\n";
    for (std::size_t i = 0; i < items.size(); ++i) {
      out << (i + 1) << ": \"" << items[i] << "\",\n";
    }
    out << "}";
    return out.str();
  };
  std::vector<std::string> element_texts;
  for (const auto& element : elements) {
    std::string text = element.text;
    if (!element.mixed_note.empty()) text += " [note: " + element.mixed_note + "]";
    element_texts.push_back(std::move(text));
  }

  const PromptPair prompt = prompt_pair(PromptKind::element_coverage);
  PromptRequest req;
  req.model_id = model_id;
  req.system_text = prompt.system_text;
  req.user_text = render_template(prompt.user_text, {{"question", question},
                                                     {"excerpt", excerpt},
                                                     {"claims", to_dict(claims)},
                                                     {"elements", to_dict(element_texts)}});
  req.kind = PromptKind::element_coverage;

  const int element_count = static_cast<int>(elements.size());
  auto parser = [element_count](const std::string& text) {
    return parse_element_coverage(text, element_count);
  };
  auto result = gateway.call_with_retries<CoverageParse>(req, parser, max_retries);
  if (!result.ok()) {
    judgement.error = result.failure.error;
    return judgement;
  }
  judgement.transcript = result.transcript;
  judgement.labels = result.value->labels;
  judgement.diagnostics = result.value->diagnostics;
  return judgement;
}

std::vector<std::size_t> consistency_filter(const std::vector<std::vector<Element>>& elements,
                                            const std::vector<bool>& gold_verifiable) {
  if (elements.size() != gold_verifiable.size()) {
    throw std::invalid_argument("elements/gold size mismatch");
  }
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const bool any_verifiable =
        std::any_of(elements[i].begin(), elements[i].end(),
                    [](const Element& e) { return e.verifiable; });
    if (any_verifiable == gold_verifiable[i]) kept.push_back(i);
  }
  return kept;
}

}  // namespace claimex
