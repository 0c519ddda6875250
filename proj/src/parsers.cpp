#include "claimex/parsers.hpp"

#include "claimex/strings.hpp"

namespace claimex {

namespace {

constexpr const char* kSelectionVerdictMarker = "Final submission:";
constexpr const char* kSelectionSentenceMarker = "Sentence with only verifiable information:";
constexpr const char* kSelectionPositive = "contains a specific and verifiable proposition";
constexpr const char* kSelectionNegative = "does not contain a specific and verifiable proposition";
constexpr const char* kDisambiguationMarker = "DecontextualizedSentence:";
constexpr const char* kCannotBeDecontextualized = "cannot be decontextualized";
constexpr const char* kDecompositionMarker = "with Essential Context/Clarifications:";
constexpr const char* kTrueOrFalseSuffix = " - true or false?";
constexpr const char* kEntailed = "s entails all elements of c";
constexpr const char* kNotEntailed = "s does not entail all elements of c";
constexpr const char* kVerifiable = "contains verifiable information";
constexpr const char* kNotVerifiable = "does not contain verifiable information";
constexpr const char* kCmaxMarker = "C_max =";
constexpr const char* kSentenceValid = "can be interpreted as a complete, declarative sentence";
constexpr const char* kSentenceInvalid = "cannot be interpreted as a complete, declarative sentence";
constexpr const char* kClaimValid = "c is a complete, declarative sentence";
constexpr const char* kClaimInvalid = "c is not a complete, declarative sentence";
constexpr const char* kSupported = "[supported.]";
constexpr const char* kNotSupported = "[not supported.]";

std::size_t rfind_ci(const std::string& haystack_lower, const char* needle) {
  return haystack_lower.rfind(to_lower(needle));
}

// Text after the last occurrence of `marker` in the collapsed transcript, or
// nullopt when the marker is absent.
std::optional<std::string> text_after_last(const std::string& collapsed, const char* marker) {
  const std::size_t pos = collapsed.rfind(marker);
  if (pos == std::string::npos) return std::nullopt;
  return trim(collapsed.substr(pos + std::string(marker).size()));
}

// Quoted entries of a bracketed list: scans from the first '[' at or after
// `from`, collecting double-quoted strings until the closing ']' outside
// quotes. Square brackets inside quoted entries are preserved.
ParseOutcome<std::vector<std::string>> scan_quoted_list(const std::string& text,
                                                        std::size_t from) {
  const std::size_t open = text.find('[', from);
  if (open == std::string::npos) {
    return ParseOutcome<std::vector<std::string>>::failure("list delimiter '[' not found");
  }
  std::vector<std::string> entries;
  bool in_quote = false;
  std::string current;
  for (std::size_t i = open + 1; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quote) {
      if (c == '"') {
        entries.push_back(current);
        current.clear();
        in_quote = false;
      } else {
        current.push_back(c);
      }
    } else if (c == '"') {
      in_quote = true;
    } else if (c == ']') {
      return ParseOutcome<std::vector<std::string>>::success(std::move(entries));
    }
  }
  return ParseOutcome<std::vector<std::string>>::failure("list delimiter ']' not found");
}

std::string strip_true_or_false(std::string entry) {
  entry = trim(collapse_whitespace(entry));
  const std::string lowered = to_lower(entry);
  const std::string suffix = to_lower(kTrueOrFalseSuffix);
  if (lowered.size() >= suffix.size() &&
      lowered.compare(lowered.size() - suffix.size(), suffix.size(), suffix) == 0) {
    entry = trim(entry.substr(0, entry.size() - suffix.size()));
  }
  return entry;
}

}  // namespace

ParseOutcome<SelectionResult> parse_selection(const std::string& transcript) {
  using Out = ParseOutcome<SelectionResult>;
  const std::string collapsed = collapse_whitespace(transcript);

  const std::size_t verdict_pos = collapsed.rfind(kSelectionVerdictMarker);
  if (verdict_pos == std::string::npos) return Out::failure("missing 'Final submission:'");
  const std::size_t sentence_pos = collapsed.find(kSelectionSentenceMarker, verdict_pos);
  if (sentence_pos == std::string::npos) {
    return Out::failure("missing 'Sentence with only verifiable information:'");
  }

  const std::string verdict = to_lower(
      collapsed.substr(verdict_pos, sentence_pos - verdict_pos));
  const bool negative = contains(verdict, kSelectionNegative);
  const bool positive = !negative && contains(verdict, kSelectionPositive);
  if (!negative && !positive) return Out::failure("unrecognized final submission verdict");

  std::string value = trim(collapsed.substr(sentence_pos + std::string(kSelectionSentenceMarker).size()));
  if (negative) {
    return Out::success(SelectionResult{SelectionKind::no_verifiable_content, ""});
  }
  if (value.empty()) return Out::failure("empty verifiable-sentence value");

  const std::string lowered = to_lower(value);
  if (contains(lowered, "remains unchanged")) {
    return Out::success(SelectionResult{SelectionKind::unchanged, ""});
  }
  if (lowered == "none" || lowered == "none.") {
    return Out::failure("verdict says verifiable but sentence value is 'None'");
  }
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
    value = value.substr(1, value.size() - 2);
  }
  return Out::success(SelectionResult{SelectionKind::revised, value});
}

ParseOutcome<DisambiguationResult> parse_disambiguation(const std::string& transcript) {
  using Out = ParseOutcome<DisambiguationResult>;
  const std::string collapsed = collapse_whitespace(transcript);
  const auto value = text_after_last(collapsed, kDisambiguationMarker);
  if (!value) return Out::failure("missing 'DecontextualizedSentence:'");
  if (value->empty()) return Out::failure("empty decontextualized sentence");
  if (starts_with(to_lower(*value), kCannotBeDecontextualized)) {
    return Out::success(DisambiguationResult{DisambiguationKind::cannot_be_disambiguated, ""});
  }
  return Out::success(DisambiguationResult{DisambiguationKind::clarified, *value});
}

ParseOutcome<std::vector<std::string>> parse_decomposition(const std::string& transcript) {
  using Out = ParseOutcome<std::vector<std::string>>;
  const std::string collapsed = collapse_whitespace(transcript);
  const std::size_t marker = collapsed.rfind(kDecompositionMarker);
  if (marker == std::string::npos) return Out::failure("missing essential-context list marker");

  auto list = scan_quoted_list(collapsed, marker);
  if (!list.ok()) return list;

  std::vector<std::string> claims;
  for (auto& entry : *list.value) {
    std::string claim = strip_true_or_false(std::move(entry));
    if (!claim.empty()) claims.push_back(std::move(claim));
  }
  return Out::success(std::move(claims));
}

ParseOutcome<bool> parse_entailment(const std::string& transcript) {
  using Out = ParseOutcome<bool>;
  const std::string lowered = to_lower(collapse_whitespace(transcript));
  const std::size_t yes = rfind_ci(lowered, kEntailed);
  const std::size_t no = rfind_ci(lowered, kNotEntailed);
  if (yes == std::string::npos && no == std::string::npos) {
    return Out::failure("missing entailment verdict phrase");
  }
  if (no == std::string::npos) return Out::success(true);
  if (yes == std::string::npos) return Out::success(false);
  return Out::success(yes > no);
}

ParseOutcome<std::vector<ElementLine>> parse_elements(const std::string& transcript) {
  using Out = ParseOutcome<std::vector<ElementLine>>;
  auto list = scan_quoted_list(collapse_whitespace(transcript), 0);
  if (!list.ok()) return Out::failure("element list not found: " + list.error);

  std::vector<ElementLine> elements;
  for (const auto& entry : *list.value) {
    const std::string collapsed = collapse_whitespace(entry);
    const std::size_t arrow = collapsed.rfind(" -> ");
    if (arrow == std::string::npos) {
      return Out::failure("element entry missing '->': " + collapsed);
    }
    ElementLine element;
    element.text = trim(collapsed.substr(0, arrow));
    const std::string verdict = trim(collapsed.substr(arrow + 4));
    const std::string lowered = to_lower(verdict);
    if (contains(lowered, kNotVerifiable)) {
      element.verifiable = false;
    } else if (contains(lowered, kVerifiable)) {
      element.verifiable = true;
    } else {
      return Out::failure("unrecognized verifiability verdict: " + verdict);
    }
    if (lowered != kVerifiable && lowered != kNotVerifiable) {
      element.mixed_note = verdict;
    }
    if (element.text.empty()) return Out::failure("empty element text");
    elements.push_back(std::move(element));
  }
  return Out::success(std::move(elements));
}

ParseOutcome<CoverageParse> parse_element_coverage(const std::string& transcript,
                                                   int element_count) {
  using Out = ParseOutcome<CoverageParse>;
  if (element_count <= 0) return Out::failure("element_count must be positive");
  const std::string collapsed = collapse_whitespace(transcript);

  CoverageParse parsed;
  parsed.labels.resize(static_cast<std::size_t>(element_count));
  for (int i = 1; i <= element_count; ++i) {
    const std::vector<std::string> stems = {"E" + std::to_string(i),
                                            "Element " + std::to_string(i)};
    std::optional<CoverageLabel> label;
    for (const auto& stem : stems) {
      if (contains(collapsed, stem + " is not fully covered by C")) {
        label = CoverageLabel::not_covered;
        break;
      }
      if (contains(collapsed, "implied that " + stem + " is fully covered by C")) {
        label = CoverageLabel::implicit;
        break;
      }
      if (contains(collapsed, stem + " is fully covered by C")) {
        label = CoverageLabel::explicit_;
        break;
      }
    }
    if (label) {
      parsed.labels[static_cast<std::size_t>(i - 1)] = *label;
    } else {
      parsed.diagnostics.push_back("no coverage verdict for element " + std::to_string(i));
    }
  }
  if (parsed.diagnostics.size() == static_cast<std::size_t>(element_count)) {
    return Out::failure("no coverage verdicts found");
  }
  return Out::success(std::move(parsed));
}

ParseOutcome<CmaxResult> parse_cmax(const std::string& transcript) {
  using Out = ParseOutcome<CmaxResult>;
  const std::string collapsed = collapse_whitespace(transcript);
  const auto value = text_after_last(collapsed, kCmaxMarker);
  if (!value) return Out::failure("missing 'C_max ='");
  if (value->empty()) return Out::failure("empty C_max value");
  if (*value == "C" || *value == "C.") {
    return Out::success(CmaxResult{true, ""});
  }
  return Out::success(CmaxResult{false, *value});
}

namespace {

ParseOutcome<bool> parse_last_phrase(const std::string& transcript, const char* positive,
                                     const char* negative, const char* what) {
  using Out = ParseOutcome<bool>;
  const std::string lowered = to_lower(collapse_whitespace(transcript));
  const std::size_t yes = rfind_ci(lowered, positive);
  const std::size_t no = rfind_ci(lowered, negative);
  if (yes == std::string::npos && no == std::string::npos) {
    return Out::failure(std::string("missing ") + what + " verdict phrase");
  }
  if (no == std::string::npos) return Out::success(true);
  if (yes == std::string::npos) return Out::success(false);
  return Out::success(yes > no);
}

}  // namespace

ParseOutcome<bool> parse_sentence_validity(const std::string& transcript) {
  // "cannot be interpreted ..." also matters when phrased without the leading
  // "S", so match on the shared tail. The positive phrase is never a
  // substring of the negative one.
  return parse_last_phrase(transcript, kSentenceValid, kSentenceInvalid, "sentence validity");
}

ParseOutcome<bool> parse_claim_validity(const std::string& transcript) {
  return parse_last_phrase(transcript, kClaimValid, kClaimInvalid, "claim validity");
}

ParseOutcome<std::string> parse_query(const std::string& transcript) {
  using Out = ParseOutcome<std::string>;
  for (const auto& line : split_lines(transcript)) {
    const std::string collapsed = collapse_whitespace(line);
    if (starts_with(collapsed, "Query:")) {
      const std::string query = trim(collapsed.substr(6));
      if (query.empty()) return Out::failure("empty query");
      return Out::success(query);
    }
  }
  return Out::failure("missing 'Query:' line");
}

ParseOutcome<bool> parse_support(const std::string& transcript) {
  return parse_last_phrase(transcript, kSupported, kNotSupported, "support");
}

}  // namespace claimex
