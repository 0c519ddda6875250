#pragma once

#include <optional>
#include <string>
#include <vector>

namespace claimex {

// Parsers are total: they return a value or an error, never throw on
// malformed transcripts. Marker phrases are matched on whitespace-collapsed
// text, so hard-wrapped model output still parses.
template <typename T>
struct ParseOutcome {
  std::optional<T> value;
  std::string error;

  bool ok() const { return value.has_value(); }

  static ParseOutcome success(T v) {
    ParseOutcome out;
    out.value = std::move(v);
    return out;
  }
  static ParseOutcome failure(std::string message) {
    ParseOutcome out;
    out.error = std::move(message);
    return out;
  }
};

enum class SelectionKind { no_verifiable_content, revised, unchanged };

struct SelectionResult {
  SelectionKind kind = SelectionKind::unchanged;
  std::string text;  // set when kind == revised
};

enum class DisambiguationKind { cannot_be_disambiguated, clarified, unchanged };

struct DisambiguationResult {
  DisambiguationKind kind = DisambiguationKind::unchanged;
  std::string text;  // set when kind == clarified
};

struct ElementLine {
  std::string text;
  bool verifiable = false;
  std::string mixed_note;  // verdict wording when it qualifies part of the element
};

enum class CoverageLabel { not_covered, implicit, explicit_ };

struct CmaxResult {
  bool already_maximal = false;
  std::string text;  // set when generated
};

// "Final submission:" verdict plus the "Sentence with only verifiable
// information:" line; "None" maps to no-verifiable-content and "remains
// unchanged" to unchanged.
ParseOutcome<SelectionResult> parse_selection(const std::string& transcript);

// "DecontextualizedSentence:" line; "Cannot be decontextualized" maps to the
// cannot-be-disambiguated outcome.
ParseOutcome<DisambiguationResult> parse_disambiguation(const std::string& transcript);

// Final bracketed list after the essential-context marker; the trailing
// " - true or false?" is stripped from each entry. An empty list is valid.
ParseOutcome<std::vector<std::string>> parse_decomposition(const std::string& transcript);

// true iff the final verdict phrase is "S entails all elements of C".
ParseOutcome<bool> parse_entailment(const std::string& transcript);

// The "element -> verifiability" list.
ParseOutcome<std::vector<ElementLine>> parse_elements(const std::string& transcript);

struct CoverageParse {
  std::vector<std::optional<CoverageLabel>> labels;  // index i = element i+1
  std::vector<std::string> diagnostics;              // one entry per missing element
};

// Per-element coverage verdicts for elements 1..element_count; an element
// whose verdict cannot be found is left unset with a diagnostic.
ParseOutcome<CoverageParse> parse_element_coverage(const std::string& transcript,
                                                   int element_count);

// "C_max = C" vs. "C_max = <text>".
ParseOutcome<CmaxResult> parse_cmax(const std::string& transcript);

// "S can/cannot be interpreted as a complete, declarative sentence".
ParseOutcome<bool> parse_sentence_validity(const std::string& transcript);

// "C is (not) a complete, declarative sentence".
ParseOutcome<bool> parse_claim_validity(const std::string& transcript);

// "Query: <text>" line.
ParseOutcome<std::string> parse_query(const std::string& transcript);

// Final "[Supported.]" / "[Not Supported.]" verdict.
ParseOutcome<bool> parse_support(const std::string& transcript);

}  // namespace claimex
