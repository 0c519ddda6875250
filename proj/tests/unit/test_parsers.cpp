#include <doctest.h>

#include "claimex/jsonl.hpp"
#include "claimex/parsers.hpp"

using namespace claimex;

namespace {

const std::vector<json>& golden_fixtures() {
  static const std::vector<json> fixtures =
      read_jsonl(std::string(CLAIMEX_TEST_DATA_DIR) + "/parser_golden.jsonl");
  return fixtures;
}

std::string selection_kind_name(SelectionKind kind) {
  switch (kind) {
    case SelectionKind::no_verifiable_content: return "no_verifiable_content";
    case SelectionKind::revised: return "revised";
    case SelectionKind::unchanged: return "unchanged";
  }
  return "";
}

std::string disambiguation_kind_name(DisambiguationKind kind) {
  switch (kind) {
    case DisambiguationKind::cannot_be_disambiguated: return "cannot_be_disambiguated";
    case DisambiguationKind::clarified: return "clarified";
    case DisambiguationKind::unchanged: return "unchanged";
  }
  return "";
}

const char* label_name(CoverageLabel label) {
  switch (label) {
    case CoverageLabel::not_covered: return "NotCovered";
    case CoverageLabel::implicit: return "Implicit";
    case CoverageLabel::explicit_: return "Explicit";
  }
  return "";
}

// Shared with the acceptance suite: checks one golden fixture, returning an
// empty string on success or a description of the mismatch.
std::string check_fixture(const json& fixture) {
  const std::string kind = fixture.at("kind").get<std::string>();
  const std::string transcript = fixture.at("transcript").get<std::string>();
  const json& expected = fixture.at("expected");

  if (kind == "selection") {
    const auto parsed = parse_selection(transcript);
    if (!parsed.ok()) return "parse failed: " + parsed.error;
    if (selection_kind_name(parsed.value->kind) != expected.at("kind").get<std::string>()) {
      return "kind mismatch: " + selection_kind_name(parsed.value->kind);
    }
    if (expected.contains("text") && parsed.value->text != expected.at("text")) {
      return "text mismatch: " + parsed.value->text;
    }
  } else if (kind == "disambiguation") {
    const auto parsed = parse_disambiguation(transcript);
    if (!parsed.ok()) return "parse failed: " + parsed.error;
    if (disambiguation_kind_name(parsed.value->kind) != expected.at("kind").get<std::string>()) {
      return "kind mismatch: " + disambiguation_kind_name(parsed.value->kind);
    }
    if (expected.contains("text") && parsed.value->text != expected.at("text")) {
      return "text mismatch: " + parsed.value->text;
    }
  } else if (kind == "decomposition") {
    const auto parsed = parse_decomposition(transcript);
    if (!parsed.ok()) return "parse failed: " + parsed.error;
    if (*parsed.value != expected.at("claims").get<std::vector<std::string>>()) {
      return "claims mismatch";
    }
  } else if (kind == "entailment") {
    const auto parsed = parse_entailment(transcript);
    if (!parsed.ok()) return "parse failed: " + parsed.error;
    if (*parsed.value != expected.at("entailed").get<bool>()) return "verdict mismatch";
  } else if (kind == "elements") {
    const auto parsed = parse_elements(transcript);
    if (!parsed.ok()) return "parse failed: " + parsed.error;
    const auto verifiable = expected.at("verifiable").get<std::vector<bool>>();
    if (parsed.value->size() != verifiable.size()) return "element count mismatch";
    for (std::size_t i = 0; i < verifiable.size(); ++i) {
      if ((*parsed.value)[i].verifiable != verifiable[i]) {
        return "verifiability mismatch at element " + std::to_string(i);
      }
    }
    if (expected.contains("first_text") &&
        (*parsed.value)[0].text != expected.at("first_text")) {
      return "first element text mismatch";
    }
    if (expected.contains("mixed_note_indexes")) {
      for (const auto idx : expected.at("mixed_note_indexes").get<std::vector<int>>()) {
        if ((*parsed.value)[static_cast<std::size_t>(idx)].mixed_note.empty()) {
          return "missing mixed note at element " + std::to_string(idx);
        }
      }
    }
  } else if (kind == "coverage") {
    const int count = expected.at("element_count").get<int>();
    const auto parsed = parse_element_coverage(transcript, count);
    if (!parsed.ok()) return "parse failed: " + parsed.error;
    const auto labels = expected.at("labels").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (!parsed.value->labels[i].has_value()) {
        return "missing label at element " + std::to_string(i + 1);
      }
      if (label_name(*parsed.value->labels[i]) != labels[i]) {
        return "label mismatch at element " + std::to_string(i + 1) + ": " +
               label_name(*parsed.value->labels[i]);
      }
    }
  } else if (kind == "cmax") {
    const auto parsed = parse_cmax(transcript);
    if (!parsed.ok()) return "parse failed: " + parsed.error;
    if (parsed.value->already_maximal != expected.at("already_maximal").get<bool>()) {
      return "already_maximal mismatch";
    }
    if (expected.contains("text") && parsed.value->text != expected.at("text")) {
      return "text mismatch: " + parsed.value->text;
    }
  } else if (kind == "sentence_validity") {
    const auto parsed = parse_sentence_validity(transcript);
    if (!parsed.ok()) return "parse failed: " + parsed.error;
    if (*parsed.value != expected.at("valid").get<bool>()) return "validity mismatch";
  } else if (kind == "claim_validity") {
    const auto parsed = parse_claim_validity(transcript);
    if (!parsed.ok()) return "parse failed: " + parsed.error;
    if (*parsed.value != expected.at("valid").get<bool>()) return "validity mismatch";
  } else {
    return "unknown fixture kind: " + kind;
  }
  return "";
}

}  // namespace

TEST_CASE("golden transcript fixtures") {
  const auto& fixtures = golden_fixtures();
  REQUIRE(fixtures.size() >= 12);
  for (const auto& fixture : fixtures) {
    INFO(fixture.at("name").get<std::string>());
    CHECK(check_fixture(fixture) == "");
  }
}

TEST_CASE("selection parser error paths") {
  CHECK_FALSE(parse_selection("no markers here").ok());
  CHECK_FALSE(parse_selection("Final submission:\nContains a specific and verifiable "
                              "proposition\nno sentence line")
                  .ok());
  // Contradiction: a positive verdict with a 'None' value.
  CHECK_FALSE(parse_selection("Final submission:\nContains a specific and verifiable "
                              "proposition\n\nSentence with only verifiable information:\nNone")
                  .ok());
}

TEST_CASE("disambiguation handles wrapped output") {
  const auto parsed = parse_disambiguation(
      "DecontextualizedSentence: Cannot be\ndecontextualized");
  REQUIRE(parsed.ok());
  CHECK(parsed.value->kind == DisambiguationKind::cannot_be_disambiguated);
  CHECK_FALSE(parse_disambiguation("no marker").ok());
}

TEST_CASE("decomposition requires list delimiters") {
  CHECK_FALSE(parse_decomposition("with Essential Context/Clarifications: but no list").ok());
  CHECK_FALSE(parse_decomposition("nothing at all").ok());
  const auto parsed = parse_decomposition(
      "Specific, Verifiable, and Decontextualized Propositions with Essential "
      "Context/Clarifications:\n[]");
  REQUIRE(parsed.ok());
  CHECK(parsed.value->empty());
}

TEST_CASE("entailment verdict uses the final phrase") {
  const auto parsed = parse_entailment(
      "At first glance S entails all elements of C, but on reflection...\n"
      "Therefore, S does not entail all elements of C");
  REQUIRE(parsed.ok());
  CHECK(*parsed.value == false);
  CHECK_FALSE(parse_entailment("no verdict").ok());
}

TEST_CASE("query parser strips nothing but finds the line") {
  const auto parsed = parse_query("Reasoning first.\nQuery: \"exact phrase\" search\n");
  REQUIRE(parsed.ok());
  CHECK(*parsed.value == "\"exact phrase\" search");
  CHECK_FALSE(parse_query("no query line").ok());
}

TEST_CASE("support parser") {
  CHECK(*parse_support("checks...\n[Supported.]").value == true);
  CHECK(*parse_support("checks...\n[Not Supported.]").value == false);
  CHECK_FALSE(parse_support("inconclusive").ok());
}
