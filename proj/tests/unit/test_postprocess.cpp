#include <doctest.h>

#include "claimex/postprocess.hpp"

#include <random>

using namespace claimex;

TEST_CASE("bracket parsing of an inferred-context claim") {
  const auto claim = parse_brackets("John [a celebrity] has called for peace [in the Middle East]");
  CHECK(claim.core == "John has called for peace");
  REQUIRE(claim.inferred_segments.size() == 2);
  CHECK(claim.inferred_segments[0].text == "a celebrity");
  CHECK(claim.inferred_segments[0].offset == 4);
  CHECK(claim.inferred_segments[1].text == "in the Middle East");
  CHECK(claim.inferred_segments[1].offset == claim.core.size());
}

TEST_CASE("plain claims pass through") {
  const auto claim = parse_brackets("Plain claim");
  CHECK(claim.core == "Plain claim");
  CHECK(claim.inferred_segments.empty());
}

TEST_CASE("malformed brackets are rejected") {
  CHECK_THROWS_AS(parse_brackets("A [x [y]] B"), BracketError);
  CHECK_THROWS_AS(parse_brackets("A [x B"), BracketError);
  CHECK_THROWS_AS(parse_brackets("A x] B"), BracketError);
}

TEST_CASE("bracket round-trip reproduces well-formed claims") {
  CHECK(reinsert_segments(parse_brackets(
            "John [a celebrity] has called for peace [in the Middle East]")) ==
        "John [a celebrity] has called for peace [in the Middle East]");
  CHECK(reinsert_segments(parse_brackets("[The mayor] opened the bridge")) ==
        "[The mayor] opened the bridge");

  // Property: claims assembled from random word/segment interleavings
  // round-trip exactly.
  std::mt19937 rng(23);
  const std::vector<std::string> words = {"alpha", "bravo", "charlie", "delta", "echo"};
  for (int trial = 0; trial < 300; ++trial) {
    std::string original;
    bool last_was_segment = true;  // avoid adjacent segments, which need two spaces
    const int parts = 2 + static_cast<int>(rng() % 6);
    for (int i = 0; i < parts; ++i) {
      const bool segment = !last_was_segment && rng() % 3 == 0;
      if (!original.empty()) original += ' ';
      if (segment) {
        original += "[" + words[rng() % words.size()] + " " + words[rng() % words.size()] + "]";
      } else {
        original += words[rng() % words.size()];
      }
      last_was_segment = segment;
    }
    if (last_was_segment && original.size() > 2) {
      original += " " + words[rng() % words.size()];
    }
    CAPTURE(original);
    CHECK(reinsert_segments(parse_brackets(original)) == original);
  }
}

namespace {

Claim make_claim(const std::string& method, const std::string& answer, int sentence,
                 int ordinal, const std::string& text) {
  Claim claim;
  claim.method_id = method;
  claim.answer_id = answer;
  claim.sentence_index = sentence;
  claim.claim_ordinal = ordinal;
  claim.raw = text;
  claim.core = text;
  return claim;
}

}  // namespace

TEST_CASE("dedupe keeps first occurrences within a method-sentence group") {
  const std::vector<Claim> claims = {
      make_claim("m", "a", 0, 0, "A claim"),
      make_claim("m", "a", 0, 1, "A claim"),      // exact duplicate
      make_claim("m", "a", 0, 2, "A claim "),     // trailing whitespace duplicate
      make_claim("m", "a", 1, 0, "A claim"),      // different sentence: kept
      make_claim("other", "a", 0, 0, "A claim"),  // different method: kept
  };
  const auto kept = dedupe(claims);
  REQUIRE(kept.size() == 3);
  CHECK(kept[0].claim_ordinal == 0);
  CHECK(kept[1].sentence_index == 1);
  CHECK(kept[2].method_id == "other");

  // Idempotence and containment.
  const auto again = dedupe(kept);
  CHECK(again.size() == kept.size());
  CHECK(kept.size() <= claims.size());
}

TEST_CASE("eval sample filters") {
  const std::vector<Claim> claims = {
      make_claim("m", "a", 0, 0, "valid claim from valid sentence"),
      make_claim("m", "a", 1, 0, "claim from invalid sentence"),
      make_claim("m", "a", 2, 0, "invalid claim"),
      make_claim("m", "a", 3, 0, "not entailed claim"),
      make_claim("m", "a", 4, 0, "claim from gold-unverifiable sentence"),
  };
  SampleInputs inputs;
  inputs.sentence_valid[sentence_key("a", 1)] = false;
  inputs.claim_valid[claim_key(claims[2])] = false;
  inputs.claim_entailed[claim_key(claims[3])] = false;
  inputs.sentence_gold_verifiable[sentence_key("a", 4)] = false;

  SUBCASE("entailment sample excludes invalid claims and invalid sentences") {
    const auto sample = build_eval_sample(claims, EvalKind::entailment, inputs);
    CHECK(sample[0].included);
    CHECK_FALSE(sample[1].included);
    CHECK(sample[1].exclusion_reason == "claim from invalid sentence");
    CHECK_FALSE(sample[2].included);
    CHECK(sample[2].exclusion_reason == "invalid claim");
    CHECK(sample[3].included);  // entailment ignores entailment flags
    CHECK(sample[4].included);
  }

  SUBCASE("decontext sample additionally excludes not-entailed and gold-unverifiable") {
    const auto sample = build_eval_sample(claims, EvalKind::decontext, inputs);
    CHECK(sample[0].included);
    CHECK_FALSE(sample[1].included);
    CHECK_FALSE(sample[2].included);
    CHECK_FALSE(sample[3].included);
    CHECK(sample[3].exclusion_reason == "claim not entailed by source sentence");
    CHECK_FALSE(sample[4].included);
    CHECK(sample[4].exclusion_reason == "source sentence gold-unverifiable");
  }

  SUBCASE("adding exclusion rules never enlarges a sample") {
    auto count_included = [](const std::vector<SampleRecord>& sample) {
      std::size_t n = 0;
      for (const auto& rec : sample) n += rec.included;
      return n;
    };
    const auto entailment_sample = build_eval_sample(claims, EvalKind::entailment, inputs);
    const auto decontext_sample = build_eval_sample(claims, EvalKind::decontext, inputs);
    CHECK(count_included(decontext_sample) <= count_included(entailment_sample));
  }
}

TEST_CASE("sentence sample excludes cannot-be-disambiguated sentences") {
  SampleInputs inputs;
  inputs.sentence_cannot_disambiguate[sentence_key("a", 1)] = true;
  inputs.sentence_valid[sentence_key("a", 2)] = false;
  const auto sample = build_sentence_sample({{"a", 0}, {"a", 1}, {"a", 2}}, inputs);
  CHECK(sample[0].included);
  CHECK_FALSE(sample[1].included);
  CHECK(sample[1].exclusion_reason == "sentence failed disambiguation");
  CHECK_FALSE(sample[2].included);
}
