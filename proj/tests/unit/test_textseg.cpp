#include <doctest.h>

#include "claimex/jsonl.hpp"
#include "claimex/textseg.hpp"

#include <random>

using namespace claimex;

namespace {

std::vector<std::string> texts(const std::vector<SentenceRecord>& records) {
  std::vector<std::string> out;
  for (const auto& rec : records) out.push_back(rec.text);
  return out;
}

}  // namespace

TEST_CASE("two terminal periods split") {
  CHECK(texts(split_into_sentences("A. B.")) == std::vector<std::string>{"A.", "B."});
}

TEST_CASE("bullet items without terminal punctuation become sentences") {
  CHECK(texts(split_into_sentences("- item one\n- item two")) ==
        std::vector<std::string>{"- item one", "- item two"});
}

TEST_CASE("abbreviation is not a boundary") {
  CHECK(texts(split_into_sentences("Dr. Smith arrived. He left.")) ==
        std::vector<std::string>{"Dr. Smith arrived.", "He left."});
}

TEST_CASE("empty input yields empty list") {
  CHECK(split_into_sentences("").empty());
  CHECK(split_into_sentences("   \n\n  ").empty());
}

TEST_CASE("decimal numbers are not boundaries") {
  CHECK(texts(split_into_sentences("It costs $3.50 today. Prices vary.")) ==
        std::vector<std::string>{"It costs $3.50 today.", "Prices vary."});
}

TEST_CASE("closing quote after terminal punctuation") {
  CHECK(texts(split_into_sentences("She said \"Stop.\" Then she left.")) ==
        std::vector<std::string>{"She said \"Stop.\"", "Then she left."});
}

TEST_CASE("sentence indexes are dense and paragraph indexes ordinal") {
  const auto records = split_into_sentences("One. Two.\n\nThree.");
  REQUIRE(records.size() == 3);
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(records[i].sentence_index == static_cast<int>(i));
  }
  CHECK(records[0].paragraph_index == 0);
  CHECK(records[1].paragraph_index == 0);
  CHECK(records[2].paragraph_index == 1);
}

TEST_CASE("round-trip over the golden corpus") {
  const auto docs = read_jsonl(std::string(CLAIMEX_TEST_DATA_DIR) + "/segmentation_corpus.jsonl");
  REQUIRE(!docs.empty());
  for (const auto& doc : docs) {
    const auto text = doc.at("text").get<std::string>();
    const auto answer = split_answer(text, "doc");
    CHECK(reconstruct(answer) == text);
    // Monotonicity: each sentence appears after the previous one.
    std::size_t pos = 0;
    for (const auto& rec : answer.sentences) {
      const std::size_t found = text.find(rec.text, pos);
      REQUIRE(found != std::string::npos);
      pos = found + rec.text.size();
    }
  }
}

TEST_CASE("build_context bounds and markers") {
  std::vector<SentenceRecord> sentences;
  for (int i = 0; i < 20; ++i) {
    SentenceRecord rec;
    rec.sentence_index = i;
    rec.text = "S" + std::to_string(i) + ".";
    sentences.push_back(rec);
  }

  SUBCASE("first sentence has no left context or marker") {
    const auto ctx = build_context(sentences, 0, 5, 5);
    CHECK(ctx.preceding.empty());
    CHECK_FALSE(ctx.left_truncated);
    CHECK(ctx.following.size() == 5);
    CHECK(ctx.right_truncated);
  }

  SUBCASE("middle sentence with p=5 f=5 truncates both sides") {
    const auto ctx = build_context(sentences, 10, 5, 5);
    CHECK(ctx.preceding.size() == 5);
    CHECK(ctx.following.size() == 5);
    CHECK(ctx.left_truncated);
    CHECK(ctx.right_truncated);
  }

  SUBCASE("f=0 leaves following empty") {
    const auto ctx = build_context(sentences, 10, 5, 0);
    CHECK(ctx.following.empty());
    CHECK(ctx.right_truncated);  // sentences do follow
  }

  SUBCASE("window bounds hold for random p and f") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
      const int index = static_cast<int>(rng() % sentences.size());
      const int p = static_cast<int>(rng() % 8);
      const int f = static_cast<int>(rng() % 8);
      const auto ctx = build_context(sentences, index, p, f);
      CHECK(ctx.preceding.size() <= static_cast<std::size_t>(p));
      CHECK(ctx.following.size() <= static_cast<std::size_t>(f));
      CHECK(ctx.preceding.size() == static_cast<std::size_t>(std::min(p, index)));
      const int remaining = static_cast<int>(sentences.size()) - index - 1;
      CHECK(ctx.following.size() == static_cast<std::size_t>(std::min(f, remaining)));
      CHECK(ctx.left_truncated == (index - p > 0));
      CHECK(ctx.right_truncated == (remaining - f > 0));
    }
  }

  SUBCASE("index out of range throws") {
    CHECK_THROWS_AS(build_context(sentences, 20, 5, 5), std::out_of_range);
    CHECK_THROWS_AS(build_context(sentences, -1, 5, 5), std::out_of_range);
  }
}

TEST_CASE("render_excerpt places ellipsis markers") {
  ContextWindow ctx;
  ctx.preceding = {"P1.", "P2."};
  ctx.following = {"F1."};
  ctx.left_truncated = true;
  ctx.right_truncated = true;
  CHECK(render_excerpt(ctx, "Focal.") == "[...] P1. P2. Focal. F1. [...]");

  ContextWindow bare;
  CHECK(render_excerpt(bare, "Only.") == "Only.");
}
