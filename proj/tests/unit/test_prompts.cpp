#include <doctest.h>

#include "claimex/jsonl.hpp"
#include "claimex/prompts.hpp"

#include <filesystem>

using namespace claimex;

TEST_CASE("embedded templates match the files byte for byte") {
  const auto prompt_dir =
      std::filesystem::path(CLAIMEX_TEST_DATA_DIR).parent_path().parent_path() / "prompts";
  REQUIRE(std::filesystem::exists(prompt_dir));
  int checked = 0;
  for (const auto& entry : std::filesystem::directory_iterator(prompt_dir)) {
    if (entry.path().extension() != ".txt") continue;
    const std::string name = entry.path().stem().string();
    CHECK(prompt_text(name) == read_text(entry.path()));
    ++checked;
  }
  CHECK(checked == 22);  // 11 prompt kinds, system + user each
}

TEST_CASE("every prompt kind resolves to a system/user pair") {
  for (const auto kind :
       {PromptKind::selection, PromptKind::disambiguation, PromptKind::decomposition,
        PromptKind::entailment, PromptKind::element_extraction, PromptKind::element_coverage,
        PromptKind::decontext, PromptKind::sentence_validity, PromptKind::claim_validity,
        PromptKind::query_generation, PromptKind::verification}) {
    const auto pair = prompt_pair(kind);
    CHECK(!pair.system_text.empty());
    CHECK(!pair.user_text.empty());
  }
  CHECK_THROWS(prompt_text("no_such_template"));
}

TEST_CASE("placeholder substitution leaves unrelated braces alone") {
  const std::string rendered = render_template(
      "Q: {question}\nliteral {braces} stay\nS: {sentence}",
      {{"question", "why?"}, {"sentence", "It works."}});
  CHECK(rendered == "Q: why?\nliteral {braces} stay\nS: It works.");
}

TEST_CASE("stage user templates carry the three placeholders") {
  for (const auto kind :
       {PromptKind::selection, PromptKind::disambiguation, PromptKind::decomposition}) {
    const auto user = prompt_pair(kind).user_text;
    CHECK(user.find("{question}") != std::string::npos);
    CHECK(user.find("{excerpt}") != std::string::npos);
    CHECK(user.find("{sentence}") != std::string::npos);
  }
}

TEST_CASE("prompts digest is stable within a process") {
  CHECK(prompts_digest() == prompts_digest());
  CHECK(prompts_digest().size() == 64);
}
