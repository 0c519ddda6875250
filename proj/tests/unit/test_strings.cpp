#include <doctest.h>

#include "claimex/strings.hpp"

using namespace claimex;

TEST_CASE("trim and collapse") {
  CHECK(trim("  a b  ") == "a b");
  CHECK(trim("") == "");
  CHECK(collapse_whitespace("a\n  b\tc") == "a b c");
  CHECK(collapse_whitespace("  leading and trailing \n") == "leading and trailing");
}

TEST_CASE("replace_all") {
  CHECK(replace_all("a{x}b{x}", "{x}", "1") == "a1b1");
  CHECK(replace_all("aaa", "aa", "b") == "ba");
}

TEST_CASE("content_words") {
  const auto words = content_words("The Quick, brown fox (it jumps)!");
  CHECK(words == std::vector<std::string>{"quick", "brown", "jumps"});
}

TEST_CASE("case-insensitive contains") {
  CHECK(icontains("Final Submission: DONE", "final submission"));
  CHECK_FALSE(icontains("abc", "abd"));
}
