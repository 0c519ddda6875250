#include <doctest.h>

#include "claimex/gateway.hpp"

#include <filesystem>

using namespace claimex;

namespace {

std::filesystem::path fresh_cache_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("claimex_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

PromptRequest selection_request(const std::string& sentence, int completions = 1) {
  PromptRequest req;
  req.model_id = "mock-model";
  req.system_text = "system";
  req.user_text = "Question:\nQ?\n\nExcerpt:\n" + sentence + "\n\nSentence:\n" + sentence + "\n";
  req.n_completions = completions;
  req.kind = PromptKind::selection;
  return req;
}

}  // namespace

TEST_CASE("cache keys are pure functions of the request") {
  const auto req = selection_request("TurboCorp shipped a product in 2020.");
  CHECK(completion_cache_key(req, 0) == completion_cache_key(req, 0));
  CHECK(completion_cache_key(req, 0) != completion_cache_key(req, 1));
  auto warmer = req;
  warmer.temperature = 0.2;
  CHECK(completion_cache_key(req, 0) != completion_cache_key(warmer, 0));
}

TEST_CASE("repeat completions are served from cache with identical text") {
  Gateway gateway(std::make_shared<MockChatProvider>(),
                  CompletionCache(fresh_cache_dir("repeat")));
  const auto req = selection_request("TurboCorp shipped a product in 2020.");

  const auto first = gateway.complete(req);
  REQUIRE(first.size() == 1);
  CHECK_FALSE(first[0].from_cache);
  CHECK(gateway.provider_calls() == 1);

  const auto second = gateway.complete(req);
  CHECK(second[0].from_cache);
  CHECK(second[0].text == first[0].text);
  CHECK(gateway.provider_calls() == 1);
}

TEST_CASE("n completions produce ordinals 0..n-1") {
  Gateway gateway(std::make_shared<MockChatProvider>(),
                  CompletionCache(fresh_cache_dir("ordinals")));
  const auto completions = gateway.complete(
      selection_request("TurboCorp shipped a product in 2020.", 3));
  REQUIRE(completions.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(completions[static_cast<std::size_t>(i)].ordinal == i);
}

TEST_CASE("scripted mock returns fixture texts verbatim") {
  std::vector<MockChatProvider::ScriptEntry> script = {
      {"TurboCorp", "scripted response one"},
  };
  Gateway gateway(std::make_shared<MockChatProvider>(script),
                  CompletionCache(fresh_cache_dir("script")));
  const auto completions =
      gateway.complete(selection_request("TurboCorp shipped a product in 2020."));
  CHECK(completions[0].text == "scripted response one");
}

TEST_CASE("call_with_retries") {
  const auto parser = [](const std::string& text) {
    if (text.find("VALID") != std::string::npos) return ParseOutcome<int>::success(1);
    return ParseOutcome<int>::failure("no marker");
  };

  SUBCASE("accepting parser issues one provider call") {
    std::vector<MockChatProvider::ScriptEntry> script = {{"Sentence:", "VALID"}};
    Gateway gateway(std::make_shared<MockChatProvider>(script),
                    CompletionCache(fresh_cache_dir("retry0")));
    const auto result = gateway.call_with_retries<int>(
        selection_request("Anything."), parser, 2);
    CHECK(result.ok());
    CHECK(gateway.provider_calls() == 1);
  }

  SUBCASE("two malformed outputs then a valid one succeeds after three calls") {
    std::vector<MockChatProvider::ScriptEntry> script = {
        {"Sentence:", "garbage", 0},
        {"Sentence:", "more garbage", 1},
        {"Sentence:", "VALID", 2},
    };
    Gateway gateway(std::make_shared<MockChatProvider>(script),
                    CompletionCache(fresh_cache_dir("retry2")));
    const auto result = gateway.call_with_retries<int>(
        selection_request("Anything."), parser, 2);
    CHECK(result.ok());
    CHECK(gateway.provider_calls() == 3);
  }

  SUBCASE("exhaustion returns a failure carrying every rejected transcript") {
    std::vector<MockChatProvider::ScriptEntry> script = {
        {"Sentence:", "garbage", 0},
        {"Sentence:", "more garbage", 1},
        {"Sentence:", "still garbage", 2},
    };
    Gateway gateway(std::make_shared<MockChatProvider>(script),
                    CompletionCache(fresh_cache_dir("retry3")));
    const auto result = gateway.call_with_retries<int>(
        selection_request("Anything."), parser, 2);
    CHECK_FALSE(result.ok());
    CHECK(result.failure.rejected_texts ==
          std::vector<std::string>{"garbage", "more garbage", "still garbage"});
    // Provider invocations never exceed 1 + max_retries per logical request.
    CHECK(gateway.provider_calls() <= 3);
  }
}

TEST_CASE("cache-only mode errors on a miss, naming the key") {
  Gateway gateway(std::make_shared<CacheOnlyChatProvider>(),
                  CompletionCache(fresh_cache_dir("cacheonly")), /*cache_only=*/true);
  const auto req = selection_request("Uncached sentence.");
  try {
    gateway.complete(req);
    FAIL("expected CacheMissError");
  } catch (const CacheMissError& err) {
    CHECK(err.key == completion_cache_key(req, 0));
    CHECK(std::string(err.what()).find(err.key) != std::string::npos);
  }
  CHECK(gateway.provider_calls() == 0);
}

TEST_CASE("cache-only mode replays a warm cache without provider calls") {
  const auto dir = fresh_cache_dir("replay");
  const auto req = selection_request("TurboCorp shipped a product in 2020.");
  std::string original;
  {
    Gateway warm(std::make_shared<MockChatProvider>(), CompletionCache(dir));
    original = warm.complete(req)[0].text;
  }
  Gateway replay(std::make_shared<CacheOnlyChatProvider>(), CompletionCache(dir), true);
  CHECK(replay.complete(req)[0].text == original);
  CHECK(replay.provider_calls() == 0);
}
