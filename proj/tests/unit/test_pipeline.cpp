#include <doctest.h>

#include "claimex/pipeline.hpp"

#include <filesystem>
#include <random>

using namespace claimex;

namespace {

std::filesystem::path fresh_cache_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("claimex_pipe_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

Gateway mock_gateway(const std::string& name,
                     std::vector<MockChatProvider::ScriptEntry> script = {}) {
  return Gateway(std::make_shared<MockChatProvider>(std::move(script)),
                 CompletionCache(fresh_cache_dir(name)));
}

std::map<SentenceLabel, int> label_histogram(const std::vector<SentenceVerdict>& verdicts) {
  std::map<SentenceLabel, int> histogram;
  for (const auto& verdict : verdicts) ++histogram[verdict.label];
  return histogram;
}

}  // namespace

TEST_CASE("vote examples") {
  CHECK(vote({true, false, true}, 2).pass);
  CHECK_FALSE(vote({false, false, true}, 2).pass);
  CHECK(vote({true}, 1).pass);
  CHECK(vote({false, true, true}, 2).winning_slot == 1);
}

TEST_CASE("voting is monotone: pass iff successes >= threshold") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const int completions = 1 + static_cast<int>(rng() % 7);
    const int min_successes = 1 + static_cast<int>(rng() % completions);
    std::vector<bool> slots;
    int successes = 0;
    for (int i = 0; i < completions; ++i) {
      const bool s = rng() % 2 == 0;
      slots.push_back(s);
      successes += s;
    }
    const auto decision = vote(slots, min_successes);
    CHECK(decision.pass == (successes >= min_successes));
    CHECK(decision.successes == successes);

    // Adding a successful slot never flips pass -> fail.
    slots.push_back(true);
    CHECK(vote(slots, min_successes).pass >= decision.pass);
  }
}

TEST_CASE("payload vote carries the earliest successful slot") {
  std::vector<Slot<std::string>> slots = {{false, "a"}, {true, "b"}, {true, "c"}};
  const auto decision = vote(slots, 2);
  CHECK(decision.pass);
  REQUIRE(decision.payload.has_value());
  CHECK(*decision.payload == "b");
}

TEST_CASE("pipeline assigns exactly one label per sentence") {
  auto gateway = mock_gateway("labels");
  PipelineConfig cfg;
  cfg.model_id = "mock-model";
  const std::string answer =
      "TurboCorp opened a plant in Ohio in 2021. This could revolutionize the region. "
      "They will revisit the plan next year.";
  const auto verdicts = run_pipeline(gateway, "What happened?", answer, "a1", cfg);
  REQUIRE(verdicts.size() == 3);
  CHECK(verdicts[0].label == SentenceLabel::claims_extracted);
  CHECK(verdicts[1].label == SentenceLabel::no_verifiable_claims);
  CHECK(verdicts[2].label == SentenceLabel::cannot_be_disambiguated);

  // Stage isolation: claims exist only for claims_extracted sentences.
  for (const auto& verdict : verdicts) {
    CHECK(verdict.claims.empty() == (verdict.label != SentenceLabel::claims_extracted));
  }
}

TEST_CASE("selection vote failure labels the sentence no-verifiable-claims") {
  // Two of three selection slots return no verifiable content.
  std::vector<MockChatProvider::ScriptEntry> script;
  const std::string none_response =
      "Final submission:\nDoes NOT contain a specific and verifiable proposition\n\n"
      "Sentence with only verifiable information:\nNone\n";
  const std::string keep_response =
      "Final submission:\nContains a specific and verifiable proposition\n\n"
      "Sentence with only verifiable information:\nremains unchanged\n";
  script.push_back({"Sentence:", none_response, 0});
  script.push_back({"Sentence:", keep_response, 1});
  script.push_back({"Sentence:", none_response, 2});

  auto gateway = mock_gateway("selfail", script);
  PipelineConfig cfg;
  cfg.model_id = "mock-model";
  const auto verdicts =
      run_pipeline(gateway, "Q?", "TurboCorp opened a plant in Ohio in 2021.", "a1", cfg);
  REQUIRE(verdicts.size() == 1);
  CHECK(verdicts[0].label == SentenceLabel::no_verifiable_claims);
}

TEST_CASE("disambiguation failure blocks decomposition even with verifiable parts") {
  auto gateway = mock_gateway("disfail");
  const std::vector<SentenceRecord> sentences = {
      {"a1", 0, 0, "They will revisit the plan next year.", ""}};
  const auto ctx = build_context(sentences, 0, 5, 0);
  StageConfig cfg{2, 5, 0, 3, 2};
  const auto run = run_disambiguation(gateway, sentences[0].text, ctx, "Q?", cfg, "mock-model");
  CHECK_FALSE(run.decision.pass);
  CHECK(run.decision.successes == 0);
}

TEST_CASE("skip_disambiguation feeds selection output straight to decomposition") {
  auto gateway = mock_gateway("ablation");
  PipelineConfig cfg;
  cfg.model_id = "mock-model";
  cfg.ablations.skip_disambiguation = true;
  // Without disambiguation, the cannot-be-disambiguated trigger never fires.
  const auto verdicts =
      run_pipeline(gateway, "Q?", "They will revisit the plan next year.", "a1", cfg);
  REQUIRE(verdicts.size() == 1);
  CHECK(verdicts[0].label == SentenceLabel::claims_extracted);
}

TEST_CASE("selection_detect_only keeps the original sentence text") {
  auto gateway = mock_gateway("detectonly");
  PipelineConfig cfg;
  cfg.model_id = "mock-model";
  cfg.ablations.selection_detect_only = true;
  const std::string sentence =
      "Its engineers developed a mind blowing model that cut costs by 12 percent.";
  const auto verdicts = run_pipeline(gateway, "Q?", sentence, "a1", cfg);
  REQUIRE(verdicts.size() == 1);
  REQUIRE(verdicts[0].label == SentenceLabel::claims_extracted);
  // The revision would have dropped "mind blowing"; detect-only must not.
  CHECK(verdicts[0].claims[0].raw.find("mind blowing") != std::string::npos);
}

TEST_CASE("identical cache and config give identical verdicts") {
  const auto dir = fresh_cache_dir("determinism");
  PipelineConfig cfg;
  cfg.model_id = "mock-model";
  const std::string answer =
      "TurboCorp opened a plant in Ohio in 2021. The company hired 200 workers and "
      "trained 40 apprentices.";

  auto run_once = [&] {
    Gateway gateway(std::make_shared<MockChatProvider>(), CompletionCache(dir));
    std::vector<std::string> flat;
    for (const auto& verdict : run_pipeline(gateway, "Q?", answer, "a1", cfg, 4)) {
      flat.push_back(verdict_to_json(verdict, false).dump());
    }
    return flat;
  };
  CHECK(run_once() == run_once());
}

TEST_CASE("sentence label names round-trip") {
  for (const auto label : {SentenceLabel::no_verifiable_claims,
                           SentenceLabel::cannot_be_disambiguated,
                           SentenceLabel::claims_extracted}) {
    CHECK(sentence_label_from_name(sentence_label_name(label)) == label);
  }
  CHECK_THROWS(sentence_label_from_name("bogus"));
}

TEST_CASE("stage temperature policy") {
  CHECK(stage_temperature(1) == 0.0);
  CHECK(stage_temperature(3) == 0.2);
}
