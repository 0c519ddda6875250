#pragma once

#include "claimex/gateway.hpp"
#include "claimex/jsonl.hpp"
#include "claimex/postprocess.hpp"
#include "claimex/textseg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace claimex {

struct StageConfig {
  int max_retries = 2;
  int max_preceding_sentences = 5;
  int max_following_sentences = 5;
  int completions = 3;
  int min_successes = 2;
};

struct AblationFlags {
  bool skip_selection = false;
  bool selection_detect_only = false;
  bool skip_disambiguation = false;
};

struct PipelineConfig {
  std::string model_id = "offline-model";
  StageConfig selection{2, 5, 5, 3, 2};
  StageConfig disambiguation{2, 5, 0, 3, 2};
  StageConfig decomposition{2, 5, 0, 1, 1};
  AblationFlags ablations;
  bool keep_transcripts = false;
};

// Sampling policy: deterministic for single completions, mildly sampled when
// voting across several.
double stage_temperature(int completions);

template <typename P>
struct Slot {
  bool success = false;
  P payload{};
};

template <typename P>
struct StageDecision {
  bool pass = false;
  int successes = 0;
  int winning_slot = -1;  // earliest successful slot
  std::optional<P> payload;
};

// Passes iff at least min_successes slots succeeded; the carried payload is
// the earliest successful slot's.
template <typename P>
StageDecision<P> vote(const std::vector<Slot<P>>& slots, int min_successes) {
  StageDecision<P> decision;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (!slots[i].success) continue;
    ++decision.successes;
    if (decision.winning_slot < 0) {
      decision.winning_slot = static_cast<int>(i);
      decision.payload = slots[i].payload;
    }
  }
  decision.pass = decision.successes >= min_successes;
  return decision;
}

struct VoteDecision {
  bool pass = false;
  int successes = 0;
  int winning_slot = -1;
};

VoteDecision vote(const std::vector<bool>& slot_success, int min_successes);

template <typename P>
struct StageRun {
  StageDecision<P> decision;
  std::vector<std::string> transcripts;   // one accepted transcript per slot (or last reject)
  std::vector<std::string> diagnostics;   // parse failures, retry exhaustion
};

StageRun<SelectionResult> run_selection(Gateway& gateway, const std::string& sentence,
                                        const ContextWindow& ctx, const std::string& question,
                                        const StageConfig& cfg, const std::string& model_id);

StageRun<DisambiguationResult> run_disambiguation(Gateway& gateway, const std::string& sentence,
                                                  const ContextWindow& ctx,
                                                  const std::string& question,
                                                  const StageConfig& cfg,
                                                  const std::string& model_id);

StageRun<std::vector<std::string>> run_decomposition(Gateway& gateway,
                                                     const std::string& sentence,
                                                     const ContextWindow& ctx,
                                                     const std::string& question,
                                                     const StageConfig& cfg,
                                                     const std::string& model_id);

enum class SentenceLabel { no_verifiable_claims, cannot_be_disambiguated, claims_extracted };

const char* sentence_label_name(SentenceLabel label);
SentenceLabel sentence_label_from_name(const std::string& name);

struct SentenceVerdict {
  std::string answer_id;
  int sentence_index = 0;
  SentenceLabel label = SentenceLabel::no_verifiable_claims;
  std::vector<Claim> claims;  // nonempty iff label == claims_extracted
  json transcripts = json::object();
  std::vector<std::string> diagnostics;
};

// Runs Selection -> Disambiguation -> Decomposition per sentence, honoring
// ablation flags. One sentence's failure never aborts the run; verdicts come
// back in sentence order regardless of worker count.
std::vector<SentenceVerdict> run_pipeline(Gateway& gateway, const std::string& question,
                                          const std::string& answer,
                                          const std::string& answer_id,
                                          const PipelineConfig& cfg, int workers = 1);

json verdict_to_json(const SentenceVerdict& verdict, bool include_transcripts);
SentenceVerdict verdict_from_json(const json& record);

}  // namespace claimex
