#include "claimex/pipeline.hpp"

#include "claimex/strings.hpp"
#include "claimex/workpool.hpp"

namespace claimex {

double stage_temperature(int completions) { return completions > 1 ? 0.2 : 0.0; }

VoteDecision vote(const std::vector<bool>& slot_success, int min_successes) {
  VoteDecision decision;
  for (std::size_t i = 0; i < slot_success.size(); ++i) {
    if (!slot_success[i]) continue;
    ++decision.successes;
    if (decision.winning_slot < 0) decision.winning_slot = static_cast<int>(i);
  }
  decision.pass = decision.successes >= min_successes;
  return decision;
}

namespace {

PromptRequest stage_request(PromptKind kind, const std::string& sentence,
                            const ContextWindow& ctx, const std::string& question,
                            const StageConfig& cfg, const std::string& model_id) {
  const PromptPair prompt = prompt_pair(kind);
  PromptRequest req;
  req.model_id = model_id;
  req.system_text = prompt.system_text;
  req.user_text = render_template(prompt.user_text, {{"question", question},
                                                     {"excerpt", render_excerpt(ctx, sentence)},
                                                     {"sentence", sentence}});
  req.n_completions = cfg.completions;
  req.temperature = stage_temperature(cfg.completions);
  req.kind = kind;
  return req;
}

// Runs all completion slots of one stage, mapping parse results to slot
// success via `succeeds`. A slot whose parses were all rejected counts as a
// non-success with a diagnostic rather than an error.
template <typename T>
StageRun<T> run_stage(Gateway& gateway, const PromptRequest& req,
                      const std::function<ParseOutcome<T>(const std::string&)>& parser,
                      const StageConfig& cfg, const std::function<bool(const T&)>& succeeds,
                      const char* stage_name) {
  StageRun<T> run;
  std::vector<Slot<T>> slots(static_cast<std::size_t>(cfg.completions));
  for (int slot = 0; slot < cfg.completions; ++slot) {
    auto result = gateway.call_with_retries<T>(req, parser, cfg.max_retries, slot);
    if (result.ok()) {
      slots[static_cast<std::size_t>(slot)] = Slot<T>{succeeds(*result.value), *result.value};
      run.transcripts.push_back(result.transcript);
    } else {
      run.diagnostics.push_back(std::string(stage_name) + " slot " + std::to_string(slot) +
                                ": parse failed after retries: " + result.failure.error);
      run.transcripts.push_back(result.failure.rejected_texts.empty()
                                    ? std::string()
                                    : result.failure.rejected_texts.back());
    }
  }
  run.decision = vote(slots, cfg.min_successes);
  return run;
}

}  // namespace

StageRun<SelectionResult> run_selection(Gateway& gateway, const std::string& sentence,
                                        const ContextWindow& ctx, const std::string& question,
                                        const StageConfig& cfg, const std::string& model_id) {
  const PromptRequest req =
      stage_request(PromptKind::selection, sentence, ctx, question, cfg, model_id);
  auto run = run_stage<SelectionResult>(
      gateway, req, parse_selection, cfg,
      [](const SelectionResult& r) { return r.kind != SelectionKind::no_verifiable_content; },
      "selection");
  // A rewrite equal to the input carries no change.
  if (run.decision.payload && run.decision.payload->kind == SelectionKind::revised &&
      run.decision.payload->text == sentence) {
    run.decision.payload->kind = SelectionKind::unchanged;
    run.decision.payload->text.clear();
  }
  return run;
}

StageRun<DisambiguationResult> run_disambiguation(Gateway& gateway, const std::string& sentence,
                                                  const ContextWindow& ctx,
                                                  const std::string& question,
                                                  const StageConfig& cfg,
                                                  const std::string& model_id) {
  const PromptRequest req =
      stage_request(PromptKind::disambiguation, sentence, ctx, question, cfg, model_id);
  auto run = run_stage<DisambiguationResult>(
      gateway, req, parse_disambiguation, cfg,
      [](const DisambiguationResult& r) {
        return r.kind != DisambiguationKind::cannot_be_disambiguated;
      },
      "disambiguation");
  if (run.decision.payload && run.decision.payload->kind == DisambiguationKind::clarified &&
      run.decision.payload->text == sentence) {
    run.decision.payload->kind = DisambiguationKind::unchanged;
    run.decision.payload->text.clear();
  }
  return run;
}

StageRun<std::vector<std::string>> run_decomposition(Gateway& gateway,
                                                     const std::string& sentence,
                                                     const ContextWindow& ctx,
                                                     const std::string& question,
                                                     const StageConfig& cfg,
                                                     const std::string& model_id) {
  const PromptRequest req =
      stage_request(PromptKind::decomposition, sentence, ctx, question, cfg, model_id);
  return run_stage<std::vector<std::string>>(
      gateway, req, parse_decomposition, cfg,
      [](const std::vector<std::string>& claims) { return !claims.empty(); }, "decomposition");
}

const char* sentence_label_name(SentenceLabel label) {
  switch (label) {
    case SentenceLabel::no_verifiable_claims: return "No verifiable claims";
    case SentenceLabel::cannot_be_disambiguated: return "Cannot be disambiguated";
    case SentenceLabel::claims_extracted: return "Claims extracted";
  }
  return "No verifiable claims";
}

SentenceLabel sentence_label_from_name(const std::string& name) {
  if (name == "Cannot be disambiguated") return SentenceLabel::cannot_be_disambiguated;
  if (name == "Claims extracted") return SentenceLabel::claims_extracted;
  if (name == "No verifiable claims") return SentenceLabel::no_verifiable_claims;
  throw std::invalid_argument("unknown sentence label: " + name);
}

namespace {

SentenceVerdict process_sentence(Gateway& gateway, const std::vector<SentenceRecord>& sentences,
                                 std::size_t index, const std::string& question,
                                 const PipelineConfig& cfg) {
  const SentenceRecord& record = sentences[index];
  SentenceVerdict verdict;
  verdict.answer_id = record.answer_id;
  verdict.sentence_index = record.sentence_index;

  std::string carried = record.text;

  if (!cfg.ablations.skip_selection) {
    const auto ctx = build_context(sentences, static_cast<int>(index),
                                   cfg.selection.max_preceding_sentences,
                                   cfg.selection.max_following_sentences);
    auto run = run_selection(gateway, carried, ctx, question, cfg.selection, cfg.model_id);
    verdict.diagnostics.insert(verdict.diagnostics.end(), run.diagnostics.begin(),
                               run.diagnostics.end());
    if (cfg.keep_transcripts) verdict.transcripts["selection"] = run.transcripts;
    if (!run.decision.pass) {
      verdict.label = SentenceLabel::no_verifiable_claims;
      return verdict;
    }
    if (!cfg.ablations.selection_detect_only &&
        run.decision.payload->kind == SelectionKind::revised) {
      carried = run.decision.payload->text;
    }
  }

  if (!cfg.ablations.skip_disambiguation) {
    const auto ctx = build_context(sentences, static_cast<int>(index),
                                   cfg.disambiguation.max_preceding_sentences,
                                   cfg.disambiguation.max_following_sentences);
    auto run =
        run_disambiguation(gateway, carried, ctx, question, cfg.disambiguation, cfg.model_id);
    verdict.diagnostics.insert(verdict.diagnostics.end(), run.diagnostics.begin(),
                               run.diagnostics.end());
    if (cfg.keep_transcripts) verdict.transcripts["disambiguation"] = run.transcripts;
    if (!run.decision.pass) {
      verdict.label = SentenceLabel::cannot_be_disambiguated;
      return verdict;
    }
    if (run.decision.payload->kind == DisambiguationKind::clarified) {
      carried = run.decision.payload->text;
    }
  }

  const auto ctx = build_context(sentences, static_cast<int>(index),
                                 cfg.decomposition.max_preceding_sentences,
                                 cfg.decomposition.max_following_sentences);
  auto run = run_decomposition(gateway, carried, ctx, question, cfg.decomposition, cfg.model_id);
  verdict.diagnostics.insert(verdict.diagnostics.end(), run.diagnostics.begin(),
                             run.diagnostics.end());
  if (cfg.keep_transcripts) verdict.transcripts["decomposition"] = run.transcripts;

  if (!run.decision.pass) {
    // Either the final list was empty (a valid "no claims" outcome) or no
    // completion parsed; run.diagnostics already records the latter.
    verdict.label = SentenceLabel::no_verifiable_claims;
    return verdict;
  }

  verdict.label = SentenceLabel::claims_extracted;
  int ordinal = 0;
  for (const auto& text : *run.decision.payload) {
    Claim claim;
    try {
      claim = parse_brackets(text);
    } catch (const BracketError& err) {
      claim.raw = text;
      claim.core = text;
      verdict.diagnostics.push_back(std::string("claim kept verbatim: ") + err.what());
    }
    claim.answer_id = record.answer_id;
    claim.sentence_index = record.sentence_index;
    claim.claim_ordinal = ordinal++;
    verdict.claims.push_back(std::move(claim));
  }
  return verdict;
}

}  // namespace

std::vector<SentenceVerdict> run_pipeline(Gateway& gateway, const std::string& question,
                                          const std::string& answer,
                                          const std::string& answer_id,
                                          const PipelineConfig& cfg, int workers) {
  const auto sentences = split_into_sentences(answer, answer_id);
  std::vector<SentenceVerdict> verdicts(sentences.size());
  parallel_for(sentences.size(), workers, [&](std::size_t i) {
    try {
      verdicts[i] = process_sentence(gateway, sentences, i, question, cfg);
    } catch (const CacheMissError&) {
      throw;  // a cold cache in cache-only mode is a configuration error
    } catch (const std::exception& ex) {
      SentenceVerdict verdict;
      verdict.answer_id = answer_id;
      verdict.sentence_index = sentences[i].sentence_index;
      verdict.label = SentenceLabel::no_verifiable_claims;
      verdict.diagnostics.push_back(std::string("stage error: ") + ex.what());
      verdicts[i] = std::move(verdict);
    }
  });
  return verdicts;
}

json verdict_to_json(const SentenceVerdict& verdict, bool include_transcripts) {
  json claims = json::array();
  for (const auto& claim : verdict.claims) {
    json segments = json::array();
    for (const auto& seg : claim.inferred_segments) {
      segments.push_back(json{{"text", seg.text}, {"offset", seg.offset}});
    }
    claims.push_back(json{{"core", claim.core},
                          {"inferred_segments", std::move(segments)},
                          {"raw", claim.raw},
                          {"claim_ordinal", claim.claim_ordinal}});
  }
  json record{{"answer_id", verdict.answer_id},
              {"sentence_index", verdict.sentence_index},
              {"label", sentence_label_name(verdict.label)},
              {"claims", std::move(claims)}};
  if (!verdict.diagnostics.empty()) record["diagnostics"] = verdict.diagnostics;
  if (include_transcripts && !verdict.transcripts.empty()) {
    record["transcripts"] = verdict.transcripts;
  }
  return record;
}

SentenceVerdict verdict_from_json(const json& record) {
  SentenceVerdict verdict;
  verdict.answer_id = record.at("answer_id").get<std::string>();
  verdict.sentence_index = record.at("sentence_index").get<int>();
  verdict.label = sentence_label_from_name(record.at("label").get<std::string>());
  if (record.contains("claims")) {
    for (const auto& item : record.at("claims")) {
      Claim claim;
      claim.core = item.at("core").get<std::string>();
      claim.raw = item.value("raw", claim.core);
      claim.answer_id = verdict.answer_id;
      claim.sentence_index = verdict.sentence_index;
      claim.claim_ordinal = item.value("claim_ordinal", static_cast<int>(verdict.claims.size()));
      if (item.contains("inferred_segments")) {
        for (const auto& seg : item.at("inferred_segments")) {
          claim.inferred_segments.push_back(InferredSegment{
              seg.at("text").get<std::string>(), seg.at("offset").get<std::size_t>()});
        }
      }
      verdict.claims.push_back(std::move(claim));
    }
  }
  if (record.contains("diagnostics")) {
    verdict.diagnostics = record.at("diagnostics").get<std::vector<std::string>>();
  }
  return verdict;
}

}  // namespace claimex
