#include "claimex/commands.hpp"

#include "claimex/coverage.hpp"
#include "claimex/decontext.hpp"
#include "claimex/entailment.hpp"
#include "claimex/search.hpp"
#include "claimex/stats.hpp"
#include "claimex/strings.hpp"
#include "claimex/workpool.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <set>

namespace claimex {

namespace fs = std::filesystem;

namespace {

Gateway make_gateway(const RunConfig& cfg) {
  const bool cache_only = cfg.provider == "cache-only";
  auto provider =
      make_chat_provider(cfg.provider, cfg.api_base_url, cfg.api_key_env, cfg.mock_script);
  return Gateway(std::move(provider), CompletionCache(cfg.cache_dir), cache_only,
                 std::max(1, cfg.workers));
}

CachedSearch make_search(const RunConfig& cfg) {
  const bool cache_only = cfg.search_provider == "cache-only";
  auto provider =
      make_search_provider(cfg.search_provider, cfg.search_endpoint, cfg.search_api_key_env);
  return CachedSearch(std::move(provider), CompletionCache(cfg.cache_dir), cache_only);
}

RunManifest make_manifest(const RunConfig& cfg, const std::string& dataset_digest,
                          const std::string& provider_id, const std::string& search_id) {
  RunManifest manifest;
  manifest.config_digest = cfg.config_digest();
  manifest.prompts_digest = prompts_digest();
  manifest.model_id = cfg.model_id;
  manifest.provider_id = provider_id;
  manifest.search_provider_id = search_id;
  manifest.dataset_digest = dataset_digest;
  manifest.timestamp = run_timestamp();
  return manifest;
}

void write_records(const std::string& path, const RunManifest& manifest,
                   std::vector<json> records) {
  records.insert(records.begin(), manifest.to_json());
  write_jsonl(path, records);
}

std::vector<json> read_records(const std::string& path) {
  auto records = read_jsonl(path);
  if (!records.empty() && records.front().value("type", "") == "manifest") {
    records.erase(records.begin());
  }
  return records;
}

const DatasetEntry& entry_for(const std::vector<DatasetEntry>& dataset,
                              const std::string& answer_id) {
  for (const auto& entry : dataset) {
    if (entry.question_id == answer_id) return entry;
  }
  throw std::runtime_error("answer_id not present in dataset: " + answer_id);
}

std::string standardized_excerpt(const DatasetEntry& entry, int sentence_index, int preceding,
                                 const std::string& focal) {
  const auto ctx = build_context(entry.segmented.sentences, sentence_index, preceding, 0);
  return render_excerpt(ctx, focal);
}

std::string entailment_excerpt(const DatasetEntry& entry, int sentence_index,
                               const EntailmentContext& ctx_cfg, const std::string& focal) {
  const auto& sentences = entry.segmented.sentences;
  if (ctx_cfg.mode == "none") return focal;
  if (ctx_cfg.mode == "full_answer") return entry.answer;
  if (ctx_cfg.mode == "paragraph") {
    const int para = sentences[static_cast<std::size_t>(sentence_index)].paragraph_index;
    ContextWindow ctx;
    for (const auto& rec : sentences) {
      if (rec.paragraph_index != para) {
        (rec.sentence_index < sentence_index ? ctx.left_truncated : ctx.right_truncated) = true;
        continue;
      }
      if (rec.sentence_index < sentence_index) ctx.preceding.push_back(rec.text);
      if (rec.sentence_index > sentence_index) ctx.following.push_back(rec.text);
    }
    return render_excerpt(ctx, focal);
  }
  const auto ctx =
      build_context(sentences, sentence_index, ctx_cfg.preceding, ctx_cfg.following);
  return render_excerpt(ctx, focal);
}

struct ValidityMaps {
  std::map<std::string, bool> sentence_valid;
  std::map<std::string, bool> claim_valid;
};

ValidityMaps load_validity(const std::string& dir) {
  ValidityMaps maps;
  if (dir.empty()) return maps;
  const fs::path sentences = fs::path(dir) / "sentence_validity.jsonl";
  const fs::path claims = fs::path(dir) / "claim_validity.jsonl";
  if (fs::exists(sentences)) {
    for (const auto& rec : read_records(sentences.string())) {
      if (!rec.contains("valid")) continue;
      maps.sentence_valid[sentence_key(rec.at("answer_id").get<std::string>(),
                                       rec.at("sentence_index").get<int>())] =
          rec.at("valid").get<bool>();
    }
  }
  if (fs::exists(claims)) {
    for (const auto& rec : read_records(claims.string())) {
      if (!rec.contains("valid")) continue;
      const std::string key = rec.at("method").get<std::string>() + "#" +
                              rec.at("answer_id").get<std::string>() + "#" +
                              std::to_string(rec.at("sentence_index").get<int>()) + "#" +
                              std::to_string(rec.at("claim_ordinal").get<int>());
      maps.claim_valid[key] = rec.at("valid").get<bool>();
    }
  }
  return maps;
}

std::map<std::string, bool> load_gold(const std::string& path) {
  std::map<std::string, bool> gold;
  if (path.empty()) return gold;
  for (const auto& rec : read_records(path)) {
    gold[sentence_key(rec.at("answer_id").get<std::string>(),
                      rec.at("sentence_index").get<int>())] = rec.at("verifiable").get<bool>();
  }
  return gold;
}

// Flattened claims from method records, deduped within each
// (method, sentence) group.
std::vector<Claim> collect_claims(const std::vector<MethodRecord>& records) {
  std::vector<Claim> claims;
  for (const auto& record : records) {
    for (auto claim : record.verdict.claims) {
      claim.method_id = record.method;
      claims.push_back(std::move(claim));
    }
  }
  return dedupe(claims);
}

json sample_to_json(const SampleRecord& rec) {
  json out{{"method", rec.method_id},
           {"answer_id", rec.answer_id},
           {"sentence_index", rec.sentence_index}};
  if (rec.claim_ordinal >= 0) out["claim_ordinal"] = rec.claim_ordinal;
  out["included"] = rec.included;
  if (!rec.included) out["exclusion_reason"] = rec.exclusion_reason;
  return out;
}

}  // namespace

std::vector<DatasetEntry> load_dataset(const std::string& path) {
  std::vector<DatasetEntry> dataset;
  std::size_t line_no = 0;
  for (const auto& rec : read_jsonl(path)) {
    ++line_no;
    DatasetEntry entry;
    try {
      entry.question_id = rec.at("question_id").get<std::string>();
      entry.question = rec.at("question").get<std::string>();
      entry.answer = rec.at("answer").get<std::string>();
    } catch (const json::exception& ex) {
      throw JsonlError(path, line_no, std::string("dataset record: ") + ex.what());
    }
    entry.segmented = split_answer(entry.answer, entry.question_id);
    dataset.push_back(std::move(entry));
  }
  return dataset;
}

std::vector<MethodRecord> load_claim_records(const std::vector<std::string>& paths,
                                             const std::string& fallback_method) {
  std::vector<MethodRecord> records;
  for (const auto& path : paths) {
    for (const auto& rec : read_records(path)) {
      MethodRecord record;
      record.method = rec.value("method", fallback_method);
      record.verdict = verdict_from_json(rec);
      for (auto& claim : record.verdict.claims) claim.method_id = record.method;
      records.push_back(std::move(record));
    }
  }
  return records;
}

int cmd_extract(const RunConfig& cfg, const std::string& dataset_path,
                const std::string& out_path, bool include_transcripts) {
  const auto dataset = load_dataset(dataset_path);
  Gateway gateway = make_gateway(cfg);
  const auto manifest = make_manifest(cfg, file_digest(dataset_path), gateway.provider_id(),
                                      "none");

  PipelineConfig pipeline_cfg = cfg.pipeline;
  pipeline_cfg.model_id = cfg.model_id;
  pipeline_cfg.keep_transcripts = pipeline_cfg.keep_transcripts || include_transcripts;

  std::vector<std::vector<SentenceVerdict>> per_answer(dataset.size());
  parallel_for(dataset.size(), cfg.workers, [&](std::size_t i) {
    const auto& entry = dataset[i];
    per_answer[i] = run_pipeline(gateway, entry.question, entry.answer, entry.question_id,
                                 pipeline_cfg, /*workers=*/1);
  });

  std::vector<json> records;
  for (const auto& verdicts : per_answer) {
    for (const auto& verdict : verdicts) {
      json rec = verdict_to_json(verdict, pipeline_cfg.keep_transcripts);
      rec["method"] = cfg.method_id;
      records.push_back(std::move(rec));
    }
  }
  write_records(out_path, manifest, std::move(records));
  return 0;
}

int cmd_validate(const RunConfig& cfg, const std::string& dataset_path,
                 const std::vector<std::string>& claims_paths, const std::string& out_dir) {
  const auto dataset = load_dataset(dataset_path);
  Gateway gateway = make_gateway(cfg);
  const auto manifest =
      make_manifest(cfg, file_digest(dataset_path), gateway.provider_id(), "none");

  // Sentence validity over every dataset sentence.
  struct SentenceJob {
    const DatasetEntry* entry;
    int index;
  };
  std::vector<SentenceJob> jobs;
  for (const auto& entry : dataset) {
    for (const auto& rec : entry.segmented.sentences) {
      jobs.push_back(SentenceJob{&entry, rec.sentence_index});
    }
  }
  std::vector<ValidityVerdict> sentence_verdicts(jobs.size());
  parallel_for(jobs.size(), cfg.workers, [&](std::size_t i) {
    const auto& job = jobs[i];
    const auto& sentence =
        job.entry->segmented.sentences[static_cast<std::size_t>(job.index)].text;
    sentence_verdicts[i] = detect_invalid_sentence(
        gateway, cfg.model_id, sentence,
        standardized_excerpt(*job.entry, job.index, cfg.eval_context_preceding, sentence),
        job.entry->question, cfg.eval_max_retries);
  });

  std::vector<json> sentence_records;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& verdict = sentence_verdicts[i];
    json rec{{"answer_id", jobs[i].entry->question_id}, {"sentence_index", jobs[i].index}};
    if (verdict.known()) {
      rec["valid"] = verdict.valid;
      rec["reason_class"] = verdict.reason_class;
    } else {
      rec["error"] = verdict.error;
    }
    sentence_records.push_back(std::move(rec));
  }
  write_records((fs::path(out_dir) / "sentence_validity.jsonl").string(), manifest,
                std::move(sentence_records));

  // Claim validity over the (deduped) claim set, when claim files are given.
  std::vector<json> claim_records;
  if (!claims_paths.empty()) {
    const auto claims = collect_claims(load_claim_records(claims_paths, cfg.method_id));
    std::vector<ValidityVerdict> claim_verdicts(claims.size());
    parallel_for(claims.size(), cfg.workers, [&](std::size_t i) {
      claim_verdicts[i] =
          detect_invalid_claim(gateway, cfg.model_id, claims[i].raw, cfg.eval_max_retries);
    });
    for (std::size_t i = 0; i < claims.size(); ++i) {
      const auto& claim = claims[i];
      const auto& verdict = claim_verdicts[i];
      json rec{{"method", claim.method_id},
               {"answer_id", claim.answer_id},
               {"sentence_index", claim.sentence_index},
               {"claim_ordinal", claim.claim_ordinal},
               {"claim", claim.raw}};
      if (verdict.known()) {
        rec["valid"] = verdict.valid;
        rec["reason_class"] = verdict.reason_class;
      } else {
        rec["error"] = verdict.error;
      }
      claim_records.push_back(std::move(rec));
    }
  }
  write_records((fs::path(out_dir) / "claim_validity.jsonl").string(), manifest,
                std::move(claim_records));
  return 0;
}

int cmd_evaluate_entailment(const RunConfig& cfg, const std::string& dataset_path,
                            const std::vector<std::string>& claims_paths,
                            const std::string& validity_dir, const std::string& out_dir) {
  const auto dataset = load_dataset(dataset_path);
  const auto claims = collect_claims(load_claim_records(claims_paths, cfg.method_id));
  const auto validity = load_validity(validity_dir);

  SampleInputs inputs;
  inputs.sentence_valid = validity.sentence_valid;
  inputs.claim_valid = validity.claim_valid;
  const auto sample = build_eval_sample(claims, EvalKind::entailment, inputs);

  Gateway gateway = make_gateway(cfg);
  const auto manifest =
      make_manifest(cfg, file_digest(dataset_path), gateway.provider_id(), "none");

  std::vector<std::size_t> included;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (sample[i].included) included.push_back(i);
  }
  std::sort(included.begin(), included.end(), [&](std::size_t a, std::size_t b) {
    const auto& ca = claims[a];
    const auto& cb = claims[b];
    return std::tie(ca.method_id, ca.answer_id, ca.sentence_index, ca.claim_ordinal) <
           std::tie(cb.method_id, cb.answer_id, cb.sentence_index, cb.claim_ordinal);
  });

  std::vector<EntailmentVerdict> verdicts(included.size());
  parallel_for(included.size(), cfg.workers, [&](std::size_t i) {
    const auto& claim = claims[included[i]];
    const auto& entry = entry_for(dataset, claim.answer_id);
    const auto ctx_cfg = cfg.entailment_context_for(claim.method_id);
    const std::string sentence =
        entry.segmented.sentences[static_cast<std::size_t>(claim.sentence_index)].text;
    verdicts[i] = classify_entailment(gateway, cfg.model_id, claim.raw, sentence,
                                      entailment_excerpt(entry, claim.sentence_index, ctx_cfg,
                                                         sentence),
                                      entry.question, cfg.eval_max_retries);
  });

  std::vector<json> verdict_records;
  std::vector<std::pair<std::string, bool>> by_method;
  for (std::size_t i = 0; i < included.size(); ++i) {
    const auto& claim = claims[included[i]];
    json rec{{"method", claim.method_id},
             {"answer_id", claim.answer_id},
             {"sentence_index", claim.sentence_index},
             {"claim_ordinal", claim.claim_ordinal}};
    if (verdicts[i].known()) {
      rec["verdict"] = verdicts[i].entailed ? "Entailed" : "NotEntailed";
      by_method.emplace_back(claim.method_id, verdicts[i].entailed);
    } else {
      rec["verdict"] = "Unknown";
      rec["diagnostic"] = verdicts[i].error;
    }
    verdict_records.push_back(std::move(rec));
  }
  write_records((fs::path(out_dir) / "entailment_verdicts.jsonl").string(), manifest,
                std::move(verdict_records));

  std::vector<json> sample_records;
  for (const auto& rec : sample) sample_records.push_back(sample_to_json(rec));
  write_records((fs::path(out_dir) / "entailment_sample.jsonl").string(), manifest,
                std::move(sample_records));

  json scores{{"manifest", manifest.to_json()}, {"methods", json::object()}};
  for (const auto& [method, entry] : entailment_report(by_method)) {
    scores["methods"][method] = json{{"n_claims", entry.n_claims},
                                     {"n_entailed", entry.n_entailed},
                                     {"pct_entailed", entry.pct_entailed}};
  }
  write_text_atomic((fs::path(out_dir) / "entailment_scores.json").string(),
                    scores.dump(2) + "\n");
  return 0;
}

int cmd_evaluate_coverage(const RunConfig& cfg, const std::string& dataset_path,
                          const std::vector<std::string>& claims_paths,
                          const std::string& gold_path, const std::string& pipeline_verdicts,
                          const std::string& validity_dir, const std::string& out_dir) {
  const auto dataset = load_dataset(dataset_path);
  const auto records = load_claim_records(claims_paths, cfg.method_id);
  const auto gold = load_gold(gold_path);
  const auto validity = load_validity(validity_dir);

  SampleInputs inputs;
  inputs.sentence_valid = validity.sentence_valid;
  inputs.claim_valid = validity.claim_valid;
  for (const auto& [key, verifiable] : gold) inputs.sentence_gold_verifiable[key] = verifiable;
  if (!pipeline_verdicts.empty()) {
    for (const auto& rec : load_claim_records({pipeline_verdicts}, cfg.method_id)) {
      if (rec.verdict.label == SentenceLabel::cannot_be_disambiguated) {
        inputs.sentence_cannot_disambiguate[sentence_key(rec.verdict.answer_id,
                                                         rec.verdict.sentence_index)] = true;
      }
    }
  }

  // The sentence sample covers every gold-labeled sentence.
  std::vector<std::pair<std::string, int>> sentence_list;
  for (const auto& entry : dataset) {
    for (const auto& rec : entry.segmented.sentences) {
      if (gold.count(sentence_key(entry.question_id, rec.sentence_index))) {
        sentence_list.emplace_back(entry.question_id, rec.sentence_index);
      }
    }
  }
  auto sentence_sample = build_sentence_sample(sentence_list, inputs);

  Gateway gateway = make_gateway(cfg);
  const auto manifest =
      make_manifest(cfg, file_digest(dataset_path), gateway.provider_id(), "none");

  // One element set per sentence, shared across methods.
  std::vector<std::size_t> kept_indexes;
  for (std::size_t i = 0; i < sentence_sample.size(); ++i) {
    if (sentence_sample[i].included) kept_indexes.push_back(i);
  }
  std::vector<ElementExtraction> extractions(kept_indexes.size());
  parallel_for(kept_indexes.size(), cfg.workers, [&](std::size_t i) {
    const auto& rec = sentence_sample[kept_indexes[i]];
    const auto& entry = entry_for(dataset, rec.answer_id);
    const std::string sentence =
        entry.segmented.sentences[static_cast<std::size_t>(rec.sentence_index)].text;
    extractions[i] = extract_elements(
        gateway, cfg.model_id, sentence,
        standardized_excerpt(entry, rec.sentence_index, cfg.eval_context_preceding, sentence),
        entry.question, cfg.eval_max_retries);
  });

  std::vector<json> element_records;
  std::vector<bool> element_ok(kept_indexes.size(), true);
  for (std::size_t i = 0; i < kept_indexes.size(); ++i) {
    const auto& rec = sentence_sample[kept_indexes[i]];
    if (!extractions[i].ok()) {
      // Excluded from element-level scoring only; the sentence-level sample
      // does not depend on element extraction.
      element_ok[i] = false;
      element_records.push_back(json{{"answer_id", rec.answer_id},
                                     {"sentence_index", rec.sentence_index},
                                     {"error", extractions[i].error}});
      continue;
    }
    json elements = json::array();
    for (const auto& element : extractions[i].elements) {
      json e{{"text", element.text}, {"verifiable", element.verifiable}};
      if (!element.mixed_note.empty()) e["mixed_note"] = element.mixed_note;
      elements.push_back(std::move(e));
    }
    element_records.push_back(json{{"answer_id", rec.answer_id},
                                   {"sentence_index", rec.sentence_index},
                                   {"elements", std::move(elements)}});
  }
  write_records((fs::path(out_dir) / "elements.jsonl").string(), manifest,
                std::move(element_records));

  // Methods and their per-sentence claim sets (valid claims only).
  std::set<std::string> methods;
  std::map<std::string, std::map<std::string, std::vector<std::string>>> claims_by_method;
  std::map<std::string, std::set<std::string>> extracted_by_method;
  for (const auto& record : records) {
    methods.insert(record.method);
    const std::string skey =
        sentence_key(record.verdict.answer_id, record.verdict.sentence_index);
    for (const auto& claim : record.verdict.claims) {
      extracted_by_method[record.method].insert(skey);
      auto it = inputs.claim_valid.find(claim_key(claim));
      if (it != inputs.claim_valid.end() && !it->second) continue;
      claims_by_method[record.method][skey].push_back(claim.raw);
    }
  }

  // Sentence-level scores over the sentence sample.
  json scores{{"manifest", manifest.to_json()},
              {"methods", json::object()},
              {"consistency_kept", 0},
              {"consistency_total", 0}};
  for (const auto& method : methods) {
    std::vector<bool> predicted, gold_labels;
    for (const auto& rec : sentence_sample) {
      if (!rec.included) continue;
      const std::string skey = sentence_key(rec.answer_id, rec.sentence_index);
      predicted.push_back(extracted_by_method[method].count(skey) > 0);
      gold_labels.push_back(gold.at(skey));
    }
    const auto card = sentence_level_scores(predicted, gold_labels);
    CellCounts cells;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      if (gold_labels[i]) {
        (predicted[i] ? cells.tp : cells.fn) += 1;
      } else {
        (predicted[i] ? cells.fp : cells.tn) += 1;
      }
    }
    scores["methods"][method]["sentence"] =
        json{{"cells",
              json{{"tp", cells.tp}, {"tn", cells.tn}, {"fp", cells.fp}, {"fn", cells.fn}}},
             {"scores",
              json{{"accuracy", card.accuracy},
                   {"macro_f1", card.macro_f1},
                   {"precision_v", card.precision_v},
                   {"recall_v", card.recall_v},
                   {"precision_uv", card.precision_uv},
                   {"recall_uv", card.recall_uv}}}};
  }

  // Element-level scoring over consistency-filtered sentences.
  std::vector<std::vector<Element>> element_sets;
  std::vector<bool> gold_flags;
  std::vector<const SampleRecord*> element_sentences;
  for (std::size_t i = 0; i < kept_indexes.size(); ++i) {
    if (!element_ok[i]) continue;
    const auto& rec = sentence_sample[kept_indexes[i]];
    element_sets.push_back(extractions[i].elements);
    gold_flags.push_back(gold.at(sentence_key(rec.answer_id, rec.sentence_index)));
    element_sentences.push_back(&rec);
  }
  const auto consistent = consistency_filter(element_sets, gold_flags);
  scores["consistency_kept"] = consistent.size();
  scores["consistency_total"] = element_sets.size();

  struct CoverageJob {
    std::string method;
    const SampleRecord* sentence;
    const std::vector<Element>* elements;
    std::vector<std::string> claims;
  };
  std::vector<CoverageJob> jobs;
  for (const auto& method : methods) {
    for (const std::size_t idx : consistent) {
      CoverageJob job;
      job.method = method;
      job.sentence = element_sentences[idx];
      job.elements = &element_sets[idx];
      const std::string skey =
          sentence_key(job.sentence->answer_id, job.sentence->sentence_index);
      auto mit = claims_by_method.find(method);
      if (mit != claims_by_method.end()) {
        auto sit = mit->second.find(skey);
        if (sit != mit->second.end()) job.claims = sit->second;
      }
      jobs.push_back(std::move(job));
    }
  }
  std::vector<CoverageJudgement> judgements(jobs.size());
  parallel_for(jobs.size(), cfg.workers, [&](std::size_t i) {
    const auto& job = jobs[i];
    const auto& entry = entry_for(dataset, job.sentence->answer_id);
    const std::string sentence =
        entry.segmented.sentences[static_cast<std::size_t>(job.sentence->sentence_index)].text;
    judgements[i] = label_coverage(
        gateway, cfg.model_id, *job.elements, job.claims,
        standardized_excerpt(entry, job.sentence->sentence_index, cfg.eval_context_preceding,
                             sentence),
        entry.question, cfg.eval_max_retries);
  });

  std::vector<json> label_records, cell_records;
  std::map<std::string, CellCounts> cells_by_method;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& job = jobs[i];
    const auto& judgement = judgements[i];
    if (!judgement.ok()) {
      label_records.push_back(json{{"method", job.method},
                                   {"answer_id", job.sentence->answer_id},
                                   {"sentence_index", job.sentence->sentence_index},
                                   {"error", judgement.error}});
      continue;
    }
    for (std::size_t e = 0; e < judgement.labels.size(); ++e) {
      if (!judgement.labels[e].has_value()) continue;
      const auto label = *judgement.labels[e];
      const auto cell = confusion_cell((*job.elements)[e].verifiable, label);
      cells_by_method[job.method].tp += cell == ConfusionCell::tp;
      cells_by_method[job.method].tn += cell == ConfusionCell::tn;
      cells_by_method[job.method].fp += cell == ConfusionCell::fp;
      cells_by_method[job.method].fn += cell == ConfusionCell::fn;
      label_records.push_back(json{{"method", job.method},
                                   {"answer_id", job.sentence->answer_id},
                                   {"sentence_index", job.sentence->sentence_index},
                                   {"element_ordinal", e},
                                   {"label", coverage_label_name(label)}});
      cell_records.push_back(json{{"method", job.method},
                                  {"answer_id", job.sentence->answer_id},
                                  {"sentence_index", job.sentence->sentence_index},
                                  {"element_ordinal", e},
                                  {"cell", confusion_cell_name(cell)}});
    }
  }
  write_records((fs::path(out_dir) / "coverage_labels.jsonl").string(), manifest,
                std::move(label_records));
  write_records((fs::path(out_dir) / "coverage_cells.jsonl").string(), manifest,
                std::move(cell_records));

  for (const auto& [method, cells] : cells_by_method) {
    const auto card = element_level_scores(cells);
    scores["methods"][method]["element"] =
        json{{"cells",
              json{{"tp", cells.tp}, {"tn", cells.tn}, {"fp", cells.fp}, {"fn", cells.fn}}},
             {"scores",
              json{{"accuracy", card.accuracy},
                   {"macro_f1", card.macro_f1},
                   {"precision_v", card.precision_v},
                   {"recall_v", card.recall_v},
                   {"precision_uv", card.precision_uv},
                   {"recall_uv", card.recall_uv}}}};
  }

  std::vector<json> sample_records;
  for (const auto& rec : sentence_sample) sample_records.push_back(sample_to_json(rec));
  write_records((fs::path(out_dir) / "coverage_sample.jsonl").string(), manifest,
                std::move(sample_records));
  write_text_atomic((fs::path(out_dir) / "coverage_scores.json").string(),
                    scores.dump(2) + "\n");
  return 0;
}

int cmd_evaluate_decontext(const RunConfig& cfg, const std::string& dataset_path,
                           const std::vector<std::string>& claims_paths,
                           const std::string& entailment_dir, const std::string& gold_path,
                           const std::string& validity_dir, const std::string& out_dir) {
  const auto dataset = load_dataset(dataset_path);
  const auto claims = collect_claims(load_claim_records(claims_paths, cfg.method_id));
  const auto validity = load_validity(validity_dir);
  const auto gold = load_gold(gold_path);

  SampleInputs inputs;
  inputs.sentence_valid = validity.sentence_valid;
  inputs.claim_valid = validity.claim_valid;
  for (const auto& [key, verifiable] : gold) inputs.sentence_gold_verifiable[key] = verifiable;
  if (!entailment_dir.empty()) {
    const fs::path verdicts = fs::path(entailment_dir) / "entailment_verdicts.jsonl";
    if (fs::exists(verdicts)) {
      for (const auto& rec : read_records(verdicts.string())) {
        const std::string key = rec.at("method").get<std::string>() + "#" +
                                rec.at("answer_id").get<std::string>() + "#" +
                                std::to_string(rec.at("sentence_index").get<int>()) + "#" +
                                std::to_string(rec.at("claim_ordinal").get<int>());
        inputs.claim_entailed[key] = rec.value("verdict", "") == "Entailed";
      }
    }
  }
  auto sample = build_eval_sample(claims, EvalKind::decontext, inputs);

  Gateway gateway = make_gateway(cfg);
  CachedSearch search = make_search(cfg);
  const auto manifest = make_manifest(cfg, file_digest(dataset_path), gateway.provider_id(),
                                      search.provider_id());
  const std::string config_name =
      cfg.retrieval.strategy == RetrievalStrategy::iterative ? "iterative" : "single";

  // Sibling claim lists per (method, sentence), for the c_max prompt.
  std::map<std::string, std::vector<std::string>> siblings;
  for (const auto& claim : claims) {
    siblings[claim.method_id + "#" +
             sentence_key(claim.answer_id, claim.sentence_index)].push_back(claim.raw);
  }

  // Identical (sentence, claim text) pairs across methods share one result.
  struct SharedResult {
    SupportChecks checks;
    std::string cmax_text;
    int result_type = 0;
    std::string error;
  };
  std::vector<std::size_t> included;
  std::vector<std::string> shared_order;
  std::map<std::string, const Claim*> shared_claims;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (!sample[i].included) continue;
    included.push_back(i);
    const auto& claim = claims[i];
    const std::string shared_key =
        sentence_key(claim.answer_id, claim.sentence_index) + "\x1f" + trim(claim.raw);
    if (shared_claims.emplace(shared_key, &claim).second) shared_order.push_back(shared_key);
  }

  std::map<std::string, SharedResult> shared_results;
  for (const auto& key : shared_order) shared_results[key] = SharedResult{};
  parallel_for(shared_order.size(), cfg.workers, [&](std::size_t i) {
    const std::string& key = shared_order[i];
    const Claim& claim = *shared_claims.at(key);
    SharedResult result;

    const auto& entry = entry_for(dataset, claim.answer_id);
    const std::string sentence =
        entry.segmented.sentences[static_cast<std::size_t>(claim.sentence_index)].text;
    const std::string excerpt = standardized_excerpt(
        entry, claim.sentence_index, cfg.eval_context_preceding, sentence);
    const auto& sibling_list =
        siblings.at(claim.method_id + "#" + sentence_key(claim.answer_id, claim.sentence_index));

    const auto cmax = generate_cmax(gateway, cfg.model_id, claim.raw, sentence, excerpt,
                                    entry.question, sibling_list, cfg.eval_max_retries);
    if (!cmax.ok()) {
      result.error = "c_max generation failed: " + cmax.error;
      shared_results[key] = std::move(result);
      return;
    }
    if (cmax.already_maximal) {
      result.checks.already_maximal = true;
      result.result_type = 1;
      shared_results[key] = std::move(result);
      return;
    }
    result.cmax_text = cmax.text;

    const auto evidence_c =
        gather_evidence(gateway, search, cfg.model_id, claim.raw, cfg.retrieval,
                        cfg.eval_max_retries);
    const auto evidence_max =
        gather_evidence(gateway, search, cfg.model_id, cmax.text, cfg.retrieval,
                        cfg.eval_max_retries);

    const auto ec_c =
        verify_support(gateway, cfg.model_id, claim.raw, evidence_c, cfg.eval_max_retries);
    const auto emax_cmax =
        verify_support(gateway, cfg.model_id, cmax.text, evidence_max, cfg.eval_max_retries);
    if (!ec_c.ok() || !emax_cmax.ok()) {
      result.error = "support verification failed: " +
                     (ec_c.ok() ? emax_cmax.error : ec_c.error);
      shared_results[key] = std::move(result);
      return;
    }
    result.checks.ec_supports_c = ec_c.supported;
    result.checks.emax_supports_cmax = emax_cmax.supported;
    if (ec_c.supported) {
      const auto ec_cmax =
          verify_support(gateway, cfg.model_id, cmax.text, evidence_c, cfg.eval_max_retries);
      if (!ec_cmax.ok()) {
        result.error = "support verification failed: " + ec_cmax.error;
        shared_results[key] = std::move(result);
        return;
      }
      result.checks.ec_supports_cmax = ec_cmax.supported;
    }
    result.result_type = classify_result(result.checks);
    shared_results[key] = std::move(result);
  });

  std::vector<json> record_jsons;
  std::vector<DecontextRecord> classified;
  for (const std::size_t i : included) {
    const auto& claim = claims[i];
    const std::string shared_key =
        sentence_key(claim.answer_id, claim.sentence_index) + "\x1f" + trim(claim.raw);
    const auto& shared = shared_results.at(shared_key);

    json rec{{"method", claim.method_id},
             {"answer_id", claim.answer_id},
             {"sentence_index", claim.sentence_index},
             {"claim_ordinal", claim.claim_ordinal},
             {"claim", claim.raw},
             {"retrieval_config", config_name}};
    if (!shared.error.empty()) {
      rec["error"] = shared.error;
      record_jsons.push_back(std::move(rec));
      continue;
    }
    rec["already_maximal"] = shared.checks.already_maximal;
    if (!shared.checks.already_maximal) {
      rec["cmax"] = shared.cmax_text;
      rec["ec_supports_c"] = *shared.checks.ec_supports_c;
      rec["emax_supports_cmax"] = *shared.checks.emax_supports_cmax;
      if (shared.checks.ec_supports_cmax.has_value()) {
        rec["ec_supports_cmax"] = *shared.checks.ec_supports_cmax;
      }
    }
    rec["result_type"] = shared.result_type;
    rec["desirable"] = is_desirable(shared.result_type);
    record_jsons.push_back(std::move(rec));

    DecontextRecord record;
    record.method_id = claim.method_id;
    record.answer_id = claim.answer_id;
    record.sentence_index = claim.sentence_index;
    record.claim_ordinal = claim.claim_ordinal;
    record.claim_text = claim.raw;
    record.retrieval_config = config_name;
    record.checks = shared.checks;
    record.result_type = shared.result_type;
    record.cmax_text = shared.cmax_text;
    classified.push_back(std::move(record));
  }
  write_records((fs::path(out_dir) / "decontext_records.jsonl").string(), manifest,
                std::move(record_jsons));

  std::vector<json> sample_records;
  for (const auto& rec : sample) sample_records.push_back(sample_to_json(rec));
  write_records((fs::path(out_dir) / "decontext_sample.jsonl").string(), manifest,
                std::move(sample_records));

  // Distribution, with raw counts retained for significance testing.
  std::map<std::string, std::map<std::string, std::array<long, 8>>> counts;
  for (const auto& record : classified) {
    ++counts[record.method_id][record.result_type == 1 ? "type1" : record.retrieval_config]
            [static_cast<std::size_t>(record.result_type)];
  }
  const auto distribution = decontext_report(classified);
  json scores{{"manifest", manifest.to_json()}, {"methods", json::object()}};
  for (const auto& [method, configs] : distribution) {
    for (const auto& [config, dist] : configs) {
      json type_pct = json::object();
      json type_counts = json::object();
      std::array<long, 8> tally{};
      auto mit = counts.find(method);
      if (mit != counts.end()) {
        for (const auto& [cname, arr] : mit->second) {
          if (cname != "type1" && cname != config) continue;
          for (int t = 1; t <= 7; ++t) tally[static_cast<std::size_t>(t)] += arr[static_cast<std::size_t>(t)];
        }
      }
      long desirable_count = 0;
      for (int t = 1; t <= 7; ++t) {
        type_pct[std::to_string(t)] = dist.type_pct[t];
        type_counts[std::to_string(t)] = tally[static_cast<std::size_t>(t)];
        if (is_desirable(t)) desirable_count += tally[static_cast<std::size_t>(t)];
      }
      scores["methods"][method][config] = json{{"n_records", dist.n_records},
                                               {"counts", std::move(type_counts)},
                                               {"type_pct", std::move(type_pct)},
                                               {"desirable_count", desirable_count},
                                               {"desirable_pct", dist.desirable_pct}};
    }
  }
  write_text_atomic((fs::path(out_dir) / "decontext_scores.json").string(),
                    scores.dump(2) + "\n");
  return 0;
}

int cmd_report(const RunConfig& cfg, const std::string& entailment_scores,
               const std::string& coverage_scores,
               const std::vector<std::string>& decontext_scores, double alpha,
               const std::string& out_path) {
  RunManifest manifest = make_manifest(cfg, "", "report", "report");
  json report{{"manifest", manifest.to_json()}};

  struct Proportion {
    long hits = 0;
    long total = 0;
  };
  // metric family -> method -> proportion, for pairwise z-tests
  std::map<std::string, std::map<std::string, Proportion>> families;

  if (!entailment_scores.empty()) {
    const auto scores = json::parse(read_text(entailment_scores));
    json table = json::object();
    for (const auto& [method, entry] : scores.at("methods").items()) {
      table[method] = json{{"claims", entry.at("n_claims")},
                           {"pct_entailed", entry.at("pct_entailed")}};
      families["entailment"][method] =
          Proportion{entry.at("n_entailed").get<long>(), entry.at("n_claims").get<long>()};
    }
    report["entailment"] = std::move(table);
  }

  if (!coverage_scores.empty()) {
    const auto scores = json::parse(read_text(coverage_scores));
    json table = json::object();
    for (const auto& [method, entry] : scores.at("methods").items()) {
      json row = json::object();
      for (const char* level : {"sentence", "element"}) {
        if (!entry.contains(level)) continue;
        const auto& node = entry.at(level);
        const auto& cells = node.at("cells");
        const long correct = cells.at("tp").get<long>() + cells.at("tn").get<long>();
        const long total = correct + cells.at("fp").get<long>() + cells.at("fn").get<long>();
        json scores_pct = json::object();
        for (const auto& [name, value] : node.at("scores").items()) {
          scores_pct[name] = std::round(value.get<double>() * 1000.0) / 10.0;
        }
        row[level] = std::move(scores_pct);
        families[std::string(level) + "_accuracy"][method] = Proportion{correct, total};
      }
      table[method] = std::move(row);
    }
    report["coverage"] = std::move(table);
  }

  if (!decontext_scores.empty()) {
    json table = json::object();
    for (const auto& path : decontext_scores) {
      const auto scores = json::parse(read_text(path));
      for (const auto& [method, configs] : scores.at("methods").items()) {
        for (const auto& [config, entry] : configs.items()) {
          table[method][config] = entry;
          families["decontext_desirable_" + config][method] =
              Proportion{entry.at("desirable_count").get<long>(),
                         entry.at("n_records").get<long>()};
        }
      }
    }
    report["decontext"] = std::move(table);
  }

  // Pairwise two-proportion z-tests with Holm-Bonferroni correction applied
  // within each metric family.
  json stat_rows = json::array();
  for (const auto& [family, methods] : families) {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<double> p_values;
    std::vector<ZTestResult> tests;
    for (auto a = methods.begin(); a != methods.end(); ++a) {
      for (auto b = std::next(a); b != methods.end(); ++b) {
        ProportionPair pp{a->second.hits, a->second.total, b->second.hits, b->second.total};
        if (pp.n1 < 1 || pp.n2 < 1) continue;
        const auto test = two_proportion_z_test(pp);
        pairs.emplace_back(a->first, b->first);
        p_values.push_back(test.p_value);
        tests.push_back(test);
      }
    }
    if (p_values.empty()) continue;
    const auto holm = holm_bonferroni(p_values, alpha);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      stat_rows.push_back(json{{"family", family},
                               {"method_a", pairs[i].first},
                               {"method_b", pairs[i].second},
                               {"z", tests[i].z},
                               {"p", tests[i].p_value},
                               {"p_adjusted", holm.adjusted[i]},
                               {"reject", static_cast<bool>(holm.reject[i])},
                               {"degenerate", tests[i].degenerate}});
    }
  }
  report["stats"] = std::move(stat_rows);

  write_text_atomic(out_path, report.dump(2) + "\n");
  return 0;
}

int cmd_agreement(const std::string& annotations_path, const std::string& out_path,
                  bool high_confidence_only) {
  const auto records = read_records(annotations_path);

  // item -> annotator -> (label string, high confidence)
  std::map<std::string, std::map<std::string, std::pair<std::string, bool>>> table;
  for (const auto& rec : records) {
    const std::string item = rec.at("item").get<std::string>();
    const std::string annotator = rec.at("annotator").get<std::string>();
    std::string label;
    bool high_conf = true;
    if (rec.contains("tags")) {
      std::vector<AnnotatorTag> tags;
      for (const auto& tag : rec.at("tags")) {
        tags.push_back(annotator_tag_from_name(tag.get<std::string>()));
      }
      const auto aggregated = aggregate_annotator_tags(tags);
      label = aggregated.contains ? "contains" : "not_contains";
      high_conf = aggregated.high_confidence;
    } else {
      label = rec.at("label").get<std::string>();
      high_conf = rec.value("high_confidence", true);
    }
    table[item][annotator] = {label, high_conf};
  }

  std::set<std::string> annotators;
  std::map<std::string, int> label_codes;
  for (const auto& [item, entries] : table) {
    for (const auto& [annotator, value] : entries) {
      annotators.insert(annotator);
      label_codes.emplace(value.first, static_cast<int>(label_codes.size()));
    }
  }

  auto build_matrix = [&](bool only_high_conf) {
    std::vector<std::vector<std::optional<int>>> matrix;
    for (const auto& [item, entries] : table) {
      if (only_high_conf) {
        const bool all_high =
            std::all_of(entries.begin(), entries.end(),
                        [](const auto& kv) { return kv.second.second; });
        if (!all_high || entries.size() < 2) continue;
      }
      std::vector<std::optional<int>> row;
      for (const auto& annotator : annotators) {
        auto it = entries.find(annotator);
        if (it == entries.end()) {
          row.push_back(std::nullopt);
        } else {
          row.push_back(label_codes.at(it->second.first));
        }
      }
      matrix.push_back(std::move(row));
    }
    return matrix;
  };

  const auto report = krippendorff_alpha(build_matrix(high_confidence_only));
  json out{{"alpha", report.alpha},
           {"n_items", report.n_items},
           {"n_annotators", report.n_annotators},
           {"high_confidence_only", high_confidence_only}};
  write_text_atomic(out_path, out.dump(2) + "\n");
  return 0;
}

}  // namespace claimex
