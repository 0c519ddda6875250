#pragma once

#include "claimex/config.hpp"
#include "claimex/manifest.hpp"
#include "claimex/pipeline.hpp"

#include <string>
#include <vector>

namespace claimex {

struct DatasetEntry {
  std::string question_id;
  std::string question;
  std::string answer;
  SegmentedAnswer segmented;
};

// JSON-Lines of {question_id, question, answer}; schema violations are
// reported with line numbers.
std::vector<DatasetEntry> load_dataset(const std::string& path);

struct MethodRecord {
  std::string method;
  SentenceVerdict verdict;
};

// Claim files use the pipeline's output schema (third-party methods supply
// the same shape) plus a per-record "method" field.
std::vector<MethodRecord> load_claim_records(const std::vector<std::string>& paths,
                                             const std::string& fallback_method);

int cmd_extract(const RunConfig& cfg, const std::string& dataset_path,
                const std::string& out_path, bool include_transcripts);

int cmd_validate(const RunConfig& cfg, const std::string& dataset_path,
                 const std::vector<std::string>& claims_paths, const std::string& out_dir);

int cmd_evaluate_entailment(const RunConfig& cfg, const std::string& dataset_path,
                            const std::vector<std::string>& claims_paths,
                            const std::string& validity_dir, const std::string& out_dir);

int cmd_evaluate_coverage(const RunConfig& cfg, const std::string& dataset_path,
                          const std::vector<std::string>& claims_paths,
                          const std::string& gold_path, const std::string& pipeline_verdicts,
                          const std::string& validity_dir, const std::string& out_dir);

int cmd_evaluate_decontext(const RunConfig& cfg, const std::string& dataset_path,
                           const std::vector<std::string>& claims_paths,
                           const std::string& entailment_dir, const std::string& gold_path,
                           const std::string& validity_dir, const std::string& out_dir);

int cmd_report(const RunConfig& cfg, const std::string& entailment_scores,
               const std::string& coverage_scores,
               const std::vector<std::string>& decontext_scores, double alpha,
               const std::string& out_path);

int cmd_agreement(const std::string& annotations_path, const std::string& out_path,
                  bool high_confidence_only);

}  // namespace claimex
