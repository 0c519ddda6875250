#include "claimex/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct GlobalOptions {
  std::string config_path;
  std::string cache_dir;
  std::string provider;
  int workers = 0;
};

claimex::RunConfig resolve_config(const GlobalOptions& options) {
  claimex::RunConfig cfg = claimex::load_config(options.config_path);
  if (!options.cache_dir.empty()) cfg.cache_dir = options.cache_dir;
  if (!options.provider.empty()) cfg.provider = options.provider;
  if (options.workers > 0) cfg.workers = options.workers;
  return cfg;
}

void add_global_options(CLI::App* app, GlobalOptions& options) {
  app->add_option("--config", options.config_path, "Run configuration (JSON)");
  app->add_option("--cache", options.cache_dir, "Completion/search cache directory");
  app->add_option("--provider", options.provider, "Provider override")
      ->check(CLI::IsMember({"live", "mock", "cache-only"}));
  app->add_option("--workers", options.workers, "Worker threads");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Claim extraction pipeline and evaluation toolkit"};
  app.require_subcommand(1);

  GlobalOptions options;

  // extract
  std::string dataset, out, out_dir;
  bool transcripts = false;
  auto* extract = app.add_subcommand("extract", "Run the extraction pipeline over a dataset");
  add_global_options(extract, options);
  extract->add_option("--dataset", dataset, "Dataset JSONL of {question_id, question, answer}")
      ->required();
  extract->add_option("--out", out, "Output verdicts JSONL")->required();
  extract->add_flag("--transcripts", transcripts, "Keep per-stage transcripts");

  // validate
  std::vector<std::string> claims_paths;
  auto* validate = app.add_subcommand("validate", "Detect invalid sentences and claims");
  add_global_options(validate, options);
  validate->add_option("--dataset", dataset, "Dataset JSONL")->required();
  validate->add_option("--claims", claims_paths, "Claim files (pipeline output schema)");
  validate->add_option("--out-dir", out_dir, "Output directory")->required();

  // evaluate
  std::string validity_dir, gold_path, pipeline_verdicts, entailment_dir;
  auto* evaluate = app.add_subcommand("evaluate", "Run an evaluation");
  evaluate->require_subcommand(1);

  auto* entailment = evaluate->add_subcommand("entailment", "Claim-vs-source entailment");
  add_global_options(entailment, options);
  entailment->add_option("--dataset", dataset, "Dataset JSONL")->required();
  entailment->add_option("--claims", claims_paths, "Claim files")->required();
  entailment->add_option("--validity", validity_dir, "Directory with validate outputs");
  entailment->add_option("--out-dir", out_dir, "Output directory")->required();

  auto* coverage = evaluate->add_subcommand("coverage", "Sentence- and element-level coverage");
  add_global_options(coverage, options);
  coverage->add_option("--dataset", dataset, "Dataset JSONL")->required();
  coverage->add_option("--claims", claims_paths, "Claim files")->required();
  coverage->add_option("--gold", gold_path, "Gold annotations JSONL")->required();
  coverage->add_option("--pipeline-verdicts", pipeline_verdicts,
                       "Pipeline verdicts used for disambiguation-failure exclusions");
  coverage->add_option("--validity", validity_dir, "Directory with validate outputs");
  coverage->add_option("--out-dir", out_dir, "Output directory")->required();

  auto* decontext = evaluate->add_subcommand("decontext", "Decontextualization outcomes");
  add_global_options(decontext, options);
  decontext->add_option("--dataset", dataset, "Dataset JSONL")->required();
  decontext->add_option("--claims", claims_paths, "Claim files")->required();
  decontext->add_option("--entailment", entailment_dir,
                        "Directory with entailment evaluation outputs");
  decontext->add_option("--gold", gold_path, "Gold annotations JSONL");
  decontext->add_option("--validity", validity_dir, "Directory with validate outputs");
  decontext->add_option("--out-dir", out_dir, "Output directory")->required();

  // report
  std::string entailment_scores, coverage_scores, report_out;
  std::vector<std::string> decontext_scores;
  double alpha = 0.05;
  auto* report = app.add_subcommand("report", "Assemble score tables and significance tests");
  add_global_options(report, options);
  report->add_option("--entailment-scores", entailment_scores, "entailment_scores.json");
  report->add_option("--coverage-scores", coverage_scores, "coverage_scores.json");
  report->add_option("--decontext-scores", decontext_scores, "decontext_scores.json files");
  report->add_option("--alpha", alpha, "Significance level for Holm-Bonferroni");
  report->add_option("--out", report_out, "Report JSON path")->required();

  // agreement
  std::string annotations, agreement_out;
  bool high_conf_only = false;
  auto* agreement = app.add_subcommand("agreement", "Inter-annotator agreement");
  agreement->add_option("--annotations", annotations, "Annotation JSONL")->required();
  agreement->add_option("--out", agreement_out, "Agreement report path")->required();
  agreement->add_flag("--high-confidence-only", high_conf_only,
                      "Restrict to items where every annotator was high-confidence");

  CLI11_PARSE(app, argc, argv);

  try {
    if (extract->parsed()) {
      return claimex::cmd_extract(resolve_config(options), dataset, out, transcripts);
    }
    if (validate->parsed()) {
      return claimex::cmd_validate(resolve_config(options), dataset, claims_paths, out_dir);
    }
    if (entailment->parsed()) {
      return claimex::cmd_evaluate_entailment(resolve_config(options), dataset, claims_paths,
                                              validity_dir, out_dir);
    }
    if (coverage->parsed()) {
      return claimex::cmd_evaluate_coverage(resolve_config(options), dataset, claims_paths,
                                            gold_path, pipeline_verdicts, validity_dir, out_dir);
    }
    if (decontext->parsed()) {
      return claimex::cmd_evaluate_decontext(resolve_config(options), dataset, claims_paths,
                                             entailment_dir, gold_path, validity_dir, out_dir);
    }
    if (report->parsed()) {
      return claimex::cmd_report(resolve_config(options), entailment_scores, coverage_scores,
                                 decontext_scores, alpha, report_out);
    }
    if (agreement->parsed()) {
      return claimex::cmd_agreement(annotations, agreement_out, high_conf_only);
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
