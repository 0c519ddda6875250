#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "claimex/config.hpp"
#include "claimex/coverage.hpp"
#include "claimex/decontext.hpp"
#include "claimex/entailment.hpp"
#include "claimex/pipeline.hpp"
#include "claimex/postprocess.hpp"
#include "claimex/stats.hpp"
#include "claimex/textseg.hpp"

namespace py = pybind11;

namespace {

using namespace claimex;

py::list py_split_into_sentences(const std::string& text) {
  py::list out;
  for (const auto& rec : split_into_sentences(text)) {
    py::dict d;
    d["paragraph_index"] = rec.paragraph_index;
    d["sentence_index"] = rec.sentence_index;
    d["text"] = rec.text;
    out.append(std::move(d));
  }
  return out;
}

std::string py_build_excerpt(const std::vector<std::string>& sentences, int index, int p, int f) {
  std::vector<SentenceRecord> records;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    SentenceRecord rec;
    rec.sentence_index = static_cast<int>(i);
    rec.text = sentences[i];
    records.push_back(std::move(rec));
  }
  const auto ctx = build_context(records, index, p, f);
  return render_excerpt(ctx, sentences[static_cast<std::size_t>(index)]);
}

template <typename T, typename Fn>
py::dict parse_to_dict(const ParseOutcome<T>& outcome, Fn&& fill) {
  py::dict d;
  d["ok"] = outcome.ok();
  if (outcome.ok()) {
    fill(d, *outcome.value);
  } else {
    d["error"] = outcome.error;
  }
  return d;
}

py::dict py_parse_selection(const std::string& transcript) {
  return parse_to_dict(parse_selection(transcript), [](py::dict& d, const SelectionResult& r) {
    d["kind"] = r.kind == SelectionKind::no_verifiable_content ? "no_verifiable_content"
                : r.kind == SelectionKind::revised              ? "revised"
                                                                : "unchanged";
    d["text"] = r.text;
  });
}

py::dict py_parse_disambiguation(const std::string& transcript) {
  return parse_to_dict(
      parse_disambiguation(transcript), [](py::dict& d, const DisambiguationResult& r) {
        d["kind"] = r.kind == DisambiguationKind::cannot_be_disambiguated
                        ? "cannot_be_disambiguated"
                        : r.kind == DisambiguationKind::clarified ? "clarified" : "unchanged";
        d["text"] = r.text;
      });
}

py::dict py_parse_decomposition(const std::string& transcript) {
  return parse_to_dict(parse_decomposition(transcript),
                       [](py::dict& d, const std::vector<std::string>& claims) {
                         d["claims"] = claims;
                       });
}

py::dict py_parse_entailment(const std::string& transcript) {
  return parse_to_dict(parse_entailment(transcript),
                       [](py::dict& d, bool entailed) { d["entailed"] = entailed; });
}

py::dict py_parse_cmax(const std::string& transcript) {
  return parse_to_dict(parse_cmax(transcript), [](py::dict& d, const CmaxResult& r) {
    d["already_maximal"] = r.already_maximal;
    d["text"] = r.text;
  });
}

py::dict py_parse_claim_brackets(const std::string& claim_text) {
  const auto claim = parse_brackets(claim_text);
  py::dict d;
  d["core"] = claim.core;
  py::list segments;
  for (const auto& seg : claim.inferred_segments) {
    py::dict s;
    s["text"] = seg.text;
    s["offset"] = seg.offset;
    segments.append(std::move(s));
  }
  d["inferred_segments"] = std::move(segments);
  return d;
}

py::dict py_vote(const std::vector<bool>& successes, int min_successes) {
  const auto decision = vote(successes, min_successes);
  py::dict d;
  d["pass"] = decision.pass;
  d["successes"] = decision.successes;
  d["winning_slot"] = decision.winning_slot;
  return d;
}

py::dict py_element_scores(long tp, long tn, long fp, long fn) {
  const auto card = element_level_scores(CellCounts{tp, tn, fp, fn});
  py::dict d;
  d["accuracy"] = card.accuracy;
  d["macro_f1"] = card.macro_f1;
  d["precision_v"] = card.precision_v;
  d["recall_v"] = card.recall_v;
  d["precision_uv"] = card.precision_uv;
  d["recall_uv"] = card.recall_uv;
  return d;
}

int py_classify_result(bool already_maximal, std::optional<bool> ec_c,
                       std::optional<bool> emax_cmax, std::optional<bool> ec_cmax) {
  SupportChecks checks;
  checks.already_maximal = already_maximal;
  checks.ec_supports_c = ec_c;
  checks.emax_supports_cmax = emax_cmax;
  checks.ec_supports_cmax = ec_cmax;
  return classify_result(checks);
}

py::dict py_z_test(long x1, long n1, long x2, long n2) {
  const auto result = two_proportion_z_test(ProportionPair{x1, n1, x2, n2});
  py::dict d;
  d["z"] = result.z;
  d["p_value"] = result.p_value;
  d["degenerate"] = result.degenerate;
  return d;
}

py::dict py_holm(const std::vector<double>& p_values, double alpha) {
  const auto result = holm_bonferroni(p_values, alpha);
  py::dict d;
  d["adjusted"] = result.adjusted;
  py::list reject;
  for (const bool r : result.reject) reject.append(r);
  d["reject"] = std::move(reject);
  return d;
}

double py_krippendorff(const std::vector<std::vector<std::optional<int>>>& labels) {
  return krippendorff_alpha(labels).alpha;
}

py::dict py_aggregate_tags(const std::vector<std::string>& tag_names) {
  std::vector<AnnotatorTag> tags;
  for (const auto& name : tag_names) tags.push_back(annotator_tag_from_name(name));
  const auto label = aggregate_annotator_tags(tags);
  py::dict d;
  d["contains"] = label.contains;
  d["high_confidence"] = label.high_confidence;
  return d;
}

py::list py_run_pipeline(const std::string& question, const std::string& answer,
                         const std::string& config_json, const std::string& cache_dir,
                         const std::string& provider) {
  json raw = config_json.empty() ? json::object() : json::parse(config_json);
  RunConfig cfg = config_from_json(raw);
  if (!cache_dir.empty()) cfg.cache_dir = cache_dir;
  if (!provider.empty()) cfg.provider = provider;

  auto chat =
      make_chat_provider(cfg.provider, cfg.api_base_url, cfg.api_key_env, cfg.mock_script);
  Gateway gateway(std::move(chat), CompletionCache(cfg.cache_dir),
                  cfg.provider == "cache-only");
  PipelineConfig pipeline_cfg = cfg.pipeline;
  pipeline_cfg.model_id = cfg.model_id;

  py::list out;
  for (const auto& verdict : run_pipeline(gateway, question, answer, "answer-0", pipeline_cfg)) {
    const json rec = verdict_to_json(verdict, false);
    out.append(py::module_::import("json").attr("loads")(rec.dump()));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_claimex, m) {
  m.doc() = "Claim extraction pipeline and evaluation toolkit (native core)";

  m.def("split_into_sentences", &py_split_into_sentences, py::arg("text"),
        "Split an answer into sentences (paragraphs first, then the rule-based segmenter).");
  m.def("build_excerpt", &py_build_excerpt, py::arg("sentences"), py::arg("index"),
        py::arg("preceding"), py::arg("following"),
        "Render the bracketed-ellipsis excerpt around a focal sentence.");

  m.def("parse_selection", &py_parse_selection, py::arg("transcript"));
  m.def("parse_disambiguation", &py_parse_disambiguation, py::arg("transcript"));
  m.def("parse_decomposition", &py_parse_decomposition, py::arg("transcript"));
  m.def("parse_entailment", &py_parse_entailment, py::arg("transcript"));
  m.def("parse_cmax", &py_parse_cmax, py::arg("transcript"));
  m.def("parse_claim_brackets", &py_parse_claim_brackets, py::arg("claim"));

  m.def("vote", &py_vote, py::arg("successes"), py::arg("min_successes"));
  m.def(
      "confusion_cell",
      [](bool verifiable, const std::string& label) {
        return std::string(confusion_cell_name(
            confusion_cell(verifiable, coverage_label_from_name(label))));
      },
      py::arg("verifiable"), py::arg("label"));
  m.def("element_scores", &py_element_scores, py::arg("tp"), py::arg("tn"), py::arg("fp"),
        py::arg("fn"));

  m.def("classify_result", &py_classify_result, py::arg("already_maximal"),
        py::arg("ec_supports_c") = std::nullopt, py::arg("emax_supports_cmax") = std::nullopt,
        py::arg("ec_supports_cmax") = std::nullopt);
  m.def("is_desirable", &is_desirable, py::arg("result_type"));

  m.def("two_proportion_z_test", &py_z_test, py::arg("x1"), py::arg("n1"), py::arg("x2"),
        py::arg("n2"));
  m.def("holm_bonferroni", &py_holm, py::arg("p_values"), py::arg("alpha") = 0.05);
  m.def("krippendorff_alpha", &py_krippendorff, py::arg("labels"),
        "Nominal alpha over an items x annotators matrix; None marks a missing entry.");
  m.def("aggregate_annotator_tags", &py_aggregate_tags, py::arg("tags"));

  m.def("run_pipeline", &py_run_pipeline, py::arg("question"), py::arg("answer"),
        py::arg("config_json") = "", py::arg("cache_dir") = "", py::arg("provider") = "mock",
        "Run the full extraction pipeline over one answer and return verdict dicts.");

  m.attr("__version__") = "0.1.0";
}
