"""Claim extraction pipeline and evaluation toolkit."""

try:
    from . import _claimex as _native  # installed layout: extension inside the package
except ImportError:  # in-tree builds put the extension on sys.path directly
    import _claimex as _native

__version__ = _native.__version__

aggregate_annotator_tags = _native.aggregate_annotator_tags
build_excerpt = _native.build_excerpt
classify_result = _native.classify_result
confusion_cell = _native.confusion_cell
element_scores = _native.element_scores
holm_bonferroni = _native.holm_bonferroni
is_desirable = _native.is_desirable
krippendorff_alpha = _native.krippendorff_alpha
parse_claim_brackets = _native.parse_claim_brackets
parse_cmax = _native.parse_cmax
parse_decomposition = _native.parse_decomposition
parse_disambiguation = _native.parse_disambiguation
parse_entailment = _native.parse_entailment
parse_selection = _native.parse_selection
run_pipeline = _native.run_pipeline
split_into_sentences = _native.split_into_sentences
two_proportion_z_test = _native.two_proportion_z_test
vote = _native.vote

__all__ = [
    "aggregate_annotator_tags",
    "build_excerpt",
    "classify_result",
    "confusion_cell",
    "element_scores",
    "holm_bonferroni",
    "is_desirable",
    "krippendorff_alpha",
    "parse_claim_brackets",
    "parse_cmax",
    "parse_decomposition",
    "parse_disambiguation",
    "parse_entailment",
    "parse_selection",
    "run_pipeline",
    "split_into_sentences",
    "two_proportion_z_test",
    "vote",
]
