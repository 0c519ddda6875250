#pragma once

#include "claimex/gateway.hpp"
#include "claimex/textseg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace claimex {

struct InferredSegment {
  std::string text;        // bracket contents, without the brackets
  std::size_t offset = 0;  // insertion position in the core string
};

struct Claim {
  std::string core;  // claim with bracketed spans removed, whitespace normalized
  std::vector<InferredSegment> inferred_segments;
  std::string raw;  // the claim exactly as extracted
  std::string method_id;
  std::string answer_id;
  int sentence_index = 0;
  int claim_ordinal = 0;
};

struct BracketError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Splits "John [a celebrity] has called for peace [in the Middle East]" into
// a core and its inferred segments. Nested or unbalanced brackets throw.
Claim parse_brackets(const std::string& claim_text);

// Inverse of parse_brackets for well-formed claims: inserts "[text]" back at
// each offset with single-space separation.
std::string reinsert_segments(const Claim& claim);

// Removes duplicates within each (method_id, answer_id, sentence_index)
// group, keeping first occurrences. Claims are compared on the full bracketed
// string after whitespace trimming (case-sensitive).
std::vector<Claim> dedupe(const std::vector<Claim>& claims);

struct ValidityVerdict {
  bool valid = true;
  std::string reason_class = "valid";  // missing-info | non-declarative | preamble | reference | valid
  std::string transcript;
  std::string error;  // set when the verdict is unknown after retries
  bool known() const { return error.empty(); }
};

ValidityVerdict detect_invalid_sentence(Gateway& gateway, const std::string& model_id,
                                        const std::string& sentence, const std::string& excerpt,
                                        const std::string& question, int max_retries = 2);

ValidityVerdict detect_invalid_claim(Gateway& gateway, const std::string& model_id,
                                     const std::string& claim_text, int max_retries = 2);

enum class EvalKind { entailment, coverage_sentence, coverage_element, decontext };

struct SampleRecord {
  std::string method_id;
  std::string answer_id;
  int sentence_index = 0;
  int claim_ordinal = -1;  // -1 for sentence-level records
  bool included = true;
  std::string exclusion_reason;
};

struct SampleInputs {
  // sentence key -> flags; keys are "<answer_id>#<sentence_index>"
  std::map<std::string, bool> sentence_valid;
  std::map<std::string, bool> sentence_cannot_disambiguate;
  std::map<std::string, bool> sentence_gold_verifiable;
  // claim key -> flags; keys are "<method>#<answer_id>#<sentence_index>#<ordinal>"
  std::map<std::string, bool> claim_valid;
  std::map<std::string, bool> claim_entailed;
};

std::string sentence_key(const std::string& answer_id, int sentence_index);
std::string claim_key(const Claim& claim);

// Applies the eval-kind's exclusion rules; every record is returned with its
// inclusion flag and reason so sample manifests stay auditable. The
// coverage_sentence kind is sentence-level; use build_sentence_sample.
std::vector<SampleRecord> build_eval_sample(const std::vector<Claim>& claims,
                                            EvalKind kind, const SampleInputs& inputs);

// Sentence sample for the coverage evaluations: drops invalid sentences and
// sentences that never reached decomposition (cannot-be-disambiguated).
std::vector<SampleRecord> build_sentence_sample(
    const std::vector<std::pair<std::string, int>>& sentences, const SampleInputs& inputs);

}  // namespace claimex
