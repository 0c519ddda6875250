#include "claimex/postprocess.hpp"

#include "claimex/strings.hpp"

#include <set>

namespace claimex {

Claim parse_brackets(const std::string& claim_text) {
  Claim claim;
  claim.raw = claim_text;

  std::string core;
  core.reserve(claim_text.size());
  std::size_t i = 0;
  while (i < claim_text.size()) {
    const char c = claim_text[i];
    if (c == ']') throw BracketError("unbalanced ']' in claim: " + claim_text);
    if (c != '[') {
      core.push_back(c);
      ++i;
      continue;
    }

    const std::size_t close = claim_text.find_first_of("[]", i + 1);
    if (close == std::string::npos) throw BracketError("unbalanced '[' in claim: " + claim_text);
    if (claim_text[close] == '[') throw BracketError("nested brackets in claim: " + claim_text);

    InferredSegment segment;
    segment.text = claim_text.substr(i + 1, close - i - 1);

    // Swallow one adjacent space so the core keeps single-space separation.
    if (!core.empty() && core.back() == ' ') core.pop_back();
    segment.offset = core.size();
    claim.inferred_segments.push_back(std::move(segment));

    i = close + 1;
    if (i < claim_text.size() && claim_text[i] == ' ' && (core.empty() || core.back() == ' ')) {
      ++i;  // bracket at the start of the claim: drop the separating space
    }
  }

  claim.core = trim(core);
  return claim;
}

std::string reinsert_segments(const Claim& claim) {
  std::string out = claim.core;
  for (auto it = claim.inferred_segments.rbegin(); it != claim.inferred_segments.rend(); ++it) {
    const std::size_t offset = std::min(it->offset, out.size());
    std::string insertion = "[" + it->text + "]";
    if (offset > 0 && out[offset - 1] != ' ') {
      insertion = " " + insertion;
    } else if (offset == 0) {
      insertion += " ";
    }
    out.insert(offset, insertion);
  }
  return out;
}

std::vector<Claim> dedupe(const std::vector<Claim>& claims) {
  std::set<std::string> seen;
  std::vector<Claim> kept;
  for (const auto& claim : claims) {
    const std::string key = claim.method_id + "\x1f" + claim.answer_id + "\x1f" +
                            std::to_string(claim.sentence_index) + "\x1f" + trim(claim.raw);
    if (seen.insert(key).second) kept.push_back(claim);
  }
  return kept;
}

namespace {

std::string invalid_reason(const std::string& statement, const std::string& transcript) {
  const std::string trimmed = trim(statement);
  if (starts_with(trimmed, "[")) return "reference";
  if (!trimmed.empty() && trimmed.back() == ':') return "preamble";
  if (icontains(transcript, "missing")) return "missing-info";
  return "non-declarative";
}

}  // namespace

ValidityVerdict detect_invalid_sentence(Gateway& gateway, const std::string& model_id,
                                        const std::string& sentence, const std::string& excerpt,
                                        const std::string& question, int max_retries) {
  const PromptPair prompt = prompt_pair(PromptKind::sentence_validity);
  PromptRequest req;
  req.model_id = model_id;
  req.system_text = prompt.system_text;
  req.user_text = render_template(
      prompt.user_text,
      {{"question", question}, {"excerpt", excerpt}, {"sentence", sentence}});
  req.kind = PromptKind::sentence_validity;

  auto result = gateway.call_with_retries<bool>(req, parse_sentence_validity, max_retries);
  ValidityVerdict verdict;
  if (!result.ok()) {
    verdict.error = result.failure.error;
    return verdict;
  }
  verdict.transcript = result.transcript;
  verdict.valid = *result.value;
  verdict.reason_class = verdict.valid ? "valid" : invalid_reason(sentence, result.transcript);
  return verdict;
}

ValidityVerdict detect_invalid_claim(Gateway& gateway, const std::string& model_id,
                                     const std::string& claim_text, int max_retries) {
  const PromptPair prompt = prompt_pair(PromptKind::claim_validity);
  PromptRequest req;
  req.model_id = model_id;
  req.system_text = prompt.system_text;
  req.user_text = render_template(prompt.user_text, {{"claim", claim_text}});
  req.kind = PromptKind::claim_validity;

  auto result = gateway.call_with_retries<bool>(req, parse_claim_validity, max_retries);
  ValidityVerdict verdict;
  if (!result.ok()) {
    verdict.error = result.failure.error;
    return verdict;
  }
  verdict.transcript = result.transcript;
  verdict.valid = *result.value;
  verdict.reason_class = verdict.valid ? "valid" : invalid_reason(claim_text, result.transcript);
  return verdict;
}

std::string sentence_key(const std::string& answer_id, int sentence_index) {
  return answer_id + "#" + std::to_string(sentence_index);
}

std::string claim_key(const Claim& claim) {
  return claim.method_id + "#" + claim.answer_id + "#" + std::to_string(claim.sentence_index) +
         "#" + std::to_string(claim.claim_ordinal);
}

namespace {

template <typename Map>
bool flag(const Map& map, const std::string& key, bool fallback) {
  auto it = map.find(key);
  return it == map.end() ? fallback : it->second;
}

}  // namespace

std::vector<SampleRecord> build_eval_sample(const std::vector<Claim>& claims, EvalKind kind,
                                            const SampleInputs& inputs) {
  if (kind == EvalKind::coverage_sentence) {
    throw std::invalid_argument("coverage_sentence is sentence-level; use build_sentence_sample");
  }

  std::vector<SampleRecord> records;
  records.reserve(claims.size());
  for (const auto& claim : claims) {
    SampleRecord rec;
    rec.method_id = claim.method_id;
    rec.answer_id = claim.answer_id;
    rec.sentence_index = claim.sentence_index;
    rec.claim_ordinal = claim.claim_ordinal;

    const std::string skey = sentence_key(claim.answer_id, claim.sentence_index);
    const std::string ckey = claim_key(claim);

    auto exclude = [&rec](const std::string& reason) {
      rec.included = false;
      rec.exclusion_reason = reason;
    };

    if (!flag(inputs.claim_valid, ckey, true)) {
      exclude("invalid claim");
    } else if (!flag(inputs.sentence_valid, skey, true)) {
      exclude("claim from invalid sentence");
    } else if (kind == EvalKind::coverage_element &&
               flag(inputs.sentence_cannot_disambiguate, skey, false)) {
      exclude("sentence failed disambiguation");
    } else if (kind == EvalKind::decontext) {
      if (!flag(inputs.claim_entailed, ckey, true)) {
        exclude("claim not entailed by source sentence");
      } else if (!flag(inputs.sentence_gold_verifiable, skey, true)) {
        exclude("source sentence gold-unverifiable");
      }
    }

    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<SampleRecord> build_sentence_sample(
    const std::vector<std::pair<std::string, int>>& sentences, const SampleInputs& inputs) {
  std::vector<SampleRecord> records;
  records.reserve(sentences.size());
  for (const auto& [answer_id, index] : sentences) {
    SampleRecord rec;
    rec.answer_id = answer_id;
    rec.sentence_index = index;

    const std::string skey = sentence_key(answer_id, index);
    if (!flag(inputs.sentence_valid, skey, true)) {
      rec.included = false;
      rec.exclusion_reason = "invalid sentence";
    } else if (flag(inputs.sentence_cannot_disambiguate, skey, false)) {
      rec.included = false;
      rec.exclusion_reason = "sentence failed disambiguation";
    }
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace claimex
