#pragma once

#include <map>
#include <string>

namespace claimex {

enum class PromptKind {
  selection,
  disambiguation,
  decomposition,
  entailment,
  element_extraction,
  element_coverage,
  decontext,
  sentence_validity,
  claim_validity,
  query_generation,
  verification,
  unknown,
};

const char* prompt_kind_name(PromptKind kind);
PromptKind prompt_kind_from_name(const std::string& name);

struct PromptPair {
  std::string system_text;
  std::string user_text;
};

// Returns the named template (e.g. "selection_system"); throws on unknown.
const std::string& prompt_text(const std::string& name);

PromptPair prompt_pair(PromptKind kind);

// Replaces each {key} with its value. Only the given keys are substituted, so
// literal braces elsewhere in the template survive.
std::string render_template(std::string templ, const std::map<std::string, std::string>& values);

// Digest over all templates, recorded in run manifests.
const std::string& prompts_digest();

namespace detail {
const std::map<std::string, std::string>& prompt_texts();
}

}  // namespace claimex
