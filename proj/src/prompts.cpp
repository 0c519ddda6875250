#include "claimex/prompts.hpp"

#include "claimex/digest.hpp"
#include "claimex/strings.hpp"

#include <stdexcept>
#include <vector>

namespace claimex {

namespace {

struct KindName {
  PromptKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {PromptKind::selection, "selection"},
    {PromptKind::disambiguation, "disambiguation"},
    {PromptKind::decomposition, "decomposition"},
    {PromptKind::entailment, "entailment"},
    {PromptKind::element_extraction, "element_extraction"},
    {PromptKind::element_coverage, "element_coverage"},
    {PromptKind::decontext, "decontext"},
    {PromptKind::sentence_validity, "sentence_validity"},
    {PromptKind::claim_validity, "claim_validity"},
    {PromptKind::query_generation, "query_generation"},
    {PromptKind::verification, "verification"},
};

}  // namespace

const char* prompt_kind_name(PromptKind kind) {
  for (const auto& entry : kKindNames) {
    if (entry.kind == kind) return entry.name;
  }
  return "unknown";
}

PromptKind prompt_kind_from_name(const std::string& name) {
  for (const auto& entry : kKindNames) {
    if (name == entry.name) return entry.kind;
  }
  return PromptKind::unknown;
}

const std::string& prompt_text(const std::string& name) {
  const auto& texts = detail::prompt_texts();
  auto it = texts.find(name);
  if (it == texts.end()) {
    throw std::runtime_error("unknown prompt template: " + name);
  }
  return it->second;
}

PromptPair prompt_pair(PromptKind kind) {
  const std::string base = prompt_kind_name(kind);
  return PromptPair{prompt_text(base + "_system"), prompt_text(base + "_user")};
}

std::string render_template(std::string templ,
                            const std::map<std::string, std::string>& values) {
  for (const auto& [key, value] : values) {
    templ = replace_all(std::move(templ), "{" + key + "}", value);
  }
  return templ;
}

const std::string& prompts_digest() {
  static const std::string digest = [] {
    std::vector<std::string> fields;
    for (const auto& [name, text] : detail::prompt_texts()) {
      fields.push_back(name);
      fields.push_back(text);
    }
    return sha256_fields(fields);
  }();
  return digest;
}

}  // namespace claimex
