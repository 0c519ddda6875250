#include "claimex/gateway.hpp"
#include "claimex/jsonl.hpp"
#include "claimex/strings.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace claimex {

namespace {

// Value of the section introduced by `header` in a rendered user prompt:
// text from the line after the header up to the next blank line (or the end).
std::string user_section(const std::string& user_text, const std::string& header) {
  const auto lines = split_lines(user_text);
  std::string value;
  bool in_section = false;
  for (const auto& raw : lines) {
    const std::string line = trim(raw);
    if (!in_section) {
      if (line == trim(header)) in_section = true;
      continue;
    }
    if (line.empty()) break;
    if (!value.empty()) value += ' ';
    value += line;
  }
  return value;
}

bool contains_any(const std::string& lowered, std::initializer_list<const char*> needles) {
  return std::any_of(needles.begin(), needles.end(),
                     [&](const char* n) { return contains(lowered, n); });
}

const std::set<std::string>& subjective_markers() {
  static const std::set<std::string> kMarkers = {"mind blowing", "stunning", "breathtaking",
                                                 "truly remarkable", "awe-inspiring"};
  return kMarkers;
}

std::string drop_marker(std::string sentence, const std::string& marker) {
  const std::string lowered = to_lower(sentence);
  const std::size_t pos = lowered.find(marker);
  if (pos == std::string::npos) return sentence;
  std::size_t begin = pos;
  std::size_t end = pos + marker.size();
  if (begin > 0 && sentence[begin - 1] == ' ') --begin;
  sentence.erase(begin, end - begin);
  return collapse_whitespace(sentence);
}

double word_overlap(const std::string& statement, const std::string& reference) {
  const auto words = content_words(statement);
  if (words.empty()) return 1.0;
  const auto ref_words = content_words(reference);
  const std::set<std::string> ref(ref_words.begin(), ref_words.end());
  std::size_t hits = 0;
  for (const auto& w : words) {
    if (ref.count(w)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(words.size());
}

std::string strip_brackets(const std::string& claim) {
  std::string out;
  bool in_bracket = false;
  for (char c : claim) {
    if (c == '[') in_bracket = true;
    else if (c == ']') in_bracket = false;
    else if (!in_bracket) out.push_back(c);
  }
  return collapse_whitespace(out);
}

std::string synth_selection(const std::string& sentence) {
  const std::string lowered = to_lower(sentence);
  std::string verdict = "Contains a specific and verifiable proposition";
  std::string value = "remains unchanged";

  if (contains_any(lowered, {"could ", " should ", "i think", "you might want", "what do you"})) {
    verdict = "Does NOT contain a specific and verifiable proposition";
    value = "None";
  } else {
    for (const auto& marker : subjective_markers()) {
      if (contains(lowered, marker)) {
        value = drop_marker(sentence, marker);
        break;
      }
    }
  }

  std::ostringstream out;
  out << "Sentence:\n" << sentence << "\n\n"
      << "4-step stream of consciousness thought process (1. reflect on criteria at a "
         "high-level -> 2. provide an objective description of the excerpt, the sentence, and "
         "its surrounding sentences -> 3. consider all possible perspectives -> 4. reflect on "
         "changes):\nThe sentence was checked against the stated criteria.\n\n"
      << "Final submission:\n" << verdict << "\n\n"
      << "Sentence with only verifiable information:\n" << value << "\n";
  return out.str();
}

std::string synth_disambiguation(const std::string& sentence) {
  const std::string lowered = to_lower(sentence);
  std::string value = sentence;
  if (starts_with(sentence, "They ") || contains(lowered, "next year")) {
    value = "Cannot be decontextualized";
  } else if (contains(lowered, "the company")) {
    value = replace_all(sentence, "the company", "Acme Corp");
    value = replace_all(std::move(value), "The company", "Acme Corp");
  }

  std::ostringstream out;
  out << "Incomplete Names, Acronyms, Abbreviations:\nNone found in the sentence.\n\n"
      << "Linguistic Ambiguity in '" << sentence << "':\n"
      << "Referential and structural readings were compared against the question and the "
         "context.\n\n"
      << "DecontextualizedSentence: " << value << "\n";
  return out.str();
}

std::string synth_decomposition(const std::string& sentence) {
  const std::string lowered = to_lower(sentence);
  std::vector<std::string> claims;
  if (!contains(lowered, "in general terms")) {
    std::string body = trim(sentence);
    while (!body.empty() && (body.back() == '.' || body.back() == '!')) body.pop_back();
    body = replace_all(std::move(body), "the startup", "the startup [Acme Corp]");
    const std::size_t conj = body.find(" and ");
    const bool split = conj != std::string::npos &&
                       content_words(body.substr(conj + 5)).size() >= 3;
    if (split) {
      claims.push_back(trim(body.substr(0, conj)));
      std::string second = trim(body.substr(conj + 5));
      if (!second.empty()) second[0] = static_cast<char>(std::toupper(
          static_cast<unsigned char>(second[0])));
      claims.push_back(second);
    } else {
      claims.push_back(body);
    }
  }

  std::ostringstream out;
  out << "Sentence:\n" << sentence << "\n\n"
      << "Referential terms whose referents must be clarified (e.g., \"other\"): None\n\n"
      << "MaxClarifiedSentence: " << sentence << "\n"
      << "The range of the possible number of propositions (with some margin for variation) "
         "is: 0-" << std::max<std::size_t>(claims.size(), 1) + 1 << "\n"
      << "Specific, Verifiable, and Decontextualized Propositions:\n[\n";
  for (const auto& c : claims) out << "\"" << c << "\",\n";
  out << "]\n"
      << "Specific, Verifiable, and Decontextualized Propositions with Essential "
         "Context/Clarifications:\n[\n";
  for (const auto& c : claims) out << "\"" << c << " - true or false?\",\n";
  out << "]\n";
  return out.str();
}

std::string synth_entailment(const std::string& user_text) {
  const std::string sentence = user_section(user_text, "Sentence of interest:");
  const std::string excerpt = user_section(user_text, "Excerpt from response:");
  const std::string claim = strip_brackets(user_section(user_text, "Claim:"));
  const bool entailed = word_overlap(claim, sentence + " " + excerpt) >= 0.75;

  std::ostringstream out;
  out << "S = " << sentence << "\n"
      << "C = " << claim << "\n"
      << "The elements of C were compared against S and its context.\n"
      << (entailed ? "S entails all elements of C" : "S does not entail all elements of C")
      << "\n";
  return out.str();
}

std::string synth_elements(const std::string& sentence) {
  std::string body = trim(sentence);
  while (!body.empty() && (body.back() == '.' || body.back() == '!')) body.pop_back();
  if (starts_with(body, "- ")) body = body.substr(2);

  std::vector<std::string> clauses;
  std::size_t start = 0;
  while (clauses.size() < 3) {
    const std::size_t comma = body.find(", ", start);
    const std::size_t conj = body.find(" and ", start);
    const std::size_t cut = std::min(comma, conj);
    if (cut == std::string::npos) break;
    clauses.push_back(trim(body.substr(start, cut - start)));
    start = cut + (cut == comma ? 2 : 5);
  }
  clauses.push_back(trim(body.substr(start)));
  clauses.erase(std::remove_if(clauses.begin(), clauses.end(),
                               [](const std::string& c) { return content_words(c).empty(); }),
                clauses.end());

  std::ostringstream out;
  out << "S = " << sentence << "\n"
      << "Are there any clarifications needed to understand S based on its context? No.\n"
      << "S_restated = " << body << "\n"
      << "Does the Statements and Actions Rule apply? No.\n"
      << "What are ALL elements of S_restated?\n[\n";
  for (auto clause : clauses) {
    if (!clause.empty()) {
      clause[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(clause[0])));
    }
    const std::string lowered = to_lower(clause);
    const bool unverifiable =
        contains_any(lowered, {"beautiful", "important", "crucial", "exciting", "best",
                               "amazing", "remarkable", "could ", "should "});
    out << "\"" << clause << " -> "
        << (unverifiable ? "it's a generic statement, so it does not contain verifiable information"
                         : "contains verifiable information")
        << "\",\n";
  }
  out << "]\n";
  return out.str();
}

std::string synth_coverage(const std::string& user_text) {
  const std::string claims_text = to_lower(user_section(user_text, "Claims (C):"));

  // Elements arrive as a {index: "text"} dictionary; collect the quoted values.
  std::vector<std::string> elements;
  const std::string elements_section = [&] {
    const std::size_t pos = user_text.find("Elements (E):");
    return pos == std::string::npos ? std::string() : user_text.substr(pos);
  }();
  bool in_quote = false;
  std::string current;
  for (char c : elements_section) {
    if (c == '"') {
      if (in_quote) elements.push_back(current);
      current.clear();
      in_quote = !in_quote;
    } else if (in_quote) {
      current.push_back(c);
    }
  }

  std::ostringstream out;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    const std::string element = collapse_whitespace(elements[i]);
    const std::string lowered = to_lower(element);
    const double overlap = word_overlap(element, claims_text);
    out << "E" << (i + 1) << ": " << element << "\n";
    if (contains(claims_text, lowered) || overlap >= 0.99) {
      out << "Therefore E" << (i + 1) << " is fully covered by C\n";
    } else if (overlap >= 0.66) {
      out << "Therefore it is implied that E" << (i + 1) << " is fully covered by C\n";
    } else {
      out << "Therefore E" << (i + 1) << " is not fully covered by C\n";
    }
  }
  return out.str();
}

std::string synth_cmax(const std::string& user_text) {
  const std::string claim = user_section(user_text, "Claim of interest:");
  const std::string first_word = claim.substr(0, claim.find(' '));
  const bool needs_context =
      first_word == "She" || first_word == "He" || first_word == "It" || first_word == "They" ||
      first_word == "This" || contains(to_lower(claim), "other conferences");

  std::ostringstream out;
  out << "C = " << claim << "\n"
      << "Would someone reading C without any context have questions? "
      << (needs_context ? "They would ask what the references resolve to." : "No.") << "\n";
  if (needs_context) {
    std::string rest = claim;
    if (!rest.empty()) rest[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(rest[0])));
    out << "C_max = In the context of the response, " << rest << "\n";
  } else {
    out << "C_max = C\n";
  }
  return out.str();
}

std::string synth_sentence_validity(const std::string& sentence) {
  const std::string trimmed = trim(sentence);
  const bool invalid = trimmed.empty() || trimmed.back() == ':' || trimmed.back() == '?' ||
                       starts_with(trimmed, "[");
  std::ostringstream out;
  out << "S = " << sentence << "\n"
      << "Describe the context for S. The sentence was read together with its excerpt.\n"
      << (invalid ? "S cannot be interpreted as a complete, declarative sentence"
                  : "S can be interpreted as a complete, declarative sentence")
      << "\n";
  return out.str();
}

std::string synth_claim_validity(const std::string& claim) {
  const std::string lowered = to_lower(claim);
  const bool has_verb = contains_any(
      lowered, {" is ", " are ", " was ", " were ", " has ", " have ", " had ", " led ",
                " plans ", " supports ", " called ", " spins ", " rose ", " contains "});
  const std::string first_word = to_lower(claim.substr(0, claim.find(' ')));
  const bool invalid = !has_verb && first_word.size() > 3 &&
                       first_word.compare(first_word.size() - 3, 3, "ing") == 0;
  std::ostringstream out;
  out << "C = " << claim << "\n"
      << (invalid ? "It's missing a subject and a verb, so C is not a complete, declarative "
                    "sentence."
                  : "Yes, C is a complete, declarative sentence.")
      << "\n";
  return out.str();
}

std::string synth_query(const std::string& user_text) {
  const std::string statement = user_section(user_text, "Statement:");
  const std::string prior = user_section(user_text, "Previous searches:");
  int prior_count = 0;
  for (std::size_t pos = 0; (pos = prior.find("Query:", pos)) != std::string::npos; pos += 6) {
    ++prior_count;
  }
  std::string query = strip_brackets(statement);
  if (prior_count > 0) query += " detail " + std::to_string(prior_count);
  return "Query: \"" + query + "\"\n";
}

std::string synth_verification(const std::string& user_text) {
  const std::string statement = user_section(user_text, "Statement:");
  const std::string knowledge = [&] {
    const std::size_t pos = user_text.find("Knowledge:");
    return pos == std::string::npos ? std::string() : user_text.substr(pos + 10);
  }();
  const bool supported = !trim(knowledge).empty() &&
                         word_overlap(strip_brackets(statement), knowledge) >= 0.6;
  std::ostringstream out;
  out << "The statement's elements were checked against the knowledge.\n"
      << (supported ? "[Supported.]" : "[Not Supported.]") << "\n";
  return out.str();
}

}  // namespace

MockChatProvider MockChatProvider::from_script_file(const std::filesystem::path& path) {
  std::vector<ScriptEntry> script;
  for (const auto& record : read_jsonl(path)) {
    script.push_back(ScriptEntry{record.at("match").get<std::string>(),
                                 record.at("text").get<std::string>(),
                                 record.value("ordinal", -1)});
  }
  return MockChatProvider(std::move(script));
}

std::string MockChatProvider::generate(const PromptRequest& req, int ordinal) {
  for (const auto& entry : script_) {
    if ((entry.ordinal < 0 || entry.ordinal == ordinal) &&
        contains(req.user_text, entry.match)) {
      return entry.text;
    }
  }

  switch (req.kind) {
    case PromptKind::selection:
      return synth_selection(user_section(req.user_text, "Sentence:"));
    case PromptKind::disambiguation:
      return synth_disambiguation(user_section(req.user_text, "Sentence:"));
    case PromptKind::decomposition:
      return synth_decomposition(user_section(req.user_text, "Sentence:"));
    case PromptKind::entailment:
      return synth_entailment(req.user_text);
    case PromptKind::element_extraction:
      return synth_elements(user_section(req.user_text, "Sentence of interest:"));
    case PromptKind::element_coverage:
      return synth_coverage(req.user_text);
    case PromptKind::decontext:
      return synth_cmax(req.user_text);
    case PromptKind::sentence_validity:
      return synth_sentence_validity(user_section(req.user_text, "Sentence of interest:"));
    case PromptKind::claim_validity:
      return synth_claim_validity(user_section(req.user_text, "Claim:"));
    case PromptKind::query_generation:
      return synth_query(req.user_text);
    case PromptKind::verification:
      return synth_verification(req.user_text);
    case PromptKind::unknown:
      break;
  }
  throw TransportError("mock provider: no script entry matched and prompt kind is unknown");
}

}  // namespace claimex
