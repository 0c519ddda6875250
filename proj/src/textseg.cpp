#include "claimex/textseg.hpp"

#include "claimex/strings.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace claimex {

namespace {

bool is_ascii_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Lower-cased abbreviation tokens (with internal periods, final period
// stripped) that do not end a sentence.
const std::set<std::string>& abbreviation_blocklist() {
  static const std::set<std::string> kAbbrev = {
      "mr",  "mrs", "ms",  "dr",   "prof", "sr",   "jr",   "st",  "vs",  "etc",
      "e.g", "i.e", "cf",  "al",   "ca",   "approx", "dept", "est", "fig", "vol",
      "inc", "corp", "ltd", "co",  "u.s",  "u.k",  "u.n",  "ph.d", "a.m", "p.m",
      "jan", "feb", "mar", "apr",  "jun",  "jul",  "aug",  "sep", "sept", "oct",
      "nov", "dec", "mt",  "no"};
  return kAbbrev;
}

// Token of [A-Za-z.] characters ending just before `pos` (the terminal '.').
std::string token_before(const std::string& text, std::size_t pos) {
  std::size_t begin = pos;
  while (begin > 0) {
    const char c = text[begin - 1];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '.') {
      --begin;
    } else {
      break;
    }
  }
  std::string token = text.substr(begin, pos - begin);
  while (!token.empty() && token.front() == '.') token.erase(token.begin());
  return token;
}

bool is_closing_char(const std::string& text, std::size_t pos, std::size_t* advance) {
  static const char* kMultibyteClosers[] = {"\xe2\x80\x9d", "\xe2\x80\x99"};  // ” ’
  const char c = text[pos];
  if (c == '"' || c == '\'' || c == ')' || c == ']' || c == '}') {
    *advance = 1;
    return true;
  }
  for (const char* closer : kMultibyteClosers) {
    const std::size_t len = 3;
    if (text.compare(pos, len, closer) == 0) {
      *advance = len;
      return true;
    }
  }
  return false;
}

bool starts_new_sentence(const std::string& text, std::size_t pos) {
  static const char* kMultibyteOpeners[] = {"\xe2\x80\x9c", "\xe2\x80\x98"};  // “ ‘
  if (pos >= text.size()) return false;
  const unsigned char c = static_cast<unsigned char>(text[pos]);
  if (std::isupper(c) || std::isdigit(c)) return true;
  if (c == '"' || c == '\'' || c == '(' || c == '[' || c == '*' || c == '#' || c == '$') return true;
  for (const char* opener : kMultibyteOpeners) {
    if (text.compare(pos, 3, opener) == 0) return true;
  }
  return false;
}

// Sentence spans [begin, end) within one paragraph, whitespace-trimmed.
std::vector<std::pair<std::size_t, std::size_t>> split_paragraph(const std::string& para) {
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  std::size_t start = 0;
  while (start < para.size() && is_ascii_space(para[start])) ++start;
  if (start == para.size()) return spans;

  std::size_t i = start;
  while (i < para.size()) {
    const char c = para[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }

    // Only the last mark of a run ("...", "?!") is a boundary candidate.
    std::size_t mark_end = i + 1;
    while (mark_end < para.size() &&
           (para[mark_end] == '.' || para[mark_end] == '!' || para[mark_end] == '?')) {
      ++mark_end;
    }
    const char last_mark = para[mark_end - 1];

    if (last_mark == '.' && mark_end - i == 1) {
      const std::string token = to_lower(token_before(para, i));
      if (abbreviation_blocklist().count(token) > 0) {
        i = mark_end;
        continue;
      }
    }

    // Swallow closing quotes/brackets after the terminal mark.
    std::size_t end = mark_end;
    std::size_t advance = 0;
    while (end < para.size() && is_closing_char(para, end, &advance)) end += advance;

    if (end >= para.size()) {
      spans.emplace_back(start, end);
      start = end;
      i = end;
      continue;
    }

    std::size_t next = end;
    while (next < para.size() && is_ascii_space(para[next])) ++next;
    if (next > end && starts_new_sentence(para, next)) {
      spans.emplace_back(start, end);
      start = next;
      i = next;
    } else {
      i = mark_end;
    }
  }

  if (start < para.size()) {
    std::size_t end = para.size();
    while (end > start && is_ascii_space(para[end - 1])) --end;
    if (end > start) spans.emplace_back(start, end);
  }
  return spans;
}

}  // namespace

SegmentedAnswer split_answer(const std::string& answer_text, const std::string& answer_id) {
  SegmentedAnswer out;
  out.answer_id = answer_id;

  int paragraph_index = -1;
  int sentence_index = 0;
  std::size_t consumed = 0;  // end of the last emitted sentence in answer_text

  std::size_t para_start = 0;
  while (para_start <= answer_text.size()) {
    std::size_t para_end = answer_text.find('\n', para_start);
    if (para_end == std::string::npos) para_end = answer_text.size();

    const std::string para = answer_text.substr(para_start, para_end - para_start);
    const auto spans = split_paragraph(para);
    if (!spans.empty()) ++paragraph_index;
    for (const auto& [begin, end] : spans) {
      SentenceRecord rec;
      rec.answer_id = answer_id;
      rec.paragraph_index = paragraph_index;
      rec.sentence_index = sentence_index++;
      rec.text = para.substr(begin, end - begin);
      const std::size_t abs_begin = para_start + begin;
      rec.leading_sep = answer_text.substr(consumed, abs_begin - consumed);
      consumed = para_start + end;
      out.sentences.push_back(std::move(rec));
    }

    if (para_end == answer_text.size()) break;
    para_start = para_end + 1;
  }

  out.trailing_sep = answer_text.substr(consumed);
  return out;
}

std::vector<SentenceRecord> split_into_sentences(const std::string& answer_text,
                                                 const std::string& answer_id) {
  return split_answer(answer_text, answer_id).sentences;
}

std::string reconstruct(const SegmentedAnswer& answer) {
  std::string out;
  for (const auto& rec : answer.sentences) {
    out += rec.leading_sep;
    out += rec.text;
  }
  out += answer.trailing_sep;
  return out;
}

ContextWindow build_context(const std::vector<SentenceRecord>& sentences, int index, int p,
                            int f) {
  if (index < 0 || static_cast<std::size_t>(index) >= sentences.size()) {
    throw std::out_of_range("sentence index " + std::to_string(index) + " out of range");
  }
  if (p < 0 || f < 0) {
    throw std::invalid_argument("context window sizes must be non-negative");
  }

  ContextWindow ctx;
  const int first = std::max(0, index - p);
  for (int i = first; i < index; ++i) ctx.preceding.push_back(sentences[i].text);
  ctx.left_truncated = first > 0;

  const int count = static_cast<int>(sentences.size());
  const int last = std::min(count, index + 1 + f);
  for (int i = index + 1; i < last; ++i) ctx.following.push_back(sentences[i].text);
  ctx.right_truncated = last < count;

  return ctx;
}

std::string render_excerpt(const ContextWindow& ctx, const std::string& focal_sentence) {
  std::string out;
  if (ctx.left_truncated) out += "[...] ";
  for (const auto& s : ctx.preceding) {
    out += s;
    out += ' ';
  }
  out += focal_sentence;
  for (const auto& s : ctx.following) {
    out += ' ';
    out += s;
  }
  if (ctx.right_truncated) out += " [...]";
  return out;
}

}  // namespace claimex
