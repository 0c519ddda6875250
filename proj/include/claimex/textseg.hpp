#pragma once

#include <string>
#include <vector>

namespace claimex {

struct SentenceRecord {
  std::string answer_id;
  int paragraph_index = 0;
  int sentence_index = 0;
  std::string text;
  // Raw separator (whitespace / newlines) between the previous sentence and
  // this one; the first record's separator is the answer's leading text.
  std::string leading_sep;
};

struct SegmentedAnswer {
  std::string answer_id;
  std::vector<SentenceRecord> sentences;
  std::string trailing_sep;
};

// Splits on newline characters first, then applies the rule-based sentence
// segmenter inside each paragraph. Bullet lines without terminal punctuation
// become their own sentences. Empty input yields an empty sentence list.
SegmentedAnswer split_answer(const std::string& answer_text, const std::string& answer_id = "");

std::vector<SentenceRecord> split_into_sentences(const std::string& answer_text,
                                                 const std::string& answer_id = "");

// Concatenating stored separators and texts reproduces the source exactly.
std::string reconstruct(const SegmentedAnswer& answer);

struct ContextWindow {
  std::vector<std::string> preceding;  // document order, at most p
  std::vector<std::string> following;  // document order, at most f
  bool left_truncated = false;
  bool right_truncated = false;
};

// Throws std::out_of_range when index is not a valid sentence index.
ContextWindow build_context(const std::vector<SentenceRecord>& sentences, int index, int p, int f);

// Joins preceding + focal + following with single spaces, with "[...]" on any
// truncated side (the marker convention the prompt contracts rely on).
std::string render_excerpt(const ContextWindow& ctx, const std::string& focal_sentence);

}  // namespace claimex
