#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace claimex {

std::string trim(std::string_view s);

// Collapses every whitespace run to a single space and trims the ends.
// Parsers match marker phrases on collapsed text so hard-wrapped
// transcripts still parse.
std::string collapse_whitespace(std::string_view s);

std::string to_lower(std::string_view s);

bool starts_with(std::string_view s, std::string_view prefix);
bool contains(std::string_view haystack, std::string_view needle);
bool icontains(std::string_view haystack, std::string_view needle);

std::vector<std::string> split_lines(std::string_view s);

// Replaces every occurrence of `from` with `to`.
std::string replace_all(std::string s, std::string_view from, std::string_view to);

// Lower-cased alphanumeric words of length > min_len.
std::vector<std::string> content_words(std::string_view s, std::size_t min_len = 3);

}  // namespace claimex
