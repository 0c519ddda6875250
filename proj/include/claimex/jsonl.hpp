#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace claimex {

// Field order is preserved so emitted files diff byte-exactly.
using json = nlohmann::ordered_json;

struct JsonlError : std::runtime_error {
  JsonlError(const std::filesystem::path& path, std::size_t line, const std::string& what)
      : std::runtime_error(path.string() + ":" + std::to_string(line) + ": " + what) {}
};

std::vector<json> read_jsonl(const std::filesystem::path& path);

// Writes one record per line (UTF-8, '\n' terminated) via a temp file and
// rename, so readers never observe a partially written file.
void write_jsonl(const std::filesystem::path& path, const std::vector<json>& records);

void write_text_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

}  // namespace claimex
