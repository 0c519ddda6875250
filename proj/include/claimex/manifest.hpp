#pragma once

#include "claimex/jsonl.hpp"

#include <string>

namespace claimex {

// Identifies everything that determines a run's outputs. Two runs with equal
// digests and warm caches produce byte-identical files; the timestamp is
// informational and excluded from the digest.
struct RunManifest {
  std::string config_digest;
  std::string prompts_digest;
  std::string model_id;
  std::string provider_id;
  std::string search_provider_id;
  std::string dataset_digest;
  std::string timestamp;

  std::string digest() const;
  json to_json() const;
};

// Timestamp comes from $CLAIMEX_RUN_TIMESTAMP when set (reproducible runs),
// otherwise the current UTC time.
std::string run_timestamp();

std::string file_digest(const std::string& path);

}  // namespace claimex
