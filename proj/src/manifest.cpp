#include "claimex/manifest.hpp"

#include "claimex/digest.hpp"

#include <cstdlib>
#include <ctime>

namespace claimex {

std::string RunManifest::digest() const {
  return sha256_fields({config_digest, prompts_digest, model_id, provider_id,
                        search_provider_id, dataset_digest});
}

json RunManifest::to_json() const {
  return json{{"type", "manifest"},
              {"digest", digest()},
              {"config_digest", config_digest},
              {"prompts_digest", prompts_digest},
              {"model_id", model_id},
              {"provider", provider_id},
              {"search_provider", search_provider_id},
              {"dataset_digest", dataset_digest},
              {"timestamp", timestamp}};
}

std::string run_timestamp() {
  if (const char* pinned = std::getenv("CLAIMEX_RUN_TIMESTAMP")) {
    return pinned;
  }
  std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

std::string file_digest(const std::string& path) { return sha256_hex(read_text(path)); }

}  // namespace claimex
