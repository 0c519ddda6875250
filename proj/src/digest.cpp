#include "claimex/digest.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <stdexcept>

namespace claimex {

std::string sha256_hex(std::string_view data) {
  unsigned char hash[EVP_MAX_MD_SIZE];
  unsigned int hash_len = 0;

  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx) throw std::runtime_error("EVP_MD_CTX_new failed");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, data.data(), data.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, hash, &hash_len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw std::runtime_error("sha256 digest failed");

  std::string hex(hash_len * 2, '0');
  for (unsigned int i = 0; i < hash_len; ++i) {
    std::snprintf(hex.data() + i * 2, 3, "%02x", hash[i]);
  }
  return hex;
}

std::string sha256_fields(const std::vector<std::string>& fields) {
  std::string framed;
  for (const auto& f : fields) {
    framed += std::to_string(f.size());
    framed.push_back(':');
    framed += f;
  }
  return sha256_hex(framed);
}

}  // namespace claimex
