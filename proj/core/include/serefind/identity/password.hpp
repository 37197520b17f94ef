#pragma once

#include <string>
#include <string_view>

namespace serefind::identity {

/// Salted PBKDF2-HMAC-SHA256 digests in the form
/// `pbkdf2-sha256$<iterations>$<salt-hex>$<hash-hex>`.
class PasswordHasher {
 public:
  explicit PasswordHasher(int iterations = 100000);

  std::string digest(std::string_view password) const;
  /// Constant-time comparison of the derived key.
  bool verify(std::string_view password, std::string_view digest) const;

 private:
  int iterations_;
};

/// Hex of `bytes` cryptographically random bytes.
std::string random_token(std::size_t bytes = 16);

}  // namespace serefind::identity
