#include "serefind/identity/password.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/rand.h>

#include <stdexcept>
#include <vector>

#include "serefind/error.hpp"

namespace serefind::identity {

namespace {

constexpr std::size_t kSaltBytes = 16;
constexpr std::size_t kKeyBytes = 32;

std::string to_hex(const unsigned char* data, std::size_t n) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(n * 2);
  for (std::size_t i = 0; i < n; ++i) {
    out += kDigits[data[i] >> 4];
    out += kDigits[data[i] & 0xf];
  }
  return out;
}

bool from_hex(std::string_view hex, std::vector<unsigned char>& out) {
  if (hex.size() % 2 != 0) return false;
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
  };
  out.clear();
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    const int hi = nibble(hex[i]), lo = nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) return false;
    out.push_back(static_cast<unsigned char>(hi << 4 | lo));
  }
  return true;
}

std::vector<unsigned char> derive(std::string_view password,
                                  const std::vector<unsigned char>& salt, int iterations) {
  std::vector<unsigned char> key(kKeyBytes);
  if (PKCS5_PBKDF2_HMAC(password.data(), static_cast<int>(password.size()), salt.data(),
                        static_cast<int>(salt.size()), iterations, EVP_sha256(),
                        static_cast<int>(key.size()), key.data()) != 1) {
    throw std::runtime_error("PBKDF2 failed");
  }
  return key;
}

}  // namespace

PasswordHasher::PasswordHasher(int iterations) : iterations_(iterations) {
  if (iterations_ < 1) throw std::invalid_argument("iterations must be >= 1");
}

std::string PasswordHasher::digest(std::string_view password) const {
  std::vector<unsigned char> salt(kSaltBytes);
  if (RAND_bytes(salt.data(), static_cast<int>(salt.size())) != 1) {
    throw std::runtime_error("RAND_bytes failed");
  }
  const auto key = derive(password, salt, iterations_);
  return "pbkdf2-sha256$" + std::to_string(iterations_) + "$" +
         to_hex(salt.data(), salt.size()) + "$" + to_hex(key.data(), key.size());
}

bool PasswordHasher::verify(std::string_view password, std::string_view digest) const {
  constexpr std::string_view kPrefix = "pbkdf2-sha256$";
  if (digest.substr(0, kPrefix.size()) != kPrefix) return false;
  digest.remove_prefix(kPrefix.size());
  const auto d1 = digest.find('$');
  if (d1 == std::string_view::npos) return false;
  const auto d2 = digest.find('$', d1 + 1);
  if (d2 == std::string_view::npos) return false;

  int iterations = 0;
  try {
    iterations = std::stoi(std::string(digest.substr(0, d1)));
  } catch (const std::exception&) {
    return false;
  }
  std::vector<unsigned char> salt, expected;
  if (iterations < 1 || !from_hex(digest.substr(d1 + 1, d2 - d1 - 1), salt) ||
      !from_hex(digest.substr(d2 + 1), expected) || expected.size() != kKeyBytes) {
    return false;
  }
  const auto actual = derive(password, salt, iterations);
  return CRYPTO_memcmp(actual.data(), expected.data(), kKeyBytes) == 0;
}

std::string random_token(std::size_t bytes) {
  std::vector<unsigned char> buf(bytes);
  if (RAND_bytes(buf.data(), static_cast<int>(buf.size())) != 1) {
    throw std::runtime_error("RAND_bytes failed");
  }
  return to_hex(buf.data(), buf.size());
}

}  // namespace serefind::identity
