#include "livekv/md5.hpp"

#include <openssl/evp.h>

#include <stdexcept>

namespace livekv {

Digest md5(std::span<const std::uint8_t> bytes) {
  Digest out{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), out.data(), &len, EVP_md5(),
                 nullptr) != 1 ||
      len != out.size()) {
    throw std::runtime_error("md5: EVP_Digest failed");
  }
  return out;
}

Digest md5(std::string_view bytes) {
  return md5(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
}

std::string to_hex(const Digest& digest) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(digest.size() * 2);
  for (std::uint8_t b : digest) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0x0f]);
  }
  return out;
}

}  // namespace livekv
