#include "emailnet/anonymize.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <algorithm>
#include <array>
#include <cctype>

#include "emailnet/error.hpp"

namespace emailnet {

std::string normalize_address(std::string_view address) {
  constexpr std::string_view ws = " \t\r\n";
  auto b = address.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = address.find_last_not_of(ws);
  std::string out(address.substr(b, e - b + 1));
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

AnonymizedAddress anonymize(std::string_view address,
                            std::span<const unsigned char> key) {
  if (key.empty()) throw ConfigError("anonymization key must not be empty");
  auto normalized = normalize_address(address);

  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()),
       reinterpret_cast<const unsigned char*>(normalized.data()), normalized.size(),
       digest.data(), &len);

  static constexpr char hex[] = "0123456789abcdef";
  std::string id(32, '0');
  for (std::size_t i = 0; i < 16; ++i) {
    id[2 * i] = hex[digest[i] >> 4];
    id[2 * i + 1] = hex[digest[i] & 0xf];
  }
  return {std::move(id)};
}

}  // namespace emailnet
