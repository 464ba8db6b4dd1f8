#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace emailnet {

// 128-bit keyed digest of a normalized address, rendered as 32 hex chars.
struct AnonymizedAddress {
  std::string id;
  auto operator<=>(const AnonymizedAddress&) const = default;
};

// Trim surrounding whitespace and lowercase.
std::string normalize_address(std::string_view address);

// HMAC-SHA256 over the normalized address, truncated to 128 bits.
// Throws ConfigError on an empty key.
AnonymizedAddress anonymize(std::string_view address,
                            std::span<const unsigned char> key);

inline AnonymizedAddress anonymize(std::string_view address, std::string_view key) {
  return anonymize(address, std::span<const unsigned char>(
                                reinterpret_cast<const unsigned char*>(key.data()),
                                key.size()));
}

}  // namespace emailnet
