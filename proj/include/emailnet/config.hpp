#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>

namespace emailnet {

// Flat key=value settings. '#' starts a comment; blank lines are ignored.
class KeyValues {
 public:
  static KeyValues parse(std::istream& in);
  static KeyValues load(const std::string& path);  // IoError when unreadable

  // Parses one `key=value` token (ConfigError otherwise) and stores it.
  void set_token(std::string_view token);
  void set(std::string key, std::string value) { values_[std::move(key)] = std::move(value); }

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, std::string>& values() const { return values_; }

  double get_double(const std::string& key, double fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;

  // ConfigError naming the first key not in `known`.
  void require_known(std::initializer_list<std::string_view> known) const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace emailnet
