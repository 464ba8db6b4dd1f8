#include "emailnet/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "emailnet/error.hpp"

namespace emailnet {

namespace {

std::string_view trim(std::string_view s) {
  constexpr std::string_view ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

template <class T>
T number(const std::string& key, const std::string& text) {
  T v{};
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || p != text.data() + text.size() || text.empty())
    throw ConfigError("invalid value for '" + key + "': '" + text + "'");
  return v;
}

}  // namespace

KeyValues KeyValues::parse(std::istream& in) {
  KeyValues kv;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view v = line;
    if (auto hash = v.find('#'); hash != std::string_view::npos) v = v.substr(0, hash);
    v = trim(v);
    if (v.empty()) continue;
    kv.set_token(v);
  }
  if (in.bad()) throw IoError("read error in config stream");
  return kv;
}

KeyValues KeyValues::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  return parse(in);
}

void KeyValues::set_token(std::string_view token) {
  auto eq = token.find('=');
  if (eq == std::string_view::npos || trim(token.substr(0, eq)).empty())
    throw ConfigError("expected key=value, got '" + std::string(token) + "'");
  set(std::string(trim(token.substr(0, eq))), std::string(trim(token.substr(eq + 1))));
}

double KeyValues::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  // from_chars for double is missing from older libstdc++
  try {
    std::size_t used = 0;
    double v = std::stod(it->second, &used);
    if (used == it->second.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("invalid value for '" + key + "': '" + it->second + "'");
}

std::uint64_t KeyValues::get_uint(const std::string& key, std::uint64_t fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : number<std::uint64_t>(key, it->second);
}

std::int64_t KeyValues::get_int(const std::string& key, std::int64_t fallback) const {
  auto it = values_.find(key);
  return it == values_.end() ? fallback : number<std::int64_t>(key, it->second);
}

void KeyValues::require_known(std::initializer_list<std::string_view> known) const {
  for (const auto& [k, v] : values_)
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw ConfigError("unknown setting '" + k + "'");
}

}  // namespace emailnet
