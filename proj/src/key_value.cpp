#include "polsar/key_value.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace polsar {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

KeyValues KeyValues::parse(std::istream& is, ErrorCode error) {
  KeyValues kv(error);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto colon = t.find(':');
    if (colon == std::string::npos || colon == 0)
      kv.fail("line " + std::to_string(line_no) + " is not 'key: value'");
    const std::string key = trim(t.substr(0, colon));
    if (kv.has(key)) kv.fail("duplicate key '" + key + "'");
    kv.values_[key] = trim(t.substr(colon + 1));
  }
  return kv;
}

KeyValues KeyValues::load(const std::filesystem::path& path, ErrorCode error) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return parse(in, error);
}

void KeyValues::fail(const std::string& what) const { throw Error(error_, what); }

std::optional<std::string> KeyValues::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string KeyValues::require(const std::string& key) const {
  auto v = get(key);
  if (!v) fail("missing key '" + key + "'");
  return *v;
}

double KeyValues::require_double(const std::string& key) const {
  const std::string s = require(key);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    fail("key '" + key + "' is not a number: '" + s + "'");
  return v;
}

double KeyValues::get_double(const std::string& key, double fallback) const {
  return has(key) ? require_double(key) : fallback;
}

long long KeyValues::require_int(const std::string& key) const {
  const std::string s = require(key);
  long long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    fail("key '" + key + "' is not an integer: '" + s + "'");
  return v;
}

long long KeyValues::get_int(const std::string& key, long long fallback) const {
  return has(key) ? require_int(key) : fallback;
}

bool KeyValues::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string s = require(key);
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  fail("key '" + key + "' is not a boolean: '" + s + "'");
}

std::vector<double> KeyValues::get_doubles(const std::string& key) const {
  std::istringstream ss(require(key));
  std::vector<double> out;
  std::string tok;
  while (ss >> tok) {
    double v = 0.0;
    const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
      fail("key '" + key + "' has a non-numeric entry '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace polsar
