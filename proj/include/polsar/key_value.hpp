#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polsar/error.hpp"

namespace polsar {

/// Plain-text `key: value` document. Blank lines and lines starting with
/// '#' are ignored; keys are case-sensitive and unique.
class KeyValues {
 public:
  /// `error` is the code thrown for malformed lines or values.
  static KeyValues parse(std::istream& is, ErrorCode error = ErrorCode::InvalidSpec);
  static KeyValues load(const std::filesystem::path& path,
                        ErrorCode error = ErrorCode::InvalidSpec);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  std::string require(const std::string& key) const;

  double get_double(const std::string& key, double fallback) const;
  double require_double(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  long long require_int(const std::string& key) const;
  bool get_bool(const std::string& key, bool fallback) const;
  /// Whitespace-separated numbers.
  std::vector<double> get_doubles(const std::string& key) const;

  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  explicit KeyValues(ErrorCode error) : error_(error) {}
  [[noreturn]] void fail(const std::string& what) const;

  ErrorCode error_;
  std::map<std::string, std::string> values_;
};

}  // namespace polsar
