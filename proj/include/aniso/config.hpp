#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace aniso {

/// Flat run configuration: dotted keys mapped to text values, e.g.
///   p = 2, 3, 4
///   grid.res = 64
/// Every known key has a default; unknown keys are rejected. Lists are
/// comma separated, and `#` starts a comment.
class RunConfig {
 public:
  RunConfig();

  /// Parses `key = value` lines on top of the current values.
  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::string& path);

  void set(const std::string& key, const std::string& value);
  bool is_known(const std::string& key) const { return values_.count(key) != 0; }
  static const std::vector<std::pair<std::string, std::string>>& defaults();

  const std::string& text(const std::string& key) const;
  bool empty(const std::string& key) const { return text(key).empty(); }
  double number(const std::string& key) const;
  int integer(const std::string& key) const;
  std::uint64_t seed() const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<int> integers(const std::string& key) const;

  /// Every key with its resolved value, in the fixed key order.
  std::string resolved() const;

 private:
  std::map<std::string, std::string> values_;
};

}  // namespace aniso
