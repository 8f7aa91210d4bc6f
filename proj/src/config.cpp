#include "aniso/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "aniso/error.hpp"

namespace aniso {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& tok) {
  const std::string t = trim(tok);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || std::isnan(v)) {
    throw Error(ErrorKind::InvalidInput, "config key '" + key + "': '" + t + "' is not a number");
  }
  return v;
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& RunConfig::defaults() {
  static const std::vector<std::pair<std::string, std::string>> table = {
      {"p", "2, 3, 4"},
      {"problem", "mixed"},  // mixed | exp
      {"delta", "10"},
      {"gamma", ""},         // empty: gamma = delta
      {"M", "0.2"},
      {"weight.floor", "1"},
      {"grid.lo", "0"},
      {"grid.hi", "1"},
      {"grid.res", "64"},
      {"weight.kind", "constant"},  // constant | radial | file
      {"weight.c", "1"},
      {"weight.s", "0"},
      {"weight.center", ""},        // empty: box center
      {"weight.path", ""},
      {"weight.m", "inf"},
      {"tol.inner", "0"},           // 0: 1e-10 when all p_i = 2, else 1e-8
      {"tol.fix", "1e-8"},
      {"tol.eigen", "1e-10"},
      {"eigen.maxIter", "5000"},
      {"solve.nMax", "6"},
      {"solve.strategy", "newton"},  // newton | fixed-point
      {"solve.weakTests", "20"},
      {"truncation.k", "2"},
      {"truncation.alpha", "3"},
      {"truncation.samples", "1000"},
      {"truncation.tmax", "1e6"},
      {"stability.variant", "weighted"},  // weighted | as-written
      {"u.kind", "constant"},             // constant | file
      {"u.value", "1"},
      {"u.path", ""},
      {"sweep.radii", ""},
      {"sweep.C", "1"},
      {"out", ""},
      {"seed", "12345"},
  };
  return table;
}

RunConfig::RunConfig() {
  for (const auto& [k, v] : defaults()) values_[k] = v;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  const std::string k = trim(key);
  if (!is_known(k)) throw Error(ErrorKind::InvalidInput, "unknown config key '" + k + "'");
  values_[k] = trim(value);
}

RunConfig RunConfig::parse(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::InvalidInput,
                  "config line " + std::to_string(lineno) + ": expected key = value");
    }
    cfg.set(line.substr(0, eq), line.substr(eq + 1));
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::Io, "cannot open config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse(ss.str());
}

const std::string& RunConfig::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw Error(ErrorKind::InvalidInput, "unknown config key '" + key + "'");
  return it->second;
}

double RunConfig::number(const std::string& key) const { return to_double(key, text(key)); }

int RunConfig::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw Error(ErrorKind::InvalidInput, "config key '" + key + "' must be an integer");
  }
  return static_cast<int>(v);
}

std::uint64_t RunConfig::seed() const {
  const std::string& t = text("seed");
  char* end = nullptr;
  const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size()) {
    throw Error(ErrorKind::InvalidInput, "config key 'seed' must be a nonnegative integer");
  }
  return v;
}

std::vector<double> RunConfig::numbers(const std::string& key) const {
  std::vector<double> out;
  if (empty(key)) return out;
  for (const auto& tok : split(text(key))) out.push_back(to_double(key, tok));
  return out;
}

std::vector<int> RunConfig::integers(const std::string& key) const {
  std::vector<int> out;
  for (double v : numbers(key)) {
    if (v != std::floor(v) || std::abs(v) > 1e9) {
      throw Error(ErrorKind::InvalidInput, "config key '" + key + "' must hold integers");
    }
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::string RunConfig::resolved() const {
  std::ostringstream os;
  for (const auto& [k, unused] : defaults()) os << k << " = " << values_.at(k) << '\n';
  return os.str();
}

}  // namespace aniso
