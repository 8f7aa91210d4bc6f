#include "aniso/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "aniso/error.hpp"

namespace aniso {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void expect_tag(std::istream& is, const char* tag) {
  std::string t;
  if (!(is >> t) || t != tag) {
    throw Error(ErrorKind::Io, std::string("field header: expected '") + tag + "'");
  }
}

}  // namespace

void write_field(std::ostream& os, const GridField& f) {
  const Grid& g = f.grid();
  os << "dim " << g.dim() << " res";
  for (int a = 0; a < g.dim(); ++a) os << ' ' << g.res(a);
  os << " lo";
  for (int a = 0; a < g.dim(); ++a) os << ' ' << fmt(g.lo(a));
  os << " hi";
  for (int a = 0; a < g.dim(); ++a) os << ' ' << fmt(g.hi(a));
  os << '\n';
  for (double v : f.values()) os << fmt(v) << '\n';
}

GridField read_field(std::istream& is) {
  std::string header;
  if (!std::getline(is, header)) throw Error(ErrorKind::Io, "field file is empty");
  std::istringstream hs(header);
  int dim = 0;
  expect_tag(hs, "dim");
  if (!(hs >> dim) || dim < 1 || dim > kMaxDim) throw Error(ErrorKind::Io, "field header: bad dim");
  std::vector<int> res(dim);
  std::vector<double> lo(dim), hi(dim);
  expect_tag(hs, "res");
  for (auto& r : res) {
    if (!(hs >> r)) throw Error(ErrorKind::Io, "field header: bad res");
  }
  expect_tag(hs, "lo");
  for (auto& v : lo) {
    if (!(hs >> v)) throw Error(ErrorKind::Io, "field header: bad lo");
  }
  expect_tag(hs, "hi");
  for (auto& v : hi) {
    if (!(hs >> v)) throw Error(ErrorKind::Io, "field header: bad hi");
  }
  Grid g(lo, hi, res);
  std::vector<double> values(g.node_count());
  for (auto& v : values) {
    if (!(is >> v)) throw Error(ErrorKind::Io, "field file: too few values");
  }
  double extra = 0.0;
  if (is >> extra) throw Error(ErrorKind::Io, "field file: trailing values");
  return GridField(std::move(g), std::move(values));
}

void save_field(const std::string& path, const GridField& f) {
  std::ofstream os(path);
  if (!os) throw Error(ErrorKind::Io, "cannot open " + path + " for writing");
  write_field(os, f);
  if (!os) throw Error(ErrorKind::Io, "write failed: " + path);
}

GridField load_field(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(ErrorKind::Io, "cannot open " + path);
  return read_field(is);
}

void write_field_csv(std::ostream& os, const GridField& f) {
  const Grid& g = f.grid();
  for (int a = 0; a < g.dim(); ++a) os << 'x' << (a + 1) << ',';
  os << "value\n";
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto x = g.position(i);
    for (int a = 0; a < g.dim(); ++a) os << fmt(x[a]) << ',';
    os << fmt(f[i]) << '\n';
  }
}

}  // namespace aniso
