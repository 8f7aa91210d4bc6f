#pragma once

#include <iosfwd>
#include <string>

#include "aniso/grid.hpp"

namespace aniso {

/// Plain-text snapshot: one header line
///   `dim <N> res <r_1..r_N> lo <lo_1..lo_N> hi <hi_1..hi_N>`
/// followed by the node values in row-major order, one per line, %.17g.
void write_field(std::ostream& os, const GridField& f);
GridField read_field(std::istream& is);

void save_field(const std::string& path, const GridField& f);
GridField load_field(const std::string& path);

/// CSV with columns x_1..x_N,value.
void write_field_csv(std::ostream& os, const GridField& f);

}  // namespace aniso
