#pragma once

#include <cstddef>

#include "aniso/grid.hpp"

namespace aniso::detail {

// Calls fn(face, lower_node, upper_node, i_axis) for every face normal to
// `axis`, in face-index order.
template <class Fn>
void for_each_face(const Grid& g, int axis, Fn&& fn) {
  const std::size_t inner = g.stride(axis);
  const std::size_t n_axis = static_cast<std::size_t>(g.nodes(axis));
  const std::size_t r_axis = static_cast<std::size_t>(g.res(axis));
  const std::size_t outer = g.node_count() / (n_axis * inner);
  std::size_t f = 0;
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t i = 0; i < r_axis; ++i) {
      const std::size_t base = (o * n_axis + i) * inner;
      for (std::size_t r = 0; r < inner; ++r, ++f) fn(f, base + r, base + r + inner, i);
    }
  }
}

}  // namespace aniso::detail
