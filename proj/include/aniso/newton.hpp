#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "aniso/exponents.hpp"
#include "aniso/grid.hpp"

namespace aniso {

/// Pointwise source s(x_n, u) on the right of -div(flux) = s. Convexity of
/// the energy needs s non-increasing in u, i.e. slope <= 0.
struct SourceTerm {
  std::function<double(std::size_t node, double u)> value;
  std::function<double(std::size_t node, double u)> slope;
  /// int_a^b s(x_n, t) dt
  std::function<double(std::size_t node, double a, double b)> integral;

  /// s(x_n, u) = rhs[n], independent of u.
  static SourceTerm fixed(const GridField& rhs);
};

struct NewtonOptions {
  double tol = 1e-10;   // on sup |plap(u) - s(u)| over interior nodes
  int maxIter = 10000;
};

struct NewtonResult {
  GridField u;
  int iterations = 0;
  double residual = 0.0;
  std::vector<double> energy;  // energy of every iterate, starting guess first
};

/// Energy J(u) = sum_i (1/p_i) int |D_i u|^{p_i} - int S(x, u), S' = s.
double source_energy(const GridField& u, const ExponentData& e, const SourceTerm& s);

/// sup over interior nodes of |plap(u) - s(u)|.
double pde_residual(const GridField& u, const ExponentData& e, const SourceTerm& s);

/// Damped Newton for the convex energy above with zero Dirichlet data. Steps
/// are accepted by an Armijo test on energy differences; when round-off
/// makes that test meaningless, a step that lowers the residual is taken.
/// Throws NonConvergenceError when the cap is hit or no step makes progress.
NewtonResult minimize_convex(const ExponentData& e, const SourceTerm& s, GridField initial,
                             const NewtonOptions& opt);

}  // namespace aniso
