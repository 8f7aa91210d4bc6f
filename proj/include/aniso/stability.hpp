#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "aniso/exponents.hpp"
#include "aniso/grid.hpp"
#include "aniso/truncations.hpp"

namespace aniso {

/// f and f' of the nonlinearity; both require u > 0.
struct NonlinearityEval {
  std::variant<MixedPower, ExpSingular> kind;

  static NonlinearityEval from(const ProblemSpec& spec) { return {spec.kind}; }

  /// -u^{-delta} - u^{-gamma}, or -e^{1/u}.
  double f(double u) const;
  /// delta u^{-delta-1} + gamma u^{-gamma-1}, or e^{1/u}/u^2.
  double fprime(double u) const;
};

enum class StabilityVariant { AsWritten, WeightedByG };
std::string_view to_string(StabilityVariant v);

/// sum_i int |D_i u|^{p_i-2} D_i u D_i phi - int g f(u) phi. phi must vanish
/// on the boundary; u must be positive wherever phi is nonzero.
double weak_residual(const GridField& u, const GridField& phi, const NonlinearityEval& nl,
                     const GridField& g, const ExponentData& e);

/// The two quadratic forms of the stability inequality, frozen at u:
/// K(phi) = sum_i (p_i-1) int |D_i u|^{p_i-2} |D_i phi|^2 and
/// V(phi) = int W f'(u) phi^2 with W = 1 or g.
class StabilityForms {
 public:
  static StabilityForms from_solution(const GridField& u, const NonlinearityEval& nl,
                                      const GridField& g, const ExponentData& e,
                                      StabilityVariant variant);
  /// Face weights from u as above, but an explicit nodal potential in place
  /// of W f'(u).
  static StabilityForms from_potential(const GridField& u, const ExponentData& e,
                                       GridField potential);

  const Grid& grid() const { return potential_.grid(); }
  const std::vector<FaceField>& face_weights() const { return weights_; }
  const GridField& potential() const { return potential_; }

  double kinetic(const GridField& phi) const;
  double potential_form(const GridField& phi) const;
  /// K(phi) - V(phi).
  double gap(const GridField& phi) const { return kinetic(phi) - potential_form(phi); }

 private:
  StabilityForms(std::vector<FaceField> w, GridField v)
      : weights_(std::move(w)), potential_(std::move(v)) {}
  std::vector<FaceField> weights_;
  GridField potential_;
};

double stability_gap(const GridField& u, const GridField& phi, const NonlinearityEval& nl,
                     const GridField& g, const ExponentData& e, StabilityVariant variant);

struct StabilityOptions {
  double tol = 1e-10;
  int maxIter = 5000;
};

struct StabilityReport {
  /// min over the family of (K - V)(phi) / V(phi); in eigen mode this is
  /// mu_min - 1 with mu_min the smallest eigenvalue of K phi = mu V phi.
  /// +inf when V vanishes identically.
  double index = 0.0;
  double muMin = 0.0;
  bool stable = true;  // index >= 0
  double gap = 0.0;    // K - V at the minimizer, normalized to V(phi) = 1
  int iterations = 0;
  double shift = 0.0;  // 0, or -1 when K is singular
  std::string minimizer;  // "eigenvector" or "family[i]"
  std::optional<GridField> eigenvector;
};

/// Inverse power iteration on the pencil (K, V) over zero-boundary fields.
StabilityReport stability_index(const StabilityForms& forms, const StabilityOptions& opt = {});
/// Minimum over an explicit list of test functions.
StabilityReport stability_index(const StabilityForms& forms, const std::vector<GridField>& family);
/// mu_min of the same pencil by a dense symmetric-definite eigensolve; K must
/// be positive definite. Meant for grids with at most a few thousand nodes.
double dense_pencil_min_eigenvalue(const StabilityForms& forms);

struct CaccioppoliReport {
  double lhs = 0.0;
  double rhs = 0.0;
  std::optional<double> logLhs;     // corollary mode
  double gradientTerm = 0.0;        // C sum_i int ... (before the constant in corollary mode)
  double nonlinearTerm = 0.0;       // -coef int g f(u) b(u) psi^q
  double coefficient = 0.0;
  double alpha = 0.0;
  double epsilon = 0.0;
  std::optional<double> beta;
  std::optional<int> k;
  double C = 1.0;
  bool rangeSatisfied = true;
  std::string rangeCondition;
  bool satisfied = false;           // lhs <= rhs
  std::optional<double> firstViolatingR;
};

/// ((alpha-1)^2 (N(q-1) + eps)) / (4 alpha (1 - eps)).
double apriori_coefficient(double alpha, double epsilon, const ExponentData& e);

/// Both sides of the a priori estimate with b_k (or the pure power u^{-alpha}
/// when k is empty). The f and f' integrals carry the weight g.
/// Requires alpha > p_N - 1, eps in (0, 1), 0 <= psi <= 1 vanishing on the
/// boundary, and u > 0 on supp psi.
CaccioppoliReport apriori_sides(const GridField& u, const GridField& psi, double alpha,
                                double epsilon, std::optional<int> k, const NonlinearityEval& nl,
                                const GridField& g, const ExponentData& e, double C = 1.0);

/// LHS = int g (psi/u)^E (log-space quadrature), RHS = Cconst sum_i int
/// |D_i psi|^{p_i theta_i'} with the case's exponents. beta must lie in the
/// case window; the range condition on u is reported, not enforced.
CaccioppoliReport corollary_sides(const GridField& u, const GridField& psi, double beta,
                                  const ProblemSpec& spec, CaccioppoliCase c, double Cconst,
                                  const GridField& g);

struct SweepRow {
  double R = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs / rhs
};

struct SweepReport {
  CaccioppoliCase caseUsed = CaccioppoliCase::C5_2_1;
  double beta = 0.0;
  double exponentE = 0.0;
  std::vector<double> decay;
  std::vector<SweepRow> rows;
  std::optional<double> firstViolatingR;
  double lhsSlope = 0.0;    // least-squares log-log slope of lhs(R)
  double ratioSlope = 0.0;  // same for lhs/rhs
};

/// For each R: lhs = int_{B_R} g u^{-E} (cells cut by the sphere are
/// subsampled), rhs = Cconst sum_i R^{N - p_i theta_i'} (a single
/// Cconst R^{N-2beta-q} in the exponential case). Radii must increase and
/// B_{2R} must fit in the grid box.
SweepReport radius_sweep(const GridField& u, const GridField& g, const ProblemSpec& spec,
                         double beta, CaccioppoliCase c, const std::vector<double>& radii,
                         double Cconst = 1.0);

struct NonexistenceCertificate {
  ThresholdReport thresholds;
  BetaSelection beta;
  SweepReport sweep;
  bool rangeSatisfied = true;
  std::string rangeCondition;
  std::string conclusion;
};

/// Refuses (HypothesisNotApplicable) unless a theorem applies.
NonexistenceCertificate nonexistence_certificate(const ProblemSpec& spec, const GridField& u,
                                                 const GridField& g, double Cconst,
                                                 const std::vector<double>& radii);

}  // namespace aniso
