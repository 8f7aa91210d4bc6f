#include "aniso/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include "aniso/field_io.hpp"
#include "aniso/reports.hpp"

namespace aniso {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonConvergence: return kExitNonConvergence;
    case ErrorKind::HypothesisNotApplicable: return kExitNotApplicable;
    case ErrorKind::HypothesisViolated:
    case ErrorKind::PropertyViolation: return kExitPropertyViolation;
    default: return kExitValidation;
  }
}

namespace {

ExponentData exponents_from(const RunConfig& cfg) {
  std::vector<double> p = cfg.numbers("p");
  require(!p.empty(), ErrorKind::InvalidInput, "config key 'p' is empty");
  return ExponentData::from(std::move(p));
}

ProblemSpec spec_from(const RunConfig& cfg, ExponentData e) {
  const std::string& kind = cfg.text("problem");
  const double floor = cfg.number("weight.floor");
  if (kind == "mixed") {
    const double delta = cfg.number("delta");
    const double gamma = cfg.empty("gamma") ? delta : cfg.number("gamma");
    return ProblemSpec::mixed_power(std::move(e), delta, gamma, floor);
  }
  if (kind == "exp") return ProblemSpec::exp_singular(std::move(e), cfg.number("M"), floor);
  throw Error(ErrorKind::InvalidInput, "problem must be 'mixed' or 'exp'");
}

template <class T>
std::vector<T> broadcast(std::vector<T> v, int N, const char* key) {
  if (v.size() == 1) v.assign(N, v.front());
  require(static_cast<int>(v.size()) == N, ErrorKind::InvalidInput,
          std::string("config key '") + key + "' needs 1 or N entries");
  return v;
}

Grid grid_from(const RunConfig& cfg, int N) {
  const auto lo = broadcast(cfg.numbers("grid.lo"), N, "grid.lo");
  const auto hi = broadcast(cfg.numbers("grid.hi"), N, "grid.hi");
  const auto res = broadcast(cfg.integers("grid.res"), N, "grid.res");
  return Grid(lo, hi, res);
}

std::array<double, kMaxDim> box_center(const Grid& g) {
  std::array<double, kMaxDim> c{};
  for (int a = 0; a < g.dim(); ++a) c[a] = 0.5 * (g.lo(a) + g.hi(a));
  return c;
}

WeightSpec weight_from(const RunConfig& cfg, const Grid& g) {
  const std::string& kind = cfg.text("weight.kind");
  const double m = cfg.number("weight.m");
  if (kind == "constant") {
    WeightSpec w = WeightSpec::constant(g, cfg.number("weight.c"));
    w.m = m;
    return w;
  }
  if (kind == "radial") {
    std::array<double, kMaxDim> c = box_center(g);
    if (!cfg.empty("weight.center")) {
      const auto v = broadcast(cfg.numbers("weight.center"), g.dim(), "weight.center");
      for (int a = 0; a < g.dim(); ++a) c[a] = v[a];
    }
    return WeightSpec::radial_power(g, cfg.number("weight.s"), c, m);
  }
  if (kind == "file") {
    GridField f = load_field(cfg.text("weight.path"));
    require(f.grid() == g, ErrorKind::InvalidInput, "weight file grid differs from the configured grid");
    return WeightSpec(std::move(f), m);
  }
  throw Error(ErrorKind::InvalidInput, "weight.kind must be constant, radial or file");
}

GridField u_from(const RunConfig& cfg, const Grid& g) {
  const std::string& kind = cfg.text("u.kind");
  if (kind == "constant") return GridField(g, cfg.number("u.value"));
  if (kind == "file") {
    GridField f = load_field(cfg.text("u.path"));
    require(f.grid() == g, ErrorKind::InvalidInput, "u file grid differs from the configured grid");
    return f;
  }
  throw Error(ErrorKind::InvalidInput, "u.kind must be constant or file");
}

class Outputs {
 public:
  explicit Outputs(const RunConfig& cfg) : dir_(cfg.text("out")) {
    if (dir_.empty()) return;
    fs::create_directories(dir_);
    write("config.resolved", cfg.resolved());
  }
  void write(const std::string& name, const std::string& content) const {
    if (dir_.empty()) return;
    std::ofstream os(fs::path(dir_) / name);
    if (!os) throw Error(ErrorKind::Io, "cannot write " + (fs::path(dir_) / name).string());
    os << content;
  }
  void field(const std::string& stem, const GridField& f) const {
    if (dir_.empty()) return;
    save_field((fs::path(dir_) / (stem + ".txt")).string(), f);
    std::ofstream os(fs::path(dir_) / (stem + ".csv"));
    write_field_csv(os, f);
  }

 private:
  std::string dir_;
};

void emit(const json& j, const std::string& name, const Outputs& o, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  out << text;
  o.write(name, text);
}

int cmd_thresholds(const RunConfig& cfg, std::ostream& out) {
  ExponentData e = exponents_from(cfg);
  const ProblemSpec spec = spec_from(cfg, e);
  const Outputs o(cfg);
  json j = to_json(region_memberships(spec));
  const json extra = to_json(integrability_thresholds(e));
  for (const auto& [k, v] : extra.items()) j[k] = v;
  emit(j, "thresholds.json", o, out);
  return kExitOk;
}

int cmd_truncation(const RunConfig& cfg, std::ostream& out) {
  const ExponentData e = exponents_from(cfg);
  const TruncationPair tp(cfg.integer("truncation.k"), cfg.number("truncation.alpha"));
  const auto samples = default_samples(tp, static_cast<std::size_t>(cfg.integer("truncation.samples")),
                                       cfg.number("truncation.tmax"));
  const TruncationReport rep = verify_properties(tp, samples, e.p);
  const Outputs o(cfg);
  json j = to_json(rep);
  j["admissibleForP"] = tp.admissible_for(e.p_max());
  emit(j, "truncation.json", o, out);
  return rep.all_pass() ? kExitOk : kExitPropertyViolation;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const ExponentData e = exponents_from(cfg);
  if (e.pstar) {
    require(*e.pstar >= e.p_max(), ErrorKind::InvalidInput,
            "existence runs need pstar >= p_N when pbar < N");
  }
  const Grid g = grid_from(cfg, e.N);
  const WeightSpec w = weight_from(cfg, g);
  LadderOptions opt;
  opt.nMax = cfg.integer("solve.nMax");
  opt.weakTests = cfg.integer("solve.weakTests");
  opt.seed = cfg.seed();
  opt.level.tolFix = cfg.number("tol.fix");
  opt.level.inner.tol = cfg.number("tol.inner");
  const std::string& strat = cfg.text("solve.strategy");
  if (strat == "newton") {
    opt.level.strategy = LevelStrategy::ConvexNewton;
  } else if (strat == "fixed-point") {
    opt.level.strategy = LevelStrategy::FixedPoint;
  } else {
    throw Error(ErrorKind::InvalidInput, "solve.strategy must be newton or fixed-point");
  }
  const Outputs o(cfg);
  const LadderReport rep = run_ladder(w, e, opt);
  if (rep.limit) o.field("u_limit", *rep.limit);
  emit(to_json(rep), "ladder.json", o, out);
  if (rep.failedLevel) return exit_code_for(rep.failureKind.value_or(ErrorKind::NonConvergence));
  return kExitOk;
}

int cmd_stability(const RunConfig& cfg, std::ostream& out) {
  const ExponentData e = exponents_from(cfg);
  const ProblemSpec spec = spec_from(cfg, e);
  const Grid g = grid_from(cfg, e.N);
  const WeightSpec w = weight_from(cfg, g);
  const GridField u = u_from(cfg, g);
  const std::string& v = cfg.text("stability.variant");
  StabilityVariant variant;
  if (v == "weighted") {
    variant = StabilityVariant::WeightedByG;
  } else if (v == "as-written") {
    variant = StabilityVariant::AsWritten;
  } else {
    throw Error(ErrorKind::InvalidInput, "stability.variant must be weighted or as-written");
  }
  StabilityOptions sopt;
  sopt.tol = cfg.number("tol.eigen");
  sopt.maxIter = cfg.integer("eigen.maxIter");
  const auto forms = StabilityForms::from_solution(u, NonlinearityEval::from(spec), w.g, e, variant);
  const StabilityReport rep = stability_index(forms, sopt);
  const Outputs o(cfg);
  json j = to_json(rep);
  j["variant"] = std::string(to_string(variant));
  if (rep.eigenvector) o.field("stability_mode", *rep.eigenvector);
  emit(j, "stability.json", o, out);
  return kExitOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  const ExponentData e = exponents_from(cfg);
  const ProblemSpec spec = spec_from(cfg, e);
  const std::vector<double> radii = cfg.numbers("sweep.radii");
  require(!radii.empty(), ErrorKind::InvalidInput, "sweep needs sweep.radii");
  const Grid g = grid_from(cfg, e.N);
  const WeightSpec w = weight_from(cfg, g);
  const GridField u = u_from(cfg, g);
  const Outputs o(cfg);
  const NonexistenceCertificate cert =
      nonexistence_certificate(spec, u, w.g, cfg.number("sweep.C"), radii);
  o.write("sweep.csv", sweep_csv(cert.sweep));
  emit(to_json(cert), "certificate.json", o, out);
  return kExitOk;
}

}  // namespace

int run(const std::string& subcommand, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (subcommand == "thresholds") return cmd_thresholds(cfg, out);
    if (subcommand == "truncation-check") return cmd_truncation(cfg, out);
    if (subcommand == "solve") return cmd_solve(cfg, out);
    if (subcommand == "stability") return cmd_stability(cfg, out);
    if (subcommand == "sweep") return cmd_sweep(cfg, out);
    err << "unknown subcommand '" << subcommand << "'\n";
    return kExitValidation;
  } catch (const NonConvergenceError& ex) {
    err << ex.what() << " (last residual " << ex.last_residual() << ", iterations "
        << ex.iterations() << ")\n";
    return kExitNonConvergence;
  } catch (const Error& ex) {
    err << ex.what() << '\n';
    return exit_code_for(ex.kind());
  } catch (const fs::filesystem_error& ex) {
    err << "io: " << ex.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace aniso
