#include "engel/steering.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "engel/errors.hpp"

namespace engel {

namespace {

const StratifiedAlgebra& alg() { return engel_algebra(); }

// Symbolic endpoint maps, derived once by exact rational quadrature of the
// family ODEs. Base family variables: (a, b, c, d1, d2, d3); extended family
// variables: (a, b, c1, c2, d1, d2, d3, d4).
struct SymbolicFamily {
  std::vector<MultiPoly> boundary;                 // constraint values
  std::vector<std::vector<MultiPoly>> jacobian;    // d boundary / d param
  int first_param;                                 // index of first free var
};

ParamPolyInT poly_in_t(int nvars, const std::vector<int>& var_per_degree) {
  std::vector<MultiPoly> coeffs;
  coeffs.reserve(var_per_degree.size());
  for (int v : var_per_degree)
    coeffs.push_back(v < 0 ? MultiPoly(nvars) : MultiPoly::variable(nvars, v));
  return ParamPolyInT(std::move(coeffs));
}

SymbolicFamily derive_family(int nvars, const std::vector<int>& u1_vars,
                             const std::vector<int>& u2_vars, bool with_end_deriv) {
  ParamPolyInT u1 = poly_in_t(nvars, u1_vars);
  ParamPolyInT u2 = poly_in_t(nvars, u2_vars);
  ParamPolyInT x1 = u1.antiderivative();
  ParamPolyInT x2 = u2.antiderivative();
  ParamPolyInT x3 = (x1 * u2).antiderivative();
  ParamPolyInT x4 = (x1 * x1 * u2).antiderivative() * Rational(1, 2);

  SymbolicFamily fam;
  fam.first_param = 2;
  fam.boundary = {x1.at_one(), x2.at_one(), x3.at_one(), x4.at_one()};
  if (with_end_deriv) {
    fam.boundary.push_back(u1.at_one());
    fam.boundary.push_back(u2.at_one());
  }
  for (const auto& g : fam.boundary) {
    std::vector<MultiPoly> row;
    for (int v = 2; v < nvars; ++v) row.push_back(g.partial(v));
    fam.jacobian.push_back(std::move(row));
  }
  return fam;
}

const SymbolicFamily& base_family() {
  // vars: a=0, b=1, c=2, d1=3, d2=4, d3=5
  static const SymbolicFamily fam = derive_family(6, {0, 2}, {1, 3, 4, 5}, false);
  return fam;
}

const SymbolicFamily& extended_family() {
  // vars: a=0, b=1, c1=2, c2=3, d1=4, d2=5, d3=6, d4=7
  static const SymbolicFamily fam = derive_family(8, {0, 2, 3}, {1, 4, 5, 6, 7}, true);
  return fam;
}

void require_nonsingular(double a, double a_min) {
  if (std::abs(a) <= a_min)
    throw Error(ErrorCode::SingularDirection,
                "start direction lies in span(X2); steering Jacobian is singular (|a| <= " +
                    std::to_string(a_min) + ")");
}

void require_second(const GroupPoint& target) {
  if (target.kind != CoordKind::SecondExp)
    throw Error(ErrorCode::KindMismatch, "steering targets must be SecondExp");
  if (target.coords.size() != 4)
    throw Error(ErrorCode::DimensionMismatch, "steering targets must have 4 coordinates");
  for (double v : target.coords)
    if (!std::isfinite(v))
      throw Error(ErrorCode::InvalidArgument, "non-finite steering target");
}

SampledCurve sample_solution(const ControlPair& controls, int grid) {
  return lift(controls, GroupPoint::identity(4, CoordKind::SecondExp),
              uniform_grid(0.0, 1.0, grid));
}

// Shared damped-Newton driver over an N-constraint boundary map.
template <int N>
SteeringSolution newton_solve(
    const SymbolicFamily& sym, std::vector<double> vars, const std::array<double, N>& target,
    const std::function<double(const std::vector<double>&)>& metric_residual, double tol,
    int max_iter, const std::function<SteeringSolution(const std::vector<double>&, double, int)>& finish) {
  const int first = sym.first_param;
  double res = metric_residual(vars);
  int iter = 0;
  while (res >= tol && iter < max_iter) {
    Eigen::Matrix<double, N, N> J;
    Eigen::Matrix<double, N, 1> r;
    for (int i = 0; i < N; ++i) {
      r(i) = sym.boundary[i].eval(vars) - target[i];
      for (int j = 0; j < N; ++j) J(i, j) = sym.jacobian[i][j].eval(vars);
    }
    Eigen::Matrix<double, N, 1> step = J.partialPivLu().solve(-r);
    double scale = 1.0;
    std::vector<double> trial = vars;
    double trial_res = res;
    for (int halving = 0; halving <= 30; ++halving) {
      trial = vars;
      for (int j = 0; j < N; ++j) trial[first + j] += scale * step(j);
      trial_res = metric_residual(trial);
      if (trial_res < res) break;
      scale *= 0.5;
    }
    if (!(trial_res < res)) break;  // stalled
    vars = trial;
    res = trial_res;
    ++iter;
  }
  if (res >= tol) {
    std::ostringstream msg;
    msg << "Newton did not reach tolerance " << tol << " after " << iter
        << " iterations; best residual " << res;
    throw Error(ErrorCode::NoConvergence, msg.str());
  }
  return finish(vars, res, iter);
}

}  // namespace

ControlPair SteeringFamily::controls() const {
  return ControlPair::polynomial(Poly({a, params[0]}),
                                 Poly({b, params[1], params[2], params[3]}), 0.0, 1.0);
}

ControlPair ExtendedSteeringFamily::controls() const {
  return ControlPair::polynomial(
      Poly({a, params[0], params[1]}),
      Poly({b, params[2], params[3], params[4], params[5]}), 0.0, 1.0);
}

GroupPoint endpoint_map(const SteeringFamily& fam) {
  const auto& sym = base_family();
  std::vector<double> vars = {fam.a, fam.b, fam.params[0], fam.params[1], fam.params[2],
                              fam.params[3]};
  std::vector<double> coords(4);
  for (int i = 0; i < 4; ++i) coords[i] = sym.boundary[i].eval(vars);
  return {coords, CoordKind::SecondExp};
}

std::array<std::array<double, 4>, 4> endpoint_jacobian(const SteeringFamily& fam) {
  const auto& sym = base_family();
  std::vector<double> vars = {fam.a, fam.b, fam.params[0], fam.params[1], fam.params[2],
                              fam.params[3]};
  std::array<std::array<double, 4>, 4> J;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) J[i][j] = sym.jacobian[i][j].eval(vars);
  return J;
}

std::array<std::array<double, 4>, 4> endpoint_jacobian_zero(double a, double b) {
  return {{{0.5, 0.0, 0.0, 0.0},
           {0.0, 0.5, 1.0 / 3.0, 0.25},
           {b / 6.0, a / 3.0, a / 4.0, a / 5.0},
           {a * b / 8.0, a * a / 8.0, a * a / 10.0, a * a / 12.0}}};
}

std::array<double, 6> extended_boundary_map(const ExtendedSteeringFamily& fam) {
  const auto& sym = extended_family();
  std::vector<double> vars = {fam.a, fam.b, fam.params[0], fam.params[1], fam.params[2],
                              fam.params[3], fam.params[4], fam.params[5]};
  std::array<double, 6> out;
  for (int i = 0; i < 6; ++i) out[i] = sym.boundary[i].eval(vars);
  return out;
}

std::array<std::array<double, 6>, 6> extended_boundary_jacobian(
    const ExtendedSteeringFamily& fam) {
  const auto& sym = extended_family();
  std::vector<double> vars = {fam.a, fam.b, fam.params[0], fam.params[1], fam.params[2],
                              fam.params[3], fam.params[4], fam.params[5]};
  std::array<std::array<double, 6>, 6> J;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) J[i][j] = sym.jacobian[i][j].eval(vars);
  return J;
}

SteeringSolution steer_position(double a, double b, const GroupPoint& target, double tol,
                                int max_iter, double a_min, int grid) {
  require_nonsingular(a, a_min);
  require_second(target);
  const auto& sym = base_family();
  std::array<double, 4> tgt = {target.coords[0], target.coords[1], target.coords[2],
                               target.coords[3]};
  // Euclidean residual in coordinates. The homogeneous box distance is
  // unusable as a Newton stopping rule: its cube-root layer weight turns a
  // one-ulp x4 mismatch into ~1e-6, so no double-precision iterate could
  // ever reach tolerances like 1e-10.
  auto metric = [&](const std::vector<double>& vars) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
      double d = sym.boundary[i].eval(vars) - tgt[i];
      s += d * d;
    }
    return std::sqrt(s);
  };
  auto finish = [&](const std::vector<double>& vars, double res, int iter) {
    SteeringSolution sol;
    sol.extended = false;
    sol.family = {a, b, {vars[2], vars[3], vars[4], vars[5]}};
    sol.residual = res;
    sol.iterations = iter;
    sol.curve = sample_solution(sol.family.controls(), grid);
    return sol;
  };
  return newton_solve<4>(sym, {a, b, 0.0, 0.0, 0.0, 0.0}, tgt, metric, tol, max_iter,
                         finish);
}

SteeringSolution steer_full(double a, double b, std::array<double, 2> end_deriv,
                            const GroupPoint& target, double tol, int max_iter,
                            double a_min, int grid) {
  require_nonsingular(a, a_min);
  require_second(target);
  if (!std::isfinite(end_deriv[0]) || !std::isfinite(end_deriv[1]))
    throw Error(ErrorCode::InvalidArgument, "non-finite end derivative");
  const auto& sym = extended_family();
  std::array<double, 6> tgt = {target.coords[0], target.coords[1], target.coords[2],
                               target.coords[3], end_deriv[0], end_deriv[1]};
  // Euclidean residual over all six constraints (see steer_position for why
  // the box distance cannot serve as the stopping rule).
  auto metric = [&](const std::vector<double>& vars) {
    double s = 0.0;
    for (int i = 0; i < 6; ++i) {
      double d = sym.boundary[i].eval(vars) - tgt[i];
      s += d * d;
    }
    return std::sqrt(s);
  };
  auto finish = [&](const std::vector<double>& vars, double res, int iter) {
    SteeringSolution sol;
    sol.extended = true;
    sol.ext_family = {a, b, {vars[2], vars[3], vars[4], vars[5], vars[6], vars[7]}};
    sol.residual = res;
    sol.iterations = iter;
    sol.curve = sample_solution(sol.ext_family.controls(), grid);
    return sol;
  };
  return newton_solve<6>(sym, {a, b, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0}, tgt, metric, tol,
                         max_iter, finish);
}

SampledCurve preroll(double rho, std::array<double, 2> W, std::array<double, 2> Y0,
                     int grid) {
  if (!(rho > 0.0 && rho < 1.0))
    throw Error(ErrorCode::InvalidArgument, "preroll requires rho in (0,1)");
  // u(t) = W + (t/rho)(Y0 - W) on [0, rho].
  ControlPair controls = ControlPair::polynomial(
      Poly({W[0], (Y0[0] - W[0]) / rho}), Poly({W[1], (Y0[1] - W[1]) / rho}), 0.0, rho);
  return lift(controls, GroupPoint::identity(4, CoordKind::SecondExp),
              uniform_grid(0.0, rho, grid));
}

SampledCurve concat_scaled(const GroupPoint& x_rho, double rho, const SampledCurve& inner) {
  if (rho < 0.0 || rho >= 1.0)
    throw Error(ErrorCode::InvalidArgument, "concat_scaled requires rho in [0,1)");
  if (inner.times.empty()) throw Error(ErrorCode::InvalidArgument, "empty inner curve");
  GroupPoint base = x_rho.kind == CoordKind::SecondExp ? x_rho : first_to_second(x_rho);
  SampledCurve out;
  out.times.resize(inner.times.size());
  out.points.resize(inner.times.size());
  out.derivs = inner.derivs;
  for (size_t i = 0; i < inner.times.size(); ++i) {
    out.times[i] = rho + (1.0 - rho) * inner.times[i];
    GroupPoint p = inner.point(i);
    if (rho > 0.0) p = dilate(1.0 - rho, p, alg());
    p = group_mul(base, p, alg());
    out.points[i] = {p.coords[0], p.coords[1], p.coords[2], p.coords[3]};
  }
  return out;
}

ObstructionReport x2_obstruction_probe(double b, int trials, std::uint64_t seed) {
  if (b == 0.0) throw Error(ErrorCode::InvalidArgument, "probe requires b != 0");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_real_distribution<double> radius(0.05, 0.95);
  ObstructionReport report;
  report.trials = trials;
  report.min_abs_gamma4 = std::numeric_limits<double>::infinity();
  const double half_b = 0.5 * std::abs(b);
  for (int t = 0; t < trials; ++t) {
    std::array<double, 4> p, q;
    double sp = 0.0, sq = 0.0;
    for (int k = 0; k < 4; ++k) {
      p[k] = coeff(rng);
      q[k] = coeff(rng);
      sp += std::abs(p[k]);
      sq += std::abs(q[k]);
    }
    // sup_t |(p(t), q(t))| <= hypot(sum|p_k|, sum|q_k|) on [0,1]; scale the
    // coefficients so the perturbation stays strictly inside the |b|/2 ball.
    double bound = std::hypot(sp, sq);
    double f = bound > 0.0 ? radius(rng) * half_b / bound : 0.0;
    ControlPair controls = ControlPair::polynomial(
        Poly({f * p[0], f * p[1], f * p[2], f * p[3]}),
        Poly({b + f * q[0], f * q[1], f * q[2], f * q[3]}), 0.0, 1.0);
    LiftedPolys L = lift_poly(controls, GroupPoint::identity(4, CoordKind::SecondExp));
    double g4 = L.x4(1.0);
    report.min_abs_gamma4 = std::min(report.min_abs_gamma4, std::abs(g4));
    if (g4 * b <= 0.0) ++report.violations;
  }
  if (trials == 0) report.min_abs_gamma4 = 0.0;
  return report;
}

}  // namespace engel
