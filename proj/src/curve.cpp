#include "engel/curve.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "engel/errors.hpp"

namespace engel {

namespace {

const StratifiedAlgebra& alg() { return engel_algebra(); }

double interp1(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  size_t i = static_cast<size_t>(it - xs.begin());
  double w = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
  return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

void check_finite(double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite control value");
}

// Antiderivative P of p with P(t0) = c0.
Poly integral_from(const Poly& p, double t0, double c0) {
  Poly a = p.antiderivative();
  return a + Poly::constant(c0 - a(t0));
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
  if (a == b) return 0.0;
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

ControlPair ControlPair::polynomial(Poly u1, Poly u2, double t0, double t1) {
  if (!(t1 > t0)) throw Error(ErrorCode::InvalidArgument, "control domain must be nondegenerate");
  ControlPair c;
  c.poly_ = {std::move(u1), std::move(u2)};
  c.t0_ = t0;
  c.t1_ = t1;
  return c;
}

ControlPair ControlPair::sampled(std::vector<double> times, std::vector<double> u1,
                                 std::vector<double> u2) {
  if (times.size() < 2 || times.size() != u1.size() || times.size() != u2.size())
    throw Error(ErrorCode::InvalidArgument, "sampled controls need matching grids of length >= 2");
  for (size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "control grid must be strictly increasing");
  for (double v : u1) check_finite(v);
  for (double v : u2) check_finite(v);
  ControlPair c;
  c.t0_ = times.front();
  c.t1_ = times.back();
  c.times_ = std::move(times);
  c.u1_ = std::move(u1);
  c.u2_ = std::move(u2);
  return c;
}

std::array<double, 2> ControlPair::eval(double t) const {
  if (poly_) return {poly_->first(t), poly_->second(t)};
  return {interp1(times_, u1_, t), interp1(times_, u2_, t)};
}

std::array<double, 4> SampledCurve::interp(double t) const {
  std::array<double, 4> out;
  if (t <= times.front()) return points.front();
  if (t >= times.back()) return points.back();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  size_t i = static_cast<size_t>(it - times.begin());
  double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
  for (int k = 0; k < 4; ++k) out[k] = points[i - 1][k] + w * (points[i][k] - points[i - 1][k]);
  return out;
}

std::array<double, 2> SampledCurve::interp_deriv(double t) const {
  if (t <= times.front()) return derivs.front();
  if (t >= times.back()) return derivs.back();
  auto it = std::upper_bound(times.begin(), times.end(), t);
  size_t i = static_cast<size_t>(it - times.begin());
  double w = (t - times[i - 1]) / (times[i] - times[i - 1]);
  return {derivs[i - 1][0] + w * (derivs[i][0] - derivs[i - 1][0]),
          derivs[i - 1][1] + w * (derivs[i][1] - derivs[i - 1][1])};
}

LiftedPolys lift_poly(const ControlPair& controls, const GroupPoint& start) {
  if (!controls.is_polynomial())
    throw Error(ErrorCode::InvalidArgument, "lift_poly requires polynomial controls");
  if (start.kind != CoordKind::SecondExp)
    throw Error(ErrorCode::KindMismatch, "lift start point must be SecondExp");
  const double t0 = controls.t0();
  LiftedPolys L;
  L.u1 = controls.u1_poly();
  L.u2 = controls.u2_poly();
  L.x1 = integral_from(L.u1, t0, start.coords[0]);
  L.x2 = integral_from(L.u2, t0, start.coords[1]);
  L.x3 = integral_from(L.x1 * L.u2, t0, start.coords[2]);
  L.x4 = integral_from(L.x1 * L.x1 * L.u2 * 0.5, t0, start.coords[3]);
  return L;
}

std::vector<double> uniform_grid(double t0, double t1, int n) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "grid needs at least 2 points");
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = t0 + (t1 - t0) * static_cast<double>(i) / (n - 1);
  return g;
}

SampledCurve lift(const ControlPair& controls, const GroupPoint& start,
                  const std::vector<double>& grid) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "empty lift grid");
  if (start.kind != CoordKind::SecondExp)
    throw Error(ErrorCode::KindMismatch, "lift start point must be SecondExp");
  SampledCurve out;
  out.times = grid;
  out.points.resize(grid.size());
  out.derivs.resize(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    auto u = controls.eval(grid[i]);
    check_finite(u[0]);
    check_finite(u[1]);
    out.derivs[i] = u;
  }

  if (controls.is_polynomial()) {
    LiftedPolys L = lift_poly(controls, start);
    for (size_t i = 0; i < grid.size(); ++i) out.points[i] = L.eval(grid[i]);
    return out;
  }

  std::array<double, 4> x = {start.coords[0], start.coords[1], start.coords[2], start.coords[3]};
  out.points[0] = x;
  for (size_t i = 1; i < grid.size(); ++i) {
    const double a = grid[i - 1], b = grid[i];
    const double h = b - a, m = 0.5 * (a + b);
    auto ua = controls.eval(a), um = controls.eval(m), ub = controls.eval(b);
    // x1, x2 by Simpson on the controls (exact for piecewise-linear data).
    double x1a = x[0];
    double x1m = x[0] + 0.5 * h * 0.5 * (ua[0] + um[0]);
    double x1b = x[0] + h / 6.0 * (ua[0] + 4.0 * um[0] + ub[0]);
    x[1] += h / 6.0 * (ua[1] + 4.0 * um[1] + ub[1]);
    // Lift ODEs by Simpson with the exact x1 values.
    x[2] += h / 6.0 * (x1a * ua[1] + 4.0 * x1m * um[1] + x1b * ub[1]);
    x[3] += h / 12.0 * (x1a * x1a * ua[1] + 4.0 * x1m * x1m * um[1] + x1b * x1b * ub[1]);
    x[0] = x1b;
    out.points[i] = x;
  }
  return out;
}

double horizontality_residual(const SampledCurve& curve) {
  const size_t n = curve.times.size();
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "residual needs at least 3 grid points");
  double worst = 0.0;
  for (size_t i = 1; i + 1 < n; ++i) {
    double dt = curve.times[i + 1] - curve.times[i - 1];
    double d2 = (curve.points[i + 1][1] - curve.points[i - 1][1]) / dt;
    double d3 = (curve.points[i + 1][2] - curve.points[i - 1][2]) / dt;
    double d4 = (curve.points[i + 1][3] - curve.points[i - 1][3]) / dt;
    double x1 = curve.points[i][0];
    worst = std::max(worst, std::abs(d3 - x1 * d2));
    worst = std::max(worst, std::abs(d4 - 0.5 * x1 * x1 * d2));
  }
  return worst;
}

double curve_length(const ControlPair& controls, double tol) {
  auto speed = [&](double t) {
    auto u = controls.eval(t);
    return std::hypot(u[0], u[1]);
  };
  return integrate(speed, controls.t0(), controls.t1(), tol);
}

double c1h_distance(const SampledCurve& a, const SampledCurve& b) {
  if (a.times.size() != b.times.size())
    throw Error(ErrorCode::GridMismatch, "curves sampled on different grids");
  for (size_t i = 0; i < a.times.size(); ++i)
    if (std::abs(a.times[i] - b.times[i]) > 1e-12)
      throw Error(ErrorCode::GridMismatch, "curves sampled on different grids");
  if (!a.has_derivs() || !b.has_derivs())
    throw Error(ErrorCode::InvalidArgument, "c1h_distance requires derivatives");
  double dp = 0.0, dd = 0.0;
  for (size_t i = 0; i < a.times.size(); ++i) {
    // box_dist of a point against itself carries ~1e-6 cube-root rounding
    // noise; bitwise-equal samples are exactly at distance zero.
    if (a.points[i] != b.points[i])
      dp = std::max(dp, box_dist(a.point(i), b.point(i), alg()));
    dd = std::max(dd, std::hypot(a.derivs[i][0] - b.derivs[i][0],
                                 a.derivs[i][1] - b.derivs[i][1]));
  }
  return std::max(dp, dd);
}

double difference_quotient_sup(const std::vector<double>& times,
                               const std::vector<std::array<double, 4>>& points,
                               const std::vector<std::array<double, 2>>& X,
                               double eta) {
  if (!(eta > 0.0)) throw Error(ErrorCode::InvalidArgument, "eta must be positive");
  if (times.size() != points.size() || times.size() != X.size())
    throw Error(ErrorCode::GridMismatch, "fragment arrays have mismatched lengths");
  for (size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw Error(ErrorCode::InvalidArgument, "times must be strictly increasing");
  const size_t n = times.size();
  double sup = 0.0;
  for (size_t j = 0; j < n; ++j) {  // tau index
    GroupPoint p_tau{{points[j][0], points[j][1], points[j][2], points[j][3]},
                     CoordKind::SecondExp};
    // Times are sorted, so only a contiguous window around j can satisfy
    // |t_i - t_j| < eta.
    size_t lo = j, hi = j;
    while (lo > 0 && times[j] - times[lo - 1] < eta) --lo;
    while (hi + 1 < n && times[hi + 1] - times[j] < eta) ++hi;
    for (size_t i = lo; i <= hi; ++i) {
      double s = times[i] - times[j];
      if (s == 0.0 || std::abs(s) >= eta) continue;
      const double u1 = X[j][0], u2 = X[j][1];
      GroupPoint e{{s * u1, s * u2, 0.5 * s * s * u1 * u2, s * s * s * u1 * u1 * u2 / 6.0},
                   CoordKind::SecondExp};
      GroupPoint pred = group_mul(p_tau, e, alg());
      GroupPoint pt{{points[i][0], points[i][1], points[i][2], points[i][3]},
                    CoordKind::SecondExp};
      sup = std::max(sup, box_dist(pt, pred, alg()) / std::abs(s));
    }
  }
  return sup;
}

ArclengthResult arclength_reparam(const SampledCurve& curve) {
  if (!curve.has_derivs())
    throw Error(ErrorCode::InvalidArgument, "arclength_reparam requires derivatives");
  const size_t n = curve.times.size();
  ArclengthResult out;
  out.F.resize(n, 0.0);
  std::vector<double> speed(n);
  for (size_t i = 0; i < n; ++i) speed[i] = std::hypot(curve.derivs[i][0], curve.derivs[i][1]);
  for (size_t i = 1; i < n; ++i)
    out.F[i] = out.F[i - 1] +
               0.5 * (speed[i] + speed[i - 1]) * (curve.times[i] - curve.times[i - 1]);
  out.total_length = out.F.back();

  out.phi.times = uniform_grid(0.0, std::max(out.total_length, 1.0), static_cast<int>(n));
  out.phi.points.resize(n);
  out.phi.derivs.resize(n);
  if (out.total_length <= 1e-15) {
    out.F.assign(n, 0.0);
    out.total_length = 0.0;
    out.phi.times = uniform_grid(0.0, 1.0, static_cast<int>(n));
    for (size_t i = 0; i < n; ++i) {
      out.phi.points[i] = curve.points.front();
      out.phi.derivs[i] = {0.0, 0.0};
    }
    return out;
  }
  out.phi.times = uniform_grid(0.0, out.total_length, static_cast<int>(n));
  // Invert the nondecreasing F by leftmost preimage.
  size_t k = 0;
  for (size_t j = 0; j < n; ++j) {
    double s = out.phi.times[j];
    while (k + 1 < n && out.F[k + 1] < s) ++k;
    double t;
    if (out.F[k + 1 < n ? k + 1 : k] <= out.F[k] + 1e-300 && k + 1 >= n) {
      t = curve.times[k];
    } else if (k + 1 < n && out.F[k + 1] > out.F[k]) {
      double w = (s - out.F[k]) / (out.F[k + 1] - out.F[k]);
      w = std::clamp(w, 0.0, 1.0);
      t = curve.times[k] + w * (curve.times[k + 1] - curve.times[k]);
    } else {
      t = curve.times[k];
    }
    out.phi.points[j] = curve.interp(t);
    auto u = curve.interp_deriv(t);
    double sp = std::hypot(u[0], u[1]);
    out.phi.derivs[j] = sp > 1e-9 ? std::array<double, 2>{u[0] / sp, u[1] / sp}
                                  : std::array<double, 2>{0.0, 0.0};
  }
  return out;
}

}  // namespace engel
