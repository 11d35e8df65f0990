// Acceptance harness: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion enforces both its numeric bounds and its runtime
// budget.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "engel/curve.hpp"
#include "engel/errors.hpp"
#include "engel/group.hpp"
#include "engel/io.hpp"
#include "engel/poly.hpp"
#include "engel/steering.hpp"
#include "engel/whitney.hpp"

#ifndef ENGEL_DATA_DIR
#define ENGEL_DATA_DIR "data"
#endif

using namespace engel;

namespace {

const StratifiedAlgebra& alg() { return engel_algebra(); }
const GroupPoint kOrigin = GroupPoint::identity(4, CoordKind::SecondExp);

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& why) {
    if (!ok && pass) {
      pass = false;
      detail = why;
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

// ---------------------------------------------------------------- criterion 1

// Exact rational determinant of the closed-form Jacobian at zero parameters.
// The sampled (a, b) are all exactly representable with denominator 2, so the
// identity det = a^3/172800 can be checked with zero rounding; a plain double
// evaluation of the same determinant is limited near 1e-14 relative by the
// rounding of entries like a/3.
Rational det_jacobian_zero_exact(Rational a, Rational b) {
  std::array<std::array<Rational, 4>, 4> m = {{
      {Rational(1, 2), Rational(0), Rational(0), Rational(0)},
      {Rational(0), Rational(1, 2), Rational(1, 3), Rational(1, 4)},
      {b / 6, a / 3, a / 4, a / 5},
      {a * b / 8, a * a / 8, a * a / 10, a * a / 12},
  }};
  Rational det(1);
  for (int col = 0; col < 4; ++col) {
    int piv = -1;
    for (int r = col; r < 4; ++r)
      if (m[r][col].numerator() != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return Rational(0);
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (int r = col + 1; r < 4; ++r) {
      if (m[r][col].numerator() == 0) continue;
      Rational f = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

Outcome criterion1() {
  Outcome out;
  double max_fd_err = 0.0;
  for (double a : {-2.0, -1.0, 0.5, 1.0, 3.0}) {
    for (double b : {-1.0, 0.0, 2.0}) {
      Rational ra(llround(a * 2.0), 2), rb(llround(b * 2.0), 2);
      Rational det = det_jacobian_zero_exact(ra, rb);
      Rational expect = ra * ra * ra / 172800;
      out.require(det == expect,
                  "determinant mismatch at a=" + fmt("%g", a) + " b=" + fmt("%g", b));

      // Central finite differences of the exact endpoint map at params = 0.
      auto J0 = endpoint_jacobian_zero(a, b);
      const double h = 1e-6;
      for (int j = 0; j < 4; ++j) {
        SteeringFamily up{a, b, {}}, dn{a, b, {}};
        up.params[j] = h;
        dn.params[j] = -h;
        GroupPoint pu = endpoint_map(up), pd = endpoint_map(dn);
        for (int i = 0; i < 4; ++i) {
          double fd = (pu.coords[i] - pd.coords[i]) / (2.0 * h);
          double err = std::abs(fd - J0[i][j]);
          max_fd_err = std::max(max_fd_err, err);
          out.require(err < 1e-6, "FD Jacobian entry (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") off by " + fmt("%.2e", err) +
                                      " at a=" + fmt("%g", a) + " b=" + fmt("%g", b));
        }
      }
    }
  }
  if (out.pass)
    out.detail = "det identity exact over 15 (a,b); max FD-vs-analytic error " +
                 fmt("%.2e", max_fd_err);
  return out;
}

// ---------------------------------------------------------------- criterion 2

Outcome criterion2() {
  Outcome out;
  const double a = 1.0, b = 2.0, h = 1e-5;
  const double coeffs[3][4] = {
      {0.5, 1.0 / 3.0, 0.25, 0.2},              // gamma2 row; last slot unused
      {b / 6.0, a / 3.0, a / 4.0, a / 5.0},     // gamma3
      {a * b / 8.0, a * a / 8.0, a * a / 10.0, a * a / 12.0},  // gamma4
  };
  double max_err = 0.0;
  for (int j = 0; j < 4; ++j) {
    SteeringFamily up{a, b, {}}, dn{a, b, {}};
    up.params[j] = h;
    dn.params[j] = -h;
    GroupPoint pu = endpoint_map(up), pd = endpoint_map(dn);
    // gamma2 partials: 1/2 in c only through u2? The table lists d-slots.
    double d2 = (pu.coords[1] - pd.coords[1]) / (2.0 * h);
    double d3 = (pu.coords[2] - pd.coords[2]) / (2.0 * h);
    double d4 = (pu.coords[3] - pd.coords[3]) / (2.0 * h);
    double want2 = j == 0 ? 0.0 : coeffs[0][j - 1];
    double err2 = std::abs(d2 - want2);
    double err3 = std::abs(d3 - coeffs[1][j]);
    double err4 = std::abs(d4 - coeffs[2][j]);
    max_err = std::max({max_err, err2, err3, err4});
    out.require(err2 < 1e-8, "gamma2 partial " + std::to_string(j) + " off by " +
                                 fmt("%.2e", err2));
    out.require(err3 < 1e-8, "gamma3 partial " + std::to_string(j) + " off by " +
                                 fmt("%.2e", err3));
    out.require(err4 < 1e-8, "gamma4 partial " + std::to_string(j) + " off by " +
                                 fmt("%.2e", err4));
  }
  if (out.pass)
    out.detail =
        "FD partials reproduce the coefficient table at (a,b)=(1,2); max error " +
        fmt("%.2e", max_err);
  return out;
}

// ---------------------------------------------------------------- criterion 3

AlgebraVector flow_field(const AlgebraVector& c, const AlgebraVector& Y) {
  // d/ds BCH(c, sY) at s = 0 for a step-3 algebra.
  AlgebraVector cy = bracket(c, Y, alg());
  AlgebraVector ccy = bracket(c, cy, alg());
  AlgebraVector f(4);
  for (int i = 0; i < 4; ++i) f[i] = Y[i] + 0.5 * cy[i] + ccy[i] / 12.0;
  return f;
}

GroupPoint rk4_flow(const GroupPoint& x, const AlgebraVector& Y, int steps) {
  AlgebraVector c = x.coords;
  const double h = 1.0 / steps;
  for (int s = 0; s < steps; ++s) {
    AlgebraVector Yh(4);
    for (int i = 0; i < 4; ++i) Yh[i] = Y[i];
    AlgebraVector k1 = flow_field(c, Yh);
    AlgebraVector t(4);
    for (int i = 0; i < 4; ++i) t[i] = c[i] + 0.5 * h * k1[i];
    AlgebraVector k2 = flow_field(t, Yh);
    for (int i = 0; i < 4; ++i) t[i] = c[i] + 0.5 * h * k2[i];
    AlgebraVector k3 = flow_field(t, Yh);
    for (int i = 0; i < 4; ++i) t[i] = c[i] + h * k3[i];
    AlgebraVector k4 = flow_field(t, Yh);
    for (int i = 0; i < 4; ++i)
      c[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  return {c, CoordKind::FirstExp};
}

Outcome criterion3() {
  Outcome out;
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  double max_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    GroupPoint x{{d(rng), d(rng), d(rng), d(rng)}, CoordKind::FirstExp};
    GroupPoint y{{d(rng), d(rng), d(rng), d(rng)}, CoordKind::FirstExp};
    GroupPoint exact = group_mul(x, y, alg());
    GroupPoint flowed = rk4_flow(x, y.coords, 10000);
    for (int i = 0; i < 4; ++i) {
      double err = std::abs(exact.coords[i] - flowed.coords[i]);
      max_err = std::max(max_err, err);
      out.require(err < 1e-7, "FirstExp group_mul vs RK4 flow differs by " +
                                  fmt("%.2e", err) + " on trial " +
                                  std::to_string(trial));
    }
  }

  // Single-generator SecondExp updates are exact.
  std::uniform_real_distribution<double> d2(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x = {d2(rng), d2(rng), d2(rng), d2(rng)};
    double t = d2(rng);
    std::vector<double> y = detail::engel_second_flow(x, 2, t);
    out.require(y[0] == x[0] && y[1] == x[1] + t && y[2] == x[2] + t * x[0] &&
                    y[3] == x[3] + t * x[0] * x[0] / 2.0,
                "SecondExp X2 flow update not exact");
    std::vector<double> z = detail::engel_second_flow(x, 1, t);
    out.require(z[0] == x[0] + t && z[1] == x[1] && z[2] == x[2] && z[3] == x[3],
                "SecondExp X1 flow update not exact");
  }
  if (out.pass)
    out.detail = "group_mul vs RK4 max error " + fmt("%.2e", max_err) +
                 " over 100 pairs; SecondExp single-generator updates exact";
  return out;
}

// ---------------------------------------------------------------- criterion 4

Outcome criterion4() {
  Outcome out;
  GroupPoint center{{1.0, 0.0, 0.0, 0.0}, CoordKind::SecondExp};
  SampledCurve line;  // t -> exp(t X1) on the steering grid
  int worst_iters = 0;
  double worst_res = 0.0, worst_dist = 0.0;
  int count = 0;
  for (int w2 = -1; w2 <= 1; ++w2) {
    for (int w3 = -1; w3 <= 1; ++w3) {
      for (int w4 = -1; w4 <= 1; ++w4) {
        if (w2 == 0 && w3 == 0 && w4 == 0) continue;
        ++count;
        // Unit box-sphere direction in the (x2, x3, x4) coordinates, pushed
        // to radius 1e-3 by dilation and attached at the center point.
        GroupPoint w{{0.0, double(w2), double(w3), double(w4)}, CoordKind::SecondExp};
        GroupPoint unit = dilate(1.0 / box_norm(w, alg()), w, alg());
        GroupPoint target = group_mul(center, dilate(1e-3, unit, alg()), alg());
        SteeringSolution sol = steer_position(1.0, 0.0, target);
        worst_iters = std::max(worst_iters, sol.iterations);
        worst_res = std::max(worst_res, sol.residual);
        out.require(sol.iterations <= 10,
                    "needed " + std::to_string(sol.iterations) + " iterations");
        out.require(sol.residual < 1e-10,
                    "residual " + fmt("%.2e", sol.residual));
        if (line.times.empty())
          line = lift(ControlPair::polynomial(Poly({1.0}), Poly(), 0.0, 1.0), kOrigin,
                      sol.curve.times);
        double dist = c1h_distance(sol.curve, line);
        worst_dist = std::max(worst_dist, dist);
        out.require(dist < 0.1, "c1h distance to exp(tX1) is " + fmt("%.3g", dist));
      }
    }
  }
  out.require(count == 26, "expected 26 targets");
  if (out.pass)
    out.detail = "26/26 targets: max iterations " + std::to_string(worst_iters) +
                 ", max residual " + fmt("%.2e", worst_res) + ", max c1h distance " +
                 fmt("%.3g", worst_dist);
  return out;
}

// ---------------------------------------------------------------- criterion 5

Outcome criterion5() {
  Outcome out;
  double min_g4 = 1e9;
  for (double b : {1.0, -1.0}) {
    ObstructionReport rep = x2_obstruction_probe(b, 10000, 42);
    min_g4 = std::min(min_g4, rep.min_abs_gamma4);
    out.require(rep.violations == 0, "b=" + fmt("%g", b) + ": " +
                                         std::to_string(rep.violations) +
                                         " sign violations");
  }
  if (out.pass)
    out.detail = "0 sign violations in 2 x 10000 trials; min |gamma4(1)| " +
                 fmt("%.2e", min_g4);
  return out;
}

// ---------------------------------------------------------------- criterion 6

Outcome criterion6() {
  Outcome out;
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const double h = 6.25e-5;
  const int n_grid = static_cast<int>(std::lround(1.0 / h)) + 1;
  std::vector<double> grid = uniform_grid(0.0, 1.0, n_grid);
  double worst_jump = 0.0, worst_res = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    // Controls with |u1| >= 1/2 on [0,1]: u1 = s(0.6 + c t(1-t)) with
    // |c| <= 0.4 keeps |u1| in [0.5, 0.7].
    double sgn = trial % 2 == 0 ? 1.0 : -1.0;
    double c = 0.8 * (uni(rng) - 0.5);
    Poly u1({sgn * 0.6, sgn * c, -sgn * c});
    Poly u2({uni(rng) - 0.5, uni(rng) - 0.5, uni(rng) - 0.5});
    LiftedPolys L = lift_poly(ControlPair::polynomial(u1, u2, 0.0, 1.0), kOrigin);

    // 2..10 intervals with endpoints snapped to the sampling grid and
    // separations >= 0.028 after snapping.
    int k = 2 + trial % 9;
    std::vector<double> cuts;
    double acc = 0.0;
    for (int i = 0; i < 2 * k; ++i) {
      acc += 0.03 + uni(rng);
      cuts.push_back(acc);
    }
    acc += 0.03 + uni(rng);
    std::vector<std::array<double, 2>> ivs;
    for (int i = 0; i < k; ++i) {
      double a0 = std::round(cuts[2 * i] / acc / h) * h;
      double b0 = std::round(cuts[2 * i + 1] / acc / h) * h;
      ivs.push_back({a0, b0});
    }
    CurveFragment frag{CompactSet1D(ivs), {}, {}, {}};
    for (double t : grid) {
      if (!frag.K.contains(t, 1e-12)) continue;
      frag.times.push_back(t);
      frag.points.push_back(L.eval(t));
      frag.X.push_back({L.u1(t), L.u2(t)});
    }

    ExtensionResult res = [&] {
      try {
        return extend(frag);
      } catch (const Error& e) {
        out.require(false, "fragment " + std::to_string(trial) + " (" +
                               std::to_string(k) + " intervals): " + e.what());
        return ExtensionResult{};
      }
    }();
    if (!out.pass) break;

    // Exact agreement on K: every fragment sample appears bit for bit.
    size_t j = 0;
    for (size_t i = 0; i < res.Gamma.times.size() && j < frag.times.size(); ++i) {
      if (res.Gamma.times[i] == frag.times[j]) {
        out.require(res.Gamma.points[i] == frag.points[j] &&
                        res.Gamma.derivs[i] == frag.X[j],
                    "fragment " + std::to_string(trial) + ": data on K not copied");
        ++j;
      }
    }
    out.require(j == frag.times.size(),
                "fragment " + std::to_string(trial) + ": K samples missing from Gamma");
    out.require(res.max_derivative_jump < 1e-3,
                "fragment " + std::to_string(trial) + ": derivative jump " +
                    fmt("%.2e", res.max_derivative_jump));
    out.require(res.max_horizontality_residual < 1e-5,
                "fragment " + std::to_string(trial) + ": horizontality residual " +
                    fmt("%.2e", res.max_horizontality_residual));
    worst_jump = std::max(worst_jump, res.max_derivative_jump);
    worst_res = std::max(worst_res, res.max_horizontality_residual);
  }
  if (out.pass)
    out.detail = "20/20 fragments extended; max derivative jump " +
                 fmt("%.2e", worst_jump) + ", max horizontality residual " +
                 fmt("%.2e", worst_res);
  return out;
}

// ---------------------------------------------------------------- criterion 7

Outcome criterion7() {
  Outcome out;
  namespace fs = std::filesystem;
  fs::path dir = fs::path(ENGEL_DATA_DIR) / "lusin";
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  out.require(files.size() >= 4, "expected at least 4 shipped curves in " + dir.string());

  std::string summary;
  for (const auto& f : files) {
    io::CurveInput in = io::parse_curve(io::load_json(f.string()));
    std::vector<double> grid;
    if (in.controls.is_polynomial())
      grid = uniform_grid(in.controls.t0(), in.controls.t1(), 2001);
    else
      grid = in.controls.sample_times();
    SampledCurve curve = lift(in.controls, in.start, grid);
    for (double eps : {0.2, 0.1, 0.05}) {
      LusinOptions opts;
      opts.epsilon = eps;
      LusinResult res = [&] {
        try {
          return lusin_approximate(curve, opts);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::EmptyS) throw;
          return lusin_degenerate(curve, opts);
        }
      }();
      out.require(res.agreement > res.m_S - eps,
                  f.filename().string() + " eps=" + fmt("%g", eps) + ": agreement " +
                      fmt("%.3f", res.agreement) + " <= m(S)-eps = " +
                      fmt("%.3f", res.m_S - eps));
      out.require(res.agreement > 0.0,
                  f.filename().string() + ": agreement not strictly positive");
      if (eps == 0.05)
        summary += f.filename().stem().string() + " " + fmt("%.3f", res.agreement) +
                   "/" + fmt("%.3f", res.m_S) + "; ";
    }
  }
  if (out.pass)
    out.detail = "agreement/m(S) at eps=0.05: " + summary;
  return out;
}

// ---------------------------------------------------------------- criterion 8

Outcome criterion8() {
  Outcome out;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  std::uniform_real_distribution<double> dt(0.1, 10.0);
  double max_rel = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    GroupPoint x{{d(rng), d(rng), d(rng), d(rng)}, CoordKind::SecondExp};
    GroupPoint y{{d(rng), d(rng), d(rng), d(rng)}, CoordKind::SecondExp};
    double t = dt(rng);
    GroupPoint xy = group_mul(x, y, alg());
    out.require(xy.coords[0] == x.coords[0] + y.coords[0] &&
                    xy.coords[1] == x.coords[1] + y.coords[1],
                "first-two-coordinate additivity not exact");
    // Q-homogeneity of the box norm under dilation.
    double lhs = box_norm(dilate(t, x, alg()), alg());
    double rhs = t * box_norm(x, alg());
    double rel = rhs != 0.0 ? std::abs(lhs - rhs) / rhs : std::abs(lhs);
    max_rel = std::max(max_rel, rel);
    out.require(rel < 1e-10, "homogeneity relative error " + fmt("%.2e", rel));
    // Same in FirstExp coordinates.
    GroupPoint xf = second_to_first(x), yf = second_to_first(y);
    GroupPoint xyf = group_mul(xf, yf, alg());
    out.require(xyf.coords[0] == xf.coords[0] + yf.coords[0] &&
                    xyf.coords[1] == xf.coords[1] + yf.coords[1],
                "FirstExp additivity not exact");
  }
  if (out.pass)
    out.detail = "additivity exact on 1000 pairs (both kinds); max homogeneity "
                 "relative error " +
                 fmt("%.2e", max_rel);
  return out;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    Outcome (*fn)();
    double budget_ms;
  };
  const Entry entries[] = {
      {1, "Jacobian determinant and FD agreement", criterion1, 1000},
      {2, "endpoint linear coefficients", criterion2, 1000},
      {3, "BCH/flow consistency", criterion3, 10000},
      {4, "pliability neighborhood steering", criterion4, 5000},
      {5, "x2 non-pliability obstruction", criterion5, 30000},
      {6, "Whitney extension contract", criterion6, 60000},
      {7, "Lusin bounds", criterion7, 60000},
      {8, "group-law structure", criterion8, 5000},
  };
  bool all = true;
  for (const auto& e : entries) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome out = [&] {
      try {
        return e.fn();
      } catch (const std::exception& ex) {
        Outcome o;
        o.require(false, std::string("exception: ") + ex.what());
        return o;
      }
    }();
    auto t1 = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    if (ms >= e.budget_ms) {
      out.pass = false;
      out.detail = "runtime " + fmt("%.0f", ms) + " ms exceeds budget";
    }
    std::printf("%s criterion %d (%s): %s [%.0f ms]\n", out.pass ? "PASS" : "FAIL",
                e.id, e.name, out.detail.c_str(), ms);
    all = all && out.pass;
  }
  return all ? 0 : 1;
}
