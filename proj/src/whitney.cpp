#include "engel/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "engel/errors.hpp"

namespace engel {

namespace {

const StratifiedAlgebra& alg() { return engel_algebra(); }

GroupPoint as_point(const std::array<double, 4>& c) {
  return {{c[0], c[1], c[2], c[3]}, CoordKind::SecondExp};
}

// X(p) = u1 X1(p) + u2 X2(p) as a Euclidean tangent vector in SecondExp
// coordinates.
std::array<double, 4> field_at(const std::array<double, 2>& u,
                               const std::array<double, 4>& p) {
  return {u[0], u[1], u[1] * p[0], 0.5 * u[1] * p[0] * p[0]};
}

// exp of the horizontal vector s * (u1, u2) in SecondExp coordinates.
std::array<double, 4> horizontal_exp(double s, const std::array<double, 2>& u) {
  return {s * u[0], s * u[1], 0.5 * s * s * u[0] * u[1],
          s * s * s * u[0] * u[0] * u[1] / 6.0};
}

size_t index_of_time(const std::vector<double>& times, double t) {
  auto it = std::lower_bound(times.begin(), times.end(), t - 1e-9);
  if (it == times.end() || std::abs(*it - t) > 1e-9)
    throw Error(ErrorCode::InvalidArgument, "fragment has no sample at a K endpoint");
  return static_cast<size_t>(it - times.begin());
}

// Left multiplication z = x * y in Engel SecondExp coordinates is affine in
// y: z = (x1+y1, x2+y2, x3+y3+x1 y2, x4+y4+x1 y3 + x1^2 y2 / 2). Applied here
// with polynomial y components.
LiftedPolys left_translate(const GroupPoint& x, const LiftedPolys& y) {
  const double x1 = x.coords[0];
  LiftedPolys z;
  z.u1 = y.u1;
  z.u2 = y.u2;
  z.x1 = y.x1 + Poly::constant(x.coords[0]);
  z.x2 = y.x2 + Poly::constant(x.coords[1]);
  z.x3 = y.x3 + y.x2 * x1 + Poly::constant(x.coords[2]);
  z.x4 = y.x4 + y.x3 * x1 + y.x2 * (0.5 * x1 * x1) + Poly::constant(x.coords[3]);
  return z;
}

LiftedPolys dilate_polys(double lam, const LiftedPolys& p) {
  LiftedPolys q;
  q.x1 = p.x1 * lam;
  q.x2 = p.x2 * lam;
  q.x3 = p.x3 * (lam * lam);
  q.x4 = p.x4 * (lam * lam * lam);
  q.u1 = p.u1;
  q.u2 = p.u2;
  return q;
}

LiftedPolys compose_affine_polys(const LiftedPolys& p, double alpha, double beta) {
  LiftedPolys q;
  q.x1 = p.x1.compose_affine(alpha, beta);
  q.x2 = p.x2.compose_affine(alpha, beta);
  q.x3 = p.x3.compose_affine(alpha, beta);
  q.x4 = p.x4.compose_affine(alpha, beta);
  q.u1 = p.u1.compose_affine(alpha, beta);
  q.u2 = p.u2.compose_affine(alpha, beta);
  return q;
}

}  // namespace

CompactSet1D::CompactSet1D(std::vector<std::array<double, 2>> intervals)
    : intervals_(std::move(intervals)) {
  if (intervals_.empty())
    throw Error(ErrorCode::InvalidArgument, "compact set must be nonempty");
  for (const auto& iv : intervals_)
    if (!(iv[0] <= iv[1]))
      throw Error(ErrorCode::InvalidArgument, "interval endpoints out of order");
  for (size_t i = 1; i < intervals_.size(); ++i)
    if (!(intervals_[i][0] > intervals_[i - 1][1]))
      throw Error(ErrorCode::InvalidArgument, "intervals must be sorted and disjoint");
}

double CompactSet1D::measure() const {
  double m = 0.0;
  for (const auto& iv : intervals_) m += iv[1] - iv[0];
  return m;
}

bool CompactSet1D::contains(double t, double tol) const {
  for (const auto& iv : intervals_)
    if (t >= iv[0] - tol && t <= iv[1] + tol) return true;
  return false;
}

std::vector<std::array<double, 2>> CompactSet1D::gaps() const {
  std::vector<std::array<double, 2>> g;
  for (size_t i = 1; i < intervals_.size(); ++i)
    g.push_back({intervals_[i - 1][1], intervals_[i][0]});
  return g;
}

namespace {

// Same quotient as difference_quotient_sup, but the base index advances by
// `stride` so very fine grids stay affordable; the quotient field is smooth
// in the base time, so a strided sup is an accurate sample of the full one.
double quotient_sup_strided(const CurveFragment& frag, double eta, size_t stride) {
  const auto& times = frag.times;
  const size_t n = times.size();
  double sup = 0.0;
  for (size_t j = 0; j < n; j += stride) {
    GroupPoint p_tau{{frag.points[j][0], frag.points[j][1], frag.points[j][2],
                      frag.points[j][3]},
                     CoordKind::SecondExp};
    size_t lo = j, hi = j;
    while (lo > 0 && times[j] - times[lo - 1] < eta) --lo;
    while (hi + 1 < n && times[hi + 1] - times[j] < eta) ++hi;
    for (size_t i = lo; i <= hi; ++i) {
      double s = times[i] - times[j];
      if (s == 0.0) continue;
      const double u1 = frag.X[j][0], u2 = frag.X[j][1];
      GroupPoint e{{s * u1, s * u2, 0.5 * s * s * u1 * u2,
                    s * s * s * u1 * u1 * u2 / 6.0},
                   CoordKind::SecondExp};
      GroupPoint pred = group_mul(p_tau, e, engel_algebra());
      GroupPoint pt{{frag.points[i][0], frag.points[i][1], frag.points[i][2],
                     frag.points[i][3]},
                    CoordKind::SecondExp};
      sup = std::max(sup, box_dist(pt, pred, engel_algebra()) / std::abs(s));
    }
  }
  return sup;
}

}  // namespace

WhitneyTable check_whitney(const CurveFragment& frag, const std::vector<double>& etas) {
  if (frag.times.empty()) throw Error(ErrorCode::InvalidArgument, "empty fragment");
  WhitneyTable table;
  table.etas = etas;
  std::sort(table.etas.rbegin(), table.etas.rend());
  const size_t n = frag.times.size();
  const double span = frag.times.back() - frag.times.front();
  const double h_avg = n > 1 ? span / static_cast<double>(n - 1) : 1.0;
  constexpr double kPairBudget = 2e5;
  for (double eta : table.etas) {
    double window = h_avg > 0.0 ? eta / h_avg : static_cast<double>(n);
    double pairs = static_cast<double>(n) * std::min(window, static_cast<double>(n));
    size_t stride = pairs > kPairBudget
                        ? static_cast<size_t>(pairs / kPairBudget) + 1
                        : 1;
    if (stride == 1) {
      table.r.push_back(difference_quotient_sup(frag.times, frag.points, frag.X, eta));
    } else {
      table.r.push_back(quotient_sup_strided(frag, eta, stride));
    }
  }
  for (size_t i = 1; i < table.r.size(); ++i)
    if (table.r[i] > table.r[i - 1] + 1e-12) table.monotone_decay = false;
  return table;
}

std::array<double, 4> GapCurve::eval(double t) const {
  const double lam = gb - ga;
  double s = std::clamp((t - ga) / lam, 0.0, 1.0);
  const Segment* seg = &segments.back();
  for (const auto& candidate : segments)
    if (s <= candidate.s1 + 1e-15) { seg = &candidate; break; }
  GroupPoint p{{seg->beta.x1(s), seg->beta.x2(s), seg->beta.x3(s), seg->beta.x4(s)},
               CoordKind::SecondExp};
  p = dilate(lam, p, alg());
  p = group_mul(base, p, alg());
  return {p.coords[0], p.coords[1], p.coords[2], p.coords[3]};
}

std::array<double, 2> GapCurve::deriv(double t) const {
  double s = std::clamp((t - ga) / (gb - ga), 0.0, 1.0);
  const Segment* seg = &segments.back();
  for (const auto& candidate : segments)
    if (s <= candidate.s1 + 1e-15) { seg = &candidate; break; }
  return {seg->beta.u1(s), seg->beta.u2(s)};
}

ExtensionResult extend(const CurveFragment& frag, const ExtendOptions& opts) {
  if (frag.times.empty()) throw Error(ErrorCode::InvalidArgument, "empty fragment");
  if (frag.times.size() != frag.points.size() || frag.times.size() != frag.X.size())
    throw Error(ErrorCode::GridMismatch, "fragment arrays have mismatched lengths");

  double min_dir = std::numeric_limits<double>::infinity();
  for (const auto& u : frag.X) {
    if (std::abs(u[0]) < opts.tau_dir)
      throw Error(ErrorCode::NotAdmissible, "candidate derivative enters span(X2) on K");
    min_dir = std::min(min_dir, std::hypot(u[0], u[1]));
  }

  ExtensionResult result;

  const double span = frag.K.max() - frag.K.min();
  double h_frag = span > 0.0 ? span : 1.0;
  for (size_t i = 1; i < frag.times.size(); ++i)
    h_frag = std::min(h_frag, frag.times[i] - frag.times[i - 1]);
  if (span > 0.0 && frag.times.size() > 1) {
    std::vector<double> etas;
    for (double eta = span; eta > 4.0 * h_frag && etas.size() < 8; eta *= 0.5)
      etas.push_back(eta);
    if (etas.empty()) etas.push_back(span);
    result.r_table = check_whitney(frag, etas);
    if (!frag.K.gaps().empty() && result.r_table.r.back() >= 0.1 * min_dir)
      throw Error(ErrorCode::NotAdmissible,
                  "sampled difference quotients do not decay; Whitney condition fails");
  }

  // Solve each gap: normalize by left translation and dilation, match
  // endpoint and end derivative with one Newton solve, and keep the pre-roll
  // plus dilation-concatenation construction as fallback.
  for (const auto& gap : frag.K.gaps()) {
    const double ga = gap[0], gb = gap[1], lam = gb - ga;
    size_t ia = index_of_time(frag.times, ga);
    size_t ib = index_of_time(frag.times, gb);
    GroupPoint pa = as_point(frag.points[ia]);
    GroupPoint pb = as_point(frag.points[ib]);
    const auto Xa = frag.X[ia];
    const auto Xb = frag.X[ib];
    GroupPoint z = dilate(1.0 / lam, group_mul(group_inv(pa, alg()), pb, alg()), alg());

    GapSolveInfo info;
    info.gap = gap;
    GapCurve gc;
    gc.ga = ga;
    gc.gb = gb;
    gc.base = pa;
    const GroupPoint origin = GroupPoint::identity(4, CoordKind::SecondExp);
    try {
      SteeringSolution sol = steer_full(Xa[0], Xa[1], Xb, z, opts.tol, 50, opts.tau_dir);
      info.iterations = sol.iterations;
      info.residual = sol.residual;
      gc.segments.push_back({0.0, 1.0, lift_poly(sol.controls(), origin)});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoConvergence)
        throw Error(ErrorCode::SteeringFailed, "gap [" + std::to_string(ga) + "," +
                                                   std::to_string(gb) + "]: " + e.what());
      const double rho = 0.25;
      // Pre-roll rotates the derivative from Xa to Xb on [0, rho]; the
      // remainder is a same-derivative problem for the dilated target.
      ControlPair roll_controls = ControlPair::polynomial(
          Poly({Xa[0], (Xb[0] - Xa[0]) / rho}), Poly({Xa[1], (Xb[1] - Xa[1]) / rho}), 0.0,
          rho);
      LiftedPolys roll = lift_poly(roll_controls, origin);
      GroupPoint x_rho{{roll.x1(rho), roll.x2(rho), roll.x3(rho), roll.x4(rho)},
                       CoordKind::SecondExp};
      GroupPoint a_rho =
          dilate(1.0 / (1.0 - rho), group_mul(group_inv(x_rho, alg()), z, alg()), alg());
      try {
        SteeringSolution inner =
            steer_full(Xb[0], Xb[1], Xb, a_rho, opts.tol, 50, opts.tau_dir);
        LiftedPolys beta_hat = lift_poly(inner.controls(), origin);
        // Tail segment: x_rho * delta_{1-rho}(beta_hat((s - rho)/(1 - rho))).
        LiftedPolys tail = left_translate(
            x_rho, dilate_polys(1.0 - rho, compose_affine_polys(
                                               beta_hat, 1.0 / (1.0 - rho),
                                               -rho / (1.0 - rho))));
        info.iterations = inner.iterations;
        info.residual = inner.residual;
        info.used_preroll_fallback = true;
        gc.segments.push_back({0.0, rho, roll});
        gc.segments.push_back({rho, 1.0, tail});
      } catch (const Error& e2) {
        throw Error(ErrorCode::SteeringFailed, "gap [" + std::to_string(ga) + "," +
                                                   std::to_string(gb) + "]: " + e2.what());
      }
    }
    result.gap_curves.push_back(gc);
    result.per_gap.push_back(info);
  }

  // Assemble Gamma on the union of the fragment grid and per-gap grids whose
  // spacing matches the fragment spacing (keeps finite differences clean).
  std::vector<std::pair<double, std::pair<std::array<double, 4>, std::array<double, 2>>>>
      rows;
  for (size_t i = 0; i < frag.times.size(); ++i)
    rows.push_back({frag.times[i], {frag.points[i], frag.X[i]}});
  for (const auto& gc : result.gap_curves) {
    const double lam = gc.gb - gc.ga;
    // Match the fragment spacing so finite differences across junctions stay
    // second order; fall back to gap_grid when the fragment has no spacing.
    double target_h = frag.times.size() > 1 ? h_frag : lam / (opts.gap_grid - 1);
    int n = std::clamp(static_cast<int>(std::lround(lam / target_h)) + 1, 3, 200001);
    for (int j = 1; j + 1 <= n - 1; ++j) {
      double t = gc.ga + lam * static_cast<double>(j) / (n - 1);
      rows.push_back({t, {gc.eval(t), gc.deriv(t)}});
    }
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  result.Gamma.times.reserve(rows.size());
  for (const auto& row : rows) {
    result.Gamma.times.push_back(row.first);
    result.Gamma.points.push_back(row.second.first);
    result.Gamma.derivs.push_back(row.second.second);
  }

  if (result.Gamma.times.size() >= 3)
    result.max_horizontality_residual = horizontality_residual(result.Gamma);

  for (size_t g = 0; g < result.gap_curves.size(); ++g) {
    const auto& gc = result.gap_curves[g];
    const double lam = gc.gb - gc.ga;
    const double h = std::min(lam / (opts.fd_grid - 1), 0.1 * lam);
    size_t ia = index_of_time(frag.times, gc.ga);
    size_t ib = index_of_time(frag.times, gc.gb);
    auto jump_at = [&](double t0, double t1, size_t k) {
      auto p0 = t0 == gc.ga && k == ia ? frag.points[ia] : gc.eval(t0);
      auto p1 = t1 == gc.gb && k == ib ? frag.points[ib] : gc.eval(t1);
      auto ref = field_at(frag.X[k], frag.points[k]);
      double worst = 0.0;
      for (int c = 0; c < 4; ++c)
        worst = std::max(worst, std::abs((p1[c] - p0[c]) / (t1 - t0) - ref[c]));
      return worst;
    };
    result.max_derivative_jump =
        std::max(result.max_derivative_jump, jump_at(gc.ga, gc.ga + h, ia));
    result.max_derivative_jump =
        std::max(result.max_derivative_jump, jump_at(gc.gb - h, gc.gb, ib));
  }

  return result;
}

Whitney1DResult classical_whitney_1d(const CompactSet1D& K,
                                     const std::vector<double>& times,
                                     const std::vector<double>& f,
                                     const std::vector<double>& fp,
                                     const std::vector<double>& out_grid) {
  if (times.size() != f.size() || times.size() != fp.size() || times.empty())
    throw Error(ErrorCode::InvalidArgument, "scalar Whitney data arrays mismatched");
  for (double t : times)
    if (!K.contains(t, 1e-12))
      throw Error(ErrorCode::InvalidArgument, "data sample outside K");

  Whitney1DResult out;
  out.times = out_grid;
  out.values.resize(out_grid.size());
  out.derivs.resize(out_grid.size());

  for (size_t i = 1; i < times.size(); ++i) {
    double h = times[i] - times[i - 1];
    out.max_condition_violation =
        std::max(out.max_condition_violation,
                 std::abs(f[i] - f[i - 1] - h * fp[i - 1]) / h);
    out.max_condition_violation =
        std::max(out.max_condition_violation,
                 std::abs(f[i - 1] - f[i] + h * fp[i]) / h);
  }

  for (size_t j = 0; j < out_grid.size(); ++j) {
    double t = out_grid[j];
    if (t <= times.front()) {
      out.values[j] = f.front() + (t - times.front()) * fp.front();
      out.derivs[j] = fp.front();
      continue;
    }
    if (t >= times.back()) {
      out.values[j] = f.back() + (t - times.back()) * fp.back();
      out.derivs[j] = fp.back();
      continue;
    }
    auto it = std::upper_bound(times.begin(), times.end(), t);
    size_t i = static_cast<size_t>(it - times.begin());
    double h = times[i] - times[i - 1];
    double u = (t - times[i - 1]) / h;
    double h00 = (1 + 2 * u) * (1 - u) * (1 - u);
    double h10 = u * (1 - u) * (1 - u);
    double h01 = u * u * (3 - 2 * u);
    double h11 = u * u * (u - 1);
    out.values[j] = h00 * f[i - 1] + h10 * h * fp[i - 1] + h01 * f[i] + h11 * h * fp[i];
    double d00 = 6 * u * (u - 1);
    double d10 = (1 - u) * (1 - 3 * u);
    double d01 = 6 * u * (1 - u);
    double d11 = u * (3 * u - 2);
    out.derivs[j] =
        (d00 * f[i - 1] + d01 * f[i]) / h + d10 * fp[i - 1] + d11 * fp[i];
  }
  return out;
}

double measure_agreement(const SampledCurve& gamma, const SampledCurve& Gamma,
                         double tol) {
  if (gamma.times.size() != Gamma.times.size())
    throw Error(ErrorCode::GridMismatch, "curves sampled on different grids");
  for (size_t i = 0; i < gamma.times.size(); ++i)
    if (std::abs(gamma.times[i] - Gamma.times[i]) > 1e-12)
      throw Error(ErrorCode::GridMismatch, "curves sampled on different grids");
  std::vector<bool> close(gamma.times.size());
  for (size_t i = 0; i < gamma.times.size(); ++i) {
    // Bitwise-equal points agree by definition; the box-distance check alone
    // would miss them because the inverse/product round trip leaves ~1e-17
    // noise in the top coordinate, which the cube-root weight inflates to
    // ~1e-6.
    close[i] = gamma.points[i] == Gamma.points[i] ||
               box_dist(gamma.point(i), Gamma.point(i), alg()) <= tol;
  }
  double m = 0.0;
  for (size_t i = 1; i < gamma.times.size(); ++i)
    if (close[i - 1] && close[i]) m += gamma.times[i] - gamma.times[i - 1];
  return m;
}

namespace {

struct Selection {
  std::vector<bool> keep_cell;
  double removed = 0.0;
};

// Greedy removal of the worst-scoring cells from an initial cell mask,
// spending at most `budget` of grid measure and always keeping one cell.
// Only cells whose score clearly exceeds the typical level are dropped, so a
// uniformly well-behaved curve keeps its full measure.
Selection greedy_select(const std::vector<double>& times, std::vector<bool> cell_ok,
                        const std::vector<double>& score, double budget) {
  std::vector<size_t> order;
  for (size_t i = 0; i < cell_ok.size(); ++i)
    if (cell_ok[i]) order.push_back(i);
  Selection sel{std::move(cell_ok), 0.0};
  if (order.empty()) return sel;
  std::vector<double> sorted_scores;
  sorted_scores.reserve(order.size());
  for (size_t idx : order) sorted_scores.push_back(score[idx]);
  std::sort(sorted_scores.begin(), sorted_scores.end());
  const double median = sorted_scores[sorted_scores.size() / 2];
  const double floor = 10.0 * median + 1e-12;
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return score[a] > score[b]; });
  size_t kept = order.size();
  for (size_t idx : order) {
    if (kept <= 1) break;
    if (score[idx] <= floor) break;
    double w = times[idx + 1] - times[idx];
    if (sel.removed + w > budget) continue;
    sel.keep_cell[idx] = false;
    sel.removed += w;
    --kept;
  }
  return sel;
}

CompactSet1D intervals_from_cells(const std::vector<double>& times,
                                  const std::vector<bool>& keep) {
  std::vector<std::array<double, 2>> ivs;
  size_t i = 0;
  while (i < keep.size()) {
    if (!keep[i]) { ++i; continue; }
    size_t j = i;
    while (j < keep.size() && keep[j]) ++j;
    ivs.push_back({times[i], times[j]});
    i = j;
  }
  if (ivs.empty()) throw Error(ErrorCode::EmptyS, "no usable cells remain");
  return CompactSet1D(std::move(ivs));
}

}  // namespace

LusinResult lusin_approximate(const SampledCurve& curve, const LusinOptions& opts) {
  if (!curve.has_derivs())
    throw Error(ErrorCode::InvalidArgument, "lusin_approximate requires derivatives");
  const size_t n = curve.times.size();
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "curve too short");

  // S = {t : |u1| >= tau_dir} at cell resolution.
  std::vector<bool> in_s(n - 1);
  double m_S = 0.0;
  for (size_t i = 0; i + 1 < n; ++i) {
    in_s[i] = std::abs(curve.derivs[i][0]) >= opts.tau_dir &&
              std::abs(curve.derivs[i + 1][0]) >= opts.tau_dir;
    if (in_s[i]) m_S += curve.times[i + 1] - curve.times[i];
  }
  if (m_S <= 1e-12)
    throw Error(ErrorCode::EmptyS, "the nondegenerate set S has zero grid measure");

  // The arc-length factorization gamma = phi o F localizes stopped stretches;
  // cells where F barely advances carry no usable derivative data.
  ArclengthResult arc = arclength_reparam(curve);
  for (size_t i = 0; i + 1 < n; ++i)
    if (arc.F[i + 1] - arc.F[i] <= 1e-12 * std::max(arc.total_length, 1.0))
      in_s[i] = false;

  // Score cells by their local Whitney defect and derivative variation.
  std::vector<double> score(n - 1, 0.0);
  for (size_t i = 0; i + 1 < n; ++i) {
    if (!in_s[i]) continue;
    double h = curve.times[i + 1] - curve.times[i];
    GroupPoint pred = group_mul(
        curve.point(i), as_point(horizontal_exp(h, curve.derivs[i])), alg());
    // Euclidean prediction error: the box distance would cube-root-amplify
    // ulp-level lift noise in x4 and make the ranking random.
    double err = 0.0;
    for (int c = 0; c < 4; ++c) {
      double d = curve.points[i + 1][c] - pred.coords[c];
      err += d * d;
    }
    score[i] = std::sqrt(err) / h +
               std::hypot(curve.derivs[i + 1][0] - curve.derivs[i][0],
                          curve.derivs[i + 1][1] - curve.derivs[i][1]);
  }

  Selection sel = greedy_select(curve.times, in_s, score, 0.9 * opts.epsilon);
  CompactSet1D K = intervals_from_cells(curve.times, sel.keep_cell);

  CurveFragment frag{K, {}, {}, {}};
  std::vector<bool> sample_kept(n, false);
  for (size_t i = 0; i + 1 < n; ++i)
    if (sel.keep_cell[i]) sample_kept[i] = sample_kept[i + 1] = true;
  for (size_t i = 0; i < n; ++i) {
    if (!sample_kept[i]) continue;
    frag.times.push_back(curve.times[i]);
    frag.points.push_back(curve.points[i]);
    frag.X.push_back(curve.derivs[i]);
  }

  ExtendOptions ext;
  ext.tol = opts.tol;
  ext.tau_dir = opts.tau_dir;
  ExtensionResult er = extend(frag, ext);

  // Gamma on the input grid: exact copies on K, closed-form gap curves
  // inside gaps, constant-control continuation outside [min K, max K].
  LusinResult out{SampledCurve{}, K, 0.0, m_S, false};
  out.Gamma.times = curve.times;
  out.Gamma.points.resize(n);
  out.Gamma.derivs.resize(n);
  const double k_min = K.min(), k_max = K.max();
  size_t i_min = index_of_time(curve.times, k_min);
  size_t i_max = index_of_time(curve.times, k_max);
  for (size_t i = 0; i < n; ++i) {
    double t = curve.times[i];
    if (sample_kept[i]) {
      out.Gamma.points[i] = curve.points[i];
      out.Gamma.derivs[i] = curve.derivs[i];
    } else if (t < k_min) {
      GroupPoint p = group_mul(
          curve.point(i_min),
          as_point(horizontal_exp(t - k_min, curve.derivs[i_min])), alg());
      out.Gamma.points[i] = {p.coords[0], p.coords[1], p.coords[2], p.coords[3]};
      out.Gamma.derivs[i] = curve.derivs[i_min];
    } else if (t > k_max) {
      GroupPoint p = group_mul(
          curve.point(i_max),
          as_point(horizontal_exp(t - k_max, curve.derivs[i_max])), alg());
      out.Gamma.points[i] = {p.coords[0], p.coords[1], p.coords[2], p.coords[3]};
      out.Gamma.derivs[i] = curve.derivs[i_max];
    } else {
      for (const auto& gc : er.gap_curves) {
        if (t >= gc.ga - 1e-12 && t <= gc.gb + 1e-12) {
          out.Gamma.points[i] = gc.eval(t);
          out.Gamma.derivs[i] = gc.deriv(t);
          break;
        }
      }
    }
  }
  out.agreement = measure_agreement(curve, out.Gamma, opts.agreement_tol);
  return out;
}

LusinResult lusin_degenerate(const SampledCurve& curve, const LusinOptions& opts) {
  if (!curve.has_derivs())
    throw Error(ErrorCode::InvalidArgument, "lusin_degenerate requires derivatives");
  const size_t n = curve.times.size();
  if (n < 3) throw Error(ErrorCode::InvalidArgument, "curve too short");
  for (const auto& u : curve.derivs)
    if (std::abs(u[0]) > opts.tau_dir)
      throw Error(ErrorCode::NotDegenerate,
                  "curve leaves span(X2); use lusin_approximate");

  // Left-translate the start to 0; the curve reduces to (0, g2(t), 0, 0).
  GroupPoint g0inv = group_inv(curve.point(0), alg());
  SampledCurve shifted;
  shifted.times = curve.times;
  shifted.derivs = curve.derivs;
  shifted.points.resize(n);
  std::vector<double> f(n), fp(n);
  for (size_t i = 0; i < n; ++i) {
    GroupPoint p = group_mul(g0inv, curve.point(i), alg());
    shifted.points[i] = {p.coords[0], p.coords[1], p.coords[2], p.coords[3]};
    f[i] = p.coords[1];
    fp[i] = curve.derivs[i][1];
  }

  std::vector<bool> cell_ok(n - 1, true);
  std::vector<double> score(n - 1, 0.0);
  for (size_t i = 0; i + 1 < n; ++i) {
    double h = curve.times[i + 1] - curve.times[i];
    score[i] = std::abs(f[i + 1] - f[i] - h * fp[i]) / h;
  }
  Selection sel = greedy_select(curve.times, cell_ok, score, 0.9 * opts.epsilon);
  CompactSet1D K = intervals_from_cells(curve.times, sel.keep_cell);

  std::vector<bool> sample_kept(n, false);
  for (size_t i = 0; i + 1 < n; ++i)
    if (sel.keep_cell[i]) sample_kept[i] = sample_kept[i + 1] = true;
  std::vector<double> kt, kf, kfp;
  for (size_t i = 0; i < n; ++i) {
    if (!sample_kept[i]) continue;
    kt.push_back(curve.times[i]);
    kf.push_back(f[i]);
    kfp.push_back(fp[i]);
  }

  Whitney1DResult w = classical_whitney_1d(K, kt, kf, kfp, curve.times);

  LusinResult out{SampledCurve{}, K, 0.0, 0.0, true};
  out.Gamma.times = curve.times;
  out.Gamma.points.resize(n);
  out.Gamma.derivs.resize(n);
  for (size_t i = 0; i < n; ++i) {
    // Copy data bit-exactly on K; the Hermite extension returns kf values at
    // the retained samples anyway.
    double wv = sample_kept[i] ? f[i] : w.values[i];
    out.Gamma.points[i] = {0.0, wv, 0.0, 0.0};
    out.Gamma.derivs[i] = {0.0, sample_kept[i] ? fp[i] : w.derivs[i]};
  }
  out.agreement = measure_agreement(shifted, out.Gamma, opts.agreement_tol);
  return out;
}

}  // namespace engel
