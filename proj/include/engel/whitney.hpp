#ifndef ENGEL_WHITNEY_HPP
#define ENGEL_WHITNEY_HPP

#include <array>
#include <map>
#include <vector>

#include "engel/curve.hpp"
#include "engel/steering.hpp"

namespace engel {

/// Finite union of disjoint closed intervals, sorted; points are degenerate
/// intervals.
class CompactSet1D {
 public:
  explicit CompactSet1D(std::vector<std::array<double, 2>> intervals);

  const std::vector<std::array<double, 2>>& intervals() const { return intervals_; }
  double min() const { return intervals_.front()[0]; }
  double max() const { return intervals_.back()[1]; }
  double measure() const;
  bool contains(double t, double tol = 0.0) const;

  /// Open gaps (b_i, a_{i+1}) of the complement within [min, max].
  std::vector<std::array<double, 2>> gaps() const;

 private:
  std::vector<std::array<double, 2>> intervals_;
};

/// Whitney data on a compact set: curve values and candidate horizontal
/// derivatives sampled on a grid covering K.
struct CurveFragment {
  CompactSet1D K;
  std::vector<double> times;                     // grid points, all inside K
  std::vector<std::array<double, 4>> points;     // gamma(t), SecondExp
  std::vector<std::array<double, 2>> X;          // (u1, u2) candidate derivative
};

struct WhitneyTable {
  std::vector<double> etas;
  std::vector<double> r;        // r_{K,eta} per eta
  bool monotone_decay = true;   // r nonincreasing as eta decreases
};

WhitneyTable check_whitney(const CurveFragment& frag, const std::vector<double>& etas);

struct GapSolveInfo {
  std::array<double, 2> gap;
  int iterations = 0;
  double residual = 0.0;
  bool used_preroll_fallback = false;
};

/// Closed-form curve filling one gap (ga, gb):
/// t -> base * delta_{gb-ga}(beta(s)) with s = (t - ga)/(gb - ga), where
/// beta : [0,1] -> E is piecewise polynomial (one segment for a direct
/// steering solve, two when the pre-roll fallback was used).
struct GapCurve {
  struct Segment {
    double s0 = 0.0, s1 = 1.0;
    LiftedPolys beta;  // polynomials in s on [s0, s1]
  };

  double ga = 0.0, gb = 0.0;
  GroupPoint base;
  std::vector<Segment> segments;

  std::array<double, 4> eval(double t) const;
  std::array<double, 2> deriv(double t) const;
};

struct ExtensionResult {
  SampledCurve Gamma;                 // on [min K, max K]
  std::vector<GapCurve> gap_curves;
  std::vector<GapSolveInfo> per_gap;
  WhitneyTable r_table;
  double max_horizontality_residual = 0.0;
  double max_derivative_jump = 0.0;   // one-sided FD mismatch at gap endpoints
};

struct ExtendOptions {
  double tol = 1e-10;
  double tau_dir = 1e-9;
  int gap_grid = 257;     // samples per gap
  int fd_grid = 10001;    // diagnostic finite-difference resolution
};

/// Whitney-type C^1_H extension across the gaps of K: each gap is normalized
/// by left translation and dilation, solved with steer_full, and mapped back.
/// Values and derivatives on K are copied verbatim.
ExtensionResult extend(const CurveFragment& frag, const ExtendOptions& opts = {});

struct LusinResult {
  SampledCurve Gamma;      // on the curve's full domain
  CompactSet1D K;
  double agreement = 0.0;  // grid measure of {Gamma = gamma}
  double m_S = 0.0;        // grid measure of the nondegenerate set S
  bool degenerate = false; // handled by the classical 1-D route
};

struct LusinOptions {
  double epsilon = 0.1;
  double tau_dir = 1e-9;
  double tol = 1e-10;
  double agreement_tol = 1e-9;
};

/// Lusin approximation: selects a compact K inside
/// S = {t : |u1(t)| >= tau_dir}, discarding at most epsilon of grid measure,
/// and extends the restricted fragment.
LusinResult lusin_approximate(const SampledCurve& curve, const LusinOptions& opts = {});

/// Degenerate route for curves with u1 == 0: classical 1-D Whitney extension
/// of the second coordinate; the output (0, W(t), 0, 0) is horizontal.
LusinResult lusin_degenerate(const SampledCurve& curve, const LusinOptions& opts = {});

struct Whitney1DResult {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> derivs;
  double max_condition_violation = 0.0;  // worst sampled Whitney defect on K
};

/// Classical C^1 Whitney extension from scalar data on K: identity on K,
/// cubic Hermite across each gap.
Whitney1DResult classical_whitney_1d(const CompactSet1D& K,
                                     const std::vector<double>& times,
                                     const std::vector<double>& f,
                                     const std::vector<double>& fp,
                                     const std::vector<double>& out_grid);

/// Grid measure of {t : box_dist(gamma(t), Gamma(t)) <= tol}.
double measure_agreement(const SampledCurve& gamma, const SampledCurve& Gamma, double tol);

}  // namespace engel

#endif
