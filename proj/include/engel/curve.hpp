#ifndef ENGEL_CURVE_HPP
#define ENGEL_CURVE_HPP

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "engel/group.hpp"
#include "engel/poly.hpp"

namespace engel {

/// Horizontal control pair (u1, u2) on a domain [t0, t1]. Polynomial controls
/// evaluate exactly; sampled controls are piecewise-linear interpolated.
class ControlPair {
 public:
  static ControlPair polynomial(Poly u1, Poly u2, double t0, double t1);
  static ControlPair sampled(std::vector<double> times, std::vector<double> u1,
                             std::vector<double> u2);

  bool is_polynomial() const { return poly_.has_value(); }
  double t0() const { return t0_; }
  double t1() const { return t1_; }

  std::array<double, 2> eval(double t) const;
  const Poly& u1_poly() const { return poly_->first; }
  const Poly& u2_poly() const { return poly_->second; }
  const std::vector<double>& sample_times() const { return times_; }

 private:
  ControlPair() = default;
  std::optional<std::pair<Poly, Poly>> poly_;
  std::vector<double> times_, u1_, u2_;
  double t0_ = 0.0, t1_ = 1.0;
};

/// A horizontal curve sampled on a strictly increasing time grid. Points are
/// kept in exponential coordinates of the second kind.
struct SampledCurve {
  std::vector<double> times;
  std::vector<std::array<double, 4>> points;
  std::vector<std::array<double, 2>> derivs;  // horizontal controls, optional

  bool has_derivs() const { return derivs.size() == times.size() && !times.empty(); }
  GroupPoint point(size_t i) const {
    return {{points[i][0], points[i][1], points[i][2], points[i][3]}, CoordKind::SecondExp};
  }
  /// Componentwise linear interpolation of coordinates at time t.
  std::array<double, 4> interp(double t) const;
  std::array<double, 2> interp_deriv(double t) const;
};

/// Closed-form lift of polynomial controls: the four coordinate polynomials
/// obtained by exact antiderivatives of u1, u2, x1*u2, x1^2*u2/2.
struct LiftedPolys {
  Poly x1, x2, x3, x4;
  Poly u1, u2;
  std::array<double, 4> eval(double t) const { return {x1(t), x2(t), x3(t), x4(t)}; }
};

LiftedPolys lift_poly(const ControlPair& controls, const GroupPoint& start);

/// Horizontal lift onto a time grid. Polynomial controls use the closed form;
/// sampled controls integrate the lift ODEs x3' = x1 u2, x4' = x1^2 u2 / 2
/// with composite Simpson per grid cell.
SampledCurve lift(const ControlPair& controls, const GroupPoint& start,
                  const std::vector<double>& grid);

std::vector<double> uniform_grid(double t0, double t1, int n);

/// Max over interior grid points of the lift-ODE defects, estimated with
/// central finite differences (one-sided stencils are not used; endpoints are
/// skipped).
double horizontality_residual(const SampledCurve& curve);

/// Length integral of |u| by adaptive Simpson.
double curve_length(const ControlPair& controls, double tol = 1e-10);

/// Metric on C^1_H over a common grid: max of the sup box distance between
/// points and the sup Euclidean norm of the horizontal derivative difference.
double c1h_distance(const SampledCurve& a, const SampledCurve& b);

/// sup over sampled pairs tau != t, |tau - t| < eta, of
/// box_dist(p(t), p(tau) * exp((t - tau) X(tau))) / |tau - t|.
/// Singleton data returns 0 (empty sup).
double difference_quotient_sup(const std::vector<double>& times,
                               const std::vector<std::array<double, 4>>& points,
                               const std::vector<std::array<double, 2>>& X,
                               double eta);

struct ArclengthResult {
  SampledCurve phi;          // unit-speed curve on [0, T]
  std::vector<double> F;     // cumulative length at the input grid times
  double total_length = 0.0;
};

/// gamma = phi o F with F(t) the running length. Zero-length curves return a
/// constant phi and F identically 0.
ArclengthResult arclength_reparam(const SampledCurve& curve);

}  // namespace engel

#endif
