#ifndef ENGEL_STEERING_HPP
#define ENGEL_STEERING_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "engel/curve.hpp"
#include "engel/group.hpp"

namespace engel {

/// Polynomial control family on [0,1] from the origin:
/// u1(t) = a + c t, u2(t) = b + d1 t + d2 t^2 + d3 t^3.
/// The start derivative is (a, b) for every parameter choice.
struct SteeringFamily {
  double a = 0.0, b = 0.0;
  std::array<double, 4> params{};  // c, d1, d2, d3

  ControlPair controls() const;
};

/// Six-parameter enlargement matching endpoint and end derivative:
/// u1 = a + c1 t + c2 t^2, u2 = b + d1 t + d2 t^2 + d3 t^3 + d4 t^4.
struct ExtendedSteeringFamily {
  double a = 0.0, b = 0.0;
  std::array<double, 6> params{};  // c1, c2, d1, d2, d3, d4

  ControlPair controls() const;
};

struct SteeringSolution {
  bool extended = false;
  SteeringFamily family;
  ExtendedSteeringFamily ext_family;
  double residual = 0.0;
  int iterations = 0;
  SampledCurve curve;

  ControlPair controls() const {
    return extended ? ext_family.controls() : family.controls();
  }
};

/// Exact closed-form endpoint gamma(1) of the 4-parameter family.
GroupPoint endpoint_map(const SteeringFamily& fam);
/// Analytic Jacobian of endpoint_map in (c, d1, d2, d3) at the given params.
std::array<std::array<double, 4>, 4> endpoint_jacobian(const SteeringFamily& fam);
/// Closed-form dF(0): [[1/2,0,0,0],[0,1/2,1/3,1/4],[b/6,a/3,a/4,a/5],
/// [ab/8,a^2/8,a^2/10,a^2/12]].
std::array<std::array<double, 4>, 4> endpoint_jacobian_zero(double a, double b);

/// Endpoint and end derivative (6 values) of the extended family, plus its
/// analytic 6x6 Jacobian.
std::array<double, 6> extended_boundary_map(const ExtendedSteeringFamily& fam);
std::array<std::array<double, 6>, 6> extended_boundary_jacobian(
    const ExtendedSteeringFamily& fam);

inline constexpr double kDefaultAMin = 1e-6;

/// Newton solve of endpoint_map(params) = target with the exact analytic
/// Jacobian and step-halving damping.
SteeringSolution steer_position(double a, double b, const GroupPoint& target,
                                double tol = 1e-10, int max_iter = 50,
                                double a_min = kDefaultAMin, int grid = 1001);

/// Newton solve of the 6-constraint system {endpoint = target,
/// end derivative = end_deriv} over the extended family.
SteeringSolution steer_full(double a, double b, std::array<double, 2> end_deriv,
                            const GroupPoint& target, double tol = 1e-10,
                            int max_iter = 50, double a_min = kDefaultAMin,
                            int grid = 1001);

/// The pre-roll curve on [0, rho] from 0 with derivative
/// (1/rho)(t Y0 + (rho - t) W): start derivative W, end derivative Y0.
SampledCurve preroll(double rho, std::array<double, 2> W, std::array<double, 2> Y0,
                     int grid = 1001);

/// Left-translate of the (1-rho)-dilate of a curve on [0,1], placed on
/// [rho, 1]: t -> x_rho * delta_{1-rho}(inner((t - rho)/(1 - rho))). The
/// horizontal derivative equals inner's at the rescaled time.
SampledCurve concat_scaled(const GroupPoint& x_rho, double rho,
                           const SampledCurve& inner);

struct ObstructionReport {
  int trials = 0;
  int violations = 0;
  double min_abs_gamma4 = 0.0;
};

/// Samples random degree-<=3 C^1 control perturbations with sup-norm
/// derivative distance < |b|/2 from (0, b) and checks that the sign of
/// gamma_4(1) always matches the sign of b.
ObstructionReport x2_obstruction_probe(double b, int trials, std::uint64_t seed);

}  // namespace engel

#endif
