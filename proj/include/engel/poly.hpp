#ifndef ENGEL_POLY_HPP
#define ENGEL_POLY_HPP

#include <map>
#include <vector>

#include <boost/rational.hpp>

namespace engel {

/// Univariate polynomial with double coefficients, p(t) = sum c_k t^k.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }
  static Poly constant(double v) { return Poly({v}); }

  double operator()(double t) const;
  const std::vector<double>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }

  Poly derivative() const;
  /// Antiderivative with P(0) = 0; exact up to one rounding per coefficient.
  Poly antiderivative() const;
  /// p(alpha t + beta) as a polynomial in t.
  Poly compose_affine(double alpha, double beta) const;

  Poly operator+(const Poly& o) const;
  Poly operator-(const Poly& o) const;
  Poly operator*(const Poly& o) const;
  Poly operator*(double s) const;

 private:
  void trim();
  std::vector<double> c_;
};

using Rational = boost::rational<long long>;

/// Sparse multivariate polynomial over exact rationals in a fixed number of
/// parameter variables. Used to derive endpoint maps and their Jacobians in
/// closed form once, then evaluate in doubles.
class MultiPoly {
 public:
  using Monomial = std::vector<int>;  // exponent per variable

  explicit MultiPoly(int nvars) : nvars_(nvars) {}
  static MultiPoly constant(int nvars, Rational v);
  static MultiPoly variable(int nvars, int idx);

  int nvars() const { return nvars_; }

  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator*(const MultiPoly& o) const;
  MultiPoly operator*(Rational s) const;

  MultiPoly partial(int var) const;
  double eval(const std::vector<double>& x) const;

 private:
  int nvars_;
  std::map<Monomial, Rational> terms_;
};

/// Univariate polynomial in t whose coefficients are MultiPolys in the
/// parameters. Supports the exact quadrature needed by the endpoint maps.
class ParamPolyInT {
 public:
  explicit ParamPolyInT(int nvars) : nvars_(nvars) {}
  explicit ParamPolyInT(std::vector<MultiPoly> coeffs);

  int nvars() const { return nvars_; }
  const std::vector<MultiPoly>& coeffs() const { return c_; }

  ParamPolyInT operator+(const ParamPolyInT& o) const;
  ParamPolyInT operator*(const ParamPolyInT& o) const;
  ParamPolyInT operator*(Rational s) const;

  /// Antiderivative in t with value 0 at t = 0 (exact rational division).
  ParamPolyInT antiderivative() const;
  /// Evaluate at t = 1: sum of the t-coefficients.
  MultiPoly at_one() const;

 private:
  int nvars_;
  std::vector<MultiPoly> c_;
};

}  // namespace engel

#endif
