#include "engel/poly.hpp"

#include <cmath>

namespace engel {

double Poly::operator()(double t) const {
  double v = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * t + *it;
  return v;
}

void Poly::trim() {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly();
  std::vector<double> d(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
  return Poly(std::move(d));
}

Poly Poly::antiderivative() const {
  std::vector<double> d(c_.size() + 1, 0.0);
  for (size_t k = 0; k < c_.size(); ++k) d[k + 1] = c_[k] / static_cast<double>(k + 1);
  return Poly(std::move(d));
}

Poly Poly::compose_affine(double alpha, double beta) const {
  Poly result;
  Poly lin({beta, alpha});
  for (auto it = c_.rbegin(); it != c_.rend(); ++it)
    result = result * lin + Poly::constant(*it);
  return result;
}

Poly Poly::operator+(const Poly& o) const {
  std::vector<double> d(std::max(c_.size(), o.c_.size()), 0.0);
  for (size_t k = 0; k < c_.size(); ++k) d[k] += c_[k];
  for (size_t k = 0; k < o.c_.size(); ++k) d[k] += o.c_[k];
  return Poly(std::move(d));
}

Poly Poly::operator-(const Poly& o) const { return *this + o * -1.0; }

Poly Poly::operator*(const Poly& o) const {
  if (c_.empty() || o.c_.empty()) return Poly();
  std::vector<double> d(c_.size() + o.c_.size() - 1, 0.0);
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) d[i + j] += c_[i] * o.c_[j];
  return Poly(std::move(d));
}

Poly Poly::operator*(double s) const {
  std::vector<double> d = c_;
  for (double& v : d) v *= s;
  return Poly(std::move(d));
}

MultiPoly MultiPoly::constant(int nvars, Rational v) {
  MultiPoly p(nvars);
  if (v.numerator() != 0) p.terms_[Monomial(nvars, 0)] = v;
  return p;
}

MultiPoly MultiPoly::variable(int nvars, int idx) {
  MultiPoly p(nvars);
  Monomial m(nvars, 0);
  m[idx] = 1;
  p.terms_[m] = Rational(1);
  return p;
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  MultiPoly out = *this;
  for (const auto& [m, v] : o.terms_) {
    auto& slot = out.terms_[m];
    slot += v;
    if (slot.numerator() == 0) out.terms_.erase(m);
  }
  return out;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const { return *this + o * Rational(-1); }

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  MultiPoly out(nvars_);
  for (const auto& [m1, v1] : terms_)
    for (const auto& [m2, v2] : o.terms_) {
      Monomial m(nvars_);
      for (int i = 0; i < nvars_; ++i) m[i] = m1[i] + m2[i];
      auto& slot = out.terms_[m];
      slot += v1 * v2;
      if (slot.numerator() == 0) out.terms_.erase(m);
    }
  return out;
}

MultiPoly MultiPoly::operator*(Rational s) const {
  MultiPoly out(nvars_);
  if (s.numerator() == 0) return out;
  for (const auto& [m, v] : terms_) out.terms_[m] = v * s;
  return out;
}

MultiPoly MultiPoly::partial(int var) const {
  MultiPoly out(nvars_);
  for (const auto& [m, v] : terms_) {
    if (m[var] == 0) continue;
    Monomial d = m;
    d[var] -= 1;
    out.terms_[d] = v * Rational(m[var]);
  }
  return out;
}

double MultiPoly::eval(const std::vector<double>& x) const {
  double out = 0.0;
  for (const auto& [m, v] : terms_) {
    double term = boost::rational_cast<double>(v);
    for (int i = 0; i < nvars_; ++i)
      for (int e = 0; e < m[i]; ++e) term *= x[i];
    out += term;
  }
  return out;
}

ParamPolyInT::ParamPolyInT(std::vector<MultiPoly> coeffs)
    : nvars_(coeffs.empty() ? 0 : coeffs.front().nvars()), c_(std::move(coeffs)) {}

ParamPolyInT ParamPolyInT::operator+(const ParamPolyInT& o) const {
  std::vector<MultiPoly> d(std::max(c_.size(), o.c_.size()), MultiPoly(nvars_));
  for (size_t k = 0; k < c_.size(); ++k) d[k] = d[k] + c_[k];
  for (size_t k = 0; k < o.c_.size(); ++k) d[k] = d[k] + o.c_[k];
  ParamPolyInT out(nvars_);
  out.c_ = std::move(d);
  return out;
}

ParamPolyInT ParamPolyInT::operator*(const ParamPolyInT& o) const {
  ParamPolyInT out(nvars_);
  if (c_.empty() || o.c_.empty()) return out;
  out.c_.assign(c_.size() + o.c_.size() - 1, MultiPoly(nvars_));
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) out.c_[i + j] = out.c_[i + j] + c_[i] * o.c_[j];
  return out;
}

ParamPolyInT ParamPolyInT::operator*(Rational s) const {
  ParamPolyInT out(nvars_);
  out.c_.reserve(c_.size());
  for (const auto& m : c_) out.c_.push_back(m * s);
  return out;
}

ParamPolyInT ParamPolyInT::antiderivative() const {
  ParamPolyInT out(nvars_);
  out.c_.assign(c_.size() + 1, MultiPoly(nvars_));
  for (size_t k = 0; k < c_.size(); ++k)
    out.c_[k + 1] = c_[k] * Rational(1, static_cast<long long>(k + 1));
  return out;
}

MultiPoly ParamPolyInT::at_one() const {
  MultiPoly out(nvars_);
  for (const auto& m : c_) out = out + m;
  return out;
}

}  // namespace engel
