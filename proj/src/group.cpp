#include "engel/group.hpp"

#include <cmath>

#include "engel/errors.hpp"

namespace engel {

namespace {

bool is_engel(const StratifiedAlgebra& alg) {
  return alg.dim() == 4 && alg.step() == 3 && alg.layer_dims()[0] == 2 &&
         alg.structure_const(0, 1, 2) == 1.0 && alg.structure_const(0, 2, 3) == 1.0;
}

void require_engel(const StratifiedAlgebra& alg, const char* what) {
  if (!is_engel(alg))
    throw Error(ErrorCode::InvalidArgument,
                std::string(what) + " is implemented only for the built-in Engel instance");
}

}  // namespace

namespace detail {

std::vector<double> engel_second_flow(const std::vector<double>& x, int i, double t) {
  std::vector<double> y = x;
  switch (i) {
    case 1: y[0] += t; break;
    case 2:
      y[1] += t;
      y[2] += t * x[0];
      y[3] += 0.5 * t * x[0] * x[0];
      break;
    case 3:
      y[2] += t;
      y[3] += t * x[0];
      break;
    case 4: y[3] += t; break;
    default: throw Error(ErrorCode::InvalidArgument, "generator index out of range");
  }
  return y;
}

}  // namespace detail

GroupPoint first_to_second(const GroupPoint& x) {
  if (x.kind == CoordKind::SecondExp) return x;
  const auto& a = x.coords;
  if (a.size() != 4) throw Error(ErrorCode::DimensionMismatch, "Engel point must have 4 coords");
  // exp(a1 X1 + a2 X2 + a3 X3 + a4 X4)
  //   = exp(x4 X4) exp(x3 X3) exp(x2 X2) exp(x1 X1)
  // with x3 = a3 + a1 a2 / 2 and x4 = a4 + a1 a3 / 2 + a1^2 a2 / 6.
  std::vector<double> y(4);
  y[0] = a[0];
  y[1] = a[1];
  y[2] = a[2] + 0.5 * a[0] * a[1];
  y[3] = a[3] + 0.5 * a[0] * a[2] + a[0] * a[0] * a[1] / 6.0;
  return {y, CoordKind::SecondExp};
}

GroupPoint second_to_first(const GroupPoint& x) {
  if (x.kind == CoordKind::FirstExp) return x;
  const auto& y = x.coords;
  if (y.size() != 4) throw Error(ErrorCode::DimensionMismatch, "Engel point must have 4 coords");
  // Ordered product exp(y4 X4) exp(y3 X3) exp(y2 X2) exp(y1 X1)
  //   = exp(y1 X1 + y2 X2 + (y3 - y1 y2/2) X3 + (y4 + y1^2 y2/12 - y1 y3/2) X4).
  std::vector<double> a(4);
  a[0] = y[0];
  a[1] = y[1];
  a[2] = y[2] - 0.5 * y[0] * y[1];
  a[3] = y[3] + y[0] * y[0] * y[1] / 12.0 - 0.5 * y[0] * y[2];
  return {a, CoordKind::FirstExp};
}

GroupPoint group_mul(const GroupPoint& x, const GroupPoint& y,
                     const StratifiedAlgebra& alg) {
  if (x.kind != y.kind) throw Error(ErrorCode::KindMismatch, "operands have different coordinate kinds");
  if (static_cast<int>(x.coords.size()) != alg.dim() ||
      static_cast<int>(y.coords.size()) != alg.dim())
    throw Error(ErrorCode::DimensionMismatch, "point dimension mismatch");
  if (x.kind == CoordKind::FirstExp) {
    return {bch(x.coords, y.coords, alg), CoordKind::FirstExp};
  }
  require_engel(alg, "SecondExp group law");
  // x * exp(y4 X4) exp(y3 X3) exp(y2 X2) exp(y1 X1): compose the closed-form
  // per-generator right-multiplication updates.
  std::vector<double> p = x.coords;
  p = detail::engel_second_flow(p, 4, y.coords[3]);
  p = detail::engel_second_flow(p, 3, y.coords[2]);
  p = detail::engel_second_flow(p, 2, y.coords[1]);
  p = detail::engel_second_flow(p, 1, y.coords[0]);
  return {p, CoordKind::SecondExp};
}

GroupPoint group_inv(const GroupPoint& x, const StratifiedAlgebra& alg) {
  if (x.kind == CoordKind::FirstExp) {
    GroupPoint out = x;
    for (double& c : out.coords) c = -c;
    return out;
  }
  require_engel(alg, "SecondExp inverse");
  GroupPoint a = second_to_first(x);
  for (double& c : a.coords) c = -c;
  return first_to_second(a);
}

GroupPoint dilate(double lambda, const GroupPoint& x, const StratifiedAlgebra& alg) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "dilation factor must be positive");
  GroupPoint out = x;
  for (int i = 0; i < alg.dim(); ++i)
    out.coords[i] *= std::pow(lambda, alg.homogeneity(i));
  return out;
}

double box_norm(const GroupPoint& x, const StratifiedAlgebra& alg) {
  GroupPoint p = x;
  if (p.kind == CoordKind::SecondExp) {
    require_engel(alg, "box norm of a SecondExp point");
    p = second_to_first(p);
  }
  double best = 0.0;
  int idx = 0;
  for (size_t layer = 0; layer < alg.layer_dims().size(); ++layer) {
    double s = 0.0;
    for (int j = 0; j < alg.layer_dims()[layer]; ++j, ++idx)
      s += p.coords[idx] * p.coords[idx];
    double v = std::pow(std::sqrt(s), 1.0 / static_cast<double>(layer + 1));
    best = std::max(best, v);
  }
  return best;
}

double box_dist(const GroupPoint& x, const GroupPoint& y, const StratifiedAlgebra& alg) {
  if (x.kind != y.kind) throw Error(ErrorCode::KindMismatch, "operands have different coordinate kinds");
  GroupPoint diff = group_mul(group_inv(y, alg), x, alg);
  return box_norm(diff, alg);
}

GroupPoint group_exp(const AlgebraVector& v, const StratifiedAlgebra& alg, CoordKind kind) {
  if (static_cast<int>(v.size()) != alg.dim())
    throw Error(ErrorCode::DimensionMismatch, "algebra vector dimension mismatch");
  GroupPoint first{v, CoordKind::FirstExp};
  if (kind == CoordKind::FirstExp) return first;
  require_engel(alg, "SecondExp exponential");
  return first_to_second(first);
}

}  // namespace engel
