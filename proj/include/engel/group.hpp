#ifndef ENGEL_GROUP_HPP
#define ENGEL_GROUP_HPP

#include <vector>

#include "engel/algebra.hpp"

namespace engel {

enum class CoordKind { FirstExp, SecondExp };

/// A point of the group in exponential coordinates of the first or second
/// kind. The identity is the zero vector in either kind.
struct GroupPoint {
  std::vector<double> coords;
  CoordKind kind = CoordKind::FirstExp;

  static GroupPoint identity(int n, CoordKind kind) {
    return {std::vector<double>(n, 0.0), kind};
  }
};

GroupPoint group_mul(const GroupPoint& x, const GroupPoint& y,
                     const StratifiedAlgebra& alg);
GroupPoint group_inv(const GroupPoint& x, const StratifiedAlgebra& alg);

/// Anisotropic dilation: coordinate i scales by lambda^{d_i}. Diagonal in
/// both coordinate kinds since dilations are automorphisms acting diagonally
/// on the adapted basis.
GroupPoint dilate(double lambda, const GroupPoint& x,
                  const StratifiedAlgebra& alg);

/// Box quasi-norm with unit layer constants:
/// max_k |x_layer_k|^{1/k} with the Euclidean norm per layer. FirstExp only;
/// SecondExp points are converted (Engel).
double box_norm(const GroupPoint& x, const StratifiedAlgebra& alg);
double box_dist(const GroupPoint& x, const GroupPoint& y,
                const StratifiedAlgebra& alg);

/// Coordinate conversions for the built-in Engel instance.
GroupPoint first_to_second(const GroupPoint& x);
GroupPoint second_to_first(const GroupPoint& x);

/// exp of an algebra vector as a point in the requested kind (Engel for
/// SecondExp; FirstExp works for any algebra since exp coords are identity).
GroupPoint group_exp(const AlgebraVector& v, const StratifiedAlgebra& alg,
                     CoordKind kind);

namespace detail {
/// Right multiplication by exp(t X_i) in Engel SecondExp coordinates,
/// i in {1,2,3,4}. The i=2 case is the flow update
/// (x1, x2+t, x3+t*x1, x4+t*x1^2/2).
std::vector<double> engel_second_flow(const std::vector<double>& x, int i,
                                      double t);
}  // namespace detail

}  // namespace engel

#endif
