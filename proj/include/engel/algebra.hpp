#ifndef ENGEL_ALGEBRA_HPP
#define ENGEL_ALGEBRA_HPP

#include <string>
#include <vector>

namespace engel {

/// Coefficient vector in the adapted basis X_1..X_n of a stratified algebra.
using AlgebraVector = std::vector<double>;

/// A stratified Lie algebra of step <= 3 given by layer dimensions and
/// structure constants: [X_i, X_j] = sum_k c[i][j][k] X_k (indices 0-based).
class StratifiedAlgebra {
 public:
  StratifiedAlgebra(std::vector<int> layer_dims,
                    std::vector<std::vector<std::vector<double>>> structure_consts);

  int dim() const { return n_; }
  int step() const { return static_cast<int>(layer_dims_.size()); }
  int horizontal_dim() const { return layer_dims_[0]; }
  const std::vector<int>& layer_dims() const { return layer_dims_; }

  /// Layer number (1-based homogeneity d_i) of basis index i (0-based).
  int homogeneity(int i) const { return homogeneity_[i]; }
  const std::vector<int>& homogeneities() const { return homogeneity_; }

  double structure_const(int i, int j, int k) const { return c_[i][j][k]; }

  /// Checks antisymmetry, the Jacobi identity on all basis triples, layer
  /// grading of brackets, and that layer-1 brackets span each higher layer.
  /// Throws Error(InvalidArgument) on the first violation found.
  void validate() const;

  bool is_horizontal(const AlgebraVector& v, double tol = 0.0) const;

  std::string to_json() const;
  static StratifiedAlgebra from_json(const std::string& text);

 private:
  int n_;
  std::vector<int> layer_dims_;
  std::vector<int> homogeneity_;
  std::vector<std::vector<std::vector<double>>> c_;
};

/// The Engel algebra: layers (2,1,1), [X1,X2]=X3, [X1,X3]=X4.
const StratifiedAlgebra& engel_algebra();

/// Abelian algebra of given horizontal dimension (all brackets zero).
StratifiedAlgebra abelian_algebra(int dim);

AlgebraVector bracket(const AlgebraVector& a, const AlgebraVector& b,
                      const StratifiedAlgebra& alg);

/// Step-3 truncated BCH: Z = A + B + [A,B]/2 + [A,[A,B]]/12 - [B,[A,B]]/12.
AlgebraVector bch(const AlgebraVector& a, const AlgebraVector& b,
                  const StratifiedAlgebra& alg);

}  // namespace engel

#endif
