#include "engel/algebra.hpp"

#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "engel/errors.hpp"

namespace engel {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DIMENSION_MISMATCH";
    case ErrorCode::KindMismatch: return "KIND_MISMATCH";
    case ErrorCode::StepTooLarge: return "STEP_TOO_LARGE";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::SingularDirection: return "SINGULAR_DIRECTION";
    case ErrorCode::NoConvergence: return "NO_CONVERGENCE";
    case ErrorCode::NotAdmissible: return "NOT_ADMISSIBLE";
    case ErrorCode::NotDegenerate: return "NOT_DEGENERATE";
    case ErrorCode::EmptyS: return "EMPTY_S";
    case ErrorCode::SteeringFailed: return "STEERING_FAILED";
    case ErrorCode::GridMismatch: return "GRID_MISMATCH";
    case ErrorCode::ParseError: return "PARSE_ERROR";
  }
  return "UNKNOWN";
}

StratifiedAlgebra::StratifiedAlgebra(
    std::vector<int> layer_dims,
    std::vector<std::vector<std::vector<double>>> structure_consts)
    : layer_dims_(std::move(layer_dims)), c_(std::move(structure_consts)) {
  if (layer_dims_.empty() || layer_dims_.size() > 3) {
    throw Error(ErrorCode::StepTooLarge, "step must be between 1 and 3");
  }
  for (int m : layer_dims_) {
    if (m <= 0) throw Error(ErrorCode::InvalidArgument, "layer dims must be positive");
  }
  n_ = std::accumulate(layer_dims_.begin(), layer_dims_.end(), 0);
  homogeneity_.resize(n_);
  int idx = 0;
  for (size_t layer = 0; layer < layer_dims_.size(); ++layer) {
    for (int j = 0; j < layer_dims_[layer]; ++j) homogeneity_[idx++] = static_cast<int>(layer) + 1;
  }
  if (static_cast<int>(c_.size()) != n_) {
    throw Error(ErrorCode::DimensionMismatch, "structure constant table size mismatch");
  }
  for (const auto& row : c_) {
    if (static_cast<int>(row.size()) != n_)
      throw Error(ErrorCode::DimensionMismatch, "structure constant table size mismatch");
    for (const auto& col : row) {
      if (static_cast<int>(col.size()) != n_)
        throw Error(ErrorCode::DimensionMismatch, "structure constant table size mismatch");
    }
  }
}

void StratifiedAlgebra::validate() const {
  const double tol = 1e-12;
  // Antisymmetry.
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        if (std::abs(c_[i][j][k] + c_[j][i][k]) > tol)
          throw Error(ErrorCode::InvalidArgument, "structure constants not antisymmetric");

  // Grading: [g_p, g_q] lands in g_{p+q}, zero beyond the step.
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        if (std::abs(c_[i][j][k]) > tol &&
            homogeneity_[k] != homogeneity_[i] + homogeneity_[j])
          throw Error(ErrorCode::InvalidArgument, "brackets violate the layer grading");

  // Jacobi identity on basis triples.
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k)
        for (int m = 0; m < n_; ++m) {
          double s = 0;
          for (int l = 0; l < n_; ++l) {
            s += c_[j][k][l] * c_[i][l][m];
            s += c_[k][i][l] * c_[j][l][m];
            s += c_[i][j][l] * c_[k][l][m];
          }
          if (std::abs(s) > tol)
            throw Error(ErrorCode::InvalidArgument, "Jacobi identity fails");
        }

  // Stratification: brackets of layer 1 with layer (l-1) span layer l.
  int offset = layer_dims_[0];
  for (size_t layer = 1; layer < layer_dims_.size(); ++layer) {
    int m = layer_dims_[layer];
    // Collect bracket images [X_i, X_j], d_i = 1, d_j = layer, restricted to
    // the target layer block, and check their span by Gaussian elimination.
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < n_; ++i) {
      if (homogeneity_[i] != 1) continue;
      for (int j = 0; j < n_; ++j) {
        if (homogeneity_[j] != static_cast<int>(layer)) continue;
        std::vector<double> row(m);
        for (int k = 0; k < m; ++k) row[k] = c_[i][j][offset + k];
        rows.push_back(std::move(row));
      }
    }
    int rank = 0;
    for (int col = 0; col < m && rank < static_cast<int>(rows.size()); ++col) {
      int piv = -1;
      double best = 1e-9;
      for (int r = rank; r < static_cast<int>(rows.size()); ++r)
        if (std::abs(rows[r][col]) > best) { best = std::abs(rows[r][col]); piv = r; }
      if (piv < 0) continue;
      std::swap(rows[rank], rows[piv]);
      for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
        if (r == rank) continue;
        double f = rows[r][col] / rows[rank][col];
        for (int k = col; k < m; ++k) rows[r][k] -= f * rows[rank][k];
      }
      ++rank;
    }
    if (rank < m)
      throw Error(ErrorCode::InvalidArgument, "layer-1 brackets do not span layer " +
                                                  std::to_string(layer + 1));
    offset += m;
  }
}

bool StratifiedAlgebra::is_horizontal(const AlgebraVector& v, double tol) const {
  for (int i = layer_dims_[0]; i < n_; ++i)
    if (std::abs(v[i]) > tol) return false;
  return true;
}

std::string StratifiedAlgebra::to_json() const {
  nlohmann::json j;
  j["layer_dims"] = layer_dims_;
  nlohmann::json brackets = nlohmann::json::array();
  for (int i = 0; i < n_; ++i)
    for (int jj = i + 1; jj < n_; ++jj) {
      nlohmann::json out;
      for (int k = 0; k < n_; ++k)
        if (c_[i][jj][k] != 0.0) out[std::to_string(k + 1)] = c_[i][jj][k];
      if (!out.empty())
        brackets.push_back({{"i", i + 1}, {"j", jj + 1}, {"out", out}});
    }
  j["brackets"] = brackets;
  return j.dump();
}

StratifiedAlgebra StratifiedAlgebra::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  std::vector<int> dims = j.at("layer_dims").get<std::vector<int>>();
  int n = std::accumulate(dims.begin(), dims.end(), 0);
  std::vector<std::vector<std::vector<double>>> c(
      n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
  for (const auto& b : j.at("brackets")) {
    int i = b.at("i").get<int>() - 1;
    int jj = b.at("j").get<int>() - 1;
    if (i < 0 || jj < 0 || i >= n || jj >= n)
      throw Error(ErrorCode::ParseError, "bracket index out of range");
    for (const auto& [key, val] : b.at("out").items()) {
      int k = std::stoi(key) - 1;
      if (k < 0 || k >= n) throw Error(ErrorCode::ParseError, "bracket output index out of range");
      c[i][jj][k] = val.get<double>();
      c[jj][i][k] = -c[i][jj][k];
    }
  }
  return StratifiedAlgebra(std::move(dims), std::move(c));
}

const StratifiedAlgebra& engel_algebra() {
  static const StratifiedAlgebra alg = [] {
    std::vector<std::vector<std::vector<double>>> c(
        4, std::vector<std::vector<double>>(4, std::vector<double>(4, 0.0)));
    c[0][1][2] = 1.0;   // [X1,X2] = X3
    c[1][0][2] = -1.0;
    c[0][2][3] = 1.0;   // [X1,X3] = X4
    c[2][0][3] = -1.0;
    return StratifiedAlgebra({2, 1, 1}, std::move(c));
  }();
  return alg;
}

StratifiedAlgebra abelian_algebra(int dim) {
  std::vector<std::vector<std::vector<double>>> c(
      dim, std::vector<std::vector<double>>(dim, std::vector<double>(dim, 0.0)));
  return StratifiedAlgebra({dim}, std::move(c));
}

AlgebraVector bracket(const AlgebraVector& a, const AlgebraVector& b,
                      const StratifiedAlgebra& alg) {
  const int n = alg.dim();
  if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "bracket operands must have dimension " +
                                                  std::to_string(n));
  AlgebraVector out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      if (b[j] == 0.0) continue;
      for (int k = 0; k < n; ++k) {
        double cc = alg.structure_const(i, j, k);
        if (cc != 0.0) out[k] += a[i] * b[j] * cc;
      }
    }
  }
  return out;
}

AlgebraVector bch(const AlgebraVector& a, const AlgebraVector& b,
                  const StratifiedAlgebra& alg) {
  if (alg.step() > 3) throw Error(ErrorCode::StepTooLarge, "BCH implemented for step <= 3");
  const int n = alg.dim();
  if (static_cast<int>(a.size()) != n || static_cast<int>(b.size()) != n)
    throw Error(ErrorCode::DimensionMismatch, "bch operands must have dimension " +
                                                  std::to_string(n));
  AlgebraVector ab = bracket(a, b, alg);
  AlgebraVector aab = bracket(a, ab, alg);
  AlgebraVector bab = bracket(b, ab, alg);
  AlgebraVector z(n);
  // Coefficients 1/2 and 1/12 are exact in binary floating point up to the
  // single rounding of 1/12.
  for (int i = 0; i < n; ++i)
    z[i] = a[i] + b[i] + 0.5 * ab[i] + (aab[i] - bab[i]) / 12.0;
  return z;
}

}  // namespace engel
