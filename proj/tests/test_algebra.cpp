#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "engel/algebra.hpp"
#include "engel/errors.hpp"

using namespace engel;

namespace {

AlgebraVector basis(int n, int i) {
  AlgebraVector v(n, 0.0);
  v[i] = 1.0;
  return v;
}

}  // namespace

TEST_CASE("engel algebra structure") {
  const auto& alg = engel_algebra();
  CHECK(alg.dim() == 4);
  CHECK(alg.step() == 3);
  CHECK(alg.horizontal_dim() == 2);
  CHECK(alg.homogeneity(0) == 1);
  CHECK(alg.homogeneity(1) == 1);
  CHECK(alg.homogeneity(2) == 2);
  CHECK(alg.homogeneity(3) == 3);
  CHECK_NOTHROW(alg.validate());
}

TEST_CASE("bracket on the engel basis") {
  const auto& alg = engel_algebra();
  AlgebraVector x1 = basis(4, 0), x2 = basis(4, 1), x3 = basis(4, 2);

  AlgebraVector b12 = bracket(x1, x2, alg);
  CHECK(b12 == basis(4, 2));  // [X1,X2] = X3

  AlgebraVector b13 = bracket(x1, x3, alg);
  CHECK(b13 == basis(4, 3));  // [X1,X3] = X4

  CHECK(bracket(x2, x3, alg) == AlgebraVector(4, 0.0));

  // Alternating on random vectors.
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int k = 0; k < 100; ++k) {
    AlgebraVector a = {d(rng), d(rng), d(rng), d(rng)};
    CHECK(bracket(a, a, alg) == AlgebraVector(4, 0.0));
    AlgebraVector b = {d(rng), d(rng), d(rng), d(rng)};
    AlgebraVector ab = bracket(a, b, alg);
    AlgebraVector ba = bracket(b, a, alg);
    for (int i = 0; i < 4; ++i) CHECK(ab[i] == -ba[i]);
  }
}

TEST_CASE("bracket dimension mismatch") {
  const auto& alg = engel_algebra();
  CHECK_THROWS_AS(bracket(AlgebraVector(3, 0.0), AlgebraVector(4, 0.0), alg), Error);
}

TEST_CASE("bch closed form on horizontal generators") {
  const auto& alg = engel_algebra();
  // bch(x1 X1, t X2) = x1 X1 + t X2 + (t x1 / 2) X3 + (t x1^2 / 12) X4.
  for (double x1 : {0.5, -1.0, 2.0}) {
    for (double t : {0.25, 1.0, -0.75}) {
      AlgebraVector a = {x1, 0.0, 0.0, 0.0};
      AlgebraVector b = {0.0, t, 0.0, 0.0};
      AlgebraVector z = bch(a, b, alg);
      CHECK(z[0] == doctest::Approx(x1).epsilon(1e-15));
      CHECK(z[1] == doctest::Approx(t).epsilon(1e-15));
      CHECK(z[2] == doctest::Approx(t * x1 / 2.0).epsilon(1e-15));
      CHECK(z[3] == doctest::Approx(t * x1 * x1 / 12.0).epsilon(1e-15));
    }
  }
}

TEST_CASE("bch identity and abelian cases") {
  const auto& alg = engel_algebra();
  AlgebraVector a = {1.0, -2.0, 0.5, 3.0};
  CHECK(bch(a, AlgebraVector(4, 0.0), alg) == a);
  CHECK(bch(AlgebraVector(4, 0.0), a, alg) == a);

  StratifiedAlgebra ab = abelian_algebra(3);
  AlgebraVector u = {1.0, 2.0, 3.0}, v = {-0.5, 0.25, 1.0};
  AlgebraVector z = bch(u, v, ab);
  for (int i = 0; i < 3; ++i) CHECK(z[i] == u[i] + v[i]);
}

TEST_CASE("validate rejects broken structure constants") {
  // Non-antisymmetric: c[0][1][2] = 1 but c[1][0][2] = 0.
  std::vector<std::vector<std::vector<double>>> c(
      4, std::vector<std::vector<double>>(4, std::vector<double>(4, 0.0)));
  c[0][1][2] = 1.0;
  StratifiedAlgebra bad({2, 1, 1}, c);
  CHECK_THROWS_AS(bad.validate(), Error);

  // Grading violation: a layer-1 x layer-1 bracket landing in layer 1.
  c[1][0][2] = -1.0;
  c[0][2][3] = 1.0;
  c[2][0][3] = -1.0;
  auto c2 = c;
  c2[0][1][0] = 1.0;
  c2[1][0][0] = -1.0;
  StratifiedAlgebra graded({2, 1, 1}, c2);
  CHECK_THROWS_AS(graded.validate(), Error);

  // The repaired table is the Engel algebra and validates.
  StratifiedAlgebra good({2, 1, 1}, c);
  CHECK_NOTHROW(good.validate());
}

TEST_CASE("step larger than 3 is rejected") {
  std::vector<std::vector<std::vector<double>>> c(
      5, std::vector<std::vector<double>>(5, std::vector<double>(5, 0.0)));
  CHECK_THROWS_AS(StratifiedAlgebra({2, 1, 1, 1}, c), Error);
}

TEST_CASE("json round trip reproduces the engel algebra") {
  const auto& alg = engel_algebra();
  std::string text = alg.to_json();
  StratifiedAlgebra back = StratifiedAlgebra::from_json(text);
  CHECK(back.dim() == 4);
  CHECK(back.layer_dims() == alg.layer_dims());
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        CHECK(back.structure_const(i, j, k) == alg.structure_const(i, j, k));
  CHECK_NOTHROW(back.validate());
}

TEST_CASE("is_horizontal checks layer support") {
  const auto& alg = engel_algebra();
  CHECK(alg.is_horizontal({1.0, -2.0, 0.0, 0.0}));
  CHECK_FALSE(alg.is_horizontal({1.0, 0.0, 1e-3, 0.0}));
  CHECK(alg.is_horizontal({1.0, 0.0, 1e-12, 0.0}, 1e-9));
}
