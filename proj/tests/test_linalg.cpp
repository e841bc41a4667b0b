#include <doctest.h>

#include <cmath>
#include <functional>

#include "oracle.hpp"
#include "saddle/dynamics.hpp"
#include "saddle/errors.hpp"
#include "saddle/random.hpp"

using namespace saddle;

namespace {

double max_diff(const Matrix& a, const Matrix& b) { return (a - b).max_abs(); }

double vec_diff(const Vector& a, const Vector& b) { return norm(a - b); }

bool throws_kind(ErrorKind kind, const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

}  // namespace

TEST_CASE("matrix construction validates input") {
  CHECK(throws_kind(ErrorKind::NonFinite, [] { Matrix(1, 1, std::nan("")); }));
  CHECK(throws_kind(ErrorKind::DimensionMismatch, [] { Matrix(2, 2, std::vector<double>{1.0, 2.0}); }));
  CHECK(throws_kind(ErrorKind::DimensionMismatch, [] { (void)(Matrix(2, 3) * Matrix(2, 3)); }));
  CHECK(throws_kind(ErrorKind::DimensionMismatch, [] { (void)(Matrix(2, 3) * Vector{1.0, 2.0}); }));
  const Matrix m = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  CHECK(m(1, 0) == 3.0);
  CHECK(m.transpose()(0, 1) == 3.0);
  CHECK(max_diff(m * Matrix::identity(2), m) == 0.0);
}

TEST_CASE("sym_eig on diagonal and product matrices") {
  const SymEig d = sym_eig(Matrix::diagonal({1.0, 4.0}));
  REQUIRE(d.values.size() == 2);
  CHECK(d.values[0] == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(d.values[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(d.vectors(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(d.vectors(0, 1)) == doctest::Approx(1.0));

  const Matrix A = Matrix::diagonal({1.0, 2.0});
  const SymEig p = sym_eig(A.transpose() * A);
  CHECK(p.values[0] == doctest::Approx(4.0));
  CHECK(p.values[1] == doctest::Approx(1.0));

  CHECK(throws_kind(ErrorKind::NotSymmetric, [] { sym_eig(Matrix::from_rows({{1.0, 2.0}, {0.0, 1.0}})); }));
}

TEST_CASE("sym_eig residuals on random symmetric matrices") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix g = random_uniform_matrix(rng, 5, 5);
    const Matrix m = g + g.transpose();
    const SymEig e = sym_eig(m);
    for (std::size_t i = 0; i < 5; ++i) {
      const Vector v = e.vectors.column(i);
      CHECK(vec_diff(m * v, e.values[i] * v) < 1e-10);
    }
  }
}

TEST_CASE("eig_complex on known spectra") {
  const ComplexScalarSet id = eig_complex(Matrix::identity(3));
  REQUIRE(id.values.size() == 1);
  CHECK(std::abs(id.values[0] - 1.0) < 1e-12);
  CHECK(id.multiplicity[0] == 3);

  const ComplexScalarSet rot = eig_complex(Matrix::from_rows({{0.0, -1.0}, {1.0, 0.0}}));
  CHECK(oracle::multiset_distance(rot.expanded(), {Complex(0, 1), Complex(0, -1)}) < 1e-12);

  // Matching pennies at eta = 0.3: roots of the quartic with mu = 1.
  const Matrix L = companion_matrix(BilinearGame::zero_sum(Matrix(1, 1, 1.0)), 0.3);
  const ComplexScalarSet s = eig_complex(L);
  const std::vector<Complex> expected{{0.9, 0.3}, {0.9, -0.3}, {0.1, 0.3}, {0.1, -0.3}};
  CHECK(oracle::multiset_distance(s.expanded(), expected) < 1e-12);
  for (const Complex l : s.expanded()) {
    const Complex q = l * l * (1.0 - l) * (1.0 - l) + 0.09 * (1.0 - 2.0 * l) * (1.0 - 2.0 * l);
    CHECK(std::abs(q) < 1e-12);
  }
}

TEST_CASE("eig_values_raw agrees with Eigen on random matrices") {
  Rng rng(12);
  for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 13u, 20u}) {
    const Matrix m = random_uniform_matrix(rng, n, n);
    CHECK(oracle::multiset_distance(eig_values_raw(m), oracle::eigenvalues(m)) < 1e-9);
  }
  CHECK(throws_kind(ErrorKind::DimensionTooLarge, [] { eig_values_raw(Matrix::identity(65)); }));
}

TEST_CASE("singular values agree with Eigen") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t r = 1 + trial % 5, c = 1 + (trial * 3) % 6;
    const Matrix m = random_matrix_with_rank(rng, r, c, 1 + trial % std::min(r, c));
    const Vector ours = singular_values(m);
    const std::vector<double> ref = oracle::singular_values(m);
    for (std::size_t i = 0; i < std::min(ours.size(), ref.size()); ++i) CHECK(std::abs(ours[i] - ref[i]) < 1e-12);
  }
}

TEST_CASE("pinv closed forms") {
  CHECK(max_diff(pinv(Matrix::diagonal({1.0, 2.0})), Matrix::diagonal({1.0, 0.5})) < 1e-15);
  const Matrix A = Matrix::from_rows({{1.0, 0.0}, {0.0, 2.0}, {0.0, 0.0}});
  CHECK(max_diff(pinv(A), Matrix::from_rows({{1.0, 0.0, 0.0}, {0.0, 0.5, 0.0}})) < 1e-15);
  CHECK(pinv(Matrix(2, 3)).is_zero());
  CHECK(pinv(Matrix(2, 3)).rows() == 3);
  // Rank one: A^dagger = A^T / |A|_F^2.
  const Matrix r1 = Matrix::from_rows({{1.0, 2.0}, {2.0, 4.0}});
  CHECK(max_diff(pinv(r1), (1.0 / 25.0) * r1.transpose()) < 1e-15);
}

TEST_CASE("pinv matches Eigen's complete orthogonal decomposition") {
  Rng rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix m = random_matrix_with_rank(rng, 4, 3, 1 + trial % 3);
    const Eigen::MatrixXd ref = oracle::to_eigen(m).completeOrthogonalDecomposition().pseudoInverse();
    CHECK((oracle::to_eigen(pinv(m)) - ref).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("kernel and image bases") {
  const Matrix A = Matrix::from_rows({{1.0, 0.0}, {2.0, 0.0}});
  const SubspaceBasis k = kernel_basis(A);
  REQUIRE(k.dim() == 1);
  CHECK(std::abs(k.vectors[0][0]) < 1e-15);
  CHECK(std::abs(k.vectors[0][1]) == doctest::Approx(1.0));

  const SubspaceBasis kt = kernel_basis(A.transpose());
  REQUIRE(kt.dim() == 1);
  const double sgn = kt.vectors[0][0] > 0 ? 1.0 : -1.0;
  CHECK(vec_diff(sgn * kt.vectors[0], {2.0 / std::sqrt(5.0), -1.0 / std::sqrt(5.0)}) < 1e-14);
  CHECK(norm(A.transpose() * kt.vectors[0]) < 1e-15);

  CHECK(kernel_basis(Matrix::identity(3)).dim() == 0);
  CHECK(image_basis(A).dim() == 1);
  CHECK(image_basis(Matrix(2, 2)).dim() == 0);
  CHECK(numerical_rank(A) == 1);
}

TEST_CASE("projections") {
  SubspaceBasis e1{2, {{1.0, 0.0}}};
  CHECK(vec_diff(project({3.0, 4.0}, e1), {3.0, 0.0}) < 1e-15);

  SubspaceBasis onto{2, {{0.0, 1.0}}};
  SubspaceBasis along{2, {{2.0 / std::sqrt(5.0), 1.0 / std::sqrt(5.0)}}};
  CHECK(vec_diff(project({1.0, 1.0}, onto, along), {0.0, 0.5}) < 1e-15);

  SubspaceBasis full{2, {{1.0, 0.0}, {0.0, 1.0}}};
  CHECK(vec_diff(project({-2.0, 5.0}, full), {-2.0, 5.0}) < 1e-15);
  CHECK(vec_diff(project({-2.0, 5.0}, SubspaceBasis{2, {}}), {0.0, 0.0}) == 0.0);

  // Onto and along the same line are not complementary.
  CHECK(throws_kind(ErrorKind::NotComplementary, [&] { project({1.0, 1.0}, onto, onto); }));
}

TEST_CASE("lu_solve and determinant agree with Eigen") {
  Rng rng(15);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix m = random_uniform_matrix(rng, 4, 4);
    const Vector b = random_vector(rng, 4);
    const Vector x = lu_solve(m, b);
    CHECK(vec_diff(m * x, b) < 1e-10);
    CHECK(determinant(m) == doctest::Approx(oracle::to_eigen(m).determinant()).epsilon(1e-10));
  }
  CHECK(determinant(Matrix::from_rows({{1.0, 2.0}, {2.0, 4.0}})) == 0.0);
}

TEST_CASE("geometric multiplicity of a Jordan block") {
  const Matrix j = Matrix::from_rows({{2.0, 1.0}, {0.0, 2.0}});
  CHECK(geometric_multiplicity(j, 2.0, 1e-9) == 1);
  CHECK(geometric_multiplicity(2.0 * Matrix::identity(2), 2.0, 1e-9) == 2);
}
