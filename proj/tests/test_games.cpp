#include <doctest.h>

#include <cmath>

#include "saddle/errors.hpp"
#include "saddle/games.hpp"
#include "saddle/random.hpp"

using namespace saddle;

namespace {

double max_diff(const Matrix& a, const Matrix& b) { return (a - b).max_abs(); }

// Orthogonal projector onto span(basis) (orthonormal vectors).
Matrix projector(const SubspaceBasis& basis, std::size_t dim) {
  Matrix p(dim, dim);
  for (const Vector& v : basis.vectors)
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j) p(i, j) += v[i] * v[j];
  return p;
}

}  // namespace

TEST_CASE("game construction") {
  const BilinearGame g = BilinearGame::zero_sum(Matrix(2, 3, 1.0));
  CHECK(g.n() == 2);
  CHECK(g.p() == 3);
  CHECK(g.is_zero_sum());
  CHECK(g.b.size() == 2);
  CHECK(g.c.size() == 3);
  CHECK_FALSE(BilinearGame::general(Matrix(1, 1, 1.0), Matrix(1, 1, 1.0)).is_zero_sum());
  CHECK_THROWS_AS(BilinearGame(Matrix(2, 2), Matrix(2, 3), {}, {}, {}, {}), Error);
  CHECK_THROWS_AS(BilinearGame::zero_sum(Matrix(2, 2), {1.0}), Error);
}

TEST_CASE("payoffs") {
  const Payoffs p = payoffs(BilinearGame::zero_sum(Matrix(1, 1, 1.0)), {1.0}, {1.0});
  CHECK(p.g1 == 1.0);
  CHECK(p.g2 == -1.0);

  const BilinearGame affine(Matrix(1, 1, 2.0), Matrix(1, 1, 3.0), {1.0}, {1.0}, {1.0}, {1.0}, 5.0, 7.0);
  const Payoffs z = payoffs(affine, {0.0}, {0.0});
  CHECK(z.g1 == 5.0);
  CHECK(z.g2 == 7.0);

  const Payoffs c = payoffs(BilinearGame::general(Matrix(1, 1, 1.0), Matrix(1, 1, 1.0)), {2.0}, {2.0});
  CHECK(c.g1 == 4.0);
  CHECK(c.g2 == 4.0);
}

TEST_CASE("nash sets") {
  const NashSet origin = nash_set(BilinearGame::zero_sum(Matrix(1, 1, 1.0)));
  CHECK(origin.nonempty);
  CHECK(origin.x_part.kernel.dim() == 0);
  CHECK(origin.y_part.kernel.dim() == 0);
  CHECK(norm(origin.x_part.particular) == 0.0);

  const NashSet wgan = nash_set(BilinearGame::zero_sum(-Matrix::identity(2), {3.0, 4.0}, {0.0, 0.0}));
  CHECK(wgan.nonempty);
  CHECK(norm(wgan.y_part.particular - Vector{3.0, 4.0}) < 1e-14);
  CHECK(norm(wgan.x_part.particular) < 1e-14);

  const NashSet empty = nash_set(BilinearGame::zero_sum(Matrix(1, 1, 0.0), {1.0}));
  CHECK_FALSE(empty.nonempty);
  CHECK(empty.y_residual > 0.5);

  // Kernels pick up the flat directions.
  const NashSet flat = nash_set(BilinearGame::zero_sum(Matrix::from_rows({{1.0, 0.0}, {2.0, 0.0}})));
  CHECK(flat.y_part.kernel.dim() == 1);
  CHECK(flat.x_part.kernel.dim() == 1);
}

TEST_CASE("accelerate uses the negated transposed pseudoinverse") {
  const BilinearGame a = accelerate(BilinearGame::zero_sum(Matrix::diagonal({1.0, 2.0})));
  CHECK(max_diff(a.B, Matrix::diagonal({-1.0, -0.5})) < 1e-15);
  CHECK(max_diff(a.A, Matrix::diagonal({1.0, 2.0})) == 0.0);

  const BilinearGame r = accelerate(BilinearGame::zero_sum(Matrix::from_rows({{1.0, 0.0}, {0.0, 2.0}, {0.0, 0.0}})));
  CHECK(max_diff(r.B, Matrix::from_rows({{-1.0, 0.0}, {0.0, -0.5}, {0.0, 0.0}})) < 1e-15);

  Rng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix q = random_orthogonal(rng, 3);
    const BilinearGame o = accelerate(BilinearGame::zero_sum(q));
    CHECK(max_diff(o.B, -1.0 * q) < 1e-12);
  }

  // Explicit f overrides the default.
  const BilinearGame f = accelerate(BilinearGame::zero_sum(Matrix::diagonal({1.0, 2.0})), Vector{1.0, -1.0});
  CHECK(norm(f.f - Vector{1.0, -1.0}) == 0.0);
}

TEST_CASE("scale_opponent") {
  const BilinearGame g = BilinearGame::zero_sum(Matrix(1, 1, 1.0), {0.5}, {0.25});
  const BilinearGame same = scale_opponent(g, 1.0);
  CHECK(max_diff(same.B, g.B) == 0.0);
  CHECK(norm(same.f - g.f) == 0.0);

  const BilinearGame four = scale_opponent(BilinearGame::zero_sum(Matrix(1, 1, 1.0)), 4.0);
  CHECK(four.B(0, 0) == -4.0);
  CHECK((four.B.transpose() * four.A)(0, 0) == -4.0);

  CHECK_THROWS_AS(scale_opponent(g, 0.0), Error);
  CHECK_THROWS_AS(scale_opponent(g, -1.0), Error);

  Rng rng(22);
  for (int trial = 0; trial < 5; ++trial) {
    const BilinearGame z = random_zero_sum(rng, 3, 2, 1 + trial % 2);
    const NashSet n1 = nash_set(z);
    const NashSet n2 = nash_set(scale_opponent(z, 2.0));
    REQUIRE(n1.nonempty);
    REQUIRE(n2.nonempty);
    CHECK(norm(n1.x_part.particular - n2.x_part.particular) < 1e-12);
    CHECK(norm(n1.y_part.particular - n2.y_part.particular) < 1e-12);
    CHECK(max_diff(projector(n1.x_part.kernel, 3), projector(n2.x_part.kernel, 3)) < 1e-12);
    CHECK(max_diff(projector(n1.y_part.kernel, 2), projector(n2.y_part.kernel, 2)) < 1e-12);
  }
}
