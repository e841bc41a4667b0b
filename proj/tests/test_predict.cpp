#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>

#include "oracle.hpp"
#include "saddle/errors.hpp"
#include "saddle/predict.hpp"
#include "saddle/random.hpp"
#include "saddle/verify.hpp"

using namespace saddle;

namespace {

const BilinearGame kPennies = BilinearGame::zero_sum(Matrix(1, 1, 1.0));

double error_to(const Trajectory& t, const LimitPrediction& p) {
  return norm(concat(t.final_state().x - p.x_inf, t.final_state().y - p.y_inf));
}

RunOptions long_run() {
  RunOptions o;
  o.max_steps = 200000;
  return o;
}

bool throws_kind(ErrorKind kind, const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

}  // namespace

TEST_CASE("zero-sum limits") {
  Rng rng(51);
  const LimitPrediction origin = predict_limit(kPennies, Algorithm::OGDA, random_init(rng, 1, 1), 0.3);
  REQUIRE(origin.valid);
  CHECK(std::abs(origin.x_inf[0]) < 1e-15);
  CHECK(std::abs(origin.y_inf[0]) < 1e-15);

  const BilinearGame wgan = BilinearGame::zero_sum(-Matrix::identity(2), {3.0, 4.0}, {0.0, 0.0});
  const IterateState init = IterateState::at_rest({0.7, -0.2}, {0.0, 0.0});
  const LimitPrediction w = predict_limit(wgan, Algorithm::OGDA, init, 0.3);
  REQUIRE(w.valid);
  CHECK(norm(w.y_inf - Vector{3.0, 4.0}) < 1e-14);
  CHECK(norm(w.x_inf) < 1e-14);
  CHECK(error_to(run(wgan, Algorithm::OGDA, 0.3, init, long_run()), w) < 1e-10);

  // Flat directions are kept: limit is the orthogonal projection onto the kernels.
  const BilinearGame flat = BilinearGame::zero_sum(Matrix::from_rows({{1.0, 0.0}, {0.0, 0.0}}));
  const LimitPrediction f = predict_limit(flat, Algorithm::OGDA, IterateState::at_rest({2.0, 3.0}, {-1.0, 5.0}), 0.3);
  CHECK(norm(f.x_inf - Vector{0.0, 3.0}) < 1e-14);
  CHECK(norm(f.y_inf - Vector{0.0, 5.0}) < 1e-14);
}

TEST_CASE("general-sum limit is an oblique projection") {
  const BilinearGame g = BilinearGame::general(Matrix::from_rows({{1.0, 0.0}, {2.0, 0.0}}),
                                               Matrix::from_rows({{-2.0, -1.0}, {0.0, 0.0}}));
  const IterateState init = IterateState::at_rest({0.3, -0.4}, {1.0, 1.0});
  const LimitPrediction p = predict_limit(g, Algorithm::OGDA, init, 0.1);
  REQUIRE(p.valid);
  CHECK(p.geometry == LimitGeometry::ObliqueAlongImages);
  // y_0 = (1, 1) = (0, 1/2) + (1/2)(2, 1): onto the vertical axis along Im(B^T).
  CHECK(norm(p.y_inf - Vector{0.0, 0.5}) < 1e-14);
  CHECK(error_to(run(g, Algorithm::OGDA, 0.1, init, long_run()), p) < 1e-9);
}

TEST_CASE("accelerated game keeps x in the kernel of A^T") {
  const BilinearGame acc = accelerate(BilinearGame::zero_sum(Matrix::from_rows({{1.0, 0.0}, {0.0, 2.0}, {0.0, 0.0}})));
  const IterateState init = IterateState::at_rest({0.4, -0.3, 0.9}, {0.2, 0.1});
  const LimitPrediction p = predict_limit(acc, Algorithm::OGDA, init, 0.4);
  REQUIRE(p.valid);
  CHECK(norm(p.x_inf - Vector{0.0, 0.0, 0.9}) < 1e-14);
  CHECK(norm(p.y_inf) < 1e-14);
  CHECK(error_to(run(acc, Algorithm::OGDA, 0.4, init, long_run()), p) < 1e-10);
}

TEST_CASE("invalid predictions carry a reason") {
  const IterateState init = IterateState::at_rest({1.0}, {1.0});
  const LimitPrediction gda = predict_limit(kPennies, Algorithm::GDA, init, 0.3);
  CHECK_FALSE(gda.valid);
  CHECK_FALSE(gda.reason.empty());

  const LimitPrediction big = predict_limit(kPennies, Algorithm::OGDA, init, 0.6);
  CHECK_FALSE(big.valid);

  const BilinearGame jordan = BilinearGame::general(Matrix::from_rows({{1.0, 1.0}, {1.0, 1.0}}),
                                                    Matrix::from_rows({{1.0, 1.0}, {-1.0, -1.0}}));
  const LimitPrediction j = predict_limit(jordan, Algorithm::OGDA, IterateState::at_rest({1.0, 0.0}, {0.0, 1.0}), 0.1);
  CHECK_FALSE(j.valid);
  CHECK_FALSE(j.reason.empty());

  const LimitPrediction knife = predict_limit(kPennies, Algorithm::OGDA, init, 0.5);
  CHECK(knife.valid);
  CHECK(knife.part3b);
}

TEST_CASE("DOGDA limits") {
  const BilinearGame coop = BilinearGame::general(Matrix(1, 1, 1.0), Matrix(1, 1, 1.0));
  IterateState init = IterateState::at_rest({1.0}, {1.0});
  init.x_prev = {0.0};
  init.y_prev = {0.0};
  const LimitPrediction p = predict_limit(coop, Algorithm::DOGDA, init, 0.2);
  REQUIRE(p.valid);
  CHECK(p.geometry == LimitGeometry::DogdaOrthogonal);
  CHECK(norm(p.point().x) < 1e-15);
  CHECK(error_to(run(coop, Algorithm::DOGDA, 0.2, init, long_run()), p) < 1e-10);
}

TEST_CASE("distance to the Nash set") {
  CHECK(distance_to_nash(kPennies, IterateState::at_rest({1.0}, {1.0})) == doctest::Approx(2.0));
  const BilinearGame wgan = BilinearGame::zero_sum(-Matrix::identity(2), {3.0, 4.0}, {0.0, 0.0});
  CHECK(distance_to_nash(wgan, IterateState::at_rest({0.0, 0.0}, {3.0, 4.0})) < 1e-14);
  CHECK(throws_kind(ErrorKind::EmptyNashSet,
                    [] { distance_to_nash(BilinearGame::zero_sum(Matrix(1, 1, 0.0), {1.0}), IterateState::at_rest({0.0}, {0.0})); }));

  // D is a minimum: no sampled Nash point is closer.
  Rng rng(52);
  const BilinearGame g = random_zero_sum(rng, 3, 3, 2);
  const IterateState z = random_init(rng, 3, 3);
  const double D = distance_to_nash(g, z);
  const NashSet nash = nash_set(g);
  for (int k = 0; k < 100; ++k) {
    Vector xs = nash.x_part.particular, ys = nash.y_part.particular;
    std::normal_distribution<double> gauss;
    for (const Vector& v : nash.x_part.kernel.vectors) xs = xs + gauss(rng) * v;
    for (const Vector& v : nash.y_part.kernel.vectors) ys = ys + gauss(rng) * v;
    IterateState s = IterateState::at_rest(xs, ys);
    CHECK(D <= norm(z.stacked() - s.stacked()) + 1e-12);
  }
}

TEST_CASE("witness initializations decay at the closed-form rate") {
  struct Case {
    BilinearGame game;
    double eta;
    double rate;
  };
  Rng rng(53);
  const std::vector<Case> cases{
      {kPennies, 0.3, std::sqrt(0.9)},
      {BilinearGame::zero_sum(Matrix::diagonal({1.0, 2.0})), 0.2, std::sqrt(0.5 * (1 + std::sqrt(1 - 0.16)))},
      {BilinearGame::zero_sum(random_orthogonal(rng, 3)), 0.4, std::sqrt(0.5 * (1 + std::sqrt(1 - 0.64)))},
  };
  for (const Case& c : cases) {
    const IterateState w = tight_witness(c.game, c.eta);
    const LimitPrediction p = predict_limit(c.game, Algorithm::OGDA, w, c.eta);
    const RateFit fit = estimate_rate(run(c.game, Algorithm::OGDA, c.eta, w, long_run()), p.point());
    CHECK(fit.fitted_ratio == doctest::Approx(c.rate).epsilon(1e-3));
  }
  CHECK(throws_kind(ErrorKind::ZeroMatrix, [] { tight_witness(BilinearGame::zero_sum(Matrix(1, 1, 0.0)), 0.3); }));
  CHECK(throws_kind(ErrorKind::DivergentRegime, [] { tight_witness(kPennies, 0.6); }));
  CHECK_NOTHROW(dominant_witness(kPennies, 0.6));
}

TEST_CASE("dominant eigenvalue agrees with the companion matrix") {
  for (double eta : {0.2, 0.3, 0.55}) {
    const BilinearGame g = BilinearGame::zero_sum(Matrix::diagonal({1.0, 2.0}));
    CHECK(std::abs(dominant_eigenvalue(g, eta)) ==
          doctest::Approx(oracle::max_modulus_excluding_one(companion_matrix(g, eta))).epsilon(1e-10));
  }
  const Matrix L = companion_matrix(kPennies, 0.3);
  const Vector v = real_eigenvector(L, Complex(0.9, 0.3));
  CHECK(norm(v) == doctest::Approx(1.0));
}
