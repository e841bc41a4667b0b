#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracle.hpp"
#include "saddle/dynamics.hpp"
#include "saddle/errors.hpp"
#include "saddle/random.hpp"

using namespace saddle;

namespace {

const BilinearGame kPennies = BilinearGame::zero_sum(Matrix(1, 1, 1.0));

IterateState state(Vector x, Vector y, Vector xp, Vector yp) {
  IterateState s = IterateState::at_rest(std::move(x), std::move(y));
  s.x_prev = std::move(xp);
  s.y_prev = std::move(yp);
  return s;
}

}  // namespace

TEST_CASE("one OGDA step by hand") {
  const IterateState s = ogda_step(kPennies, state({1.0}, {0.0}, {1.0}, {0.0}), 0.1);
  CHECK(s.x[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s.y[0] == doctest::Approx(-0.1).epsilon(1e-15));
  CHECK(s.x_prev[0] == 1.0);
  CHECK(s.y_prev[0] == 0.0);
}

TEST_CASE("one GDA step by hand and the norm growth of matching pennies") {
  const IterateState s = gda_step(kPennies, IterateState::at_rest({1.0}, {0.0}), 0.1);
  CHECK(s.x[0] == doctest::Approx(1.0));
  CHECK(s.y[0] == doctest::Approx(-0.1));

  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const IterateState z = random_init(rng, 1, 1);
    const IterateState n = gda_step(kPennies, z, 0.3);
    const double before = z.x[0] * z.x[0] + z.y[0] * z.y[0];
    const double after = n.x[0] * n.x[0] + n.y[0] * n.y[0];
    CHECK(after == doctest::Approx(1.09 * before).epsilon(1e-14));
  }
}

TEST_CASE("Nash points are fixed") {
  const BilinearGame wgan = BilinearGame::zero_sum(-Matrix::identity(2), {3.0, 4.0}, {0.0, 0.0});
  const IterateState nash = IterateState::at_rest({0.0, 0.0}, {3.0, 4.0});
  CHECK(norm(ogda_step(wgan, nash, 0.3).stacked() - nash.stacked()) < 1e-15);
  CHECK(norm(gda_step(wgan, nash, 0.3).stacked() - nash.stacked()) < 1e-15);

  // Auxiliary players at the equilibria of their own zero-sum games (here 0).
  DogdaState d = DogdaState::from(nash);
  d.xp = d.xp_prev = {0.0, 0.0};
  d.yp = d.yp_prev = {0.0, 0.0};
  const DogdaState next = dogda_step(wgan, d, 0.3);
  CHECK(norm(next.players().stacked() - nash.stacked()) < 1e-15);
  CHECK(norm(next.xp) + norm(next.yp) < 1e-15);
}

TEST_CASE("homogeneous OGDA step equals the companion matrix product") {
  Rng rng(32);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 1 + trial % 3, p = 1 + (trial + 1) % 4;
    const BilinearGame g = BilinearGame::general(random_uniform_matrix(rng, n, p), random_uniform_matrix(rng, n, p));
    const IterateState s = random_init(rng, n, p);
    const Vector direct = ogda_step(g, s, 0.2).stacked();
    const Vector via_l = companion_matrix(g, 0.2) * s.stacked();
    CHECK(norm(direct - via_l) < 1e-14);
  }
}

TEST_CASE("companion matrix of matching pennies") {
  const double eta = 0.37;
  const Matrix L = companion_matrix(kPennies, eta);
  const Matrix expected = Matrix::from_rows(
      {{1.0, 2 * eta, 0.0, -eta}, {-2 * eta, 1.0, eta, 0.0}, {1.0, 0.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}});
  CHECK((L - expected).max_abs() == 0.0);
  const Eigen::MatrixXd E = oracle::to_eigen(L);
  for (double lam : {-1.3, -0.2, 0.4, 0.9, 2.5}) {
    const double det = (E - lam * Eigen::MatrixXd::Identity(4, 4)).determinant();
    const double formula = lam * lam * (1 - lam) * (1 - lam) + eta * eta * (1 - 2 * lam) * (1 - 2 * lam);
    CHECK(det == doctest::Approx(formula).epsilon(1e-12));
  }
}

TEST_CASE("companion matrix of the zero game has spectrum {0, 1}") {
  const Matrix L = companion_matrix(BilinearGame::zero_sum(Matrix(2, 3)), 0.3);
  const ComplexScalarSet s = eig_complex(L);
  for (const Complex v : s.values) CHECK((std::abs(v) < 1e-12 || std::abs(v - 1.0) < 1e-12));
}

TEST_CASE("DOGDA decouples into two zero-sum OGDA runs") {
  CHECK(norm(dogda_step(kPennies, DogdaState::from(IterateState::at_rest({0.0}, {0.0})), 0.2).players().stacked()) ==
        0.0);

  Rng rng(33);
  const BilinearGame g = BilinearGame::general(random_uniform_matrix(rng, 2, 3), random_uniform_matrix(rng, 2, 3));
  const BilinearGame left = BilinearGame::zero_sum(-1.0 * g.B);  // (x, y') on -B
  const BilinearGame right = BilinearGame::zero_sum(g.A);        // (x', y) on A
  const DogdaState d = DogdaState::from(random_init(rng, 2, 3));
  const DogdaState next = dogda_step(g, d, 0.15);
  const IterateState l = ogda_step(left, state(d.x, d.yp, d.x_prev, d.yp_prev), 0.15);
  const IterateState r = ogda_step(right, state(d.xp, d.y, d.xp_prev, d.y_prev), 0.15);
  CHECK(norm(next.x - l.x) < 1e-15);
  CHECK(norm(next.yp - l.y) < 1e-15);
  CHECK(norm(next.xp - r.x) < 1e-15);
  CHECK(norm(next.y - r.y) < 1e-15);
}

TEST_CASE("run: matching pennies under OGDA and GDA, and the cooperative game") {
  RunOptions opts;
  opts.max_steps = 2000;
  const IterateState ones = IterateState::at_rest({1.0}, {1.0});
  const Trajectory ogda = run(kPennies, Algorithm::OGDA, 0.3, ones, opts);
  CHECK(ogda.stop_reason == StopReason::Converged);
  CHECK(norm(concat(ogda.final_state().x, ogda.final_state().y)) < 1e-10);

  opts.max_steps = 100000;
  const Trajectory gda = run(kPennies, Algorithm::GDA, 0.3, ones, opts);
  CHECK(gda.stop_reason == StopReason::Diverged);

  const BilinearGame coop = BilinearGame::general(Matrix(1, 1, 1.0), Matrix(1, 1, 1.0));
  const Trajectory c = run(coop, Algorithm::OGDA, 0.1, state({1.0}, {1.0}, {0.0}, {0.0}), opts);
  CHECK(c.stop_reason == StopReason::Diverged);
  bool grows = true;
  for (std::size_t k = 1; k < c.states.size(); ++k) grows = grows && c.states[k].x[0] > 1.1 * c.states[k - 1].x[0];
  CHECK(grows);
}

TEST_CASE("run records the initial and final steps") {
  RunOptions opts;
  opts.max_steps = 1000;
  opts.record_stride = 7;
  const Trajectory t = run(kPennies, Algorithm::GDA, 0.01, IterateState::at_rest({1.0}, {0.0}), opts);
  CHECK(t.steps.front() == 0);
  CHECK(t.steps.back() == 1000);
  CHECK(t.steps[1] == 7);
  CHECK(t.stop_reason == StopReason::MaxSteps);
}

TEST_CASE("parse_algorithm") {
  CHECK(parse_algorithm("OGDA") == Algorithm::OGDA);
  CHECK(parse_algorithm("GDA") == Algorithm::GDA);
  CHECK(parse_algorithm("DOGDA") == Algorithm::DOGDA);
  CHECK_THROWS_AS(parse_algorithm("adam"), Error);
}

TEST_CASE("trajectory CSV layout") {
  RunOptions opts;
  opts.max_steps = 3;
  const Trajectory t = run(kPennies, Algorithm::OGDA, 0.1, IterateState::at_rest({1.0}, {0.0}), opts);
  std::ostringstream out;
  write_trajectory_csv(out, t, kPennies, PointLimit{{0.0}, {0.0}}, "matching pennies");
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "# matching pennies");
  std::getline(in, line);
  CHECK(line == "t,x_0,y_0,dist_limit,g1,g2");
  std::getline(in, line);
  CHECK(line.rfind("0,1,0,1,0,", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("1,1,-0.10000000000000001,", 0) == 0);
  CHECK(format_double(0.1) == "0.10000000000000001");
}
