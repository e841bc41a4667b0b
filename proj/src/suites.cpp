#include "saddle/suites.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "saddle/errors.hpp"
#include "saddle/predict.hpp"

namespace saddle {

namespace {

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

double rel(double err, double scale) { return scale > 0.0 ? err / scale : err; }

Matrix projector(const SubspaceBasis& basis) {
  const Matrix Q = basis.as_matrix();
  return basis.dim() == 0 ? Matrix(basis.ambient_dim, basis.ambient_dim) : Q * Q.transpose();
}

double mu_max_of(const Matrix& m) {
  const SquaredSpectrum sq = squared_spectrum(m);
  return sq.positive.empty() ? 0.0 : sq.positive.front();
}

double dist_xy(const IterateState& s, const PointLimit& l) { return norm(concat(s.x - l.x, s.y - l.y)); }

}  // namespace

// -------------------------------------------------------------- linalg

VerificationReport linalg_suite(const SuiteOptions& options) {
  VerificationReport report;
  Rng rng(options.seed);

  double penrose = 0.0;
  double kernel_gap = 0.0;
  bool kernel_dims = true;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t r = uniform_index(rng, 1, 6);
    const std::size_t c = uniform_index(rng, 1, 6);
    const std::size_t rank = trial % 5 == 0 ? 0 : uniform_index(rng, 1, std::min(r, c));
    const Matrix A = trial % 3 == 0 ? random_uniform_matrix(rng, r, c) : random_matrix_with_rank(rng, r, c, rank);
    const Matrix X = pinv(A);
    if (!A.is_zero()) {
      const Matrix AX = A * X;
      const Matrix XA = X * A;
      penrose = std::max({penrose, rel((A * X * A - A).frobenius_norm(), A.frobenius_norm()),
                          rel((X * A * X - X).frobenius_norm(), X.frobenius_norm()),
                          rel((AX.transpose() - AX).frobenius_norm(), AX.frobenius_norm()),
                          rel((XA.transpose() - XA).frobenius_norm(), XA.frobenius_norm())});
    } else {
      penrose = std::max(penrose, X.max_abs());
    }
    const SubspaceBasis k1 = kernel_basis(X);
    const SubspaceBasis k2 = kernel_basis(A.transpose());
    if (k1.dim() != k2.dim()) kernel_dims = false;
    kernel_gap = std::max(kernel_gap, (projector(k1) - projector(k2)).frobenius_norm());
  }
  report.add("linalg.penrose_conditions", penrose <= 1e-10, penrose, 1e-10, "100 random matrices up to 6x6");
  report.add("linalg.kernel_of_pinv", kernel_dims && kernel_gap < 1e-8, kernel_gap, 1e-8,
             kernel_dims ? "Ker(pinv(A)) = Ker(A^T)" : "kernel dimensions differ");

  double idem = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = uniform_index(rng, 1, 6);
    const std::size_t k = uniform_index(rng, 0, n);
    const Matrix Q = random_orthogonal(rng, n);
    const Matrix M = random_uniform_matrix(rng, n, n) + 3.0 * Matrix::identity(n);
    SubspaceBasis onto{n, {}};
    for (std::size_t j = 0; j < k; ++j) onto.vectors.push_back(Q.column(j));
    // Complement built from a well-conditioned image of the remaining columns.
    std::vector<Vector> rest;
    for (std::size_t j = k; j < n; ++j) rest.push_back(Q.column(j) + 0.3 * (M * Q.column(j)));
    const SubspaceBasis along = image_basis(Matrix::from_columns(n, rest.empty() ? std::vector<Vector>{} : rest));
    const Vector v = random_vector(rng, n);
    const Vector p1 = project(v, onto);
    idem = std::max(idem, rel(norm(project(p1, onto) - p1), std::max(1.0, norm(v))));
    try {
      const SubspaceBasis along_fixed = rest.empty() ? SubspaceBasis{n, {}} : along;
      const Vector p2 = project(v, onto, along_fixed);
      idem = std::max(idem, rel(norm(project(p2, onto, along_fixed) - p2), std::max(1.0, norm(v))));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotComplementary) throw;
    }
  }
  report.add("linalg.project_idempotent", idem <= 1e-12, idem, 1e-12, "orthogonal and oblique");

  double det_err = 0.0;
  bool conj_closed = true;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = uniform_index(rng, 1, 8);
    const Matrix M = random_uniform_matrix(rng, n, n);
    const ComplexScalarSet set = eig_complex(M);
    const double det = determinant(M);
    det_err = std::max(det_err, std::abs(set.product() - det) / std::max(1.0, std::abs(det)));
    for (std::size_t i = 0; i < set.values.size(); ++i) {
      bool found = false;
      for (std::size_t j = 0; j < set.values.size(); ++j)
        if (std::abs(std::conj(set.values[i]) - set.values[j]) <= 1e-12 && set.multiplicity[i] == set.multiplicity[j])
          found = true;
      conj_closed = conj_closed && found;
    }
  }
  report.add("linalg.eig_product_is_det", det_err <= 1e-8, det_err, 1e-8);
  report.add("linalg.eig_conjugate_closed", conj_closed, conj_closed ? 0.0 : 1.0, 0.0);

  double recon = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = uniform_index(rng, 1, 8);
    const Matrix R = random_uniform_matrix(rng, n, n);
    const Matrix S = R + R.transpose();
    const SymEig e = sym_eig(S);
    const Matrix back = e.vectors * Matrix::diagonal(e.values) * e.vectors.transpose();
    recon = std::max(recon, rel((back - S).frobenius_norm(), std::max(1e-300, S.frobenius_norm())));
  }
  report.add("linalg.sym_eig_reconstruction", recon <= 1e-10, recon, 1e-10);
  return report;
}

// ------------------------------------------------------------ dynamics

VerificationReport dynamics_suite(const SuiteOptions& options) {
  VerificationReport report;
  Rng rng(options.seed + 1);

  double fixed = 0.0;
  bool off_nash_moves = true;
  double power = 0.0;
  double shift = 0.0;
  double dogda = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = uniform_index(rng, 1, 4);
    const std::size_t p = uniform_index(rng, 1, 4);
    const std::size_t rank = uniform_index(rng, 1, std::min(n, p));
    const BilinearGame game = trial % 2 == 0 ? random_zero_sum(rng, n, p, rank)
                                             : random_negative_general_sum(rng, n, p, rank);
    const double eta = uniform(rng, 0.05, 0.3);
    const NashSet nash = nash_set(game);

    // Nash points at rest are fixed; any other point at rest moves.
    Vector xs = nash.x_part.particular;
    Vector ys = nash.y_part.particular;
    for (const Vector& k : nash.x_part.kernel.vectors) xs = xs + uniform(rng, -1, 1) * k;
    for (const Vector& k : nash.y_part.kernel.vectors) ys = ys + uniform(rng, -1, 1) * k;
    const IterateState at_nash = IterateState::at_rest(xs, ys);
    const IterateState moved = ogda_step(game, at_nash, eta);
    fixed = std::max(fixed, norm(moved.stacked() - at_nash.stacked()) / std::max(1.0, norm(at_nash.stacked())));
    const IterateState off = IterateState::at_rest(random_vector(rng, n), random_vector(rng, p));
    const double residual = norm(game.B.transpose() * off.x + game.f) + norm(game.A * off.y + game.b);
    if (residual > 1e-6 && norm(ogda_step(game, off, eta).stacked() - off.stacked()) <= 1e-12) off_nash_moves = false;

    // Homogeneous stepping equals powers of the companion matrix.
    const BilinearGame homog(game.A, game.B, {}, {}, {}, {});
    const Matrix L = companion_matrix(homog, eta);
    IterateState s = random_init(rng, n, p);
    Vector z = s.stacked();
    for (int t = 0; t < 50; ++t) {
      s = ogda_step(homog, s, eta);
      z = L * z;
    }
    power = std::max(power, norm(s.stacked() - z) / std::max(1.0, norm(z)));

    // Affine game = homogeneous game around a Nash point.
    const IterateState init = random_init(rng, n, p);
    IterateState a = init;
    IterateState h;
    h.x = init.x - xs;
    h.y = init.y - ys;
    h.x_prev = init.x_prev - xs;
    h.y_prev = init.y_prev - ys;
    for (int t = 0; t < 50; ++t) {
      a = ogda_step(game, a, eta);
      h = ogda_step(homog, h, eta);
    }
    shift = std::max(shift, (norm(a.x - (h.x + xs)) + norm(a.y - (h.y + ys))) / std::max(1.0, norm(concat(a.x, a.y))));

    // DOGDA splits into zero-sum OGDA on -B for (x, y') and on A for (x', y).
    const BilinearGame left = BilinearGame::zero_sum(-game.B, Vector(n, 0.0), -1.0 * game.f);
    const BilinearGame right = BilinearGame::zero_sum(game.A, game.b, Vector(p, 0.0));
    DogdaState d = DogdaState::from(init);
    IterateState l{d.x, d.yp, d.x_prev, d.yp_prev};
    IterateState r{d.xp, d.y, d.xp_prev, d.y_prev};
    for (int t = 0; t < 50; ++t) {
      d = dogda_step(game, d, eta);
      l = ogda_step(left, l, eta);
      r = ogda_step(right, r, eta);
    }
    const double scale = std::max(1.0, norm(concat(concat(d.x, d.yp), concat(d.xp, d.y))));
    dogda = std::max(dogda, (norm(d.x - l.x) + norm(d.yp - l.y) + norm(d.xp - r.x) + norm(d.y - r.y)) / scale);
  }
  report.add("dynamics.nash_points_fixed", fixed <= 1e-10, fixed, 1e-10);
  report.add("dynamics.non_nash_points_move", off_nash_moves, off_nash_moves ? 0.0 : 1.0, 0.0);
  report.add("dynamics.companion_power_iteration", power <= 1e-12, power, 1e-12, "50 steps");
  report.add("dynamics.affine_shift", shift <= 1e-12, shift, 1e-12, "50 steps");
  report.add("dynamics.dogda_decoupling", dogda <= 1e-12, dogda, 1e-12, "50 steps");
  return report;
}

// ------------------------------------------------------------ spectral

VerificationReport spectral_suite(const SuiteOptions& options) {
  VerificationReport report;
  Rng rng(options.seed + 2);

  double oracle = 0.0;
  bool sizes = true;
  double modulus = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = uniform_index(rng, 1, 4);
    const std::size_t p = uniform_index(rng, 1, 4);
    const std::size_t rank = uniform_index(rng, 1, std::min(n, p));
    const int kind = trial % 3;
    BilinearGame game = kind == 0 ? random_zero_sum(rng, n, p, rank)
                        : kind == 1 ? random_negative_general_sum(rng, n, p, rank)
                                    : accelerate(random_zero_sum(rng, n, p, rank));
    const double mu_max = std::max(mu_max_of(game.A), 1e-300);
    const double rho = kind == 0 ? mu_max : mu_max_of(game.B) * mu_max;
    for (double frac : {0.1, 0.3, 0.45, 0.53, 0.56}) {
      const double eta = frac / std::sqrt(std::max(rho, 1e-300));
      const OracleReport o = oracle_reconcile(game, eta);
      sizes = sizes && o.sizes_match;
      oracle = std::max(oracle, o.max_distance);
      if (kind == 0) {
        const SpectralReport r = rate_report(game, eta);
        double top = 0.0;
        for (Complex z : lambda_spectrum(game, eta).values)
          if (std::abs(z - 1.0) > 1e-9) top = std::max(top, std::abs(z));
        modulus = std::max(modulus, std::abs(top - (r.lambda_max + options.lambda_max_perturbation)));
      }
    }
  }
  report.add("spectral.oracle_equivalence", sizes && oracle <= 1e-7, oracle, 1e-7, "25 games x 5 step sizes");
  report.add("spectral.max_modulus_is_lambda_max", modulus <= 1e-10, modulus, 1e-10, "zero-sum, eta < 1/sqrt(3 mu_max)");

  double eta_gap = 0.0;
  double lam_gap = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const double mu_max = uniform(rng, 0.5, 4.0);
    const double mu_min = mu_max * uniform(rng, 0.05, 1.0);
    const OptimalStep opt = optimal_eta(mu_min, mu_max);
    const BilinearGame game = BilinearGame::zero_sum(Matrix::diagonal({std::sqrt(mu_max), std::sqrt(mu_min)}));
    const double hi = 1.0 / std::sqrt(3.0 * mu_max);
    const int grid = 4000;
    double best_eta = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 1; k < grid; ++k) {
      const double eta = hi * k / grid;
      const double lam = rate_report(game, eta).lambda_max;
      if (lam < best) {
        best = lam;
        best_eta = eta;
      }
    }
    eta_gap = std::max(eta_gap, std::abs(best_eta - opt.eta_star) / (hi / grid));
    lam_gap = std::max(lam_gap, opt.lambda_star + options.lambda_max_perturbation - best);
  }
  report.add("spectral.optimal_eta_matches_grid", eta_gap <= 2.0 && lam_gap <= 1e-12, eta_gap, 2.0,
             "argmin within two grid cells; closed-form rate not above the grid minimum");

  bool decreasing = true;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = uniform_index(rng, 1, 4);
    const BilinearGame game = random_zero_sum(rng, n, n, n);
    const double edge = 0.5 / std::sqrt(mu_max_of(game.A));
    double prev = 2.0;
    for (int k = 1; k < 200; ++k) {
      const SpectralReport r = rate_report(game, edge * k / 200.0);
      if (r.eta_regime != EtaRegime::Part2 || !(r.lambda_max < prev)) decreasing = false;
      prev = r.lambda_max;
    }
  }
  report.add("spectral.part2_rate_decreasing", decreasing, decreasing ? 0.0 : 1.0, 0.0);

  double residual = 0.0;
  bool closed = true;
  for (int trial = 0; trial < 200; ++trial) {
    const double mu = trial % 10 == 0 ? 0.0 : uniform(rng, -10.0, 10.0);
    const double eta = uniform(rng, 0.01, 1.0);
    const RootSet rs = s_star_roots(mu, eta);
    int count = 0;
    for (std::size_t i = 0; i < rs.roots.size(); ++i) {
      const Complex l = rs.roots[i];
      const Complex q = l * l * (1.0 - l) * (1.0 - l) - mu * eta * eta * (1.0 - 2.0 * l) * (1.0 - 2.0 * l);
      residual = std::max(residual, std::abs(q) / (1.0 + std::abs(mu) * eta * eta));
      count += rs.multiplicity[i];
      bool has_conj = false;
      for (Complex m : rs.roots) has_conj = has_conj || std::abs(m - std::conj(l)) <= 1e-14;
      closed = closed && has_conj;
    }
    closed = closed && count == 4;
  }
  report.add("spectral.root_residual", residual < 1e-12, residual, 1e-12);
  report.add("spectral.roots_conjugate_closed", closed, closed ? 0.0 : 1.0, 0.0);
  return report;
}

// ------------------------------------------------------------- predict

LimitCase random_limit_case(Rng& rng, int index) {
  const std::size_t n = uniform_index(rng, 1, 4);
  const std::size_t p = uniform_index(rng, 1, 4);
  const std::size_t rank = uniform_index(rng, 1, std::min(n, p));
  LimitCase c{BilinearGame::zero_sum(Matrix(n, p)), Algorithm::OGDA, 0.0, random_init(rng, n, p), ""};
  switch (index % 4) {
    case 0: {
      c.game = random_zero_sum(rng, n, p, rank);
      c.eta = uniform(rng, 0.2, 0.55) / std::sqrt(mu_max_of(c.game.A));
      c.label = "zero-sum";
      break;
    }
    case 1: {
      c.game = random_negative_general_sum(rng, n, p, rank);
      double rho = 0.0;
      for (const Complex z : eig_values_raw(c.game.B.transpose() * c.game.A)) rho = std::max(rho, std::abs(z));
      c.eta = uniform(rng, 0.2, 0.45) / std::sqrt(rho);
      c.label = "general-sum";
      break;
    }
    case 2: {
      c.game = accelerate(random_zero_sum(rng, n, p, rank));
      c.eta = uniform(rng, 0.2, 0.45);
      c.label = "accelerated";
      break;
    }
    default: {
      const Matrix A = random_matrix_with_rank(rng, n, p, rank);
      const Matrix B = random_matrix_with_rank(rng, n, p, uniform_index(rng, 1, std::min(n, p)));
      c.game = BilinearGame(A, B, A * random_vector(rng, p), random_vector(rng, p), random_vector(rng, n),
                            B.transpose() * random_vector(rng, n));
      c.algo = Algorithm::DOGDA;
      c.eta = uniform(rng, 0.2, 0.45) / std::sqrt(std::max(mu_max_of(A), mu_max_of(B)));
      c.label = "DOGDA";
      break;
    }
  }
  return c;
}

VerificationReport predict_suite(const SuiteOptions& options) {
  VerificationReport report;
  Rng rng(options.seed + 3);
  RunOptions run_opts;
  run_opts.max_steps = 200000;

  double limit_err = 0.0;
  double prev_err = 0.0;
  double fixed = 0.0;
  bool all_valid = true;
  std::string failed;
  for (int k = 0; k < 25; ++k) {
    const LimitCase c = random_limit_case(rng, k);
    const LimitPrediction pred = predict_limit(c.game, c.algo, c.init, c.eta);
    if (!pred.valid) {
      all_valid = false;
      failed = c.label + ": " + pred.reason;
      continue;
    }
    const Trajectory traj = run(c.game, c.algo, c.eta, c.init, run_opts);
    const double tol = std::max(1e-8, 1e-6 * norm(c.init.stacked()));
    limit_err = std::max(limit_err, dist_xy(traj.final_state(), pred.point()) / tol);

    IterateState other = c.init;
    other.x_prev = random_vector(rng, c.game.n());
    other.y_prev = random_vector(rng, c.game.p());
    const Trajectory traj2 = run(c.game, c.algo, c.eta, other, run_opts);
    prev_err = std::max(prev_err, dist_xy(traj2.final_state(), {traj.final_state().x, traj.final_state().y}));

    const IterateState rest = IterateState::at_rest(pred.x_inf, pred.y_inf);
    IterateState next;
    if (c.algo == Algorithm::DOGDA) {
      // Auxiliary players at rest in the kernels they act through (here 0), real players at the limit.
      DogdaState d = DogdaState::from(rest);
      d.yp = d.yp_prev = Vector(c.game.p(), 0.0);
      d.xp = d.xp_prev = Vector(c.game.n(), 0.0);
      next = dogda_step(c.game, d, c.eta).players();
    } else {
      next = ogda_step(c.game, rest, c.eta);
    }
    fixed = std::max(fixed, norm(next.stacked() - rest.stacked()) / std::max(1.0, norm(rest.stacked())));
  }
  report.add("predict.limit_matches", all_valid && limit_err <= 1.0, limit_err, 1.0,
             all_valid ? "error / max(1e-8, 1e-6 |init|), 25 configurations" : "invalid prediction: " + failed);
  report.add("predict.limit_independent_of_prev", prev_err < 1e-8, prev_err, 1e-8);
  report.add("predict.limit_is_fixed_point", fixed <= 1e-10, fixed, 1e-10);

  double worst = std::numeric_limits<double>::infinity();
  double over = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = uniform_index(rng, 1, 3);
    const std::size_t p = uniform_index(rng, 1, 3);
    const BilinearGame game = random_zero_sum(rng, n, p, uniform_index(rng, 1, std::min(n, p)));
    const double eta = uniform(rng, 0.2, 0.54) / std::sqrt(mu_max_of(game.A));
    const SpectralReport r = rate_report(game, eta);
    if (r.eta_regime == EtaRegime::Part3b) continue;
    const IterateState w = tight_witness(game, eta);
    const LimitPrediction pred = predict_limit(game, Algorithm::OGDA, w, eta);
    const Trajectory traj = run(game, Algorithm::OGDA, eta, w, run_opts);
    const RateFit fit = estimate_rate(traj, pred.point());
    const double lam = r.lambda_max + options.lambda_max_perturbation;
    worst = std::min(worst, fit.fitted_ratio - (lam - 0.005));
    over = std::max(over, fit.fitted_ratio - lam);
  }
  report.add("predict.witness_is_tight", worst >= 0.0 && over <= 0.005, worst, 0.0,
             "fitted >= lambda_max - 0.005 and <= lambda_max + 0.005");
  return report;
}

VerificationReport run_property_suites(const SuiteOptions& options) {
  VerificationReport all;
  for (const VerificationReport& part :
       {linalg_suite(options), dynamics_suite(options), spectral_suite(options), predict_suite(options)})
    all.checks.insert(all.checks.end(), part.checks.begin(), part.checks.end());
  return all;
}

}  // namespace saddle
