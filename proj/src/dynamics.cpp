#include "saddle/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "saddle/errors.hpp"

namespace saddle {

const char* to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::GDA: return "GDA";
    case Algorithm::OGDA: return "OGDA";
    case Algorithm::DOGDA: return "DOGDA";
  }
  return "?";
}

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::MaxSteps: return "MaxSteps";
    case StopReason::Converged: return "Converged";
    case StopReason::Diverged: return "Diverged";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "GDA") return Algorithm::GDA;
  if (name == "OGDA") return Algorithm::OGDA;
  if (name == "DOGDA") return Algorithm::DOGDA;
  throw Error(ErrorKind::Config, "unknown algorithm '" + name + "'");
}

IterateState IterateState::at_rest(Vector x0, Vector y0) {
  IterateState s;
  s.x_prev = x0;
  s.y_prev = y0;
  s.x = std::move(x0);
  s.y = std::move(y0);
  return s;
}

Vector IterateState::stacked() const { return concat(concat(x, y), concat(x_prev, y_prev)); }

IterateState IterateState::unstack(const Vector& z, std::size_t n, std::size_t p) {
  if (z.size() != 2 * (n + p)) throw Error(ErrorKind::DimensionMismatch, "stacked state length");
  IterateState s;
  s.x = slice(z, 0, n);
  s.y = slice(z, n, p);
  s.x_prev = slice(z, n + p, n);
  s.y_prev = slice(z, 2 * n + p, p);
  return s;
}

DogdaState DogdaState::from(const IterateState& s) {
  DogdaState d;
  d.x = s.x;
  d.yp = s.y;
  d.xp = s.x;
  d.y = s.y;
  d.x_prev = s.x_prev;
  d.yp_prev = s.y_prev;
  d.xp_prev = s.x_prev;
  d.y_prev = s.y_prev;
  return d;
}

IterateState DogdaState::players() const {
  IterateState s;
  s.x = x;
  s.y = y;
  s.x_prev = x_prev;
  s.y_prev = y_prev;
  s.blown_up = blown_up;
  return s;
}

namespace {

void check_state(const BilinearGame& game, const IterateState& s) {
  if (s.x.size() != game.n() || s.x_prev.size() != game.n() || s.y.size() != game.p() ||
      s.y_prev.size() != game.p())
    throw Error(ErrorKind::DimensionMismatch, "state dimensions do not match the game");
}

Vector ax_plus(const Matrix& m, const Vector& v, const Vector& shift) { return m * v + shift; }

// Componentwise a + 2 eta u - eta w.
Vector optimistic(const Vector& a, const Vector& u, const Vector& w, double eta) {
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + 2.0 * eta * u[i] - eta * w[i];
  return out;
}

bool exceeds(const Vector& v, double cap) {
  const double nv = norm(v);
  return !std::isfinite(nv) || nv > cap;
}

std::size_t resolve_stride(const BilinearGame& game, const RunOptions& options) {
  if (options.record_stride > 0) return options.record_stride;
  if (game.n() + game.p() <= 16) return 1;
  return std::max<std::size_t>(1, (options.max_steps + 4095) / 4096);
}

double diff_norm(const std::vector<const Vector*>& a, const std::vector<const Vector*>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t i = 0; i < a[k]->size(); ++i) {
      const double d = (*a[k])[i] - (*b[k])[i];
      s += d * d;
    }
  return std::sqrt(s);
}

}  // namespace

IterateState gda_step(const BilinearGame& game, const IterateState& s, double eta) {
  check_state(game, s);
  IterateState next;
  next.x = s.x + eta * ax_plus(game.A, s.y, game.b);
  next.y = s.y + eta * ax_plus(game.B.transpose(), s.x, game.f);
  next.x_prev = s.x;
  next.y_prev = s.y;
  return next;
}

IterateState ogda_step(const BilinearGame& game, const IterateState& s, double eta) {
  check_state(game, s);
  const Matrix Bt = game.B.transpose();
  IterateState next;
  next.x = optimistic(s.x, ax_plus(game.A, s.y, game.b), ax_plus(game.A, s.y_prev, game.b), eta);
  next.y = optimistic(s.y, ax_plus(Bt, s.x, game.f), ax_plus(Bt, s.x_prev, game.f), eta);
  next.x_prev = s.x;
  next.y_prev = s.y;
  return next;
}

DogdaState dogda_step(const BilinearGame& game, const DogdaState& s, double eta) {
  check_state(game, s.players());
  const Matrix Bt = game.B.transpose();
  const Matrix At = game.A.transpose();
  const Matrix mB = -game.B;
  const Vector zero_n(game.n(), 0.0);
  const Vector zero_p(game.p(), 0.0);
  DogdaState next;
  // (x, y') is zero-sum OGDA on -B with linear terms (0, -f); (x', y) is
  // zero-sum OGDA on A with linear terms (b, 0).
  next.x = optimistic(s.x, mB * s.yp, mB * s.yp_prev, eta);
  next.yp = optimistic(s.yp, ax_plus(Bt, s.x, game.f), ax_plus(Bt, s.x_prev, game.f), eta);
  next.xp = optimistic(s.xp, ax_plus(game.A, s.y, game.b), ax_plus(game.A, s.y_prev, game.b), eta);
  next.y = optimistic(s.y, -1.0 * (At * s.xp), -1.0 * (At * s.xp_prev), eta);
  next.x_prev = s.x;
  next.yp_prev = s.yp;
  next.xp_prev = s.xp;
  next.y_prev = s.y;
  return next;
}

Trajectory run(const BilinearGame& game, Algorithm algo, double eta, const IterateState& init,
               const RunOptions& options) {
  if (algo == Algorithm::DOGDA) return run_dogda(game, eta, DogdaState::from(init), options);
  check_state(game, init);
  Trajectory traj;
  traj.algorithm = algo;
  traj.eta = eta;
  traj.record_stride = resolve_stride(game, options);
  traj.steps.push_back(0);
  traj.states.push_back(init);

  IterateState s = init;
  std::size_t t = 0;
  while (t < options.max_steps) {
    IterateState next = algo == Algorithm::GDA ? gda_step(game, s, eta) : ogda_step(game, s, eta);
    ++t;
    if (exceeds(next.x, options.blow_cap) || exceeds(next.y, options.blow_cap)) {
      next.blown_up = true;
      traj.stop_reason = StopReason::Diverged;
      s = std::move(next);
      break;
    }
    const double step = diff_norm({&next.x, &next.y, &next.x_prev, &next.y_prev}, {&s.x, &s.y, &s.x_prev, &s.y_prev});
    const double scale = std::max(1.0, norm(concat(next.x, next.y)));
    s = std::move(next);
    if (step < options.stop_tol * scale) {
      traj.stop_reason = StopReason::Converged;
      break;
    }
    if (t % traj.record_stride == 0) {
      traj.steps.push_back(t);
      traj.states.push_back(s);
    }
  }
  if (traj.steps.back() != t) {
    traj.steps.push_back(t);
    traj.states.push_back(s);
  }
  return traj;
}

Trajectory run_dogda(const BilinearGame& game, double eta, const DogdaState& init, const RunOptions& options) {
  Trajectory traj;
  traj.algorithm = Algorithm::DOGDA;
  traj.eta = eta;
  traj.record_stride = resolve_stride(game, options);
  traj.steps.push_back(0);
  traj.states.push_back(init.players());

  DogdaState s = init;
  std::size_t t = 0;
  while (t < options.max_steps) {
    DogdaState next = dogda_step(game, s, eta);
    ++t;
    if (exceeds(next.x, options.blow_cap) || exceeds(next.y, options.blow_cap) ||
        exceeds(next.xp, options.blow_cap) || exceeds(next.yp, options.blow_cap)) {
      next.blown_up = true;
      traj.stop_reason = StopReason::Diverged;
      s = std::move(next);
      break;
    }
    const double step = diff_norm(
        {&next.x, &next.yp, &next.xp, &next.y, &next.x_prev, &next.yp_prev, &next.xp_prev, &next.y_prev},
        {&s.x, &s.yp, &s.xp, &s.y, &s.x_prev, &s.yp_prev, &s.xp_prev, &s.y_prev});
    const double scale = std::max(1.0, norm(concat(next.x, next.y)));
    s = std::move(next);
    if (step < options.stop_tol * scale) {
      traj.stop_reason = StopReason::Converged;
      break;
    }
    if (t % traj.record_stride == 0) {
      traj.steps.push_back(t);
      traj.states.push_back(s.players());
    }
  }
  if (traj.steps.back() != t) {
    traj.steps.push_back(t);
    traj.states.push_back(s.players());
  }
  return traj;
}

Matrix companion_matrix(const BilinearGame& game, double eta) {
  const std::size_t n = game.n();
  const std::size_t p = game.p();
  const Matrix Bt = game.B.transpose();
  Matrix L(2 * (n + p), 2 * (n + p));
  L.set_block(0, 0, Matrix::identity(n));
  L.set_block(0, n, 2.0 * eta * game.A);
  L.set_block(0, 2 * n + p, -eta * game.A);
  L.set_block(n, 0, 2.0 * eta * Bt);
  L.set_block(n, n, Matrix::identity(p));
  L.set_block(n, n + p, -eta * Bt);
  L.set_block(n + p, 0, Matrix::identity(n));
  L.set_block(2 * n + p, n, Matrix::identity(p));
  return L;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const BilinearGame& game,
                          const std::optional<PointLimit>& limit, const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  out << 't';
  for (std::size_t i = 0; i < game.n(); ++i) out << ",x_" << i;
  for (std::size_t j = 0; j < game.p(); ++j) out << ",y_" << j;
  out << ",dist_limit,g1,g2\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const IterateState& s = traj.states[k];
    out << traj.steps[k];
    for (double v : s.x) out << ',' << format_double(v);
    for (double v : s.y) out << ',' << format_double(v);
    out << ',';
    if (limit) out << format_double(norm(concat(s.x - limit->x, s.y - limit->y)));
    const Payoffs pay = payoffs(game, s.x, s.y);
    out << ',' << format_double(pay.g1) << ',' << format_double(pay.g2) << '\n';
  }
}

}  // namespace saddle
