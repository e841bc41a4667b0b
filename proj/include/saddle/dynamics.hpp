#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "saddle/games.hpp"

namespace saddle {

enum class Algorithm { GDA, OGDA, DOGDA };
enum class StopReason { MaxSteps, Converged, Diverged };

const char* to_string(Algorithm algo);
const char* to_string(StopReason reason);
Algorithm parse_algorithm(const std::string& name);

/// Players' strategies at steps t and t-1.
struct IterateState {
  Vector x, y, x_prev, y_prev;
  bool blown_up = false;

  /// State with (x_{-1}, y_{-1}) = (x_0, y_0).
  static IterateState at_rest(Vector x0, Vector y0);
  /// Z = (x, y, x_prev, y_prev).
  Vector stacked() const;
  static IterateState unstack(const Vector& z, std::size_t n, std::size_t p);
};

/// Four-player state of double optimistic GDA: (x, y') and (x', y) are two
/// independent zero-sum OGDA runs.
struct DogdaState {
  Vector x, yp, xp, y;
  Vector x_prev, yp_prev, xp_prev, y_prev;
  bool blown_up = false;

  /// Auxiliary players start from the real players' data: x' = x, y' = y.
  static DogdaState from(const IterateState& s);
  IterateState players() const;
};

struct RunOptions {
  std::size_t max_steps = 10000;
  /// Stop when |Z_{t+1} - Z_t| < stop_tol * max(1, |(x_{t+1}, y_{t+1})|).
  double stop_tol = 1e-13;
  double blow_cap = 1e12;
  /// 0 selects 1 for n + p <= 16, else ceil(max_steps / 4096).
  std::size_t record_stride = 0;
};

struct Trajectory {
  Algorithm algorithm = Algorithm::OGDA;
  double eta = 0.0;
  std::vector<std::size_t> steps;  // raw step index of each recorded state
  std::vector<IterateState> states;
  std::size_t record_stride = 1;
  StopReason stop_reason = StopReason::MaxSteps;

  const IterateState& final_state() const { return states.back(); }
};

IterateState gda_step(const BilinearGame& game, const IterateState& s, double eta);
IterateState ogda_step(const BilinearGame& game, const IterateState& s, double eta);
DogdaState dogda_step(const BilinearGame& game, const DogdaState& s, double eta);

/// Runs GDA/OGDA from `init`; DOGDA starts from DogdaState::from(init).
Trajectory run(const BilinearGame& game, Algorithm algo, double eta, const IterateState& init,
               const RunOptions& options = {});
Trajectory run_dogda(const BilinearGame& game, double eta, const DogdaState& init, const RunOptions& options = {});

/// Linear operator of the homogeneous OGDA recursion on Z = (x, y, x_prev, y_prev):
///   [[I, 2eta A, 0, -eta A], [2eta B^T, I, -eta B^T, 0], [I, 0, 0, 0], [0, I, 0, 0]].
Matrix companion_matrix(const BilinearGame& game, double eta);

struct PointLimit {
  Vector x;
  Vector y;
};

/// Columns t, x_*, y_*, dist_limit, g1, g2 with 17 significant digits.
/// dist_limit is left empty without a limit. A non-empty comment is written
/// first as a '#' line.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj, const BilinearGame& game,
                          const std::optional<PointLimit>& limit = std::nullopt, const std::string& comment = "");

std::string format_double(double v);

}  // namespace saddle
