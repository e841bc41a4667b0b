#pragma once

#include <optional>
#include <string>
#include <vector>

#include "saddle/dynamics.hpp"
#include "saddle/spectral.hpp"

namespace saddle {

struct RateFit {
  double fitted_ratio = 0.0;  // exp(slope of log distance per raw step)
  double r_squared = 0.0;
  std::size_t window_begin = 0;  // raw step indices
  std::size_t window_end = 0;
  std::size_t points = 0;
};

/// Least-squares fit of log |(x_t, y_t) - limit| over recorded steps in
/// [0.2 T, T), where T is the first step whose distance falls below
/// floor * max(1, |limit|) (or the last step). Throws InsufficientData
/// (fewer than 10 points) and NotConverged (diverged trajectory).
RateFit estimate_rate(const Trajectory& traj, const PointLimit& limit, double floor = 1e-13);

enum class OutcomeKind { Converged, Diverged, Cooperating };

const char* to_string(OutcomeKind kind);

struct OutcomeClass {
  OutcomeKind kind = OutcomeKind::Diverged;
  std::optional<PointLimit> limit;
  /// Per-step payoff growth over the last 50 recorded steps (smaller of the two players).
  double growth_ratio = 0.0;
  /// Square of the largest real root of S*(mu_max) when B^T A has a positive eigenvalue.
  std::optional<double> expected_growth;
  std::string evidence;
};

/// Converged when the run stopped on the step criterion; Cooperating when both
/// payoffs end above coop_cap and grow over the last 50 recorded steps;
/// Diverged otherwise.
OutcomeClass classify(const Trajectory& traj, const BilinearGame& game, double coop_cap = 1e6);

struct BoundCheck {
  bool holds = false;
  double worst_ratio = 0.0;  // max of distance / envelope
  double lambda_used = 0.0;
  double constant_used = 0.0;
  bool constant_fitted = false;
  std::size_t points = 0;
};

/// Checks |(x_t, y_t) - limit| <= C D lambda^t + 1e-9 at every recorded t
/// above the floor. Without a closed-form C (Part3b, general sum) the check
/// uses lambda_max + 0.01 and a constant fitted on the first half of the
/// window. Throws RegimeWithoutConstant for non-convergent reports.
BoundCheck check_bound(const Trajectory& traj, const SpectralReport& report, double D, const PointLimit& limit,
                       double floor = 1e-13);

struct OracleReport {
  double max_distance = 0.0;
  bool sizes_match = false;
  std::vector<Complex> closed_form;
  std::vector<Complex> oracle;
};

/// Matches the closed-form spectrum against eig_complex(Lambda) as
/// multisets: greedy nearest unused partner after sorting by (re, im).
OracleReport oracle_reconcile(const BilinearGame& game, double eta);
OracleReport reconcile_multisets(const std::vector<Complex>& closed_form, const std::vector<Complex>& oracle);

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool all_pass() const;
  void add(std::string name, bool pass, double measured, double tolerance, std::string detail = "");
};

}  // namespace saddle
