#pragma once

#include <optional>
#include <string>
#include <vector>

#include "saddle/dynamics.hpp"
#include "saddle/games.hpp"
#include "saddle/linalg.hpp"

namespace saddle {

/// Roots of lambda^2 (1 - lambda)^2 = mu eta^2 (1 - 2 lambda)^2, distinct
/// values with multiplicities summing to 4.
struct RootSet {
  Complex mu;
  double eta = 0.0;
  std::vector<Complex> roots;
  std::vector<int> multiplicity;
};

/// Closed-form roots for real mu, split by the sign of mu and by 4 eta^2 |mu|
/// against 1. The zero-sum set S(mu) is s_star_roots(-mu, eta).
RootSet s_star_roots(double mu, double eta);
/// Same quartic for complex mu: lambda = (1 + 2s +- sqrt(1 + 4 s^2)) / 2, s = +-eta sqrt(mu).
RootSet s_star_roots(Complex mu, double eta);

/// Sp(Lambda) from the closed form, with algebraic multiplicities. Uses the
/// smaller of B^T A and A B^T and pads with |n - p| copies of {0, 1}.
ComplexScalarSet lambda_spectrum(const BilinearGame& game, double eta);

enum class EtaRegime { Part2, Part3a, Part3b, Divergent, Inapplicable };
enum class Diagonalizable { Yes, No, Borderline };

const char* to_string(EtaRegime regime);
const char* to_string(Diagonalizable verdict);

struct Assumptions {
  bool nash_nonempty = true;
  bool spectrum_real_nonpositive = true;
  bool eta_in_range = true;
  bool diagonalizable_or_invertible = true;
};

struct SpectralReport {
  Algorithm algorithm = Algorithm::OGDA;
  double eta = 0.0;
  bool zero_sum = true;
  /// Distinct values of S(A) (zero-sum, DOGDA: S(A) u S(B)) or S(A, B).
  std::vector<Complex> mu_set;
  double mu_min = 0.0;  // smallest positive |mu|
  double mu_max = 0.0;
  double lambda_star = 0.0;
  double lambda_dstar = 0.0;
  double lambda_max = 0.0;
  std::optional<double> C;
  std::optional<double> mu_star;
  std::optional<double> mu_dstar;
  EtaRegime eta_regime = EtaRegime::Inapplicable;
  Diagonalizable diagonalizable = Diagonalizable::Yes;
  Assumptions assumptions;
  std::string violated;

  bool convergent() const {
    return eta_regime == EtaRegime::Part2 || eta_regime == EtaRegime::Part3a || eta_regime == EtaRegime::Part3b;
  }
};

/// Closed-form convergence rate and constant. Zero-sum OGDA is classified
/// into Part2/Part3a/Part3b/Divergent; general-sum OGDA and DOGDA are rated
/// for eta < 1/(2 sqrt(mu_max)) only, and GDA is never convergent.
SpectralReport rate_report(const BilinearGame& game, double eta, Algorithm algo = Algorithm::OGDA);

/// Lambda_max on the first branch: sqrt((1 + sqrt(1 - 4 eta^2 mu)) / 2).
double branch_rate(double mu, double eta);
/// Constant when every relevant mu satisfies 4 eta^2 mu < 1.
double constant_below(double mu, double eta);
/// Constant when every relevant mu satisfies 4 eta^2 mu > 1.
double constant_above(double mu, double eta);

struct OptimalStep {
  double eta_star;
  double lambda_star;
};

/// Step size minimizing lambda_max for alpha = mu_min / mu_max in (0, 1].
/// Throws InvalidRatio.
OptimalStep optimal_eta(double mu_min, double mu_max);

/// Compares the sum of numerical geometric multiplicities with the
/// dimension. Eigenvalues are clustered within tol (relative); clusters
/// closer than 10 tol give Borderline.
Diagonalizable is_diagonalizable(const Matrix& L, double tol = 1e-5);

/// Membership of 1/(4 eta^2) in S(A), relative to mu_max.
bool knife_edge(const std::vector<double>& mu_values, double eta, double mu_max);

/// Nonzero S(A) values sigma_i^2, and whether 0 belongs to S(A).
struct SquaredSpectrum {
  std::vector<double> positive;  // descending
  bool has_zero = false;
};
SquaredSpectrum squared_spectrum(const Matrix& A, double rank_tol = -1.0);

}  // namespace saddle
