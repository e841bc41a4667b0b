#pragma once

#include <optional>

#include "saddle/linalg.hpp"

namespace saddle {

/// Two-player bilinear game on R^n x R^p:
///   g1(x, y) = x^T A y + b^T x + c^T y + d   (maximized over x)
///   g2(x, y) = x^T B y + e^T x + f^T y + g   (maximized over y)
/// Zero-sum means B = -A, e = -b, f = -c, g = -d.
struct BilinearGame {
  Matrix A;
  Matrix B;
  Vector b, c, e, f;
  double d = 0.0;
  double g = 0.0;

  /// Validates shapes; throws DimensionMismatch.
  BilinearGame(Matrix A, Matrix B, Vector b, Vector c, Vector e, Vector f, double d = 0.0, double g = 0.0);

  static BilinearGame zero_sum(Matrix A, Vector b = {}, Vector c = {}, double d = 0.0);
  /// Homogeneous game x^T A y, x^T B y.
  static BilinearGame general(Matrix A, Matrix B);

  std::size_t n() const { return A.rows(); }
  std::size_t p() const { return A.cols(); }
  /// True when B = -A and f = -c exactly; e and g do not affect the dynamics.
  bool is_zero_sum() const;
};

/// {z0 + k : k in kernel}.
struct AffineSet {
  Vector particular;
  SubspaceBasis kernel;
};

/// Nash equilibria of the game: x-part {B^T x + f = 0}, y-part {A y + b = 0}.
struct NashSet {
  AffineSet x_part;
  AffineSet y_part;
  bool nonempty = false;
  double x_residual = 0.0;
  double y_residual = 0.0;
};

/// Least-squares particular solutions via the pseudoinverse. The set is empty
/// when a residual exceeds residual_tol * (1 + |rhs|).
NashSet nash_set(const BilinearGame& game, double rank_tol = -1.0, double residual_tol = 1e-10);

struct Payoffs {
  double g1;
  double g2;
};

Payoffs payoffs(const BilinearGame& game, const Vector& x, const Vector& y);

/// Replaces player 2's matrix by -(A^dagger)^T keeping A, b, c, e, g. The
/// default f is A^dagger x* for a zero-sum equilibrium x* (A^T x* + c = 0)
/// when one exists, otherwise 0.
BilinearGame accelerate(const BilinearGame& game, const std::optional<Vector>& f_new = std::nullopt);

/// Player 2 scaled by l > 0 against the zero-sum opponent: B = -lA,
/// f = -lc, e = -lb, g = -ld. Throws NonPositiveScale.
BilinearGame scale_opponent(const BilinearGame& game, double l);

}  // namespace saddle
