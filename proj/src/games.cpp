#include "saddle/games.hpp"

#include <cmath>

#include "saddle/errors.hpp"

namespace saddle {

namespace {

Vector or_zeros(Vector v, std::size_t n) { return v.empty() ? Vector(n, 0.0) : v; }

void expect_size(const Vector& v, std::size_t n, const char* what) {
  if (v.size() != n) throw Error(ErrorKind::DimensionMismatch, std::string(what) + " has the wrong length");
  if (!all_finite(v)) throw Error(ErrorKind::NonFinite, std::string(what) + " is not finite");
}

}  // namespace

BilinearGame::BilinearGame(Matrix A_, Matrix B_, Vector b_, Vector c_, Vector e_, Vector f_, double d_, double g_)
    : A(std::move(A_)), B(std::move(B_)), d(d_), g(g_) {
  if (B.rows() != A.rows() || B.cols() != A.cols())
    throw Error(ErrorKind::DimensionMismatch, "A and B must have the same shape");
  b = or_zeros(std::move(b_), n());
  c = or_zeros(std::move(c_), p());
  e = or_zeros(std::move(e_), n());
  f = or_zeros(std::move(f_), p());
  expect_size(b, n(), "b");
  expect_size(c, p(), "c");
  expect_size(e, n(), "e");
  expect_size(f, p(), "f");
  if (!std::isfinite(d) || !std::isfinite(g)) throw Error(ErrorKind::NonFinite, "payoff constants are not finite");
}

BilinearGame BilinearGame::zero_sum(Matrix A, Vector b, Vector c, double d) {
  const std::size_t n = A.rows();
  const std::size_t p = A.cols();
  b = or_zeros(std::move(b), n);
  c = or_zeros(std::move(c), p);
  Matrix B = -A;
  return BilinearGame(std::move(A), std::move(B), b, c, -b, -c, d, -d);
}

BilinearGame BilinearGame::general(Matrix A, Matrix B) {
  return BilinearGame(std::move(A), std::move(B), {}, {}, {}, {});
}

bool BilinearGame::is_zero_sum() const {
  for (std::size_t i = 0; i < n(); ++i)
    for (std::size_t j = 0; j < p(); ++j)
      if (B(i, j) != -A(i, j)) return false;
  for (std::size_t j = 0; j < p(); ++j)
    if (f[j] != -c[j]) return false;
  return true;
}

NashSet nash_set(const BilinearGame& game, double rank_tol, double residual_tol) {
  NashSet out;
  const Matrix Bt = game.B.transpose();
  out.x_part.particular = -1.0 * (pinv(Bt, rank_tol) * game.f);
  out.x_part.kernel = kernel_basis(Bt, rank_tol);
  out.y_part.particular = -1.0 * (pinv(game.A, rank_tol) * game.b);
  out.y_part.kernel = kernel_basis(game.A, rank_tol);
  out.x_residual = norm(Bt * out.x_part.particular + game.f);
  out.y_residual = norm(game.A * out.y_part.particular + game.b);
  out.nonempty = out.x_residual <= residual_tol * (1.0 + norm(game.f)) &&
                 out.y_residual <= residual_tol * (1.0 + norm(game.b));
  return out;
}

Payoffs payoffs(const BilinearGame& game, const Vector& x, const Vector& y) {
  if (x.size() != game.n() || y.size() != game.p())
    throw Error(ErrorKind::DimensionMismatch, "strategy dimensions do not match the game");
  return {dot(x, game.A * y) + dot(game.b, x) + dot(game.c, y) + game.d,
          dot(x, game.B * y) + dot(game.e, x) + dot(game.f, y) + game.g};
}

BilinearGame accelerate(const BilinearGame& game, const std::optional<Vector>& f_new) {
  const Matrix Ad = pinv(game.A);
  Matrix B = -Ad.transpose();
  Vector f;
  if (f_new) {
    f = *f_new;
  } else {
    // A zero-sum x* exists iff A^T x* + c = 0 is solvable.
    const Matrix At = game.A.transpose();
    const Vector xs = -1.0 * (pinv(At) * game.c);
    const bool solvable = norm(At * xs + game.c) <= 1e-10 * (1.0 + norm(game.c));
    f = solvable ? Ad * xs : Vector(game.p(), 0.0);
  }
  return BilinearGame(game.A, std::move(B), game.b, game.c, game.e, std::move(f), game.d, game.g);
}

BilinearGame scale_opponent(const BilinearGame& game, double l) {
  if (!(l > 0.0)) throw Error(ErrorKind::NonPositiveScale, "scale must be positive");
  return BilinearGame(game.A, -l * game.A, game.b, game.c, -l * game.b, -l * game.c, game.d, -l * game.d);
}

}  // namespace saddle
