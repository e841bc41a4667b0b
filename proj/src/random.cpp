#include "saddle/random.hpp"

#include <cmath>

namespace saddle {

Vector random_vector(Rng& rng, std::size_t n) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vector v(n);
  for (double& x : v) x = unif(rng);
  return v;
}

Matrix random_uniform_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  return Matrix(rows, cols, random_vector(rng, rows * cols));
}

Matrix random_orthogonal(Rng& rng, std::size_t n) {
  // Gram-Schmidt on random columns; a rejected near-dependent draw is redrawn.
  std::vector<Vector> q;
  while (q.size() < n) {
    Vector v = random_vector(rng, n);
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& u : q) v = v - dot(u, v) * u;
    const double nv = norm(v);
    if (nv > 1e-3) q.push_back((1.0 / nv) * v);
  }
  return Matrix::from_columns(n, q);
}

Matrix random_matrix_with_rank(Rng& rng, std::size_t rows, std::size_t cols, std::size_t rank, double s_lo,
                               double s_hi) {
  const Matrix U = random_orthogonal(rng, rows);
  const Matrix V = random_orthogonal(rng, cols);
  std::uniform_real_distribution<double> unif(s_lo, s_hi);
  Matrix S(rows, cols);
  for (std::size_t k = 0; k < rank && k < rows && k < cols; ++k) S(k, k) = unif(rng);
  return U * S * V.transpose();
}

Matrix random_spd(Rng& rng, std::size_t n, double lo, double hi) {
  const Matrix Q = random_orthogonal(rng, n);
  std::uniform_real_distribution<double> unif(lo, hi);
  Vector d(n);
  for (double& x : d) x = unif(rng);
  const Matrix S = Q * Matrix::diagonal(d) * Q.transpose();
  return 0.5 * (S + S.transpose());
}

BilinearGame random_zero_sum(Rng& rng, std::size_t n, std::size_t p, std::size_t rank) {
  const Matrix A = random_matrix_with_rank(rng, n, p, rank);
  // b in Im(A) and c in Im(A^T) so that A y + b = 0 and A^T x + c = 0 are solvable.
  const Vector b = A * random_vector(rng, p);
  const Vector c = A.transpose() * random_vector(rng, n);
  return BilinearGame::zero_sum(A, b, c);
}

BilinearGame random_negative_general_sum(Rng& rng, std::size_t n, std::size_t p, std::size_t rank) {
  const Matrix A = random_matrix_with_rank(rng, n, p, rank);
  const Matrix B = -(random_spd(rng, n) * A);
  const Vector b = A * random_vector(rng, p);
  const Vector f = B.transpose() * random_vector(rng, n);
  const Vector e = random_vector(rng, n);
  const Vector c = random_vector(rng, p);
  return BilinearGame(A, B, b, c, e, f);
}

IterateState random_init(Rng& rng, std::size_t n, std::size_t p) {
  IterateState s;
  s.x = random_vector(rng, n);
  s.y = random_vector(rng, p);
  s.x_prev = random_vector(rng, n);
  s.y_prev = random_vector(rng, p);
  return s;
}

}  // namespace saddle
