#pragma once

#include <cstdint>
#include <random>

#include "saddle/dynamics.hpp"
#include "saddle/games.hpp"

namespace saddle {

using Rng = std::mt19937_64;

/// Components uniform in [-1, 1].
Vector random_vector(Rng& rng, std::size_t n);
Matrix random_uniform_matrix(Rng& rng, std::size_t rows, std::size_t cols);
Matrix random_orthogonal(Rng& rng, std::size_t n);
/// U diag(s) V^T with `rank` singular values uniform in [s_lo, s_hi].
Matrix random_matrix_with_rank(Rng& rng, std::size_t rows, std::size_t cols, std::size_t rank, double s_lo = 0.5,
                               double s_hi = 1.5);
/// Symmetric positive definite with eigenvalues uniform in [lo, hi].
Matrix random_spd(Rng& rng, std::size_t n, double lo = 0.5, double hi = 2.0);

/// Zero-sum game whose affine terms keep the Nash set nonempty.
BilinearGame random_zero_sum(Rng& rng, std::size_t n, std::size_t p, std::size_t rank);
/// General-sum game B = -S A with S symmetric positive definite, so that
/// S(A, B) is real non-positive; affine terms keep the Nash set nonempty.
BilinearGame random_negative_general_sum(Rng& rng, std::size_t n, std::size_t p, std::size_t rank);

/// x0, y0, x_-1, y_-1 all uniform in [-1, 1].
IterateState random_init(Rng& rng, std::size_t n, std::size_t p);

}  // namespace saddle
