#pragma once

#include <string>

#include "saddle/dynamics.hpp"
#include "saddle/spectral.hpp"

namespace saddle {

enum class LimitGeometry { OrthogonalOntoKernels, ObliqueAlongImages, DogdaOrthogonal };

const char* to_string(LimitGeometry geometry);

struct LimitPrediction {
  Vector x_inf;
  Vector y_inf;
  LimitGeometry geometry = LimitGeometry::OrthogonalOntoKernels;
  bool valid = false;
  std::string reason;  // empty when valid
  /// Knife-edge step size: the limit holds but Lambda is not diagonalizable.
  bool part3b = false;

  PointLimit point() const { return {x_inf, y_inf}; }
};

/// Limit of the iterates, depending on (x_0, y_0) only.
///   zero-sum OGDA:    orthogonal projections onto {A^T x + c = 0}, {A y + b = 0}
///   general-sum OGDA: projection onto {B^T x + f = 0} along Im(A) and onto
///                     {A y + b = 0} along Im(B^T)
///   DOGDA:            orthogonal projections onto {B^T x + f = 0}, {A y + b = 0}
/// Returns valid = false with a reason when no convergence result applies.
LimitPrediction predict_limit(const BilinearGame& game, Algorithm algo, const IterateState& init, double eta);

/// Distance from Z_0 = (x_0, y_0, x_-1, y_-1) to {(x, y, x, y) : (x, y) Nash}.
/// Throws EmptyNashSet.
double distance_to_nash(const BilinearGame& game, const IterateState& init);

/// Initialization (Nash point plus the real part of a unit eigenvector of
/// Lambda) whose error decays exactly at the dominant modulus. Requires
/// A != 0 (ZeroMatrix) and eta < 1/sqrt(3 mu_max) (DivergentRegime).
IterateState tight_witness(const BilinearGame& game, double eta);

/// Same construction without the step-size restriction, for probing the
/// divergent regime.
IterateState dominant_witness(const BilinearGame& game, double eta);

/// Eigenvalue of Lambda with the largest modulus apart from 1 (upper half plane).
Complex dominant_eigenvalue(const BilinearGame& game, double eta);

/// Real part of an eigenvector of Lambda for `lambda`, by inverse iteration
/// with a fixed shift and a fixed seed. Unit norm, largest component real.
Vector real_eigenvector(const Matrix& L, Complex lambda);

}  // namespace saddle
