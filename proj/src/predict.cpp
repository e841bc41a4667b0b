#include "saddle/predict.hpp"

#include <cmath>
#include <random>

#include "saddle/errors.hpp"

namespace saddle {

const char* to_string(LimitGeometry geometry) {
  switch (geometry) {
    case LimitGeometry::OrthogonalOntoKernels: return "OrthogonalOntoKernels";
    case LimitGeometry::ObliqueAlongImages: return "ObliqueAlongImages";
    case LimitGeometry::DogdaOrthogonal: return "DogdaOrthogonal";
  }
  return "?";
}

namespace {

Vector affine_projection(const AffineSet& set, const Vector& v, const std::optional<SubspaceBasis>& along) {
  return set.particular + project(v - set.particular, set.kernel, along);
}

LimitPrediction invalid(LimitGeometry geometry, std::string reason) {
  LimitPrediction p;
  p.geometry = geometry;
  p.valid = false;
  p.reason = std::move(reason);
  return p;
}

}  // namespace

LimitPrediction predict_limit(const BilinearGame& game, Algorithm algo, const IterateState& init, double eta) {
  if (init.x.size() != game.n() || init.y.size() != game.p())
    throw Error(ErrorKind::DimensionMismatch, "initial state does not match the game");
  if (algo == Algorithm::GDA)
    return invalid(LimitGeometry::OrthogonalOntoKernels, "GDA limits are not characterized");

  const bool zero_sum = game.is_zero_sum() && algo == Algorithm::OGDA;
  const LimitGeometry geometry = algo == Algorithm::DOGDA ? LimitGeometry::DogdaOrthogonal
                                 : zero_sum               ? LimitGeometry::OrthogonalOntoKernels
                                                          : LimitGeometry::ObliqueAlongImages;
  const SpectralReport report = rate_report(game, eta, algo);
  if (!report.convergent()) return invalid(geometry, report.violated.empty() ? "no convergence result applies" : report.violated);

  const NashSet nash = nash_set(game);
  if (!nash.nonempty) return invalid(geometry, "Nash set is empty");

  LimitPrediction p;
  p.geometry = geometry;
  p.part3b = report.eta_regime == EtaRegime::Part3b;
  if (geometry == LimitGeometry::ObliqueAlongImages) {
    try {
      p.x_inf = affine_projection(nash.x_part, init.x, image_basis(game.A));
      p.y_inf = affine_projection(nash.y_part, init.y, image_basis(game.B.transpose()));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotComplementary) throw;
      return invalid(geometry, std::string("projection subspaces are not complementary: ") + e.what());
    }
  } else {
    p.x_inf = affine_projection(nash.x_part, init.x, std::nullopt);
    p.y_inf = affine_projection(nash.y_part, init.y, std::nullopt);
  }
  p.valid = true;
  return p;
}

double distance_to_nash(const BilinearGame& game, const IterateState& init) {
  const NashSet nash = nash_set(game);
  if (!nash.nonempty) throw Error(ErrorKind::EmptyNashSet, "no Nash equilibrium to measure against");
  // Closest (u, u) to (a, a') with u - u* in K is u = P_K((a + a')/2 - u*) + u*.
  auto block = [](const AffineSet& set, const Vector& a, const Vector& a_prev) {
    const Vector wa = a - set.particular;
    const Vector wp = a_prev - set.particular;
    const Vector u = project(0.5 * (wa + wp), set.kernel);
    const double r1 = norm(wa - u);
    const double r2 = norm(wp - u);
    return r1 * r1 + r2 * r2;
  };
  return std::sqrt(block(nash.x_part, init.x, init.x_prev) + block(nash.y_part, init.y, init.y_prev));
}

Complex dominant_eigenvalue(const BilinearGame& game, double eta) {
  if (game.is_zero_sum()) {
    const SquaredSpectrum sq = squared_spectrum(game.A);
    if (sq.positive.empty()) throw Error(ErrorKind::ZeroMatrix, "A = 0 has no contracting mode");
    // The largest root of each S(mu) is decreasing in mu below the knife
    // edge and increasing above it, so only mu_min and mu_max compete.
    auto top_root = [eta](double mu) {
      const double X = eta * std::sqrt(mu);
      const double q = 4.0 * X * X;
      if (q <= 1.0) return Complex(0.5 * (1.0 + std::sqrt(1.0 - q)), X);
      return Complex(0.5, X + 0.5 * std::sqrt(q - 1.0));
    };
    const Complex a = top_root(sq.positive.back());
    const Complex b = top_root(sq.positive.front());
    return std::abs(b) > std::abs(a) ? b : a;
  }
  const std::vector<Complex> raw = eig_values_raw(companion_matrix(game, eta));
  Complex best = 0.0;
  for (Complex z : raw) {
    if (std::abs(z - 1.0) <= 1e-6) continue;
    if (z.imag() < 0.0) z = std::conj(z);
    if (std::abs(z) > std::abs(best)) best = z;
  }
  return best;
}

Vector real_eigenvector(const Matrix& L, Complex lambda) {
  const std::size_t n = L.rows();
  // (L - s I)(u + i v) = r + i q as a real 2n system.
  const Complex shift = lambda + Complex(1e-10 * (1.0 + std::abs(lambda)), 0.0);
  Matrix M(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double x = L(i, j) - (i == j ? shift.real() : 0.0);
      M(i, j) = x;
      M(n + i, n + j) = x;
    }
  for (std::size_t i = 0; i < n; ++i) {
    M(i, n + i) = shift.imag();
    M(n + i, i) = -shift.imag();
  }
  std::mt19937_64 rng(0x5eed5eedULL);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vector z(2 * n);
  for (double& v : z) v = unif(rng);
  for (int it = 0; it < 6; ++it) {
    z = lu_solve(M, z);
    z = (1.0 / norm(z)) * z;
  }
  // Rotate so that the largest component is real.
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (std::hypot(z[i], z[n + i]) > std::hypot(z[k], z[n + k])) k = i;
  const Complex phase = std::conj(Complex(z[k], z[n + k])) / std::hypot(z[k], z[n + k]);
  Vector re(n);
  for (std::size_t i = 0; i < n; ++i) re[i] = (Complex(z[i], z[n + i]) * phase).real();
  return (1.0 / norm(re)) * re;
}

IterateState dominant_witness(const BilinearGame& game, double eta) {
  if (game.A.is_zero()) throw Error(ErrorKind::ZeroMatrix, "A = 0 has no contracting mode");
  const Vector mode = real_eigenvector(companion_matrix(game, eta), dominant_eigenvalue(game, eta));
  IterateState s = IterateState::unstack(mode, game.n(), game.p());
  const NashSet nash = nash_set(game);
  if (nash.nonempty) {
    s.x = s.x + nash.x_part.particular;
    s.x_prev = s.x_prev + nash.x_part.particular;
    s.y = s.y + nash.y_part.particular;
    s.y_prev = s.y_prev + nash.y_part.particular;
  }
  return s;
}

IterateState tight_witness(const BilinearGame& game, double eta) {
  if (game.A.is_zero()) throw Error(ErrorKind::ZeroMatrix, "A = 0 has no contracting mode");
  const SquaredSpectrum sq = squared_spectrum(game.A);
  if (3.0 * eta * eta * sq.positive.front() >= 1.0 - 1e-12)
    throw Error(ErrorKind::DivergentRegime, "eta >= 1/sqrt(3 mu_max)");
  return dominant_witness(game, eta);
}

}  // namespace saddle
