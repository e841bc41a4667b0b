#include "saddle/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "saddle/errors.hpp"

namespace saddle {

const char* to_string(EtaRegime regime) {
  switch (regime) {
    case EtaRegime::Part2: return "Part2";
    case EtaRegime::Part3a: return "Part3a";
    case EtaRegime::Part3b: return "Part3b";
    case EtaRegime::Divergent: return "Divergent";
    case EtaRegime::Inapplicable: return "Inapplicable";
  }
  return "?";
}

const char* to_string(Diagonalizable verdict) {
  switch (verdict) {
    case Diagonalizable::Yes: return "Yes";
    case Diagonalizable::No: return "No";
    case Diagonalizable::Borderline: return "Borderline";
  }
  return "?";
}

namespace {

constexpr double kKnifeEdgeTol = 1e-9;
constexpr double kRootMergeTol = 1e-12;

std::vector<Complex> real_mu_roots(double mu, double eta) {
  if (mu == 0.0) return {0.0, 0.0, 1.0, 1.0};
  if (mu < 0.0) {
    const double X = eta * std::sqrt(-mu);
    const double q = 4.0 * X * X;
    if (q <= 1.0) {
      const double delta = std::sqrt(1.0 - q);
      return {Complex(0.5 * (1 + delta), X), Complex(0.5 * (1 - delta), X), Complex(0.5 * (1 + delta), -X),
              Complex(0.5 * (1 - delta), -X)};
    }
    const double w = 0.5 * std::sqrt(q - 1.0);
    return {Complex(0.5, X + w), Complex(0.5, X - w), Complex(0.5, -(X + w)), Complex(0.5, -(X - w))};
  }
  const double en = eta * std::sqrt(mu);
  const double delta = std::sqrt(1.0 + 4.0 * en * en);
  return {0.5 * (1 + 2 * en + delta), 0.5 * (1 + 2 * en - delta), 0.5 * (1 - 2 * en + delta),
          0.5 * (1 - 2 * en - delta)};
}

std::vector<Complex> complex_mu_roots(Complex mu, double eta) {
  std::vector<Complex> out;
  const Complex s0 = eta * std::sqrt(mu);
  for (const Complex s : {s0, -s0}) {
    const Complex r = std::sqrt(1.0 + 4.0 * s * s);
    out.push_back(0.5 * (1.0 + 2.0 * s + r));
    out.push_back(0.5 * (1.0 + 2.0 * s - r));
  }
  return out;
}

RootSet make_root_set(Complex mu, double eta, const std::vector<Complex>& raw) {
  const ComplexScalarSet set = ComplexScalarSet::cluster(raw, kRootMergeTol);
  return RootSet{mu, eta, set.values, set.multiplicity};
}

bool treat_real(Complex mu) { return std::abs(mu.imag()) <= 1e-12 * (1.0 + std::abs(mu)); }

// Sp(B^T A) or Sp(A B^T) as a raw multiset: the smaller product and the
// number of padding {0, 1} pairs.
struct MuMultiset {
  std::vector<Complex> values;
  std::size_t padding = 0;
};

MuMultiset mu_multiset(const BilinearGame& game) {
  const std::size_t n = game.n();
  const std::size_t p = game.p();
  MuMultiset out;
  out.padding = n > p ? n - p : p - n;
  const std::size_t k = std::min(n, p);
  if (game.is_zero_sum()) {
    const Vector s = singular_values(game.A);
    const double thr = game.A.empty() ? 0.0 : default_rank_tol(n, p) * s.front();
    for (std::size_t i = 0; i < k; ++i) out.values.emplace_back(s[i] > thr ? -s[i] * s[i] : 0.0);
    return out;
  }
  const Matrix prod = p <= n ? game.B.transpose() * game.A : game.A * game.B.transpose();
  out.values = eig_values_raw(prod);
  double scale = 0.0;
  for (Complex z : out.values) scale = std::max(scale, std::abs(z));
  for (Complex& z : out.values) {
    if (std::abs(z) <= 1e-12 * scale) z = 0.0;
    if (treat_real(z)) z = Complex(z.real(), 0.0);
  }
  return out;
}

double clamp0(double v) { return v < 0.0 ? 0.0 : v; }

}  // namespace

RootSet s_star_roots(double mu, double eta) { return make_root_set(mu, eta, real_mu_roots(mu, eta)); }

RootSet s_star_roots(Complex mu, double eta) {
  if (treat_real(mu)) return s_star_roots(mu.real(), eta);
  return make_root_set(mu, eta, complex_mu_roots(mu, eta));
}

ComplexScalarSet lambda_spectrum(const BilinearGame& game, double eta) {
  const MuMultiset mus = mu_multiset(game);
  std::vector<Complex> raw;
  for (Complex mu : mus.values) {
    const std::vector<Complex> r = treat_real(mu) ? real_mu_roots(mu.real(), eta) : complex_mu_roots(mu, eta);
    raw.insert(raw.end(), r.begin(), r.end());
  }
  for (std::size_t i = 0; i < mus.padding; ++i) {
    raw.emplace_back(0.0);
    raw.emplace_back(1.0);
  }
  return ComplexScalarSet::cluster(raw, 1e-10);
}

SquaredSpectrum squared_spectrum(const Matrix& A, double rank_tol) {
  SquaredSpectrum out;
  const std::size_t k = std::min(A.rows(), A.cols());
  if (A.empty()) {
    out.has_zero = A.rows() + A.cols() > 0;
    return out;
  }
  const Vector s = singular_values(A);
  const double thr = (rank_tol < 0.0 ? default_rank_tol(A.rows(), A.cols()) : rank_tol) * s.front();
  for (std::size_t i = 0; i < k; ++i)
    if (s[i] > thr && s[i] > 0.0) out.positive.push_back(s[i] * s[i]);
  out.has_zero = out.positive.size() < std::max(A.rows(), A.cols());
  return out;
}

double branch_rate(double mu, double eta) { return std::sqrt(0.5 * (1.0 + std::sqrt(clamp0(1.0 - 4.0 * eta * eta * mu)))); }

double constant_below(double mu, double eta) {
  const double e2 = eta * eta * mu;
  return std::sqrt(2.0 / (1.0 - std::sqrt((1.0 + 5.0 * e2) / (2.0 + e2))));
}

double constant_above(double mu, double eta) {
  const double e2 = eta * eta * mu;
  return std::sqrt(2.0 / (1.0 - std::sqrt((2.0 + e2) / (1.0 + 5.0 * e2))));
}

bool knife_edge(const std::vector<double>& mu_values, double eta, double mu_max) {
  const double edge = 1.0 / (4.0 * eta * eta);
  return std::any_of(mu_values.begin(), mu_values.end(),
                     [&](double mu) { return std::abs(mu - edge) <= kKnifeEdgeTol * mu_max; });
}

namespace {

void add_violation(SpectralReport& r, const std::string& what) {
  if (!r.violated.empty()) r.violated += "; ";
  r.violated += what;
}

SpectralReport zero_sum_report(const BilinearGame& game, double eta) {
  SpectralReport r;
  r.eta = eta;
  r.zero_sum = true;
  const SquaredSpectrum sq = squared_spectrum(game.A);
  for (double mu : sq.positive) r.mu_set.emplace_back(mu);
  if (sq.has_zero) r.mu_set.emplace_back(0.0);
  r.assumptions.nash_nonempty = nash_set(game).nonempty;

  if (sq.positive.empty()) {
    // A = 0: the iterates never move.
    r.eta_regime = EtaRegime::Part2;
    r.lambda_max = 0.0;
    r.C = constant_below(0.0, eta);
    if (!r.assumptions.nash_nonempty) {
      r.eta_regime = EtaRegime::Divergent;
      add_violation(r, "Nash set is empty");
    }
    return r;
  }

  const double mu_max = sq.positive.front();
  const double mu_min = sq.positive.back();
  r.mu_max = mu_max;
  r.mu_min = mu_min;
  const double e2 = eta * eta;
  const double edge = 1.0 / (4.0 * e2);
  const bool on_edge = knife_edge(sq.positive, eta, mu_max);
  r.diagonalizable = on_edge ? Diagonalizable::No : Diagonalizable::Yes;

  r.lambda_star = mu_min <= edge || on_edge ? branch_rate(mu_min, eta) : 0.0;
  r.lambda_dstar = mu_max >= edge || on_edge
                       ? std::sqrt(clamp0(2.0 * e2 * mu_max + eta * std::sqrt(mu_max) * std::sqrt(clamp0(4.0 * e2 * mu_max - 1.0))))
                       : 0.0;

  if (!r.assumptions.nash_nonempty) {
    r.eta_regime = EtaRegime::Divergent;
    add_violation(r, "Nash set is empty");
  }
  if (3.0 * e2 * mu_max >= 1.0 - 1e-12) {
    r.eta_regime = EtaRegime::Divergent;
    r.assumptions.eta_in_range = false;
    r.lambda_max = std::max(r.lambda_star, r.lambda_dstar);
    add_violation(r, "eta >= 1/sqrt(3 mu_max)");
    return r;
  }
  if (!r.assumptions.nash_nonempty) {
    r.lambda_max = std::max(r.lambda_star, r.lambda_dstar);
    return r;
  }

  if (4.0 * e2 * mu_max < 1.0 && !on_edge) {
    r.eta_regime = EtaRegime::Part2;
    r.lambda_dstar = 0.0;
    r.lambda_max = r.lambda_star;
    r.C = constant_below(mu_max, eta);
    return r;
  }
  r.lambda_max = std::max(r.lambda_star, r.lambda_dstar);
  if (on_edge) {
    r.eta_regime = EtaRegime::Part3b;
    return r;
  }
  r.eta_regime = EtaRegime::Part3a;
  double c_star = 0.0;
  double c_dstar = 0.0;
  for (double mu : sq.positive) {
    if (eta * std::sqrt(mu) < 0.5 && (!r.mu_star || mu > *r.mu_star)) r.mu_star = mu;
    if (eta * std::sqrt(mu) > 0.5 && (!r.mu_dstar || mu < *r.mu_dstar)) r.mu_dstar = mu;
  }
  if (mu_min < edge && r.mu_star) c_star = constant_below(*r.mu_star, eta);
  if (mu_max > edge && r.mu_dstar) c_dstar = constant_above(*r.mu_dstar, eta);
  r.C = std::max(c_star, c_dstar);
  return r;
}

bool square_invertible(const Matrix& m) {
  return m.rows() == m.cols() && !m.empty() && numerical_rank(m) == m.rows();
}

SpectralReport general_sum_report(const BilinearGame& game, double eta) {
  SpectralReport r;
  r.eta = eta;
  r.zero_sum = false;
  std::vector<Complex> raw = eig_values_raw(game.B.transpose() * game.A);
  const std::vector<Complex> other = eig_values_raw(game.A * game.B.transpose());
  raw.insert(raw.end(), other.begin(), other.end());
  double rho = 0.0;
  for (Complex z : raw) rho = std::max(rho, std::abs(z));
  for (Complex& z : raw)
    if (std::abs(z) <= 1e-12 * rho) z = 0.0;
  r.mu_set = ComplexScalarSet::cluster(raw, 1e-9 * std::max(1.0, rho)).values;
  r.mu_max = rho;
  r.assumptions.nash_nonempty = nash_set(game).nonempty;

  for (Complex mu : r.mu_set) {
    if (std::abs(mu.imag()) >= 1e-8 * (1.0 + std::abs(mu)) || mu.real() > 1e-10 * std::max(1.0, rho))
      r.assumptions.spectrum_real_nonpositive = false;
  }
  double mu_min = 0.0;
  for (Complex mu : r.mu_set) {
    const double m = -mu.real();
    if (m > 1e-12 * std::max(1.0, rho) && (mu_min == 0.0 || m < mu_min)) mu_min = m;
  }
  r.mu_min = mu_min;
  r.assumptions.eta_in_range = 4.0 * eta * eta * rho < 1.0;

  const bool invertible = square_invertible(game.A) && square_invertible(game.B);
  if (companion_matrix(game, eta).rows() <= 64) {
    r.diagonalizable = is_diagonalizable(companion_matrix(game, eta));
  } else {
    r.diagonalizable = Diagonalizable::Borderline;
  }
  r.assumptions.diagonalizable_or_invertible = invertible || r.diagonalizable == Diagonalizable::Yes;

  r.lambda_star = mu_min > 0.0 ? branch_rate(mu_min, eta) : 0.0;
  r.lambda_max = r.lambda_star;

  if (!r.assumptions.spectrum_real_nonpositive) add_violation(r, "S(A,B) is not contained in the non-positive reals");
  if (!r.assumptions.eta_in_range) add_violation(r, "eta >= 1/(2 sqrt(mu_max))");
  if (!r.assumptions.diagonalizable_or_invertible)
    add_violation(r, std::string("Lambda diagonalizable: ") + to_string(r.diagonalizable) + " and A, B not both square invertible");
  if (!r.assumptions.nash_nonempty) add_violation(r, "Nash set is empty");
  r.eta_regime = r.violated.empty() ? EtaRegime::Part2 : EtaRegime::Inapplicable;
  return r;
}

SpectralReport dogda_report(const BilinearGame& game, double eta) {
  SpectralReport r;
  r.algorithm = Algorithm::DOGDA;
  r.eta = eta;
  r.zero_sum = game.is_zero_sum();
  const SquaredSpectrum sa = squared_spectrum(game.A);
  const SquaredSpectrum sb = squared_spectrum(game.B);
  std::vector<double> all = sa.positive;
  all.insert(all.end(), sb.positive.begin(), sb.positive.end());
  std::sort(all.begin(), all.end(), std::greater<>());
  for (double mu : all)
    if (r.mu_set.empty() || std::abs(r.mu_set.back().real() - mu) > 1e-12 * all.front()) r.mu_set.emplace_back(mu);
  if (sa.has_zero || sb.has_zero) r.mu_set.emplace_back(0.0);
  r.assumptions.nash_nonempty = nash_set(game).nonempty;
  r.mu_max = all.empty() ? 0.0 : all.front();
  r.mu_min = all.empty() ? 0.0 : all.back();
  r.assumptions.eta_in_range = 4.0 * eta * eta * r.mu_max < 1.0;
  r.lambda_star = all.empty() ? 0.0 : branch_rate(r.mu_min, eta);
  r.lambda_max = r.lambda_star;
  r.C = constant_below(r.mu_max, eta);
  if (!r.assumptions.eta_in_range) add_violation(r, "eta >= 1/(2 sqrt(mu_max)) for A or B");
  if (!r.assumptions.nash_nonempty) add_violation(r, "Nash set is empty");
  if (!r.violated.empty()) r.C.reset();
  r.eta_regime = r.violated.empty() ? EtaRegime::Part2 : EtaRegime::Inapplicable;
  return r;
}

SpectralReport gda_report(const BilinearGame& game, double eta) {
  SpectralReport r;
  r.algorithm = Algorithm::GDA;
  r.eta = eta;
  r.zero_sum = game.is_zero_sum();
  const SquaredSpectrum sa = squared_spectrum(game.A);
  r.mu_max = sa.positive.empty() ? 0.0 : sa.positive.front();
  r.mu_min = sa.positive.empty() ? 0.0 : sa.positive.back();
  if (r.zero_sum && r.mu_max > 0.0) {
    // Eigenvalues 1 +- i eta sqrt(mu) lie outside the unit disk.
    r.eta_regime = EtaRegime::Divergent;
    r.lambda_max = std::sqrt(1.0 + eta * eta * r.mu_max);
    r.violated = "GDA on a zero-sum game with A != 0 diverges";
  } else {
    r.eta_regime = EtaRegime::Inapplicable;
    r.violated = "no rate theory for GDA on this game";
  }
  return r;
}

}  // namespace

SpectralReport rate_report(const BilinearGame& game, double eta, Algorithm algo) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw Error(ErrorKind::Config, "eta must be positive");
  SpectralReport r;
  switch (algo) {
    case Algorithm::GDA: return gda_report(game, eta);
    case Algorithm::DOGDA: return dogda_report(game, eta);
    case Algorithm::OGDA: r = game.is_zero_sum() ? zero_sum_report(game, eta) : general_sum_report(game, eta); break;
  }
  r.algorithm = algo;
  return r;
}

OptimalStep optimal_eta(double mu_min, double mu_max) {
  if (!(mu_min > 0.0) || !(mu_max >= mu_min) || !std::isfinite(mu_max))
    throw Error(ErrorKind::InvalidRatio, "need 0 < mu_min <= mu_max");
  const double a = mu_min / mu_max;
  // Rationalized: 3 + 6a - a^2 - (1-a) sqrt((1-a)(9-a)) = 64a / den.
  const double den = 3.0 + 6.0 * a - a * a + (1.0 - a) * std::sqrt((1.0 - a) * (9.0 - a));
  const double scaled_eta = std::sqrt(2.0 / den);
  const double lam = std::sqrt(0.5 * (1.0 + std::sqrt(clamp0(1.0 - 8.0 * a / den))));
  return {scaled_eta / std::sqrt(mu_max), lam};
}

Diagonalizable is_diagonalizable(const Matrix& L, double tol) {
  const std::vector<Complex> raw = eig_values_raw(L);
  double scale = 1.0;
  for (Complex z : raw) scale = std::max(scale, std::abs(z));
  const ComplexScalarSet set = ComplexScalarSet::cluster(raw, tol * scale);
  for (std::size_t i = 0; i < set.values.size(); ++i)
    for (std::size_t j = i + 1; j < set.values.size(); ++j)
      if (std::abs(set.values[i] - set.values[j]) <= 10.0 * tol * scale) return Diagonalizable::Borderline;
  std::size_t geometric = 0;
  for (std::size_t i = 0; i < set.values.size(); ++i)
    geometric += std::min<std::size_t>(static_cast<std::size_t>(set.multiplicity[i]),
                                       geometric_multiplicity(L, set.values[i], 1e-9));
  return geometric == L.rows() ? Diagonalizable::Yes : Diagonalizable::No;
}

}  // namespace saddle
