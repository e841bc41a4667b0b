#pragma once

// Independent reference computations backed by Eigen, used only in tests.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <limits>
#include <vector>

#include "saddle/linalg.hpp"

namespace oracle {

inline Eigen::MatrixXd to_eigen(const saddle::Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

inline std::vector<std::complex<double>> eigenvalues(const saddle::Matrix& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(m), false);
  std::vector<std::complex<double>> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

inline std::vector<double> singular_values(const saddle::Matrix& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m));
  std::vector<double> out(svd.singularValues().data(), svd.singularValues().data() + svd.singularValues().size());
  return out;
}

/// Max distance of a bottleneck-style greedy matching: each reference value
/// takes its nearest unused partner. Infinity on size mismatch.
inline double multiset_distance(std::vector<std::complex<double>> a, std::vector<std::complex<double>> ref) {
  if (a.size() != ref.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(a.size(), false);
  double worst = 0.0;
  for (const auto& r : ref) {
    std::size_t best = a.size();
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!used[i] && (best == a.size() || std::abs(a[i] - r) < std::abs(a[best] - r))) best = i;
    used[best] = true;
    worst = std::max(worst, std::abs(a[best] - r));
  }
  return worst;
}

/// Largest eigenvalue modulus of m excluding values within tol of 1.
inline double max_modulus_excluding_one(const saddle::Matrix& m, double tol = 1e-6) {
  double r = 0.0;
  for (const auto& z : eigenvalues(m))
    if (std::abs(z - 1.0) > tol) r = std::max(r, std::abs(z));
  return r;
}

}  // namespace oracle
