#include "saddle/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "saddle/errors.hpp"

namespace saddle {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_finite(const std::vector<double>& data) {
  for (double v : data) {
    if (!std::isfinite(v)) throw Error(ErrorKind::NonFinite, "matrix entry is not finite");
  }
}

void require_same_shape(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorKind::DimensionMismatch, "matrix shapes differ");
}

void require_same_size(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "vector sizes differ");
}

double resolve_rank_tol(double rank_tol, const Matrix& a) {
  return rank_tol < 0.0 ? default_rank_tol(a.rows(), a.cols()) : rank_tol;
}

}  // namespace

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NotComplementary: return "NotComplementary";
    case ErrorKind::NonPositiveScale: return "NonPositiveScale";
    case ErrorKind::InvalidRatio: return "InvalidRatio";
    case ErrorKind::EmptyNashSet: return "EmptyNashSet";
    case ErrorKind::ZeroMatrix: return "ZeroMatrix";
    case ErrorKind::DivergentRegime: return "DivergentRegime";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::RegimeWithoutConstant: return "RegimeWithoutConstant";
    case ErrorKind::Config: return "ConfigError";
  }
  return "Error";
}

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  if (!std::isfinite(fill)) throw Error(ErrorKind::NonFinite, "fill value is not finite");
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols)
    throw Error(ErrorKind::DimensionMismatch, "data length does not match rows * cols");
  require_finite(data_);
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const Vector& diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  require_finite(m.data_);
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) throw Error(ErrorKind::DimensionMismatch, "ragged rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Matrix(r, c, std::move(data));
}

Matrix Matrix::from_columns(std::size_t rows, const std::vector<Vector>& columns) {
  Matrix m(rows, columns.size());
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].size() != rows) throw Error(ErrorKind::DimensionMismatch, "column length");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
  }
  require_finite(m.data_);
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Vector Matrix::row(std::size_t i) const {
  return Vector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& block) {
  if (r0 + block.rows() > rows_ || c0 + block.cols() > cols_)
    throw Error(ErrorKind::DimensionMismatch, "block does not fit");
  for (std::size_t i = 0; i < block.rows(); ++i)
    for (std::size_t j = 0; j < block.cols(); ++j) (*this)(r0 + i, c0 + j) = block(i, j);
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "matrix product");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vector operator*(const Matrix& a, const Vector& v) {
  if (a.cols() != v.size()) throw Error(ErrorKind::DimensionMismatch, "matrix-vector product");
  Vector out(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b);
  Matrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) += b(i, j);
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b);
  Matrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) -= b(i, j);
  return c;
}

Matrix operator-(const Matrix& a) { return -1.0 * a; }

Matrix operator*(double s, const Matrix& a) {
  Matrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) *= s;
  return c;
}

Vector operator+(const Vector& a, const Vector& b) {
  require_same_size(a, b);
  Vector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

Vector operator-(const Vector& a, const Vector& b) {
  require_same_size(a, b);
  Vector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

Vector operator-(const Vector& a) { return -1.0 * a; }

Vector operator*(double s, const Vector& a) {
  Vector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = s * a[i];
  return c;
}

double dot(const Vector& a, const Vector& b) {
  require_same_size(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vector& a) {
  // Scaled to avoid overflow for blown-up iterates.
  double scale = 0.0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double s = 0.0;
  for (double v : a) s += (v / scale) * (v / scale);
  return scale * std::sqrt(s);
}

Vector concat(const Vector& a, const Vector& b) {
  Vector c = a;
  c.insert(c.end(), b.begin(), b.end());
  return c;
}

Vector slice(const Vector& v, std::size_t begin, std::size_t count) {
  if (begin + count > v.size()) throw Error(ErrorKind::DimensionMismatch, "slice out of range");
  return Vector(v.begin() + static_cast<std::ptrdiff_t>(begin),
                v.begin() + static_cast<std::ptrdiff_t>(begin + count));
}

bool all_finite(const Vector& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double default_rank_tol(std::size_t rows, std::size_t cols) {
  return static_cast<double>(std::max<std::size_t>({rows, cols, 1})) * kEps;
}

// ------------------------------------------------------ ComplexScalarSet

std::size_t ComplexScalarSet::total() const {
  return static_cast<std::size_t>(std::accumulate(multiplicity.begin(), multiplicity.end(), 0));
}

std::vector<Complex> ComplexScalarSet::expanded() const {
  std::vector<Complex> out;
  for (std::size_t i = 0; i < values.size(); ++i)
    out.insert(out.end(), static_cast<std::size_t>(multiplicity[i]), values[i]);
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

Complex ComplexScalarSet::product() const {
  Complex p = 1.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    for (int k = 0; k < multiplicity[i]; ++k) p *= values[i];
  return p;
}

ComplexScalarSet ComplexScalarSet::cluster(const std::vector<Complex>& raw, double tol) {
  const std::size_t n = raw.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(raw[i] - raw[j]) <= tol) parent[find(i)] = find(j);

  std::vector<std::size_t> roots;
  std::vector<Complex> sums;
  std::vector<int> counts;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = find(i);
    auto it = std::find(roots.begin(), roots.end(), r);
    if (it == roots.end()) {
      roots.push_back(r);
      sums.push_back(raw[i]);
      counts.push_back(1);
    } else {
      const auto k = static_cast<std::size_t>(it - roots.begin());
      sums[k] += raw[i];
      ++counts[k];
    }
  }
  ComplexScalarSet set;
  for (std::size_t k = 0; k < roots.size(); ++k) {
    Complex mean = sums[k] / static_cast<double>(counts[k]);
    if (std::abs(mean.imag()) <= tol) mean = Complex(mean.real(), 0.0);
    set.values.push_back(mean);
    set.multiplicity.push_back(counts[k]);
  }
  return set;
}

Matrix SubspaceBasis::as_matrix() const { return Matrix::from_columns(ambient_dim, vectors); }

// ---------------------------------------------------------- sym_eig

SymEig sym_eig(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::NotSymmetric, "matrix is not square");
  const std::size_t n = m.rows();
  const double scale = std::max(1.0, m.max_abs());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale)
        throw Error(ErrorKind::NotSymmetric, "matrix is not symmetric");

  Matrix a = m;
  Matrix v = Matrix::identity(n);
  const double fro = std::max(m.frobenius_norm(), std::numeric_limits<double>::min());
  bool converged = n < 2;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += 2.0 * a(i, j) * a(i, j);
    if (std::sqrt(off) <= tol * fro) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (!converged) throw Error(ErrorKind::NoConvergence, "Jacobi sweeps exhausted");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  SymEig out{Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

// ------------------------------------------------------- eig_complex

namespace {

// Householder reduction to upper Hessenberg form; entries below the first
// subdiagonal are cleared.
void to_hessenberg(std::vector<std::vector<double>>& h) {
  const int n = static_cast<int>(h.size());
  std::vector<double> ort(static_cast<std::size_t>(n), 0.0);
  const int high = n - 1;
  for (int m = 1; m <= high - 1; ++m) {
    double scale = 0.0;
    for (int i = m; i <= high; ++i) scale += std::abs(h[i][m - 1]);
    if (scale == 0.0) continue;
    double hh = 0.0;
    for (int i = high; i >= m; --i) {
      ort[i] = h[i][m - 1] / scale;
      hh += ort[i] * ort[i];
    }
    double g = std::sqrt(hh);
    if (ort[m] > 0) g = -g;
    hh -= ort[m] * g;
    ort[m] -= g;
    for (int j = m; j < n; ++j) {
      double f = 0.0;
      for (int i = high; i >= m; --i) f += ort[i] * h[i][j];
      f /= hh;
      for (int i = m; i <= high; ++i) h[i][j] -= f * ort[i];
    }
    for (int i = 0; i <= high; ++i) {
      double f = 0.0;
      for (int j = high; j >= m; --j) f += ort[j] * h[i][j];
      f /= hh;
      for (int j = m; j <= high; ++j) h[i][j] -= f * ort[j];
    }
    h[m][m - 1] = scale * g;
    for (int i = m + 1; i <= high; ++i) h[i][m - 1] = 0.0;
  }
}

// Francis double-shift QR on an upper Hessenberg matrix (eigenvalues only).
// Complex pairs come out as exact conjugates.
std::vector<Complex> hessenberg_qr(std::vector<std::vector<double>>& h) {
  const int nn = static_cast<int>(h.size());
  std::vector<double> d(static_cast<std::size_t>(nn), 0.0);
  std::vector<double> e(static_cast<std::size_t>(nn), 0.0);
  const int low = 0;
  int n = nn - 1;
  double exshift = 0.0;
  double p = 0, q = 0, r = 0, s = 0, z = 0, w, x, y;

  double norm = 0.0;
  for (int i = 0; i < nn; ++i)
    for (int j = std::max(i - 1, 0); j < nn; ++j) norm += std::abs(h[i][j]);

  int iter = 0;
  long total_iter = 0;
  const long max_iter = 30L * nn * nn;
  while (n >= low) {
    int l = n;
    while (l > low) {
      s = std::abs(h[l - 1][l - 1]) + std::abs(h[l][l]);
      if (s == 0.0) s = norm;
      if (std::abs(h[l][l - 1]) < kEps * s) break;
      --l;
    }
    if (l == n) {
      h[n][n] += exshift;
      d[n] = h[n][n];
      e[n] = 0.0;
      --n;
      iter = 0;
    } else if (l == n - 1) {
      w = h[n][n - 1] * h[n - 1][n];
      p = (h[n - 1][n - 1] - h[n][n]) / 2.0;
      q = p * p + w;
      z = std::sqrt(std::abs(q));
      h[n][n] += exshift;
      h[n - 1][n - 1] += exshift;
      x = h[n][n];
      if (q >= 0) {
        z = p >= 0 ? p + z : p - z;
        d[n - 1] = x + z;
        d[n] = d[n - 1];
        if (z != 0.0) d[n] = x - w / z;
        e[n - 1] = 0.0;
        e[n] = 0.0;
      } else {
        d[n - 1] = x + p;
        d[n] = x + p;
        e[n - 1] = z;
        e[n] = -z;
      }
      n -= 2;
      iter = 0;
    } else {
      if (++total_iter > max_iter) throw Error(ErrorKind::NoConvergence, "QR iteration cap reached");
      x = h[n][n];
      y = 0.0;
      w = 0.0;
      if (l < n) {
        y = h[n - 1][n - 1];
        w = h[n][n - 1] * h[n - 1][n];
      }
      if (iter == 10) {
        exshift += x;
        for (int i = low; i <= n; ++i) h[i][i] -= x;
        s = std::abs(h[n][n - 1]) + std::abs(h[n - 1][n - 2]);
        x = y = 0.75 * s;
        w = -0.4375 * s * s;
      }
      if (iter == 30) {
        s = (y - x) / 2.0;
        s = s * s + w;
        if (s > 0) {
          s = std::sqrt(s);
          if (y < x) s = -s;
          s = x - w / ((y - x) / 2.0 + s);
          for (int i = low; i <= n; ++i) h[i][i] -= s;
          exshift += s;
          x = y = w = 0.964;
        }
      }
      ++iter;

      int m = n - 2;
      while (m >= l) {
        z = h[m][m];
        r = x - z;
        s = y - z;
        p = (r * s - w) / h[m + 1][m] + h[m][m + 1];
        q = h[m + 1][m + 1] - z - r - s;
        r = h[m + 2][m + 1];
        s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (m == l) break;
        if (std::abs(h[m][m - 1]) * (std::abs(q) + std::abs(r)) <
            kEps * (std::abs(p) * (std::abs(h[m - 1][m - 1]) + std::abs(z) + std::abs(h[m + 1][m + 1]))))
          break;
        --m;
      }
      for (int i = m + 2; i <= n; ++i) {
        h[i][i - 2] = 0.0;
        if (i > m + 2) h[i][i - 3] = 0.0;
      }
      for (int k = m; k <= n - 1; ++k) {
        const bool notlast = k != n - 1;
        if (k != m) {
          p = h[k][k - 1];
          q = h[k + 1][k - 1];
          r = notlast ? h[k + 2][k - 1] : 0.0;
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x == 0.0) continue;
          p /= x;
          q /= x;
          r /= x;
        }
        s = std::sqrt(p * p + q * q + r * r);
        if (p < 0) s = -s;
        if (s == 0.0) continue;
        if (k != m)
          h[k][k - 1] = -s * x;
        else if (l != m)
          h[k][k - 1] = -h[k][k - 1];
        p += s;
        x = p / s;
        y = q / s;
        z = r / s;
        q /= p;
        r /= p;
        for (int j = k; j < nn; ++j) {
          p = h[k][j] + q * h[k + 1][j];
          if (notlast) {
            p += r * h[k + 2][j];
            h[k + 2][j] -= p * z;
          }
          h[k][j] -= p * x;
          h[k + 1][j] -= p * y;
        }
        for (int i = 0; i <= std::min(n, k + 3); ++i) {
          p = x * h[i][k] + y * h[i][k + 1];
          if (notlast) {
            p += z * h[i][k + 2];
            h[i][k + 2] -= p * r;
          }
          h[i][k] -= p;
          h[i][k + 1] -= p * q;
        }
      }
    }
  }
  std::vector<Complex> out(static_cast<std::size_t>(nn));
  for (int i = 0; i < nn; ++i) out[i] = Complex(d[i], e[i]);
  return out;
}

}  // namespace

std::vector<Complex> eig_values_raw(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::DimensionMismatch, "matrix is not square");
  if (m.rows() > 64) throw Error(ErrorKind::DimensionTooLarge, "eig_complex supports n <= 64");
  const std::size_t n = m.rows();
  if (n == 0) return {};
  std::vector<std::vector<double>> h(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h[i][j] = m(i, j);
  to_hessenberg(h);
  return hessenberg_qr(h);
}

ComplexScalarSet eig_complex(const Matrix& m, double cluster_tol) {
  const std::vector<Complex> raw = eig_values_raw(m);
  double scale = 1.0;
  for (Complex z : raw) scale = std::max(scale, std::abs(z));
  return ComplexScalarSet::cluster(raw, cluster_tol * scale);
}

// --------------------------------------------------------------- SVD

Svd svd_jacobi(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Matrix w = a;
  Matrix v = Matrix::identity(n);
  bool converged = n < 2;
  // Columns below this squared norm are numerically zero; rotating them only churns rounding noise.
  const double negligible = std::pow(kEps * a.frobenius_norm(), 2);
  const double ortho_tol = kEps * static_cast<double>(std::max<std::size_t>(m, 4));
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          alpha += w(k, i) * w(k, i);
          beta += w(k, j) * w(k, j);
          gamma += w(k, i) * w(k, j);
        }
        if (gamma == 0.0 || alpha <= negligible || beta <= negligible ||
            std::abs(gamma) <= ortho_tol * std::sqrt(alpha * beta))
          continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < m; ++k) {
          const double wi = w(k, i);
          const double wj = w(k, j);
          w(k, i) = c * wi - s * wj;
          w(k, j) = s * wi + c * wj;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vi = v(k, i);
          const double vj = v(k, j);
          v(k, i) = c * vi - s * vj;
          v(k, j) = s * vi + c * vj;
        }
      }
    }
    converged = !rotated;
  }
  if (!converged) throw Error(ErrorKind::NoConvergence, "one-sided Jacobi sweeps exhausted");

  Vector sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm(w.column(j));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  Svd out{Matrix(m, n), Vector(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.sigma[k] = sigma[j];
    for (std::size_t i = 0; i < n; ++i) out.v(i, k) = v(i, j);
    if (sigma[j] > 0.0)
      for (std::size_t i = 0; i < m; ++i) out.u(i, k) = w(i, j) / sigma[j];
  }
  return out;
}

Vector singular_values(const Matrix& a) { return svd_jacobi(a).sigma; }

std::size_t numerical_rank(const Matrix& a, double rank_tol) {
  if (a.empty()) return 0;
  const Vector s = singular_values(a);
  const double thr = resolve_rank_tol(rank_tol, a) * s.front();
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [&](double x) { return x > thr && x > 0.0; }));
}

Matrix pinv(const Matrix& a, double rank_tol) {
  Matrix out(a.cols(), a.rows());
  if (a.empty()) return out;
  const Svd d = svd_jacobi(a);
  const double thr = resolve_rank_tol(rank_tol, a) * d.sigma.front();
  for (std::size_t k = 0; k < d.sigma.size(); ++k) {
    if (!(d.sigma[k] > thr) || d.sigma[k] == 0.0) break;
    const double inv = 1.0 / d.sigma[k];
    for (std::size_t i = 0; i < a.cols(); ++i)
      for (std::size_t j = 0; j < a.rows(); ++j) out(i, j) += d.v(i, k) * inv * d.u(j, k);
  }
  return out;
}

namespace {

// Modified Gram-Schmidt with one reorthogonalization pass.
std::vector<Vector> orthonormalize(std::vector<Vector> vs) {
  std::vector<Vector> out;
  for (Vector& v : vs) {
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& q : out) {
        const double c = dot(q, v);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
      }
    const double nv = norm(v);
    if (nv > 0.0) out.push_back((1.0 / nv) * v);
  }
  return out;
}

}  // namespace

SubspaceBasis kernel_basis(const Matrix& a, double rank_tol) {
  SubspaceBasis basis{a.cols(), {}};
  if (a.cols() == 0) return basis;
  if (a.rows() == 0 || a.is_zero()) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      Vector e(a.cols(), 0.0);
      e[j] = 1.0;
      basis.vectors.push_back(e);
    }
    return basis;
  }
  const Svd d = svd_jacobi(a);
  const double thr = resolve_rank_tol(rank_tol, a) * d.sigma.front();
  std::vector<Vector> null;
  for (std::size_t k = 0; k < d.sigma.size(); ++k)
    if (!(d.sigma[k] > thr)) null.push_back(d.v.column(k));
  basis.vectors = orthonormalize(std::move(null));
  return basis;
}

SubspaceBasis image_basis(const Matrix& a, double rank_tol) {
  SubspaceBasis basis{a.rows(), {}};
  if (a.empty() || a.is_zero()) return basis;
  const Svd d = svd_jacobi(a);
  const double thr = resolve_rank_tol(rank_tol, a) * d.sigma.front();
  std::vector<Vector> cols;
  for (std::size_t k = 0; k < d.sigma.size(); ++k)
    if (d.sigma[k] > thr) cols.push_back(d.u.column(k));
  basis.vectors = orthonormalize(std::move(cols));
  return basis;
}

Vector project(const Vector& v, const SubspaceBasis& onto, const std::optional<SubspaceBasis>& along) {
  const std::size_t n = v.size();
  if (onto.ambient_dim != n) throw Error(ErrorKind::DimensionMismatch, "projection target dimension");
  if (!along) {
    Vector out(n, 0.0);
    for (const Vector& q : onto.vectors) {
      const double c = dot(q, v);
      for (std::size_t i = 0; i < n; ++i) out[i] += c * q[i];
    }
    return out;
  }
  if (along->ambient_dim != n) throw Error(ErrorKind::DimensionMismatch, "projection direction dimension");
  if (onto.dim() + along->dim() != n)
    throw Error(ErrorKind::NotComplementary, "dimensions do not add up to the ambient dimension");
  if (onto.dim() == 0) return Vector(n, 0.0);
  if (along->dim() == 0) return v;
  std::vector<Vector> cols = onto.vectors;
  cols.insert(cols.end(), along->vectors.begin(), along->vectors.end());
  const Matrix stacked = Matrix::from_columns(n, cols);
  const Vector s = singular_values(stacked);
  if (!(s.back() > 1e-8)) throw Error(ErrorKind::NotComplementary, "subspaces intersect");
  const Vector coeff = lu_solve(stacked, v);
  Vector out(n, 0.0);
  for (std::size_t k = 0; k < onto.dim(); ++k)
    for (std::size_t i = 0; i < n; ++i) out[i] += coeff[k] * onto.vectors[k][i];
  return out;
}

namespace {

// In-place LU with partial pivoting; returns the permutation sign.
int lu_factor(Matrix& a, std::vector<std::size_t>& piv) {
  const std::size_t n = a.rows();
  piv.resize(n);
  std::iota(piv.begin(), piv.end(), 0);
  int sign = 1;
  const double tiny = kEps * std::max(1.0, a.max_abs());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(best, k))) best = i;
    if (best != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(best, j));
      std::swap(piv[k], piv[best]);
      sign = -sign;
    }
    if (a(k, k) == 0.0) a(k, k) = tiny;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      a(i, k) = f;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return sign;
}

}  // namespace

Vector lu_solve(Matrix a, Vector b) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw Error(ErrorKind::DimensionMismatch, "lu_solve shapes");
  const std::size_t n = a.rows();
  std::vector<std::size_t> piv;
  lu_factor(a, piv);
  Vector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[piv[i]];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) x[i] -= a(i, j) * x[j];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) x[i] -= a(i, j) * x[j];
    x[i] /= a(i, i);
  }
  return x;
}

double determinant(Matrix a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::DimensionMismatch, "determinant of non-square matrix");
  if (a.rows() == 0) return 1.0;
  // An exactly singular matrix must report 0, so bypass the pivot guard.
  const std::size_t n = a.rows();
  int sign = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t best = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(best, k))) best = i;
    if (a(best, k) == 0.0) return 0.0;
    if (best != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(best, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  double det = sign;
  for (std::size_t k = 0; k < n; ++k) det *= a(k, k);
  return det;
}

std::size_t geometric_multiplicity(const Matrix& m, Complex lambda, double rel_tol) {
  const std::size_t n = m.rows();
  Matrix e(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const double x = m(i, j) - (i == j ? lambda.real() : 0.0);
      e(i, j) = x;
      e(n + i, n + j) = x;
    }
  for (std::size_t i = 0; i < n; ++i) {
    e(i, n + i) = lambda.imag();
    e(n + i, i) = -lambda.imag();
  }
  const Vector s = singular_values(e);
  const double thr = rel_tol * std::max(s.front(), std::numeric_limits<double>::min());
  const auto rank = static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [&](double x) { return x > thr; }));
  return (2 * n - rank) / 2;
}

}  // namespace saddle
