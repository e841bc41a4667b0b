#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <vector>

namespace saddle {

using Vector = std::vector<double>;
using Complex = std::complex<double>;

/// Dense row-major real matrix. Entries are finite at construction.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(const Vector& diag);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  /// Matrix whose columns are the given vectors, all of length `rows`.
  static Matrix from_columns(std::size_t rows, const std::vector<Vector>& columns);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const { return data_; }

  Vector column(std::size_t j) const;
  Vector row(std::size_t i) const;
  Matrix transpose() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool is_zero() const;

  /// Copies `block` into this matrix with its top-left corner at (r0, c0).
  void set_block(std::size_t r0, std::size_t c0, const Matrix& block);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& v);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a);
Matrix operator*(double s, const Matrix& a);

Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator-(const Vector& a);
Vector operator*(double s, const Vector& a);

double dot(const Vector& a, const Vector& b);
double norm(const Vector& a);
Vector concat(const Vector& a, const Vector& b);
Vector slice(const Vector& v, std::size_t begin, std::size_t count);
bool all_finite(const Vector& v);

/// Default rank tolerance: max(rows, cols) * machine epsilon.
double default_rank_tol(std::size_t rows, std::size_t cols);

/// Finite multiset of complex numbers: distinct values (pairwise farther apart
/// than the clustering tolerance) with algebraic multiplicities.
struct ComplexScalarSet {
  std::vector<Complex> values;
  std::vector<int> multiplicity;

  std::size_t total() const;
  /// Values repeated by multiplicity, sorted by (real, imag).
  std::vector<Complex> expanded() const;
  Complex product() const;
  /// Groups raw values into clusters by single linkage within `tol`; each
  /// cluster is represented by its mean. Near-real means are snapped to real.
  static ComplexScalarSet cluster(const std::vector<Complex>& raw, double tol);
};

/// Orthonormal basis of a subspace of R^ambient_dim, one vector per entry.
struct SubspaceBasis {
  std::size_t ambient_dim = 0;
  std::vector<Vector> vectors;

  std::size_t dim() const { return vectors.size(); }
  Matrix as_matrix() const;
};

struct SymEig {
  Vector values;  // descending
  Matrix vectors; // column i belongs to values[i]
};

/// Cyclic Jacobi eigensolver for symmetric matrices.
SymEig sym_eig(const Matrix& m, double tol = 1e-14);

/// Eigenvalues of a general real matrix via Hessenberg reduction and
/// Francis double-shift QR, clustered within `cluster_tol` (relative to
/// max(1, largest modulus)). Dimension is capped at 64.
ComplexScalarSet eig_complex(const Matrix& m, double cluster_tol = 1e-8);

/// Raw eigenvalues from the QR iteration, one entry per algebraic root.
std::vector<Complex> eig_values_raw(const Matrix& m);

/// A = U diag(sigma) V^T from one-sided Jacobi. U is rows x cols (columns
/// with zero singular value are zero), V is cols x cols orthogonal.
struct Svd {
  Matrix u;
  Vector sigma;
  Matrix v;
};

Svd svd_jacobi(const Matrix& a);

/// Singular values in descending order.
Vector singular_values(const Matrix& a);

/// Moore-Penrose pseudoinverse; singular values below rank_tol * sigma_max
/// are treated as zero. A negative rank_tol selects the default.
Matrix pinv(const Matrix& a, double rank_tol = -1.0);

std::size_t numerical_rank(const Matrix& a, double rank_tol = -1.0);

/// Orthonormal basis of Ker(A), consistent with pinv's rank decision.
SubspaceBasis kernel_basis(const Matrix& a, double rank_tol = -1.0);

/// Orthonormal basis of Im(A).
SubspaceBasis image_basis(const Matrix& a, double rank_tol = -1.0);

/// Orthogonal projection onto `onto`, or oblique projection onto `onto`
/// along `along` when given. The oblique case requires the two subspaces to
/// be complementary, i.e. the stacked basis has smallest singular value
/// above 1e-8.
Vector project(const Vector& v, const SubspaceBasis& onto,
               const std::optional<SubspaceBasis>& along = std::nullopt);

/// Solves a square system by LU with partial pivoting; no singularity check
/// beyond replacing exact zero pivots, so it doubles as an inverse-iteration
/// solver.
Vector lu_solve(Matrix a, Vector b);

double determinant(Matrix a);

/// Geometric multiplicity of `lambda` as an eigenvalue of `m`: the nullity
/// of m - lambda I computed on its real 2n x 2n embedding.
std::size_t geometric_multiplicity(const Matrix& m, Complex lambda, double rel_tol);

}  // namespace saddle
