#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "liecf/errors.hpp"

namespace liecf {

using cxd = std::complex<double>;

/// Scalar field tag of a Matrix. Real matrices are stored in complex
/// storage with zero imaginary parts; arithmetic on such entries is
/// bit-identical to pure double arithmetic, so the tag is semantic only.
enum class Field { Real, Complex };

/// Small dense row-major matrix over real or complex scalars.
///
/// Everything in this library is at most a handful of rows/columns
/// (states live in R^3, R^5, C^3, ...), so the representation favours
/// clarity and determinism over scale: plain contiguous storage, no
/// sparsity, fixed evaluation order in every kernel.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0), field_(Field::Real) {}

  static Matrix zeros(int rows, int cols, Field field = Field::Real);
  static Matrix identity(int n, Field field = Field::Real);
  /// Row-major real entries; size must be rows*cols.
  static Matrix from_real(int rows, int cols, std::initializer_list<double> entries);
  static Matrix from_real(int rows, int cols, const std::vector<double>& entries);
  /// Row-major complex entries; size must be rows*cols.
  static Matrix from_complex(int rows, int cols, const std::vector<cxd>& entries);
  /// Column vector in R^3 (convenience for the Lie-algebra helpers).
  static Matrix column3(double x, double y, double z);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_real() const { return field_ == Field::Real; }
  Field field() const { return field_; }

  cxd operator()(int i, int j) const { return e_[static_cast<std::size_t>(i) * cols_ + j]; }
  /// Real part accessor for real-tagged matrices.
  double re(int i, int j) const { return operator()(i, j).real(); }
  void set(int i, int j, cxd v) { e_[static_cast<std::size_t>(i) * cols_ + j] = v; }
  void set(int i, int j, double v) { set(i, j, cxd(v, 0.0)); }

  Matrix transpose() const;
  Matrix conj_transpose() const;
  cxd trace() const;
  /// Determinant by LU factorization (any square size).
  cxd det() const;
  bool all_finite() const;

  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a);
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator*(double s, const Matrix& a);
  friend Matrix operator*(cxd s, const Matrix& a);

 private:
  int rows_, cols_;
  Field field_;
  std::vector<cxd> e_;
};

/// Matrix product (same as operator*). Shapes must chain; the result is
/// real only when both factors are real.
Matrix mat_mul(const Matrix& a, const Matrix& b);

/// Matrix exponential by scaling-and-squaring with a degree-6 diagonal
/// Pade approximant; the input is halved until its norm is <= 0.5.
/// exp(0) = I exactly. Every call increments the global expm counter.
Matrix expm(const Matrix& m);

/// Number of expm calls made by this process (monotone; thread-safe).
std::uint64_t expm_call_count();

/// Skew-symmetric 3x3 matrix of a 3-vector v (given as a 3x1 column):
/// hat(v)*w = v x w, with entries (1,2) = -v3, (1,3) = v2, (2,3) = -v1.
Matrix hat(const Matrix& v);

/// Lie bracket [u, v] = u*v - v*u for square same-shape matrices.
Matrix commutator(const Matrix& u, const Matrix& v);

/// Spectral norm (largest singular value) for matrices; Euclidean norm
/// for row/column vectors. Computed from the eigenvalues of the Gram
/// matrix via cyclic Jacobi iterations -- deterministic, no randomness.
double norm2(const Matrix& m);

/// Orthonormalize the columns of a square real matrix (modified
/// Gram-Schmidt). The implicit R has positive diagonal, which fixes the
/// column signs. Throws DegeneracyError when a pivot falls below
/// 1e-12 * norm2(m).
Matrix gram_schmidt_orthonormalize(const Matrix& m);

}  // namespace liecf
