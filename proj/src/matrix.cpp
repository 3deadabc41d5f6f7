#include "liecf/matrix.hpp"

#include <atomic>
#include <cmath>
#include <limits>

namespace liecf {

namespace {

std::atomic<std::uint64_t> g_expm_calls{0};

Field join(Field a, Field b) {
  return (a == Field::Real && b == Field::Real) ? Field::Real : Field::Complex;
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(op) + ": operands are " + std::to_string(a.rows()) + "x" +
                     std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()));
  }
}

void require_square(const Matrix& m, const char* op) {
  if (m.rows() != m.cols()) {
    throw ShapeError(std::string(op) + ": matrix is " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + ", not square");
  }
}

/// Max row sum of entry magnitudes (induced infinity norm). Cheap and
/// deterministic; used only to pick the expm scaling exponent.
double norm_inf(const Matrix& m) {
  double worst = 0.0;
  for (int i = 0; i < m.rows(); ++i) {
    double row = 0.0;
    for (int j = 0; j < m.cols(); ++j) row += std::abs(m(i, j));
    if (row > worst) worst = row;
  }
  return worst;
}

/// Solve A*X = B by LU with partial pivoting (in-place copies).
Matrix lu_solve(Matrix a, Matrix b) {
  const int n = a.rows();
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double cand = std::abs(a(i, k));
      if (cand > best) {
        best = cand;
        piv = i;
      }
    }
    if (best == 0.0) throw DegeneracyError("lu_solve: singular matrix");
    if (piv != k) {
      for (int j = 0; j < n; ++j) {
        const cxd tmp = a(k, j);
        a.set(k, j, a(piv, j));
        a.set(piv, j, tmp);
      }
      for (int j = 0; j < b.cols(); ++j) {
        const cxd tmp = b(k, j);
        b.set(k, j, b(piv, j));
        b.set(piv, j, tmp);
      }
    }
    for (int i = k + 1; i < n; ++i) {
      const cxd f = a(i, k) / a(k, k);
      a.set(i, k, f);
      for (int j = k + 1; j < n; ++j) a.set(i, j, a(i, j) - f * a(k, j));
      for (int j = 0; j < b.cols(); ++j) b.set(i, j, b(i, j) - f * b(k, j));
    }
  }
  // Back substitution, column by column of B.
  for (int j = 0; j < b.cols(); ++j) {
    for (int i = n - 1; i >= 0; --i) {
      cxd acc = b(i, j);
      for (int k = i + 1; k < n; ++k) acc -= a(i, k) * b(k, j);
      b.set(i, j, acc / a(i, i));
    }
  }
  return b;
}

}  // namespace

Matrix Matrix::zeros(int rows, int cols, Field field) {
  if (rows < 0 || cols < 0) throw ShapeError("zeros: negative dimension");
  Matrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.field_ = field;
  m.e_.assign(static_cast<std::size_t>(rows) * cols, cxd(0.0, 0.0));
  return m;
}

Matrix Matrix::identity(int n, Field field) {
  Matrix m = zeros(n, n, field);
  for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

Matrix Matrix::from_real(int rows, int cols, std::initializer_list<double> entries) {
  return from_real(rows, cols, std::vector<double>(entries));
}

Matrix Matrix::from_real(int rows, int cols, const std::vector<double>& entries) {
  if (static_cast<std::size_t>(rows) * cols != entries.size()) {
    throw ShapeError("from_real: entry count does not match dimensions");
  }
  Matrix m = zeros(rows, cols, Field::Real);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!std::isfinite(entries[i])) throw DomainError("from_real: non-finite entry");
    m.e_[i] = cxd(entries[i], 0.0);
  }
  return m;
}

Matrix Matrix::from_complex(int rows, int cols, const std::vector<cxd>& entries) {
  if (static_cast<std::size_t>(rows) * cols != entries.size()) {
    throw ShapeError("from_complex: entry count does not match dimensions");
  }
  Matrix m = zeros(rows, cols, Field::Complex);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!std::isfinite(entries[i].real()) || !std::isfinite(entries[i].imag())) {
      throw DomainError("from_complex: non-finite entry");
    }
    m.e_[i] = entries[i];
  }
  return m;
}

Matrix Matrix::column3(double x, double y, double z) { return from_real(3, 1, {x, y, z}); }

Matrix Matrix::transpose() const {
  Matrix out = zeros(cols_, rows_, field_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.set(j, i, (*this)(i, j));
  return out;
}

Matrix Matrix::conj_transpose() const {
  Matrix out = zeros(cols_, rows_, field_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.set(j, i, std::conj((*this)(i, j)));
  return out;
}

cxd Matrix::trace() const {
  require_square(*this, "trace");
  cxd acc(0.0, 0.0);
  for (int i = 0; i < rows_; ++i) acc += (*this)(i, i);
  return acc;
}

cxd Matrix::det() const {
  require_square(*this, "det");
  Matrix a = *this;
  const int n = rows_;
  cxd d(1.0, 0.0);
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      const double cand = std::abs(a(i, k));
      if (cand > best) {
        best = cand;
        piv = i;
      }
    }
    if (best == 0.0) return cxd(0.0, 0.0);
    if (piv != k) {
      d = -d;
      for (int j = 0; j < n; ++j) {
        const cxd tmp = a(k, j);
        a.set(k, j, a(piv, j));
        a.set(piv, j, tmp);
      }
    }
    d *= a(k, k);
    for (int i = k + 1; i < n; ++i) {
      const cxd f = a(i, k) / a(k, k);
      for (int j = k + 1; j < n; ++j) a.set(i, j, a(i, j) - f * a(k, j));
    }
  }
  return d;
}

bool Matrix::all_finite() const {
  for (const cxd& z : e_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "operator+");
  Matrix out = Matrix::zeros(a.rows_, a.cols_, join(a.field_, b.field_));
  for (std::size_t i = 0; i < a.e_.size(); ++i) out.e_[i] = a.e_[i] + b.e_[i];
  return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "operator-");
  Matrix out = Matrix::zeros(a.rows_, a.cols_, join(a.field_, b.field_));
  for (std::size_t i = 0; i < a.e_.size(); ++i) out.e_[i] = a.e_[i] - b.e_[i];
  return out;
}

Matrix operator-(const Matrix& a) {
  Matrix out = Matrix::zeros(a.rows_, a.cols_, a.field_);
  for (std::size_t i = 0; i < a.e_.size(); ++i) out.e_[i] = -a.e_[i];
  return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) {
    throw ShapeError("mat_mul: inner dimensions " + std::to_string(a.cols_) + " and " +
                     std::to_string(b.rows_) + " differ");
  }
  Matrix out = Matrix::zeros(a.rows_, b.cols_, join(a.field_, b.field_));
  for (int i = 0; i < a.rows_; ++i) {
    for (int j = 0; j < b.cols_; ++j) {
      cxd acc(0.0, 0.0);
      for (int k = 0; k < a.cols_; ++k) acc += a(i, k) * b(k, j);
      out.set(i, j, acc);
    }
  }
  return out;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix out = Matrix::zeros(a.rows_, a.cols_, a.field_);
  for (std::size_t i = 0; i < a.e_.size(); ++i) out.e_[i] = s * a.e_[i];
  return out;
}

Matrix operator*(cxd s, const Matrix& a) {
  Matrix out = Matrix::zeros(a.rows_, a.cols_, Field::Complex);
  for (std::size_t i = 0; i < a.e_.size(); ++i) out.e_[i] = s * a.e_[i];
  return out;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) { return a * b; }

Matrix expm(const Matrix& m) {
  require_square(m, "expm");
  g_expm_calls.fetch_add(1, std::memory_order_relaxed);
  const int n = m.rows();

  // Degree-6 diagonal Pade coefficients of exp: N(A) = sum c_k A^k,
  // D(A) = N(-A), exp(A) ~ D(A)^{-1} N(A), accurate to ~1e-17 relative
  // for ||A|| <= 0.5.
  static const double kPade6[7] = {1.0,       1.0 / 2.0,     5.0 / 44.0, 1.0 / 66.0,
                                   1.0 / 792.0, 1.0 / 15840.0, 1.0 / 665280.0};

  const double nrm = norm_inf(m);
  if (!std::isfinite(nrm) || nrm > 1e100) {
    // A state this large is a divergence in progress; return NaNs so the
    // caller's finiteness check fires instead of spending 300 squarings.
    Matrix bad = Matrix::zeros(n, n, m.field());
    const double qnan = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) bad.set(i, j, cxd(qnan, qnan));
    return bad;
  }

  int s = 0;
  if (nrm > 0.5) {
    s = static_cast<int>(std::ceil(std::log2(nrm * 2.0)));
    while (std::ldexp(nrm, -s) > 0.5) ++s;  // guard against log2 rounding
  }

  const Matrix a = std::ldexp(1.0, -s) * m;
  Matrix p = Matrix::identity(n, m.field());
  Matrix num = kPade6[0] * p;
  Matrix den = kPade6[0] * p;
  for (int k = 1; k <= 6; ++k) {
    p = p * a;
    num = num + kPade6[k] * p;
    den = (k % 2 == 1) ? den - kPade6[k] * p : den + kPade6[k] * p;
  }
  Matrix f = lu_solve(den, num);
  for (int i = 0; i < s; ++i) f = f * f;
  return f;
}

std::uint64_t expm_call_count() { return g_expm_calls.load(std::memory_order_relaxed); }

Matrix hat(const Matrix& v) {
  if (!(v.rows() == 3 && v.cols() == 1) || !v.is_real()) {
    throw ShapeError("hat: expects a real 3x1 column vector");
  }
  const double v1 = v.re(0, 0), v2 = v.re(1, 0), v3 = v.re(2, 0);
  return Matrix::from_real(3, 3, {0.0, -v3, v2, v3, 0.0, -v1, -v2, v1, 0.0});
}

Matrix commutator(const Matrix& u, const Matrix& v) {
  require_square(u, "commutator");
  require_same_shape(u, v, "commutator");
  return u * v - v * u;
}

double norm2(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) {
    double acc = 0.0;
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) acc += std::norm(m(i, j));
    return std::sqrt(acc);
  }

  // Largest singular value of M = sqrt of the largest eigenvalue of the
  // Hermitian positive semi-definite Gram matrix H = M^dagger M, computed
  // by cyclic Jacobi rotations. For a 2x2 pivot [[alpha, z],[conj(z),
  // beta]] with z = |z| e^{i phi}, the unitary [[c, s e^{i phi}],
  // [-s e^{-i phi}, c]] with tan(2 theta) = 2|z|/(beta - alpha)
  // annihilates the off-diagonal pair.
  Matrix h = m.conj_transpose() * m;
  const int k = h.rows();
  for (int sweep = 0; sweep < 60; ++sweep) {
    double off = 0.0;
    double diag = 0.0;
    for (int i = 0; i < k; ++i) {
      diag = std::max(diag, std::abs(h(i, i).real()));
      for (int j = i + 1; j < k; ++j) off = std::max(off, std::abs(h(i, j)));
    }
    if (off <= 1e-15 * std::max(diag, std::numeric_limits<double>::min())) break;
    for (int p = 0; p < k; ++p) {
      for (int q = p + 1; q < k; ++q) {
        const cxd z = h(p, q);
        const double r = std::abs(z);
        if (r < 1e-300) continue;
        const cxd phase = z / r;
        const double tau = (h(q, q).real() - h(p, p).real()) / (2.0 * r);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = t * c;
        Matrix j = Matrix::identity(k, Field::Complex);
        j.set(p, p, cxd(c, 0.0));
        j.set(p, q, sn * phase);
        j.set(q, p, -sn * std::conj(phase));
        j.set(q, q, cxd(c, 0.0));
        h = j.conj_transpose() * h * j;
      }
    }
  }
  double lam = 0.0;
  for (int i = 0; i < k; ++i) lam = std::max(lam, h(i, i).real());
  return std::sqrt(std::max(lam, 0.0));
}

Matrix gram_schmidt_orthonormalize(const Matrix& m) {
  if (m.rows() != m.cols() || !m.is_real()) {
    throw ShapeError("gram_schmidt_orthonormalize: expects a square real matrix");
  }
  const int n = m.rows();
  const double scale = norm2(m);
  Matrix q = Matrix::zeros(n, n, Field::Real);
  std::vector<double> v(n);
  for (int col = 0; col < n; ++col) {
    for (int i = 0; i < n; ++i) v[i] = m.re(i, col);
    // Modified Gram-Schmidt: project out each earlier column from the
    // running remainder, not from the original column.
    for (int prev = 0; prev < col; ++prev) {
      double dot = 0.0;
      for (int i = 0; i < n; ++i) dot += q.re(i, prev) * v[i];
      for (int i = 0; i < n; ++i) v[i] -= dot * q.re(i, prev);
    }
    double nrm = 0.0;
    for (int i = 0; i < n; ++i) nrm += v[i] * v[i];
    nrm = std::sqrt(nrm);
    if (nrm < 1e-12 * scale) {
      throw DegeneracyError("gram_schmidt_orthonormalize: rank-deficient at column " +
                            std::to_string(col + 1));
    }
    for (int i = 0; i < n; ++i) q.set(i, col, v[i] / nrm);
  }
  return q;
}

}  // namespace liecf
