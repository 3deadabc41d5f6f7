// Tests for the small dense matrix kernel: constructors, arithmetic,
// exponential, Lie-algebra helpers, norms, and orthonormalization.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "liecf/matrix.hpp"

using namespace liecf;

namespace {

double max_abs_diff(const Matrix& a, const Matrix& b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  double worst = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

bool bit_equal(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

// Rodrigues rotation formula: exp(hat(v)) for a 3-vector v.
Matrix rodrigues(double x, double y, double z) {
  const double theta = std::sqrt(x * x + y * y + z * z);
  const Matrix K = hat(Matrix::column3(x, y, z));
  if (theta == 0.0) return Matrix::identity(3);
  const double s = std::sin(theta) / theta;
  const double c = (1.0 - std::cos(theta)) / (theta * theta);
  return Matrix::identity(3) + s * K + c * mat_mul(K, K);
}

}  // namespace

TEST_CASE("zeros and identity report shape and field") {
  const Matrix z = Matrix::zeros(2, 3);
  CHECK(z.rows() == 2);
  CHECK(z.cols() == 3);
  CHECK(z.is_real());
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) CHECK(z(i, j) == cxd(0.0, 0.0));

  const Matrix id = Matrix::identity(4, Field::Complex);
  CHECK(id.field() == Field::Complex);
  CHECK_FALSE(id.is_real());
  CHECK(id(2, 2) == cxd(1.0, 0.0));
  CHECK(id(0, 3) == cxd(0.0, 0.0));

  CHECK_THROWS_AS(Matrix::zeros(-1, 2), ShapeError);
}

TEST_CASE("entry constructors validate size and finiteness") {
  CHECK_THROWS_AS(Matrix::from_real(2, 2, {1.0, 2.0, 3.0}), ShapeError);
  CHECK_THROWS_AS(Matrix::from_real(1, 2, {1.0, std::nan("")}), DomainError);
  CHECK_THROWS_AS(Matrix::from_real(1, 1, {HUGE_VAL}), DomainError);
  CHECK_THROWS_AS(Matrix::from_complex(1, 1, {cxd(0.0, HUGE_VAL)}), DomainError);

  const Matrix m = Matrix::from_real(2, 2, {1.0, 2.0, 3.0, 4.0});
  CHECK(m.re(1, 0) == 3.0);
  CHECK(m.all_finite());
}

TEST_CASE("matrix product matches a hand computation") {
  const Matrix a = Matrix::from_real(2, 3, {1, 2, 3, 4, 5, 6});
  const Matrix b = Matrix::from_real(3, 2, {7, 8, 9, 10, 11, 12});
  const Matrix p = mat_mul(a, b);
  // [1 2 3; 4 5 6] * [7 8; 9 10; 11 12] = [58 64; 139 154]
  CHECK(p.re(0, 0) == 58.0);
  CHECK(p.re(0, 1) == 64.0);
  CHECK(p.re(1, 0) == 139.0);
  CHECK(p.re(1, 1) == 154.0);
  CHECK(p.is_real());

  CHECK(bit_equal(mat_mul(Matrix::identity(2), p), p));
  CHECK(bit_equal(a * b, p));
  CHECK_THROWS_AS(mat_mul(a, a), ShapeError);

  // i * i = -1 via the complex constructor path.
  const Matrix im = Matrix::from_complex(1, 1, {cxd(0.0, 1.0)});
  const Matrix sq = mat_mul(im, im);
  CHECK(sq(0, 0) == cxd(-1.0, 0.0));
  CHECK_FALSE(sq.is_real());
}

TEST_CASE("transpose, conjugate transpose, trace, determinant") {
  const Matrix a = Matrix::from_real(2, 2, {1, 2, 3, 4});
  CHECK(a.transpose().re(0, 1) == 3.0);
  CHECK(a.trace() == cxd(5.0, 0.0));
  CHECK(std::abs(a.det() - cxd(-2.0, 0.0)) <= 1e-14);

  const Matrix c = Matrix::from_complex(2, 2, {cxd(1, 2), cxd(3, 4), cxd(5, 6), cxd(7, 8)});
  CHECK(c.conj_transpose()(0, 1) == cxd(5.0, -6.0));
  CHECK(c.conj_transpose()(1, 0) == cxd(3.0, -4.0));

  CHECK(std::abs(Matrix::identity(5).det() - 1.0) <= 1e-15);
  const Matrix sing = Matrix::from_real(2, 2, {1, 2, 2, 4});
  CHECK(std::abs(sing.det()) <= 1e-14);
  const Matrix t = Matrix::from_real(3, 3, {2, 0, 0, 1, 3, 0, 4, 5, -1});
  CHECK(std::abs(t.det() - cxd(-6.0, 0.0)) <= 1e-13);
}

TEST_CASE("exponential of the zero matrix is exactly the identity") {
  const Matrix e = expm(Matrix::zeros(4, 4));
  CHECK(bit_equal(e, Matrix::identity(4)));
  const Matrix ec = expm(Matrix::zeros(2, 2, Field::Complex));
  CHECK(bit_equal(ec, Matrix::identity(2, Field::Complex)));
}

TEST_CASE("exponential of a diagonal matrix exponentiates the diagonal") {
  const Matrix d = Matrix::from_real(2, 2, {1.0, 0.0, 0.0, -2.0});
  const Matrix e = expm(d);
  CHECK(std::abs(e.re(0, 0) - std::exp(1.0)) <= 1e-14 * std::exp(1.0));
  CHECK(std::abs(e.re(1, 1) - std::exp(-2.0)) <= 1e-14);
  CHECK(std::abs(e.re(0, 1)) <= 1e-16);
  CHECK(std::abs(e.re(1, 0)) <= 1e-16);
}

TEST_CASE("exponential of a nilpotent matrix terminates the series") {
  const Matrix n = Matrix::from_real(2, 2, {0, 1, 0, 0});
  const Matrix e = expm(n);
  CHECK(max_abs_diff(e, Matrix::from_real(2, 2, {1, 1, 0, 1})) <= 1e-15);
}

TEST_CASE("exponential of a rotation generator matches the Rodrigues formula") {
  const double axes[][3] = {
      {0.7, 0.0, 0.0}, {0.0, 0.0, 0.7}, {0.3, -0.4, 0.5},
      {1.2, 0.7, -2.0}, {-3.0, 0.5, 0.9},  // |v| close to pi
  };
  for (const auto& v : axes) {
    const Matrix got = expm(hat(Matrix::column3(v[0], v[1], v[2])));
    const Matrix want = rodrigues(v[0], v[1], v[2]);
    CHECK(max_abs_diff(got, want) <= 1e-13);
  }
}

TEST_CASE("exponentials of skew matrices are orthogonal") {
  std::vector<Matrix> skews;
  skews.push_back(hat(Matrix::column3(1.9, -2.2, 0.4)));
  skews.push_back(hat(Matrix::column3(-0.1, 0.02, 4.9)));
  // A 5x5 skew matrix with norm scaled to about 5.
  Matrix s5 = Matrix::zeros(5, 5);
  double val = 0.37;
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      s5.set(i, j, val);
      s5.set(j, i, -val);
      val = -1.1 * val + 0.2;
    }
  skews.push_back((5.0 / norm2(s5)) * s5);
  for (const Matrix& s : skews) {
    CHECK(norm2(s) <= 5.0 + 1e-12);
    const Matrix q = expm(s);
    CHECK(norm2(mat_mul(q.transpose(), q) - Matrix::identity(q.rows())) <= 1e-13);
  }
}

TEST_CASE("exponential inverse property") {
  const Matrix a = (5.0 / 7.3) * Matrix::from_real(3, 3, {1.0, -2.0, 0.5, 3.0, 0.2, -1.0, 0.7, 2.2, -0.4});
  REQUIRE(norm2(a) <= 5.0 + 1e-9);
  CHECK(norm2(mat_mul(expm(a), expm(-a)) - Matrix::identity(3)) <= 1e-12);

  const Matrix c = Matrix::from_complex(2, 2, {cxd(0.4, 1.1), cxd(-2.0, 0.3), cxd(1.5, -0.7), cxd(-0.2, 2.0)});
  CHECK(norm2(mat_mul(expm(c), expm(-c)) - Matrix::identity(2, Field::Complex)) <= 1e-12);
}

TEST_CASE("expm call counter increments per call") {
  const std::uint64_t before = expm_call_count();
  (void)expm(Matrix::zeros(2, 2));
  (void)expm(hat(Matrix::column3(0.1, 0.2, 0.3)));
  CHECK(expm_call_count() == before + 2);
}

TEST_CASE("hat map entries and cross product action") {
  const Matrix k = hat(Matrix::column3(1.0, 2.0, 3.0));
  CHECK(k.re(0, 0) == 0.0);
  CHECK(k.re(0, 1) == -3.0);
  CHECK(k.re(0, 2) == 2.0);
  CHECK(k.re(1, 0) == 3.0);
  CHECK(k.re(1, 2) == -1.0);
  CHECK(k.re(2, 0) == -2.0);
  CHECK(k.re(2, 1) == 1.0);

  // hat(u) w = u x w on integer data is exact.
  const Matrix u = Matrix::column3(2.0, -1.0, 4.0);
  const Matrix w = Matrix::column3(3.0, 5.0, -2.0);
  const Matrix cross = mat_mul(hat(u), w);  // (-18, 16, 13)
  CHECK(cross.re(0, 0) == -18.0);
  CHECK(cross.re(1, 0) == 16.0);
  CHECK(cross.re(2, 0) == 13.0);

  CHECK_THROWS_AS(hat(Matrix::zeros(3, 3)), ShapeError);
  CHECK_THROWS_AS(hat(Matrix::zeros(2, 1)), ShapeError);
}

TEST_CASE("hat is linear with entrywise identical results") {
  const Matrix u = Matrix::column3(0.3, -1.7, 2.9);
  const Matrix v = Matrix::column3(-0.11, 0.23, 0.5);
  const double alpha = 1.7, beta = -0.37;
  const Matrix lhs = hat(alpha * u + beta * v);
  const Matrix rhs = alpha * hat(u) + beta * hat(v);
  CHECK(bit_equal(lhs, rhs));
}

TEST_CASE("commutator antisymmetry exact and so(3) structure") {
  const Matrix e1 = hat(Matrix::column3(1, 0, 0));
  const Matrix e2 = hat(Matrix::column3(0, 1, 0));
  const Matrix e3 = hat(Matrix::column3(0, 0, 1));
  CHECK(bit_equal(commutator(e1, e2), e3));
  CHECK(bit_equal(commutator(e2, e3), e1));
  CHECK(bit_equal(commutator(e3, e1), e2));

  const Matrix u = Matrix::from_real(3, 3, {0.3, 1.2, -0.7, 2.0, -1.1, 0.4, 0.9, 0.8, -0.5});
  const Matrix v = Matrix::from_real(3, 3, {1.0, -0.2, 0.6, -1.4, 0.9, 2.2, 0.1, -0.3, 0.7});
  CHECK(bit_equal(commutator(u, v), -commutator(v, u)));
  CHECK_THROWS_AS(commutator(u, Matrix::identity(2)), ShapeError);
}

TEST_CASE("Jacobi identity residual is tiny for unit-norm triples") {
  auto unit = [](const Matrix& m) { return (1.0 / norm2(m)) * m; };
  const Matrix u = unit(Matrix::from_real(3, 3, {0.3, 1.2, -0.7, 2.0, -1.1, 0.4, 0.9, 0.8, -0.5}));
  const Matrix v = unit(Matrix::from_real(3, 3, {1.0, -0.2, 0.6, -1.4, 0.9, 2.2, 0.1, -0.3, 0.7}));
  const Matrix w = unit(hat(Matrix::column3(0.4, -2.0, 1.3)));
  const Matrix resid = commutator(u, commutator(v, w)) + commutator(v, commutator(w, u)) +
                       commutator(w, commutator(u, v));
  CHECK(norm2(resid) <= 1e-13);
}

TEST_CASE("norm2 is Euclidean for vectors and spectral for matrices") {
  CHECK(std::abs(norm2(Matrix::column3(3.0, 4.0, 0.0)) - 5.0) <= 1e-15);
  CHECK(std::abs(norm2(Matrix::from_real(1, 2, {5.0, 12.0})) - 13.0) <= 1e-14);
  CHECK(std::abs(norm2(Matrix::identity(5)) - 1.0) <= 1e-14);
  const Matrix d = Matrix::from_real(2, 2, {2.0, 0.0, 0.0, -7.0});
  CHECK(std::abs(norm2(d) - 7.0) <= 1e-13);
  // Non-normal matrix: singular value differs from spectral radius.
  const Matrix n = Matrix::from_real(2, 2, {0.0, 2.0, 0.0, 0.0});
  CHECK(std::abs(norm2(n) - 2.0) <= 1e-13);
  const Matrix cv = Matrix::from_complex(2, 1, {cxd(0.0, 3.0), cxd(4.0, 0.0)});
  CHECK(std::abs(norm2(cv) - 5.0) <= 1e-14);
  CHECK(norm2(Matrix::zeros(3, 3)) == 0.0);
}

TEST_CASE("gram_schmidt_orthonormalize produces orthonormal columns") {
  CHECK(max_abs_diff(gram_schmidt_orthonormalize(Matrix::identity(5)), Matrix::identity(5)) == 0.0);
  const Matrix d = Matrix::from_real(2, 2, {2.0, 0.0, 0.0, 3.0});
  CHECK(max_abs_diff(gram_schmidt_orthonormalize(d), Matrix::identity(2)) == 0.0);

  const Matrix m = Matrix::from_real(3, 3, {1.0, 2.0, 0.5, -1.0, 0.3, 2.2, 0.4, 1.7, -0.9});
  const Matrix q = gram_schmidt_orthonormalize(m);
  CHECK(norm2(mat_mul(q.transpose(), q) - Matrix::identity(3)) <= 1e-13);
  // Sign convention: the implicit R has a positive diagonal, i.e. each
  // column of q has positive inner product with the matching column of m.
  for (int j = 0; j < 3; ++j) {
    double dot = 0.0;
    for (int i = 0; i < 3; ++i) dot += q.re(i, j) * m.re(i, j);
    CHECK(dot > 0.0);
  }

  const Matrix deficient = Matrix::from_real(2, 2, {1.0, 2.0, 2.0, 4.0});
  CHECK_THROWS_AS(gram_schmidt_orthonormalize(deficient), DegeneracyError);
  CHECK_THROWS_AS(gram_schmidt_orthonormalize(Matrix::zeros(2, 3)), ShapeError);
  CHECK_THROWS_AS(gram_schmidt_orthonormalize(Matrix::identity(2, Field::Complex)), ShapeError);
}
