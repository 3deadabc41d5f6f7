#include "liecf/elliptic.hpp"

#include <algorithm>
#include <cmath>

namespace liecf {

JacobiValues jacobi_sn_cn_dn(double u, double m) {
  if (!std::isfinite(u)) throw DomainError("jacobi_sn_cn_dn: non-finite argument");
  if (!(m >= 0.0 && m < 1.0)) {
    throw DomainError("jacobi_sn_cn_dn: parameter m must lie in [0, 1)");
  }
  if (m == 0.0) return {std::sin(u), std::cos(u), 1.0};

  // Arithmetic-geometric mean: a_{n+1} = (a_n+b_n)/2, b_{n+1} =
  // sqrt(a_n b_n), c_{n+1} = (a_n-b_n)/2, starting from a_0 = 1,
  // b_0 = sqrt(1-m), c_0 = sqrt(m). Quadratic convergence: c_n falls
  // below 1e-16 within 6 iterations for m <= 0.99.
  constexpr int kMaxIter = 16;
  double a[kMaxIter + 1], c[kMaxIter + 1];
  a[0] = 1.0;
  c[0] = std::sqrt(m);
  double b = std::sqrt(1.0 - m);
  int n = 0;
  while (std::abs(c[n]) > 1e-16 && n < kMaxIter) {
    const double an = 0.5 * (a[n] + b);
    const double bn = std::sqrt(a[n] * b);
    c[n + 1] = 0.5 * (a[n] - b);
    a[n + 1] = an;
    b = bn;
    ++n;
  }

  // The AGM limit gives the quarter period K = pi / (2 a_n). Reduce the
  // argument modulo the full period 4K before unwinding the phase
  // recurrence: the recurrence loses relative accuracy for large phases,
  // and all three functions are 4K-periodic.
  const double quarter_period = std::asin(1.0) / a[n];  // pi / (2 a_n)
  const double full_period = 4.0 * quarter_period;
  const double u_red = u - full_period * std::round(u / full_period);

  // Descending phase recurrence: phi_n = 2^n a_n u, then
  // phi_{k-1} = (phi_k + asin(c_k/a_k * sin phi_k)) / 2 down to phi_0,
  // with sn = sin phi_0 and cn = cos phi_0.
  double phi = std::ldexp(a[n] * u_red, n);
  for (int k = n; k >= 1; --k) {
    const double ratio = std::clamp(c[k] / a[k] * std::sin(phi), -1.0, 1.0);
    phi = 0.5 * (phi + std::asin(ratio));
  }
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  // dn > 0 everywhere for m < 1, so the identity dn^2 = 1 - m sn^2
  // determines it without sign ambiguity and to full precision.
  const double dn = std::sqrt(std::max(0.0, 1.0 - m * sn * sn));
  return {sn, cn, dn};
}

}  // namespace liecf
