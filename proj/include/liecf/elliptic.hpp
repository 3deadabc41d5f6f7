#pragma once

#include "liecf/errors.hpp"

namespace liecf {

/// Values of the three Jacobi elliptic functions at a common argument.
struct JacobiValues {
  double sn;
  double cn;
  double dn;
};

/// Jacobi elliptic functions sn(u|m), cn(u|m), dn(u|m) for parameter
/// m = k^2 in [0, 1). Computed by the descending Landen transformation
/// (arithmetic-geometric mean), with the argument first reduced modulo
/// the real period 4K(m) so accuracy is uniform in u. Absolute accuracy
/// is a few ULP (far inside the 1e-13 contract); the identities
/// sn^2 + cn^2 = 1 and dn^2 + m sn^2 = 1 hold to the same level.
/// Throws DomainError for m outside [0, 1) or non-finite u.
JacobiValues jacobi_sn_cn_dn(double u, double m);

}  // namespace liecf
