#pragma once

#include <string>
#include <vector>

#include "liecf/errors.hpp"

namespace liecf {

// Classical explicit Runge-Kutta coefficients. `a` is stored as a full
// stages x stages array that must be strictly lower triangular; `c` must
// equal the row sums of `a` to 1e-14 and c[0] must be zero.
struct Tableau {
  std::string name;
  int stages = 0;
  int declared_order = 0;
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<double> c;
};

// Low-storage (two-buffer) coefficients in Williamson form. A[0] must be
// zero; C holds the stage times.
struct TwoNScheme {
  std::string name;
  int stages = 0;
  int declared_order = 0;
  std::vector<double> A;
  std::vector<double> B;
  std::vector<double> C;
};

// One classical order condition: |weight(tree) - 1/density(tree)|.
// `label` is the canonical level sequence of the rooted tree, e.g. the
// two order-3 trees are "1.2.2" (bushy) and "1.2.3" (tall).
struct OrderCondition {
  int order = 0;
  std::string label;
  double residual = 0.0;
};

struct OrderReport {
  std::vector<OrderCondition> conditions;  // sorted by tree order
  double tolerance = 0.0;
  int satisfied_order = 0;  // largest p with all residuals of order <= p below tolerance
};

// Throw ShapeError / ConfigError if the structural or value invariants of
// the type are violated (sizes, triangularity, row sums, leading entries,
// finiteness).
void validate_tableau(const Tableau& t);
void validate_two_n_scheme(const TwoNScheme& s);

// Expand a low-storage scheme into its equivalent classical tableau by
// back-substitution; `c` is recomputed from row sums and must agree with
// the scheme's stage times C to 1e-12 (ConfigError otherwise).
Tableau to_butcher(const TwoNScheme& s);

// Recover the low-storage coefficients from a classical tableau. The
// defining relations form an overdetermined linear system; any residual
// beyond 1e-10 throws NotTwoNRepresentableError. C is copied from c.
TwoNScheme from_butcher(const Tableau& t);

// Residuals of all rooted-tree order conditions with tree order <= up_to
// (1 <= up_to <= 5), plus the largest order satisfied at tolerance 1e-10.
OrderReport classical_order_residuals(const Tableau& t, int up_to);

// |c3^2 (1-c2) + c3 (c2^2 + c2/2 - 1) + (1/3 - c2/2)| — the node constraint
// a 3-stage scheme must satisfy to admit a low-storage representation.
double williamson_constraint_residual(double c2, double c3);

// |a32 c2 (1-c2) - (3 c3 - 1)/6| — the single extra order-3 condition of the
// low-storage commutator-free format. Requires a 3-stage tableau
// (ShapeError otherwise).
double lie_cf3_condition_residual(const Tableau& t);

// |sum_i b_i^2 c_i + 2 sum_{i<j} b_i c_i b_j - 1/3| — the extra order-3
// condition of Crouch-Grossman methods.
double crouch_grossman_oc3_residual(const Tableau& t);

// A registry entry: either a native low-storage scheme or a classical
// tableau, depending on how its coefficients are published.
enum class SchemeFormat { TwoN, Butcher };

struct Scheme {
  SchemeFormat format = SchemeFormat::Butcher;
  TwoNScheme two_n;  // meaningful iff format == TwoN
  Tableau tableau;   // meaningful iff format == Butcher

  const std::string& name() const;
  int stages() const;
  int declared_order() const;
  // The classical view: to_butcher for TwoN schemes, identity otherwise.
  Tableau as_tableau() const;
};

// Built-in coefficient sets, in listing order.
const std::vector<Scheme>& registry_builtins();

// Look up a scheme by exact name among the built-ins; if absent and
// coeff_dir is nonempty, try loading <coeff_dir>/<name>.json. Throws
// LookupError when neither resolves.
Scheme registry_lookup(const std::string& name, const std::string& coeff_dir = "");

// Coefficient file format: one JSON object per file with fields
//   name   : string
//   format : "2N" | "butcher"
//   stages : int
//   order  : int
// and, for "2N", arrays A, B, C; for "butcher", arrays a (strictly-lower
// rows: row i holds the i entries a_{i,0..i-1}, row 0 is []), b, and c.
// All numbers are decimal strings; serialization uses 17 significant
// digits so parse(serialize(s)) is bit-exact.
Scheme parse_scheme_json(const std::string& text);
std::string serialize_scheme_json(const Scheme& s);
Scheme load_scheme_file(const std::string& path);
void save_scheme_file(const Scheme& s, const std::string& path);

}  // namespace liecf
