#pragma once

#include <functional>
#include <string>
#include <vector>

#include "liecf/matrix.hpp"
#include "liecf/tableau.hpp"

namespace liecf {

// A matrix ODE dY/dt = A(t, Y) Y on a manifold. `rhs` returns the algebra
// element A(t, Y), a square matrix of side state_rows. `invariant_check`
// (optional, may be empty) maps a state to its drift off the manifold.
struct Problem {
  std::string name;
  int state_rows = 0;
  int state_cols = 0;
  Field field = Field::Real;
  std::function<Matrix(double, const Matrix&)> rhs;
  std::function<double(const Matrix&)> invariant_check;
};

enum class Family { ClassicalRk, Classical2N, LieCf2N, Rkmk, GenericCf };

// The token used on the command line and in CSV output:
// classical | classical2n | liecf | rkmk | genericcf.
std::string family_name(Family f);

// Per-stage exponential coefficients for the generic commutator-free
// executor. Stage i multiplies the state by exp(h * sum_j alpha[i][l][j] K_j)
// for l ascending (so the l = 0 factor acts first, i.e. rightmost); the
// output does the same with the beta rows. Rows are length-stages with
// explicit zeros; a stage-i row may only reference K_j with j < i.
struct CfCoefficients {
  std::vector<std::vector<std::vector<double>>> alpha;  // [stage][l][j]
  std::vector<std::vector<double>> beta;                // [l][j]
};

// The exponential-coefficient encoding of the low-storage commutator-free
// format: stage rows telescope consecutive tableau rows, so their sums
// reproduce a and b. step_generic_cf with this encoding agrees with
// step_lie_cf_2n on the matching scheme.
CfCoefficients low_storage_cf_encoding(const Tableau& t);

// The Crouch-Grossman encoding: one exponential per stage derivative,
// alpha[i][l][j] = a[i][l] delta_{lj}, beta[l][j] = b[l] delta_{lj}.
CfCoefficients crouch_grossman_encoding(const Tableau& t);

// A validated (family, coefficients) pairing. Build through the factories,
// which resolve the scheme into the form the stepper consumes and reject
// incompatible combinations.
struct StepperConfig {
  Family family = Family::ClassicalRk;
  Scheme scheme;            // as supplied
  Tableau tab;              // classical view (all families)
  TwoNScheme tn;            // low-storage view (classical_2n, lie_cf_2n)
  int dexpinv_truncation = 0;  // rkmk only
  CfCoefficients cf;        // generic_cf only

  // Classical stepper; accepts either format (low-storage is expanded).
  static StepperConfig classical_rk(const Scheme& s);
  // Two-buffer steppers; Butcher-form schemes are coerced through
  // from_butcher and may throw NotTwoNRepresentableError.
  static StepperConfig classical_2n(const Scheme& s);
  static StepperConfig lie_cf_2n(const Scheme& s);
  // truncation = 0 selects the scheme's declared order.
  static StepperConfig rkmk(const Scheme& s, int truncation = 0);
  // Validates row shapes, causality, and the consistency sums
  // sum_l alpha[i][l][j] = a[i][j], sum_l beta[l][j] = b[j] (1e-12).
  static StepperConfig generic_cf(const Tableau& t, const CfCoefficients& cf);
};

// One step of the classical explicit Runge-Kutta scheme applied to
// f(t, y) = A(t, y) y. No manifold preservation expected.
Matrix step_classical_rk(const Tableau& t, const Problem& prob, double t0,
                         double h, const Matrix& y);

// One step of the Williamson two-buffer classical scheme:
// dy <- A_k dy + h f,  y <- y + B_k dy. Equals step_classical_rk on the
// expanded tableau to roundoff.
Matrix step_classical_2n(const TwoNScheme& s, const Problem& prob, double t0,
                         double h, const Matrix& y);

// One step of the low-storage commutator-free Lie group scheme:
// dY <- A_k dY + h A(t0 + C_k h, Y),  Y <- expm(B_k dY) Y.
// Exactly s rhs evaluations and s exponentials; two persistent buffers.
Matrix step_lie_cf_2n(const TwoNScheme& s, const Problem& prob, double t0,
                      double h, const Matrix& Y);

// Truncated inverse-differential of the exponential:
// sum_{k=0}^{p-1} (B_k / k!) ad_U^k(V) with Bernoulli numbers B_k.
// Supported up to p = 9 (ConfigError beyond).
Matrix dexpinv(const Matrix& U, const Matrix& V, int p);

// One step of the Munthe-Kaas scheme: stage exponentials of the
// accumulated algebra element, dexpinv-corrected stage derivatives,
// one final exponential (s + 1 exponentials per step).
Matrix step_rkmk(const Tableau& t, int trunc, const Problem& prob, double t0,
                 double h, const Matrix& Y);

// One step of the generic commutator-free executor defined by
// cfg.cf / cfg.tab (build cfg via StepperConfig::generic_cf).
Matrix step_generic_cf(const StepperConfig& cfg, const Problem& prob,
                       double t0, double h, const Matrix& Y);

// One step of whatever family cfg selects.
Matrix step(const StepperConfig& cfg, const Problem& prob, double t0, double h,
            const Matrix& Y);

// Fixed-step integration from t0 to t1 (`t1 > t0`, `h > 0`): full steps of
// h with the final step shortened to land exactly on t1. A non-finite
// state aborts with DivergenceError carrying the time of failure.
Matrix integrate(const StepperConfig& cfg, const Problem& prob, double t0,
                 double t1, double h, const Matrix& Y0);

}  // namespace liecf
