#pragma once

#include <iosfwd>
#include <utility>

#include "liecf/problems.hpp"

namespace liecf {

struct ConvergenceRow {
  double h = 0.0;
  double d = 0.0;        // distance to the reference at t1; +inf if diverged
  double seconds = 0.0;  // wall time, informational only (never asserted)
  double drift = 0.0;    // problem invariant drift of the final state, if any
};

struct ConvergenceReport {
  std::string case_name;
  std::string scheme_name;
  std::string family;
  int nominal_order = 0;
  std::vector<ConvergenceRow> rows;  // sorted by h ascending
  double reference_floor = 0.0;
  // Least-squares slope of log2 d vs log2 h over admissible rows
  // (finite d exceeding 10x the reference floor); NaN when fewer than
  // three rows qualify.
  double fitted_slope = 0.0;
  double fit_h_min = 0.0;  // admissible range actually used by the fit
  double fit_h_max = 0.0;
  bool any_divergence = false;
};

// Ordinary least-squares slope of log2 d versus log2 h over the rows with
// finite d > 10 * floor. Fewer than three admissible rows throw
// InsufficientDataError.
double fit_slope(const std::vector<std::pair<double, double>>& rows, double floor);

// Step sizes 2^-n for n = nmin..nmax, ascending in h.
std::vector<double> dyadic_h_grid(int nmin, int nmax);

// The per-case grid used in the convergence studies; the fine end is cut
// off earlier for higher orders, where the error otherwise falls into the
// reference floor. Orders below 3 use the order-3 cut, above 5 the
// order-5 cut.
std::vector<double> standard_h_grid(const std::string& case_name, int order);

// Integrate the case at every h, measure d(h) against the reference, and
// fit the slope. Diverged runs record d = +inf and are excluded from the
// fit. With parallel = true the rows are computed concurrently (results
// are identical to the serial run).
ConvergenceReport run_convergence(const BenchmarkCase& c, const StepperConfig& cfg,
                                  const std::vector<double>& h_list,
                                  bool parallel = false);

struct ConjectureCaseResult {
  std::string case_name;
  double slope = 0.0;
  double required = 0.0;  // declared order - 0.2
  bool pass = false;
};

struct ConjectureOutcome {
  std::string scheme_name;
  std::string family;  // stepper actually used (liecf, or genericcf fallback)
  int nominal_order = 0;
  bool pass = false;  // all cases passed
  std::vector<ConjectureCaseResult> cases;
  std::vector<ConvergenceReport> reports;  // one per case, same order
};

// Empirical order verification: run the scheme through the low-storage
// commutator-free stepper on each case's standard grid and require
// fitted_slope >= declared_order - 0.2 everywhere. Schemes without a
// two-buffer representation are executed through the generic
// commutator-free executor with the telescoped low-storage encoding
// (same update sequence, explicit tensors) -- that is the path on which
// classical non-representable schemes are expected to fail.
ConjectureOutcome verify_conjecture(const Scheme& scheme,
                                    const std::vector<BenchmarkCase>& cases);
// Same, over all five benchmark cases.
ConjectureOutcome verify_conjecture(const Scheme& scheme);

// CSV: header `case,scheme,family,h,d,seconds`, one row per h at full
// precision (17 significant digits, +inf as `inf`), then a trailing
// comment `# slope=<value> nominal=<order>`.
void emit_csv(const ConvergenceReport& report, std::ostream& out);

}  // namespace liecf
