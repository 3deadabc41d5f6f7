// End-to-end acceptance checks. Each numbered criterion prints one
// [PASS]/[FAIL] line; the process exits nonzero if any criterion fails.
//
// Usage: acceptance [--liecf PATH] [--coeff-dir PATH]
//   --liecf PATH      command-line binary, used for the exit-code checks
//   --coeff-dir PATH  directory with the shipped coefficient files
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "liecf/elliptic.hpp"
#include "liecf/harness.hpp"

using namespace liecf;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& what) {
  std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", criterion, what.c_str());
  if (!ok) ++g_failures;
}

bool in_band(double x, double lo, double hi) { return std::isfinite(x) && x >= lo && x <= hi; }

double max_abs_diff(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// The full-precision classical coefficients published with the optimized
// three-stage scheme.
Tableau optimized_three_stage_tableau() {
  Tableau t;
  t.name = "BWRRK33-classical";
  t.stages = 3;
  t.declared_order = 3;
  t.a = {{0.0, 0.0, 0.0},
         {0.45737999756938819, 0.0, 0.0},
         {-0.13267640849031470, 0.92529641092092174, 0.0}};
  t.b = {0.19546562910003523, 0.41072077622489378, 0.39381359467507099};
  t.c = {0.0, 0.45737999756938819, -0.13267640849031470 + 0.92529641092092174};
  return t;
}

struct SlopeProbe {
  std::string label;
  ConvergenceReport report;
  double lo = 0.0, hi = 0.0;
};

}  // namespace

int main(int argc, char** argv) {
  std::string liecf_bin;
  std::string coeff_dir;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--liecf" && i + 1 < argc) {
      liecf_bin = argv[++i];
    } else if (arg == "--coeff-dir" && i + 1 < argc) {
      coeff_dir = argv[++i];
    } else {
      std::fprintf(stderr, "usage: acceptance [--liecf PATH] [--coeff-dir PATH]\n");
      return 2;
    }
  }

  const Scheme bw = registry_lookup("BWRRK33", coeff_dir);
  const Scheme lu = registry_lookup("LUSCHER33", coeff_dir);
  const Scheme ts = registry_lookup("TSRKF84", coeff_dir);
  const Scheme yr = registry_lookup("YRK135", coeff_dir);

  // ---- 1. The classical and Lie-format order-3 conditions coincide. ----
  {
    bool ok = true;
    double worst = 0.0;
    for (const Scheme* s : {&bw, &lu}) {
      const Tableau t = s->as_tableau();
      for (const OrderCondition& c : classical_order_residuals(t, 3).conditions) {
        worst = std::max(worst, c.residual);
        ok = ok && c.residual <= 1e-13;
      }
      const double wc = williamson_constraint_residual(t.c[1], t.c[2]);
      const double cf = lie_cf3_condition_residual(t);
      worst = std::max({worst, wc, cf});
      ok = ok && wc <= 1e-13 && cf <= 1e-13;
    }
    report(1, ok,
           "order-3, node-constraint and Lie-format residuals <= 1e-13 "
           "for BWRRK33 and LUSCHER33 (worst " + fmt(worst) + ")");
  }

  // ---- 2. The published coefficient forms convert into each other. ----
  {
    const Tableau expanded = to_butcher(bw.two_n);
    const Tableau published = optimized_three_stage_tableau();
    double fwd = 0.0;
    for (int i = 0; i < 3; ++i) {
      fwd = std::max(fwd, std::abs(expanded.b[i] - published.b[i]));
      for (int j = 0; j < i; ++j) fwd = std::max(fwd, std::abs(expanded.a[i][j] - published.a[i][j]));
    }
    const TwoNScheme recovered = from_butcher(published);
    double bwd = 0.0;
    for (int i = 0; i < 3; ++i) {
      bwd = std::max(bwd, std::abs(recovered.A[i] - bw.two_n.A[i]));
      bwd = std::max(bwd, std::abs(recovered.B[i] - bw.two_n.B[i]));
    }
    report(2, fwd <= 1e-14 && bwd <= 1e-12,
           "two-buffer <-> classical conversion reproduces the published "
           "coefficients (fwd " + fmt(fwd) + ", bwd " + fmt(bwd) + ")");
  }

  // ---- 3. Declared orders hold under the rooted-tree conditions. ----
  {
    bool ok = true;
    std::string detail;
    const std::pair<const Scheme*, int> want[] = {{&bw, 3}, {&lu, 3}, {&ts, 4}, {&yr, 5}};
    for (const auto& [s, order] : want) {
      const int got = classical_order_residuals(s->as_tableau(), 5).satisfied_order;
      ok = ok && got >= order;
      detail += s->name() + "=" + std::to_string(got) + " ";
    }
    report(3, ok, "satisfied orders at tolerance 1e-10: " + detail);
  }

  std::vector<SlopeProbe> lie_probes;  // kept for the drift criterion

  // ---- 4. Rigid-body convergence, Lie steppers and Munthe-Kaas references. ----
  {
    const BenchmarkCase rigid = rigid_body_problem();
    struct Plan {
      const Scheme* s;
      double lo, hi;
    };
    bool ok = true;
    std::string detail;
    for (const Plan& p : {Plan{&bw, 2.85, 3.3}, Plan{&ts, 3.8, 4.3}, Plan{&yr, 4.7, 5.4}}) {
      ConvergenceReport rep = run_convergence(
          rigid, StepperConfig::lie_cf_2n(*p.s),
          standard_h_grid("rigid", p.s->declared_order()), /*parallel=*/true);
      ok = ok && in_band(rep.fitted_slope, p.lo, p.hi);
      detail += p.s->name() + "=" + fmt(rep.fitted_slope) + " ";
      lie_probes.push_back({"rigid/" + p.s->name(), std::move(rep), p.lo, p.hi});
    }
    const Scheme r3 = registry_lookup("RALSTON3");
    const Scheme r4 = registry_lookup("RALSTON4");
    const Scheme b6 = registry_lookup("BUTCHER65");
    for (const Plan& p : {Plan{&r3, 2.85, 3.3}, Plan{&r4, 3.8, 4.3}, Plan{&b6, 4.7, 5.4}}) {
      const ConvergenceReport rep = run_convergence(
          rigid, StepperConfig::rkmk(*p.s),
          standard_h_grid("rigid", p.s->declared_order()), /*parallel=*/true);
      ok = ok && in_band(rep.fitted_slope, p.lo, p.hi);
      detail += p.s->name() + "/mk=" + fmt(rep.fitted_slope) + " ";
    }
    report(4, ok, "rigid-body slopes in their bands: " + detail);
  }

  // ---- 5. Matrix-manifold convergence at nominal order. ----
  {
    bool ok = true;
    std::string detail;
    for (const char* case_name : {"so5", "su3", "so3t"}) {
      const BenchmarkCase c = benchmark_by_name(case_name);
      for (const Scheme* s : {&bw, &ts, &yr}) {
        ConvergenceReport rep = run_convergence(
            c, StepperConfig::lie_cf_2n(*s),
            standard_h_grid(case_name, s->declared_order()), /*parallel=*/true);
        const double nominal = s->declared_order();
        ok = ok && in_band(rep.fitted_slope, nominal - 0.3, nominal + 0.3);
        detail += std::string(case_name) + "/" + s->name() + "=" + fmt(rep.fitted_slope) + " ";
        lie_probes.push_back({std::string(case_name) + "/" + s->name(), std::move(rep),
                              nominal - 0.3, nominal + 0.3});
      }
    }
    report(5, ok, "matrix-manifold slopes within 0.3 of nominal: " + detail);
  }

  // ---- 6. Stiff scalar convergence across the van der Pol needle. ----
  {
    bool ok = true;
    std::string detail;
    const BenchmarkCase c = vdp_problem();
    for (const Scheme* s : {&bw, &ts, &yr}) {
      const ConvergenceReport rep = run_convergence(
          c, StepperConfig::lie_cf_2n(*s),
          standard_h_grid("vdp", s->declared_order()), /*parallel=*/true);
      const double nominal = s->declared_order();
      ok = ok && in_band(rep.fitted_slope, nominal - 0.3, nominal + 0.3) && !rep.any_divergence;
      detail += s->name() + "=" + fmt(rep.fitted_slope) + (rep.any_divergence ? "(diverged!) " : " ");
    }
    report(6, ok, "van der Pol slopes within 0.3 of nominal, no divergence: " + detail);
  }

  // ---- 7. Manifold preservation along every Lie trajectory above. ----
  {
    bool ok = true;
    double worst = 0.0;
    for (const SlopeProbe& probe : lie_probes)
      for (const ConvergenceRow& row : probe.report.rows)
        if (std::isfinite(row.d)) {
          worst = std::max(worst, row.drift);
          ok = ok && row.drift <= 1e-11;
        }
    report(7, ok, "invariant drift <= 1e-11 over " + std::to_string(lie_probes.size()) +
                      " Lie-family convergence sweeps (worst " + fmt(worst) + ")");
  }

  // ---- 8. Negative control: a non-representable scheme loses order. ----
  {
    const Tableau t = registry_lookup("RALSTON3").as_tableau();
    const StepperConfig cfg = StepperConfig::generic_cf(t, low_storage_cf_encoding(t));
    const ConvergenceReport rep = run_convergence(
        rigid_body_problem(), cfg, standard_h_grid("rigid", 3), /*parallel=*/true);
    report(8, std::isfinite(rep.fitted_slope) && rep.fitted_slope <= 2.5,
           "RALSTON3 through the exponential format drops to slope " + fmt(rep.fitted_slope));
  }

  // ---- 9. Cross-cutting property battery. ----
  {
    bool ok = true;
    std::string detail;

    // Exactness on a commuting (constant-coefficient) problem, h-independent.
    {
      Problem p;
      p.name = "constant";
      p.state_rows = 3;
      p.state_cols = 1;
      p.rhs = [](double, const Matrix&) { return hat(Matrix::column3(0.3, -0.2, 0.5)); };
      const Matrix y0 = Matrix::column3(1.0, 0.0, 0.0);
      const Matrix want = expm(1.7 * p.rhs(0.0, y0)) * y0;
      double worst = 0.0;
      for (double h : {0.5, 0.17, 0.031}) {
        worst = std::max(worst, max_abs_diff(
            integrate(StepperConfig::lie_cf_2n(bw), p, 0.0, 1.7, h, y0), want));
        worst = std::max(worst, max_abs_diff(
            integrate(StepperConfig::rkmk(bw), p, 0.0, 1.7, h, y0), want));
      }
      ok = ok && worst <= 1e-11;
      detail += "commuting=" + fmt(worst) + " ";
    }

    // The two-buffer classical stepper equals the expanded classical stepper.
    {
      const BenchmarkCase vdp = vdp_problem();
      double worst = 0.0;
      for (const Scheme* s : {&bw, &ts, &yr}) {
        const Matrix a = step_classical_2n(s->two_n, vdp.problem, 0.3, 1.0 / 256.0, vdp.Y0);
        const Matrix b = step_classical_rk(to_butcher(s->two_n), vdp.problem, 0.3, 1.0 / 256.0, vdp.Y0);
        worst = std::max(worst, max_abs_diff(a, b));
      }
      ok = ok && worst <= 1e-13;
      detail += "2n-vs-classical=" + fmt(worst) + " ";
    }

    // The two-buffer Lie stepper equals the generic executor on its encoding.
    {
      const BenchmarkCase rigid = rigid_body_problem();
      double worst = 0.0;
      for (const Scheme* s : {&bw, &ts, &yr}) {
        const Tableau t = to_butcher(s->two_n);
        const StepperConfig generic = StepperConfig::generic_cf(t, low_storage_cf_encoding(t));
        const Matrix a = step_lie_cf_2n(s->two_n, rigid.problem, 0.3, 0.07, rigid.Y0);
        const Matrix b = step_generic_cf(generic, rigid.problem, 0.3, 0.07, rigid.Y0);
        worst = std::max(worst, max_abs_diff(a, b));
      }
      ok = ok && worst <= 1e-13;
      detail += "lie-vs-generic=" + fmt(worst) + " ";
    }

    // Truncated dexpinv closed forms.
    {
      const Matrix U = Matrix::from_real(3, 3, {0.1, 0.4, -0.2, 0.3, -0.5, 0.7, 0.2, 0.6, -0.1});
      const Matrix V = hat(Matrix::column3(1.0, -2.0, 0.5));
      double worst = max_abs_diff(dexpinv(U, V, 1), V);
      worst = std::max(worst, max_abs_diff(dexpinv(U, V, 2), V - 0.5 * commutator(U, V)));
      worst = std::max(worst, max_abs_diff(dexpinv(U, V, 3),
                                           V - 0.5 * commutator(U, V) +
                                               (1.0 / 12.0) * commutator(U, commutator(U, V))));
      ok = ok && worst <= 1e-15;
      detail += "dexpinv=" + fmt(worst) + " ";
    }

    // Exponential versus the Rodrigues closed form.
    {
      double worst = 0.0;
      for (double scale : {0.1, 0.7, 2.0}) {
        const Matrix v = Matrix::column3(0.3 * scale, -0.4 * scale, 0.5 * scale);
        const double theta = norm2(v);
        const Matrix K = hat(v);
        const Matrix want = Matrix::identity(3) + (std::sin(theta) / theta) * K +
                            ((1.0 - std::cos(theta)) / (theta * theta)) * (K * K);
        worst = std::max(worst, max_abs_diff(expm(K), want));
      }
      ok = ok && worst <= 1e-13;
      detail += "rodrigues=" + fmt(worst) + " ";
    }

    // Elliptic function identities.
    {
      double worst = 0.0;
      for (double m : {0.0, 0.3, 0.6, 0.9, 0.99})
        for (double u = -10.0; u <= 10.0; u += 1.0) {
          const JacobiValues v = jacobi_sn_cn_dn(u, m);
          worst = std::max(worst, std::abs(v.sn * v.sn + v.cn * v.cn - 1.0));
          worst = std::max(worst, std::abs(v.dn * v.dn + m * v.sn * v.sn - 1.0));
        }
      ok = ok && worst <= 1e-13;
      detail += "elliptic=" + fmt(worst) + " ";
    }

    // Work counting: s vector-field evaluations and s exponentials per step.
    {
      const BenchmarkCase rigid = rigid_body_problem();
      bool counts_ok = true;
      for (const Scheme* s : {&bw, &ts, &yr}) {
        int rhs_calls = 0;
        Problem counted = rigid.problem;
        const auto inner = rigid.problem.rhs;
        counted.rhs = [&rhs_calls, inner](double t, const Matrix& y) {
          ++rhs_calls;
          return inner(t, y);
        };
        const std::uint64_t e0 = expm_call_count();
        (void)step_lie_cf_2n(s->two_n, counted, 0.0, 0.1, rigid.Y0);
        counts_ok = counts_ok && rhs_calls == s->stages() &&
                    expm_call_count() - e0 == static_cast<std::uint64_t>(s->stages());
      }
      ok = ok && counts_ok;
      detail += std::string("work-counts=") + (counts_ok ? "exact" : "WRONG");
    }

    report(9, ok, "property battery: " + detail);
  }

  // ---- 10. Conjecture gate through the command-line interface. ----
  {
    if (liecf_bin.empty()) {
      report(10, false, "no --liecf binary supplied; cannot run the gate");
    } else {
      const std::string base = "'" + liecf_bin + "'";
      const int rc_pass = std::system((base + " conjecture > /dev/null 2>&1").c_str());
      const int rc_fail =
          std::system((base + " conjecture --scheme RALSTON3 > /dev/null 2>&1").c_str());
      const int code_pass = WIFEXITED(rc_pass) ? WEXITSTATUS(rc_pass) : -1;
      const int code_fail = WIFEXITED(rc_fail) ? WEXITSTATUS(rc_fail) : -1;
      report(10, code_pass == 0 && code_fail != 0 && code_fail > 0,
             "conjecture gate exits " + std::to_string(code_pass) +
                 " for the shipped schemes and " + std::to_string(code_fail) +
                 " for the negative control");
    }
  }

  if (g_failures > 0) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all criteria passed\n");
  return 0;
}
