#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "liecf/harness.hpp"

namespace {

using namespace liecf;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDiverged = 3;

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// --file wins over --scheme; exactly one of them must identify a scheme.
Scheme resolve_scheme(const std::string& name, const std::string& file,
                      const std::string& coeff_dir) {
  if (!file.empty()) return load_scheme_file(file);
  if (name.empty()) throw LookupError("no scheme given (use --scheme or --file)");
  return registry_lookup(name, coeff_dir);
}

StepperConfig make_config(const std::string& family, const Scheme& s) {
  if (family == "classical") return StepperConfig::classical_rk(s);
  if (family == "classical2n") return StepperConfig::classical_2n(s);
  if (family == "liecf") return StepperConfig::lie_cf_2n(s);
  if (family == "rkmk") return StepperConfig::rkmk(s);
  throw LookupError("unknown family: " + family);
}

void with_output(const std::string& path, const std::function<void(std::ostream&)>& fn) {
  if (path.empty()) {
    fn(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  fn(out);
  if (!out) throw Error("write failed: " + path);
}

int cmd_list() {
  std::printf("%-12s %7s %6s %8s\n", "name", "stages", "order", "format");
  for (const Scheme& s : registry_builtins())
    std::printf("%-12s %7d %6d %8s\n", s.name().c_str(), s.stages(),
                s.declared_order(), s.format == SchemeFormat::TwoN ? "2N" : "butcher");
  return kExitOk;
}

int cmd_check(const Scheme& s) {
  const Tableau t = s.as_tableau();
  const OrderReport rep = classical_order_residuals(t, 5);
  std::printf("scheme %s: %d stages, declared order %d\n", s.name().c_str(),
              s.stages(), s.declared_order());
  std::printf("%-14s %5s %s\n", "tree", "order", "residual");
  for (const OrderCondition& c : rep.conditions)
    std::printf("%-14s %5d %s\n", c.label.c_str(), c.order, fmt17(c.residual).c_str());
  std::printf("satisfied order: %d (tolerance %g)\n", rep.satisfied_order, rep.tolerance);
  if (t.stages >= 3)
    std::printf("node constraint residual (c2, c3): %s\n",
                fmt17(williamson_constraint_residual(t.c[1], t.c[2])).c_str());
  if (t.stages == 3)
    std::printf("low-storage CF order-3 residual:   %s\n",
                fmt17(lie_cf3_condition_residual(t)).c_str());
  std::printf("Crouch-Grossman order-3 residual:  %s\n",
              fmt17(crouch_grossman_oc3_residual(t)).c_str());
  if (rep.satisfied_order < s.declared_order()) {
    std::fprintf(stderr, "FAIL: satisfied order %d below declared order %d\n",
                 rep.satisfied_order, s.declared_order());
    return kExitVerifyFail;
  }
  return kExitOk;
}

void write_state_row(std::ostream& out, double t, const Matrix& y) {
  out << fmt17(t);
  for (int i = 0; i < y.rows(); ++i)
    for (int j = 0; j < y.cols(); ++j) {
      const cxd v = y(i, j);
      out << ',' << fmt17(v.real());
      if (!y.is_real()) out << ',' << fmt17(v.imag());
    }
  out << '\n';
}

int cmd_integrate(const BenchmarkCase& c, const StepperConfig& cfg, double h,
                  double t1, const std::string& out_path) {
  with_output(out_path, [&](std::ostream& out) {
    out << "t";
    int idx = 0;
    for (int i = 0; i < c.Y0.rows(); ++i)
      for (int j = 0; j < c.Y0.cols(); ++j, ++idx) {
        if (c.Y0.is_real())
          out << ",y" << idx;
        else
          out << ",re" << idx << ",im" << idx;
      }
    out << '\n';
    Matrix y = c.Y0;
    double tcur = c.t0;
    write_state_row(out, tcur, y);
    while (tcur < t1) {
      double dt = h;
      bool final_step = false;
      if (dt > t1 - tcur) {
        dt = t1 - tcur;
        final_step = true;
      }
      try {
        y = step(cfg, c.problem, tcur, dt, y);
      } catch (const DomainError&) {
        throw DivergenceError("state became non-finite", tcur + dt);
      }
      tcur = final_step ? t1 : tcur + dt;
      if (!y.all_finite())
        throw DivergenceError("state became non-finite", tcur);
      write_state_row(out, tcur, y);
    }
  });
  return kExitOk;
}

int cmd_converge(const BenchmarkCase& c, const std::vector<std::string>& scheme_names,
                 const std::string& family, int nmin, int nmax,
                 const std::string& coeff_dir, const std::string& out_path) {
  bool diverged = false;
  with_output(out_path, [&](std::ostream& out) {
    for (const std::string& name : scheme_names) {
      const Scheme s = registry_lookup(name, coeff_dir);
      const StepperConfig cfg = make_config(family, s);
      const std::vector<double> grid =
          (nmin >= 0 && nmax >= 0)
              ? dyadic_h_grid(nmin, nmax)
              : standard_h_grid(c.problem.name, s.declared_order());
      const ConvergenceReport rep = run_convergence(c, cfg, grid);
      emit_csv(rep, out);
      diverged = diverged || rep.any_divergence;
    }
  });
  return diverged ? kExitDiverged : kExitOk;
}

int cmd_conjecture(const std::vector<Scheme>& schemes) {
  bool all_pass = true;
  for (const Scheme& s : schemes) {
    const ConjectureOutcome outcome = verify_conjecture(s);
    for (const ConjectureCaseResult& r : outcome.cases)
      std::printf("%-10s %-6s slope %7.3f required %5.2f  %s\n",
                  outcome.scheme_name.c_str(), r.case_name.c_str(), r.slope,
                  r.required, r.pass ? "PASS" : "FAIL");
    std::printf("%-10s overall: %s (order %d via %s)\n", outcome.scheme_name.c_str(),
                outcome.pass ? "PASS" : "FAIL", outcome.nominal_order,
                outcome.family.c_str());
    all_pass = all_pass && outcome.pass;
  }
  return all_pass ? kExitOk : kExitVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"liecf: structure-preserving Runge-Kutta integrators and their convergence harness"};
  app.require_subcommand(1);
  // The integrate subcommand owns `--h` (step size), so help must not
  // claim the short flag -h anywhere.
  app.set_help_flag("--help", "print help");

  std::string coeff_dir;
  app.add_option("--coeff-dir", coeff_dir,
                 "directory with <NAME>.json coefficient files")
      ->envname("LIECF_COEFF_DIR");

  app.add_subcommand("list", "print the built-in schemes");

  auto* check = app.add_subcommand("check", "order-condition and constraint residuals");
  check->set_help_flag("--help", "print help");
  std::string check_scheme, check_file;
  check->add_option("--scheme", check_scheme, "scheme name");
  check->add_option("--file", check_file, "coefficient file (overrides --scheme)");

  auto* integ = app.add_subcommand("integrate", "write a trajectory CSV");
  integ->set_help_flag("--help", "print help");
  std::string it_problem, it_scheme, it_family = "liecf", it_out;
  double it_h = 0.0, it_t1 = -1.0;
  integ->add_option("--problem", it_problem, "benchmark problem")
      ->required()
      ->check(CLI::IsMember(benchmark_names()));
  integ->add_option("--scheme", it_scheme, "scheme name")->required();
  integ->add_option("--family", it_family, "stepper family")
      ->check(CLI::IsMember({"classical", "classical2n", "liecf", "rkmk"}));
  integ->add_option("--h", it_h, "step size")->required();
  integ->add_option("--t1", it_t1, "final time (default: the case's horizon)");
  integ->add_option("--out", it_out, "output path (default: stdout)");

  auto* conv = app.add_subcommand("converge", "convergence study CSV");
  conv->set_help_flag("--help", "print help");
  std::string cv_problem, cv_family = "liecf", cv_out;
  std::vector<std::string> cv_schemes;
  int cv_nmin = -1, cv_nmax = -1;
  conv->add_option("--problem", cv_problem, "benchmark problem")
      ->required()
      ->check(CLI::IsMember(benchmark_names()));
  conv->add_option("--scheme", cv_schemes, "scheme name(s)")
      ->required()
      ->delimiter(',');
  conv->add_option("--family", cv_family, "stepper family")
      ->check(CLI::IsMember({"classical", "classical2n", "liecf", "rkmk"}));
  conv->add_option("--nmin", cv_nmin, "coarsest step exponent: h = 2^-n");
  conv->add_option("--nmax", cv_nmax, "finest step exponent");
  conv->add_option("--out", cv_out, "output path (default: stdout)");

  auto* conj = app.add_subcommand(
      "conjecture", "verify measured order matches the declared order on all benchmarks");
  conj->set_help_flag("--help", "print help");
  std::string cj_scheme, cj_file;
  conj->add_option("--scheme", cj_scheme, "scheme name (default: the shipped 2N set)");
  conj->add_option("--file", cj_file, "coefficient file (overrides --scheme)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand("list")) return cmd_list();
    if (app.got_subcommand("check"))
      return cmd_check(resolve_scheme(check_scheme, check_file, coeff_dir));
    if (app.got_subcommand("integrate")) {
      const BenchmarkCase c = benchmark_by_name(it_problem);
      const Scheme s = registry_lookup(it_scheme, coeff_dir);
      const StepperConfig cfg = make_config(it_family, s);
      const double t1 = it_t1 < 0.0 ? c.t1 : it_t1;
      if (!(it_h > 0.0)) throw DomainError("step size must be positive");
      if (!(t1 > c.t0)) throw DomainError("final time must exceed the start time");
      return cmd_integrate(c, cfg, it_h, t1, it_out);
    }
    if (app.got_subcommand("converge")) {
      if ((cv_nmin >= 0) != (cv_nmax >= 0))
        throw DomainError("--nmin and --nmax must be given together");
      return cmd_converge(benchmark_by_name(cv_problem), cv_schemes, cv_family,
                          cv_nmin, cv_nmax, coeff_dir, cv_out);
    }
    if (app.got_subcommand("conjecture")) {
      std::vector<Scheme> schemes;
      if (!cj_file.empty() || !cj_scheme.empty()) {
        schemes.push_back(resolve_scheme(cj_scheme, cj_file, coeff_dir));
      } else {
        schemes.push_back(registry_lookup("BWRRK33"));
        schemes.push_back(registry_lookup("TSRKF84"));
        schemes.push_back(registry_lookup("YRK135"));
      }
      return cmd_conjecture(schemes);
    }
  } catch (const DivergenceError& e) {
    std::fprintf(stderr, "error: %s (t = %s)\n", e.what(), fmt17(e.time_of_failure()).c_str());
    return kExitDiverged;
  } catch (const InsufficientDataError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitVerifyFail;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  }
  return kExitUsage;
}
