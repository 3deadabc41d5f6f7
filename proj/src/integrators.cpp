#include "liecf/integrators.hpp"

#include <cmath>
#include <utility>

namespace liecf {

std::string family_name(Family f) {
  switch (f) {
    case Family::ClassicalRk: return "classical";
    case Family::Classical2N: return "classical2n";
    case Family::LieCf2N: return "liecf";
    case Family::Rkmk: return "rkmk";
    case Family::GenericCf: return "genericcf";
  }
  return "unknown";
}

CfCoefficients low_storage_cf_encoding(const Tableau& t) {
  validate_tableau(t);
  const int s = t.stages;
  CfCoefficients cf;
  // Row l of any stage (and of the output, except its last row) holds the
  // difference between consecutive tableau rows, so the per-stage sums
  // telescope back to a[i][j]. The last output row closes with b - a[s-1].
  auto telescoped_row = [&](int l) {
    std::vector<double> row(s, 0.0);
    for (int j = 0; j <= l; ++j)
      row[j] = t.a[l + 1][j] - (l > 0 ? t.a[l][j] : 0.0);
    return row;
  };
  cf.alpha.resize(s);
  for (int i = 0; i < s; ++i)
    for (int l = 0; l < i; ++l) cf.alpha[i].push_back(telescoped_row(l));
  for (int l = 0; l + 1 < s; ++l) cf.beta.push_back(telescoped_row(l));
  std::vector<double> last(s, 0.0);
  for (int j = 0; j < s; ++j) last[j] = t.b[j] - t.a[s - 1][j];
  cf.beta.push_back(last);
  return cf;
}

CfCoefficients crouch_grossman_encoding(const Tableau& t) {
  validate_tableau(t);
  const int s = t.stages;
  CfCoefficients cf;
  cf.alpha.resize(s);
  for (int i = 0; i < s; ++i)
    for (int l = 0; l < i; ++l) {
      std::vector<double> row(s, 0.0);
      row[l] = t.a[i][l];
      cf.alpha[i].push_back(std::move(row));
    }
  for (int l = 0; l < s; ++l) {
    std::vector<double> row(s, 0.0);
    row[l] = t.b[l];
    cf.beta.push_back(std::move(row));
  }
  return cf;
}

namespace {

TwoNScheme coerce_two_n(const Scheme& s) {
  if (s.format == SchemeFormat::TwoN) return s.two_n;
  return from_butcher(s.tableau);
}

}  // namespace

StepperConfig StepperConfig::classical_rk(const Scheme& s) {
  StepperConfig cfg;
  cfg.family = Family::ClassicalRk;
  cfg.scheme = s;
  cfg.tab = s.as_tableau();
  return cfg;
}

StepperConfig StepperConfig::classical_2n(const Scheme& s) {
  StepperConfig cfg;
  cfg.family = Family::Classical2N;
  cfg.scheme = s;
  cfg.tn = coerce_two_n(s);
  cfg.tab = to_butcher(cfg.tn);
  return cfg;
}

StepperConfig StepperConfig::lie_cf_2n(const Scheme& s) {
  StepperConfig cfg;
  cfg.family = Family::LieCf2N;
  cfg.scheme = s;
  cfg.tn = coerce_two_n(s);
  cfg.tab = to_butcher(cfg.tn);
  return cfg;
}

StepperConfig StepperConfig::rkmk(const Scheme& s, int truncation) {
  StepperConfig cfg;
  cfg.family = Family::Rkmk;
  cfg.scheme = s;
  cfg.tab = s.as_tableau();
  cfg.dexpinv_truncation = truncation == 0 ? s.declared_order() : truncation;
  if (cfg.dexpinv_truncation < 1)
    throw ConfigError("rkmk: dexpinv truncation must be >= 1");
  if (cfg.dexpinv_truncation > 9)
    throw ConfigError("rkmk: dexpinv truncation supported up to 9");
  return cfg;
}

StepperConfig StepperConfig::generic_cf(const Tableau& t, const CfCoefficients& cf) {
  validate_tableau(t);
  const int s = t.stages;
  if ((int)cf.alpha.size() != s)
    throw ShapeError("generic_cf: alpha must hold one row list per stage");
  auto check_row = [&](const std::vector<double>& row, const std::string& where) {
    if ((int)row.size() != s)
      throw ShapeError("generic_cf: " + where + " rows must have length stages");
    for (double x : row)
      if (!std::isfinite(x))
        throw ConfigError("generic_cf: non-finite entry in " + where);
  };
  for (int i = 0; i < s; ++i)
    for (const auto& row : cf.alpha[i]) {
      check_row(row, "alpha");
      for (int j = i; j < s; ++j)
        if (row[j] != 0.0)
          throw ConfigError(
              "generic_cf: stage " + std::to_string(i + 1) +
              " references stage derivative " + std::to_string(j + 1) +
              " that is not yet available");
    }
  for (const auto& row : cf.beta) check_row(row, "beta");
  // Consistency sums: the per-column totals must reproduce the declared
  // tableau, which pins the stage times and the classical order.
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      double sum = 0.0;
      for (const auto& row : cf.alpha[i]) sum += row[j];
      if (std::abs(sum - t.a[i][j]) > 1e-12)
        throw ConfigError("generic_cf: alpha sums disagree with tableau entry a[" +
                          std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]");
    }
  for (int j = 0; j < s; ++j) {
    double sum = 0.0;
    for (const auto& row : cf.beta) sum += row[j];
    if (std::abs(sum - t.b[j]) > 1e-12)
      throw ConfigError("generic_cf: beta sums disagree with tableau weight b[" +
                        std::to_string(j + 1) + "]");
  }
  StepperConfig cfg;
  cfg.family = Family::GenericCf;
  cfg.scheme.format = SchemeFormat::Butcher;
  cfg.scheme.tableau = t;
  cfg.tab = t;
  cfg.cf = cf;
  return cfg;
}

Matrix step_classical_rk(const Tableau& t, const Problem& prob, double t0,
                         double h, const Matrix& y) {
  const int s = t.stages;
  std::vector<Matrix> ks;
  ks.reserve(s);
  for (int i = 0; i < s; ++i) {
    Matrix yi = y;
    for (int j = 0; j < i; ++j)
      if (t.a[i][j] != 0.0) yi = yi + (h * t.a[i][j]) * ks[j];
    ks.push_back(prob.rhs(t0 + t.c[i] * h, yi) * yi);
  }
  Matrix out = y;
  for (int i = 0; i < s; ++i)
    if (t.b[i] != 0.0) out = out + (h * t.b[i]) * ks[i];
  return out;
}

Matrix step_classical_2n(const TwoNScheme& s, const Problem& prob, double t0,
                         double h, const Matrix& y_in) {
  Matrix y = y_in;
  Matrix dy = Matrix::zeros(y.rows(), y.cols(), y.field());
  for (int k = 0; k < s.stages; ++k) {
    dy = s.A[k] * dy + h * (prob.rhs(t0 + s.C[k] * h, y) * y);
    y = y + s.B[k] * dy;
  }
  return y;
}

Matrix step_lie_cf_2n(const TwoNScheme& s, const Problem& prob, double t0,
                      double h, const Matrix& Y_in) {
  Matrix Y = Y_in;
  Matrix dY = Matrix::zeros(Y.rows(), Y.rows(), Y.field());
  for (int k = 0; k < s.stages; ++k) {
    dY = s.A[k] * dY + h * prob.rhs(t0 + s.C[k] * h, Y);
    Y = expm(s.B[k] * dY) * Y;
  }
  return Y;
}

Matrix dexpinv(const Matrix& U, const Matrix& V, int p) {
  if (U.rows() != U.cols() || U.rows() != V.rows() || U.cols() != V.cols())
    throw ShapeError("dexpinv: U and V must be square with equal shape");
  if (p < 1) throw ConfigError("dexpinv: truncation must be >= 1");
  if (p > 9) throw ConfigError("dexpinv: Bernoulli table covers truncation <= 9");
  static constexpr double kBernoulli[9] = {
      1.0, -0.5, 1.0 / 6.0, 0.0, -1.0 / 30.0, 0.0, 1.0 / 42.0, 0.0, -1.0 / 30.0};
  Matrix acc = V;
  Matrix ad = V;
  double factorial = 1.0;
  for (int k = 1; k < p; ++k) {
    ad = commutator(U, ad);
    factorial *= k;
    if (kBernoulli[k] != 0.0) acc = acc + (kBernoulli[k] / factorial) * ad;
  }
  return acc;
}

Matrix step_rkmk(const Tableau& t, int trunc, const Problem& prob, double t0,
                 double h, const Matrix& Y) {
  const int s = t.stages;
  std::vector<Matrix> kt;
  kt.reserve(s);
  for (int i = 0; i < s; ++i) {
    Matrix U = Matrix::zeros(Y.rows(), Y.rows(), Y.field());
    for (int j = 0; j < i; ++j)
      if (t.a[i][j] != 0.0) U = U + (h * t.a[i][j]) * kt[j];
    const Matrix Yi = expm(U) * Y;
    const Matrix Ki = prob.rhs(t0 + t.c[i] * h, Yi);
    kt.push_back(dexpinv(U, Ki, trunc));
  }
  Matrix V = Matrix::zeros(Y.rows(), Y.rows(), Y.field());
  for (int i = 0; i < s; ++i)
    if (t.b[i] != 0.0) V = V + (h * t.b[i]) * kt[i];
  return expm(V) * Y;
}

namespace {

// Multiply Y (or the output accumulator) by the exponential of one
// coefficient row. All-zero rows contribute exp(0) = identity and are
// skipped outright.
Matrix apply_cf_row(const std::vector<double>& row, const std::vector<Matrix>& ks,
                    double h, Matrix Y) {
  bool any = false;
  Matrix E;
  for (size_t j = 0; j < row.size() && j < ks.size(); ++j) {
    if (row[j] == 0.0) continue;
    Matrix term = (h * row[j]) * ks[j];
    E = any ? E + term : std::move(term);
    any = true;
  }
  return any ? expm(E) * Y : Y;
}

}  // namespace

Matrix step_generic_cf(const StepperConfig& cfg, const Problem& prob, double t0,
                       double h, const Matrix& Y) {
  const int s = cfg.tab.stages;
  std::vector<Matrix> ks;
  ks.reserve(s);
  for (int i = 0; i < s; ++i) {
    Matrix Yi = Y;
    for (const auto& row : cfg.cf.alpha[i]) Yi = apply_cf_row(row, ks, h, Yi);
    ks.push_back(prob.rhs(t0 + cfg.tab.c[i] * h, Yi));
  }
  Matrix out = Y;
  for (const auto& row : cfg.cf.beta) out = apply_cf_row(row, ks, h, out);
  return out;
}

Matrix step(const StepperConfig& cfg, const Problem& prob, double t0, double h,
            const Matrix& Y) {
  switch (cfg.family) {
    case Family::ClassicalRk:
      return step_classical_rk(cfg.tab, prob, t0, h, Y);
    case Family::Classical2N:
      return step_classical_2n(cfg.tn, prob, t0, h, Y);
    case Family::LieCf2N:
      return step_lie_cf_2n(cfg.tn, prob, t0, h, Y);
    case Family::Rkmk:
      return step_rkmk(cfg.tab, cfg.dexpinv_truncation, prob, t0, h, Y);
    case Family::GenericCf:
      return step_generic_cf(cfg, prob, t0, h, Y);
  }
  throw ConfigError("step: unknown family");
}

Matrix integrate(const StepperConfig& cfg, const Problem& prob, double t0,
                 double t1, double h, const Matrix& Y0) {
  if (!(t1 > t0)) throw DomainError("integrate: t1 must exceed t0");
  if (!(h > 0.0)) throw DomainError("integrate: step size must be positive");
  Matrix Y = Y0;
  double tcur = t0;
  while (tcur < t1) {
    double dt = h;
    bool final_step = false;
    if (dt > t1 - tcur) {
      dt = t1 - tcur;  // land exactly on t1
      final_step = true;
    }
    try {
      Y = step(cfg, prob, tcur, dt, Y);
    } catch (const DomainError&) {
      // A numeric operation inside the step left the representable range
      // (e.g. an overflowing stage state fed to the vector field).
      throw DivergenceError(
          "integrate: state became non-finite (" + prob.name + ", scheme " +
              cfg.scheme.name() + ", h " + std::to_string(h) + ")",
          tcur + dt);
    }
    if (!Y.all_finite())
      throw DivergenceError(
          "integrate: state became non-finite (" + prob.name + ", scheme " +
              cfg.scheme.name() + ", h " + std::to_string(h) + ")",
          tcur + dt);
    tcur = final_step ? t1 : tcur + dt;
  }
  return Y;
}

}  // namespace liecf
