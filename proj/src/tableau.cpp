#include "liecf/tableau.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

namespace liecf {

namespace {

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> row_sums(const std::vector<std::vector<double>>& a) {
  std::vector<double> c(a.size(), 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (double x : a[i]) c[i] += x;
  return c;
}

}  // namespace

void validate_tableau(const Tableau& t) {
  const int s = t.stages;
  if (s < 1) throw ShapeError("tableau: stages must be >= 1");
  if ((int)t.a.size() != s || (int)t.b.size() != s || (int)t.c.size() != s)
    throw ShapeError("tableau '" + t.name + "': a/b/c sizes must equal stages");
  for (int i = 0; i < s; ++i)
    if ((int)t.a[i].size() != s)
      throw ShapeError("tableau '" + t.name + "': a must be stages x stages");
  if (t.declared_order < 1)
    throw ConfigError("tableau '" + t.name + "': declared_order must be >= 1");
  for (int i = 0; i < s; ++i) {
    if (!all_finite(t.a[i]))
      throw ConfigError("tableau '" + t.name + "': non-finite entry in a");
    for (int j = i; j < s; ++j)
      if (t.a[i][j] != 0.0)
        throw ConfigError("tableau '" + t.name +
                          "': a must be strictly lower triangular");
  }
  if (!all_finite(t.b) || !all_finite(t.c))
    throw ConfigError("tableau '" + t.name + "': non-finite entry in b or c");
  if (t.c[0] != 0.0)
    throw ConfigError("tableau '" + t.name + "': c[0] must be zero");
  const std::vector<double> sums = row_sums(t.a);
  for (int i = 0; i < s; ++i)
    if (std::abs(t.c[i] - sums[i]) > 1e-14)
      throw ConfigError("tableau '" + t.name +
                        "': c must equal the row sums of a to 1e-14");
}

void validate_two_n_scheme(const TwoNScheme& s) {
  const int n = s.stages;
  if (n < 1) throw ShapeError("2N scheme: stages must be >= 1");
  if ((int)s.A.size() != n || (int)s.B.size() != n || (int)s.C.size() != n)
    throw ShapeError("2N scheme '" + s.name + "': A/B/C sizes must equal stages");
  if (s.declared_order < 1)
    throw ConfigError("2N scheme '" + s.name + "': declared_order must be >= 1");
  if (!all_finite(s.A) || !all_finite(s.B) || !all_finite(s.C))
    throw ConfigError("2N scheme '" + s.name + "': non-finite coefficient");
  if (s.A[0] != 0.0)
    throw ConfigError("2N scheme '" + s.name + "': A[0] must be zero");
  if (s.C[0] != 0.0)
    throw ConfigError("2N scheme '" + s.name + "': C[0] must be zero");
}

Tableau to_butcher(const TwoNScheme& s) {
  validate_two_n_scheme(s);
  const int n = s.stages;
  Tableau t;
  t.name = s.name;
  t.stages = n;
  t.declared_order = s.declared_order;
  t.a.assign(n, std::vector<double>(n, 0.0));
  t.b.assign(n, 0.0);
  // Back-substitution of the defining recurrences: the sub-diagonal entry of
  // each row is B of the previous stage, and entries further left unwind via
  // a_{ij} = A_{j+1} a_{i,j+1} + B_j (and likewise for b).
  for (int i = 1; i < n; ++i) {
    t.a[i][i - 1] = s.B[i - 1];
    for (int j = i - 2; j >= 0; --j) t.a[i][j] = s.A[j + 1] * t.a[i][j + 1] + s.B[j];
  }
  t.b[n - 1] = s.B[n - 1];
  for (int i = n - 2; i >= 0; --i) t.b[i] = s.A[i + 1] * t.b[i + 1] + s.B[i];
  t.c = row_sums(t.a);
  for (int i = 0; i < n; ++i)
    if (std::abs(t.c[i] - s.C[i]) > 1e-12)
      throw ConfigError("2N scheme '" + s.name +
                        "': stage times C disagree with induced row sums");
  return t;
}

TwoNScheme from_butcher(const Tableau& t) {
  validate_tableau(t);
  const int n = t.stages;
  TwoNScheme s;
  s.name = t.name;
  s.stages = n;
  s.declared_order = t.declared_order;
  s.A.assign(n, 0.0);
  s.B.assign(n, 0.0);
  s.C = t.c;
  // The sub-diagonal and the last weight fix B directly.
  s.B[n - 1] = t.b[n - 1];
  for (int j = 0; j + 1 < n; ++j) s.B[j] = t.a[j + 1][j];
  // Each A[k] (k >= 1) is overdetermined by one equation per tableau entry
  // in column k-1 above the sub-diagonal, plus one from the weights:
  //   b[k-1]    = A[k] b[k]    + B[k-1]
  //   a[r][k-1] = A[k] a[r][k] + B[k-1]   for r = k+1 .. n-1
  // Solve from the best-conditioned equation, then check all residuals.
  for (int k = 1; k < n; ++k) {
    std::vector<std::pair<double, double>> eqs;  // lhs * A[k] = rhs
    eqs.emplace_back(t.b[k], t.b[k - 1] - s.B[k - 1]);
    for (int r = k + 1; r < n; ++r)
      eqs.emplace_back(t.a[r][k], t.a[r][k - 1] - s.B[k - 1]);
    size_t pivot = 0;
    for (size_t e = 1; e < eqs.size(); ++e)
      if (std::abs(eqs[e].first) > std::abs(eqs[pivot].first)) pivot = e;
    if (std::abs(eqs[pivot].first) < 1e-14) {
      for (const auto& eq : eqs)
        if (std::abs(eq.second) > 1e-10)
          throw NotTwoNRepresentableError(
              "tableau '" + t.name + "': no two-buffer recurrence exists (stage " +
              std::to_string(k + 1) + " inconsistency " + fmt17(std::abs(eq.second)) + ")");
      s.A[k] = 0.0;
    } else {
      s.A[k] = eqs[pivot].second / eqs[pivot].first;
    }
    for (const auto& eq : eqs) {
      const double residual = std::abs(eq.first * s.A[k] - eq.second);
      if (residual > 1e-10)
        throw NotTwoNRepresentableError(
            "tableau '" + t.name + "': no two-buffer recurrence exists (stage " +
            std::to_string(k + 1) + " residual " + fmt17(residual) + ")");
    }
  }
  return s;
}

namespace {

// Rooted trees up to order 5, enumerated once. A tree is a multiset of child
// trees (stored as non-increasing indices into this same table, so every
// child precedes its parent). `levels` is the canonical level sequence.
struct TreeDef {
  int order;
  std::vector<int> children;
  double gamma;
  std::vector<int> levels;
  std::string label;
};

const std::vector<TreeDef>& tree_table() {
  static const std::vector<TreeDef> table = [] {
    std::vector<TreeDef> ts;
    ts.push_back({1, {}, 1.0, {1}, "1"});
    for (int n = 2; n <= 5; ++n) {
      const int base = (int)ts.size();
      std::vector<int> cur;
      std::function<void(int, int)> rec = [&](int max_idx, int remaining) {
        if (remaining == 0) {
          TreeDef t;
          t.order = n;
          t.children = cur;
          t.gamma = n;
          t.levels = {1};
          for (int ch : cur) {
            t.gamma *= ts[ch].gamma;
            for (int lv : ts[ch].levels) t.levels.push_back(lv + 1);
          }
          std::string lab;
          for (int lv : t.levels) {
            if (!lab.empty()) lab += '.';
            lab += std::to_string(lv);
          }
          t.label = lab;
          ts.push_back(std::move(t));
          return;
        }
        for (int idx = std::min(max_idx, base - 1); idx >= 0; --idx) {
          if (ts[idx].order <= remaining) {
            cur.push_back(idx);
            rec(idx, remaining - ts[idx].order);
            cur.pop_back();
          }
        }
      };
      rec(base - 1, n - 1);
    }
    return ts;
  }();
  return table;
}

}  // namespace

OrderReport classical_order_residuals(const Tableau& t, int up_to) {
  validate_tableau(t);
  if (up_to < 1 || up_to > 5)
    throw DomainError("classical_order_residuals: order conditions implemented for 1..5");
  const auto& trees = tree_table();
  const int s = t.stages;
  // Elementary-weight vectors over stages: phi(leaf) = 1; for a tree with
  // children t1..tm, phi_i = prod_k (sum_j a_ij phi_j(t_k)).
  std::vector<std::vector<double>> phi(trees.size());
  OrderReport rep;
  rep.tolerance = 1e-10;
  for (size_t idx = 0; idx < trees.size(); ++idx) {
    const TreeDef& tr = trees[idx];
    if (tr.order > up_to) break;
    std::vector<double> p(s, 1.0);
    for (int ch : tr.children) {
      for (int i = 0; i < s; ++i) {
        double acc = 0.0;
        for (int j = 0; j < i; ++j) acc += t.a[i][j] * phi[ch][j];
        p[i] *= acc;
      }
    }
    double weight = 0.0;
    for (int i = 0; i < s; ++i) weight += t.b[i] * p[i];
    rep.conditions.push_back({tr.order, tr.label, std::abs(weight - 1.0 / tr.gamma)});
    phi[idx] = std::move(p);
  }
  int satisfied = 0;
  for (int p = 1; p <= up_to; ++p) {
    bool ok = true;
    for (const OrderCondition& cond : rep.conditions)
      if (cond.order <= p && cond.residual > rep.tolerance) ok = false;
    if (!ok) break;
    satisfied = p;
  }
  rep.satisfied_order = satisfied;
  return rep;
}

double williamson_constraint_residual(double c2, double c3) {
  return std::abs(c3 * c3 * (1.0 - c2) + c3 * (c2 * c2 + c2 / 2.0 - 1.0) +
                  (1.0 / 3.0 - c2 / 2.0));
}

double lie_cf3_condition_residual(const Tableau& t) {
  validate_tableau(t);
  if (t.stages != 3)
    throw ShapeError("lie_cf3_condition_residual: requires a 3-stage tableau");
  const double c2 = t.c[1], c3 = t.c[2], a32 = t.a[2][1];
  return std::abs(a32 * c2 * (1.0 - c2) - (3.0 * c3 - 1.0) / 6.0);
}

double crouch_grossman_oc3_residual(const Tableau& t) {
  validate_tableau(t);
  double lhs = 0.0;
  for (int i = 0; i < t.stages; ++i) lhs += t.b[i] * t.b[i] * t.c[i];
  for (int i = 0; i < t.stages; ++i)
    for (int j = i + 1; j < t.stages; ++j) lhs += 2.0 * t.b[i] * t.c[i] * t.b[j];
  return std::abs(lhs - 1.0 / 3.0);
}

const std::string& Scheme::name() const {
  return format == SchemeFormat::TwoN ? two_n.name : tableau.name;
}

int Scheme::stages() const {
  return format == SchemeFormat::TwoN ? two_n.stages : tableau.stages;
}

int Scheme::declared_order() const {
  return format == SchemeFormat::TwoN ? two_n.declared_order : tableau.declared_order;
}

Tableau Scheme::as_tableau() const {
  return format == SchemeFormat::TwoN ? to_butcher(two_n) : tableau;
}

namespace {

Scheme make_two_n(const std::string& name, int order, std::vector<double> A,
                  std::vector<double> B, std::vector<double> C) {
  Scheme s;
  s.format = SchemeFormat::TwoN;
  s.two_n.name = name;
  s.two_n.stages = (int)B.size();
  s.two_n.declared_order = order;
  s.two_n.A = std::move(A);
  s.two_n.B = std::move(B);
  s.two_n.C = std::move(C);
  validate_two_n_scheme(s.two_n);
  (void)to_butcher(s.two_n);  // assert C consistency at construction
  return s;
}

// rows: strictly-lower triangle, row i holds the i entries a_{i,0..i-1}.
Scheme make_butcher(const std::string& name, int order,
                    const std::vector<std::vector<double>>& rows,
                    std::vector<double> b) {
  const int n = (int)b.size();
  Scheme s;
  s.format = SchemeFormat::Butcher;
  s.tableau.name = name;
  s.tableau.stages = n;
  s.tableau.declared_order = order;
  s.tableau.a.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < (int)rows[i].size(); ++j) s.tableau.a[i][j] = rows[i][j];
  s.tableau.b = std::move(b);
  s.tableau.c = row_sums(s.tableau.a);
  validate_tableau(s.tableau);
  return s;
}

std::vector<Scheme> build_registry() {
  std::vector<Scheme> reg;
  reg.push_back(make_two_n(
      "BWRRK33", 3,
      {0.0, -0.637694471842202, -1.306647717737108},
      {0.457379997569388, 0.925296410920922, 0.393813594675071},
      {0.0, 0.457379997569388, 0.792620002430607}));
  reg.push_back(make_two_n(
      "TSRKF84", 4,
      {0.0, -0.5534431294501569, 0.01065987570203490, -0.5515812888932000,
       -1.885790377558741, -5.701295742793264, 2.113903965664793,
       -0.5339578826675280},
      {0.08037936882736950, 0.5388497458569843, 0.01974974409031960,
       0.09911841297339970, 0.7466920411064123, 1.679584245618894,
       0.2433728067008188, 0.1422730459001373},
      {0.0, 0.08037936882736950, 0.3210064250338430, 0.3408501826604660,
       0.3850364824285470, 0.5040052477534100, 0.6578977561168540,
       0.9484087623348481}));
  reg.push_back(make_two_n(
      "YRK135", 5,
      {0.0, -0.33672143119427413, -1.2018205782908164, -2.6261919625495068,
       -1.5418507843260567, -0.2845614242371758, -0.1700096844304301,
       -1.0839412680446804, -11.61787957751822, -4.5205208057464192,
       -35.86177355832474, -0.000021340899996007288, -0.066311516687861348},
      {0.069632640247059393, 0.088918462778092020, 1.0461490123426779,
       0.42761794305080487, 0.20975844551667144, -0.11457151862012136,
       -0.01392019988507068, 4.0330655626956709, 0.35106846752457162,
       -0.16066651367556576, -0.0058633163225038929, 0.077296133865151863,
       0.054301254676908338},
      {0.0, 0.069632640247059393, 0.12861035097891748, 0.34083022189561149,
       0.54063706308495402, 0.59927749518613931, 0.49382042519248519,
       0.48207852767699775, 0.82762865209834452, 0.82923953914857933,
       0.67190565554748019, 0.87194975193167848, 0.94930216564503562}));
  reg.push_back(make_butcher("LUSCHER33", 3,
                             {{}, {1.0 / 4.0}, {-2.0 / 9.0, 8.0 / 9.0}},
                             {1.0 / 4.0, 0.0, 3.0 / 4.0}));
  reg.push_back(make_butcher("RALSTON3", 3, {{}, {0.5}, {0.0, 0.75}},
                             {2.0 / 9.0, 1.0 / 3.0, 4.0 / 9.0}));
  const double r5 = std::sqrt(5.0);
  reg.push_back(make_butcher(
      "RALSTON4", 4,
      {{},
       {2.0 / 5.0},
       {(-2889.0 + 1428.0 * r5) / 1024.0, (3785.0 - 1620.0 * r5) / 1024.0},
       {(-3365.0 + 2094.0 * r5) / 6040.0, (-975.0 - 3046.0 * r5) / 2552.0,
        (467040.0 + 203968.0 * r5) / 240845.0}},
      {(263.0 + 24.0 * r5) / 1812.0, (125.0 - 1000.0 * r5) / 3828.0,
       1024.0 * (3346.0 + 1623.0 * r5) / 5924787.0, (30.0 - 4.0 * r5) / 123.0}));
  reg.push_back(make_butcher(
      "BUTCHER65", 5,
      {{},
       {1.0 / 4.0},
       {1.0 / 8.0, 1.0 / 8.0},
       {0.0, -1.0 / 2.0, 1.0},
       {3.0 / 16.0, 0.0, 0.0, 9.0 / 16.0},
       {-3.0 / 7.0, 2.0 / 7.0, 12.0 / 7.0, -12.0 / 7.0, 8.0 / 7.0}},
      {7.0 / 90.0, 0.0, 32.0 / 90.0, 12.0 / 90.0, 32.0 / 90.0, 7.0 / 90.0}));
  return reg;
}

}  // namespace

const std::vector<Scheme>& registry_builtins() {
  static const std::vector<Scheme> reg = build_registry();
  return reg;
}

Scheme registry_lookup(const std::string& name, const std::string& coeff_dir) {
  for (const Scheme& s : registry_builtins())
    if (s.name() == name) return s;
  if (!coeff_dir.empty()) {
    const std::string path = coeff_dir + "/" + name + ".json";
    if (std::ifstream probe(path); probe.good()) return load_scheme_file(path);
  }
  throw LookupError("unknown scheme: " + name);
}

namespace {

using nlohmann::json;

double parse_coeff(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (!v.is_string())
    throw ConfigError("coefficient file: " + where + " entries must be decimal strings");
  const std::string s = v.get<std::string>();
  const char* begin = s.c_str();
  char* end = nullptr;
  const double x = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw ConfigError("coefficient file: cannot parse number '" + s + "' in " + where);
  return x;
}

std::vector<double> parse_vector(const json& j, const std::string& key) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw ConfigError("coefficient file: missing array '" + key + "'");
  std::vector<double> out;
  for (const json& v : j.at(key)) out.push_back(parse_coeff(v, key));
  return out;
}

json dump_vector(const std::vector<double>& v) {
  json arr = json::array();
  for (double x : v) arr.push_back(fmt17(x));
  return arr;
}

}  // namespace

Scheme parse_scheme_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("coefficient file: invalid JSON: ") + e.what());
  }
  try {
    if (!j.is_object()) throw ConfigError("coefficient file: top level must be an object");
    const std::string name = j.at("name").get<std::string>();
    const std::string format = j.at("format").get<std::string>();
    const int stages = j.at("stages").get<int>();
    const int order = j.at("order").get<int>();
    if (format == "2N") {
      Scheme s;
      s.format = SchemeFormat::TwoN;
      s.two_n.name = name;
      s.two_n.stages = stages;
      s.two_n.declared_order = order;
      s.two_n.A = parse_vector(j, "A");
      s.two_n.B = parse_vector(j, "B");
      s.two_n.C = parse_vector(j, "C");
      validate_two_n_scheme(s.two_n);
      return s;
    }
    if (format == "butcher") {
      Scheme s;
      s.format = SchemeFormat::Butcher;
      s.tableau.name = name;
      s.tableau.stages = stages;
      s.tableau.declared_order = order;
      if (!j.contains("a") || !j.at("a").is_array() || (int)j.at("a").size() != stages)
        throw ConfigError("coefficient file: 'a' must hold one row per stage");
      s.tableau.a.assign(stages, std::vector<double>(stages, 0.0));
      for (int i = 0; i < stages; ++i) {
        const json& row = j.at("a").at(i);
        if (!row.is_array() || (int)row.size() != i)
          throw ConfigError("coefficient file: 'a' row " + std::to_string(i) +
                            " must hold exactly " + std::to_string(i) + " entries");
        for (int k = 0; k < i; ++k)
          s.tableau.a[i][k] = parse_coeff(row.at(k), "a");
      }
      s.tableau.b = parse_vector(j, "b");
      s.tableau.c = parse_vector(j, "c");
      validate_tableau(s.tableau);
      return s;
    }
    throw ConfigError("coefficient file: format must be \"2N\" or \"butcher\"");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("coefficient file: ") + e.what());
  }
}

std::string serialize_scheme_json(const Scheme& s) {
  json j;
  j["name"] = s.name();
  j["stages"] = s.stages();
  j["order"] = s.declared_order();
  if (s.format == SchemeFormat::TwoN) {
    j["format"] = "2N";
    j["A"] = dump_vector(s.two_n.A);
    j["B"] = dump_vector(s.two_n.B);
    j["C"] = dump_vector(s.two_n.C);
  } else {
    j["format"] = "butcher";
    json a = json::array();
    for (int i = 0; i < s.tableau.stages; ++i) {
      json row = json::array();
      for (int k = 0; k < i; ++k) row.push_back(fmt17(s.tableau.a[i][k]));
      a.push_back(row);
    }
    j["a"] = a;
    j["b"] = dump_vector(s.tableau.b);
    j["c"] = dump_vector(s.tableau.c);
  }
  return j.dump(2) + "\n";
}

Scheme load_scheme_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LookupError("cannot open coefficient file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scheme_json(buf.str());
}

void save_scheme_file(const Scheme& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  out << serialize_scheme_json(s);
  if (!out) throw Error("write failed: " + path);
}

}  // namespace liecf
