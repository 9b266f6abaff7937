#pragma once

// Registry of closed-form metric/entanglement identities for two-qubit state
// families and an audit engine that evaluates both sides numerically.
//
// The left-hand side is always produced end to end: generate the state, reduce
// it, build the tangent i[rho_A, sigma], evaluate the metric. Entanglement
// measures come from the full two-qubit state.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qgeom/entanglement.hpp"
#include "qgeom/info_geometry.hpp"
#include "qgeom/state_io.hpp"

namespace qgeom {

/// Ordered (name, value) pairs in the family's parameter order.
using Params = std::vector<std::pair<std::string, double>>;

inline double param_value(const Params& p, const std::string& name) {
  for (const auto& [k, v] : p)
    if (k == name) return v;
  throw ValidationError("missing parameter " + name);
}

inline FamilyDescriptor descriptor(Family family, const Params& p) {
  FamilyDescriptor d{family, {}};
  for (const auto& [k, v] : p) d.params[k] = v;
  return d;
}

enum class Generator { SigmaX, SigmaY, SigmaZ };

inline ComplexMatrix generator_matrix(Generator g) {
  switch (g) {
    case Generator::SigmaX: return pauli_x();
    case Generator::SigmaY: return pauli_y();
    case Generator::SigmaZ: return pauli_z();
  }
  return pauli_x();
}

enum class Quantity { K, SqrtK };

/// Everything computed at one parameter point.
struct Evaluation {
  double negativity = 0.0;
  double concurrence = 0.0;
  double k = 0.0;
  double sqrt_k = 0.0;
  double reduced_gap = 0.0;  ///< difference of the reduced-state eigenvalues
};

struct EvalOptions {
  Subsystem subsystem = Subsystem::First;
  MCFunction mc = default_mc_function();
  Tolerances tol = default_tolerances();
};

inline Evaluation evaluate_point(Family family, const Params& params, Generator gen,
                                 const EvalOptions& opt = {}) {
  const DensityMatrix rho = generate(descriptor(family, params));
  const DensityMatrix reduced = reduce(rho, opt.subsystem, opt.tol);
  const auto spectrum = eigenvalues(reduced.matrix(), opt.tol);
  Evaluation e;
  e.reduced_gap = spectrum.front() - spectrum.back();
  e.negativity = negativity(rho, opt.subsystem, opt.tol);
  e.concurrence = concurrence(rho, opt.tol);
  const TangentVector a = tangent_from_generator(reduced, generator_matrix(gen), opt.tol);
  e.k = metric_eval(reduced, a, opt.mc, opt.tol);
  e.sqrt_k = std::sqrt(e.k);
  return e;
}

/// One closed-form right-hand side.
struct Formula {
  std::string text;
  std::function<double(const Params&, const Evaluation&)> eval;
};

struct Relation {
  std::string id;
  Family family;
  std::string description;
  Quantity lhs = Quantity::K;
  Generator generator = Generator::SigmaX;
  /// Raw parameter grid at the given density, before the maximally-mixed exclusion.
  std::function<std::vector<Params>(int)> grid;
  /// Published right-hand sides; several when the identity is stated in more
  /// than one equivalent form. The first is the one reported.
  std::vector<Formula> published;
  std::optional<Formula> corrected;
};

constexpr double kMaximallyMixedMargin = 1e-6;

namespace detail {

inline std::vector<double> interior_points(int n, double lo, double hi) {
  std::vector<double> v;
  for (int k = 1; k <= n; ++k) v.push_back(lo + (hi - lo) * k / (n + 1));
  return v;
}

inline std::vector<double> closed_points(int n, double lo, double hi) {
  std::vector<double> v;
  if (n == 1) return {lo};
  for (int k = 0; k < n; ++k) v.push_back(lo + (hi - lo) * k / (n - 1));
  return v;
}

inline std::vector<Params> one_param(const std::string& name, const std::vector<double>& values) {
  std::vector<Params> out;
  for (double v : values) out.push_back({{name, v}});
  return out;
}

inline void sort_lexicographic(std::vector<Params>& points) {
  std::sort(points.begin(), points.end(), [](const Params& a, const Params& b) {
    for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
      if (a[i].second != b[i].second) return a[i].second < b[i].second;
    return a.size() < b.size();
  });
}

// Rank-4 MEMS points parameterised by u = p2 + p4 and t = p4 / p2.
// u < 1/3 keeps the concurrence p1 - p3 - 2 sqrt(p2 p4) = 1 - 3u positive,
// which also implies the ordering p1 >= p2 >= p3 >= p4; t < 1 keeps p2 != p4.
inline std::vector<Params> mems4_grid(int n) {
  std::vector<Params> out;
  for (double u : closed_points(n, 0.01, 0.32))
    for (double t : closed_points(n, 0.02, 0.98)) {
      const double p2 = u / (1.0 + t);
      out.push_back({{"p2", p2}, {"p4", p2 * t}});
    }
  sort_lexicographic(out);
  return out;
}

inline std::vector<Params> nmems_grid(int n) {
  std::vector<Params> out;
  for (int k = 1; k <= n; ++k)
    for (double a : interior_points(n, 0.0, 1.0))
      out.push_back({{"p", static_cast<double>(k) / n}, {"alpha", a}});
  return out;
}

inline double beta_of(const Params& p) {
  const double a = param_value(p, "alpha");
  return std::sqrt(1.0 - a * a);
}

}  // namespace detail

/// Parameter grid used by `sweep` for each family, boundary points included
/// wherever the generator accepts them.
inline std::vector<Params> family_grid(Family family, int n) {
  using namespace detail;
  switch (family) {
    case Family::PureSchmidt: return one_param("alpha", interior_points(n, 0.0, 1.0));
    case Family::MemsRank4: return mems4_grid(n);
    case Family::MemsRank3: {
      std::vector<double> v;
      for (int k = 1; k <= n; ++k) v.push_back((1.0 / 3.0) * k / n);
      return one_param("p2", v);
    }
    case Family::MemsRank2: return one_param("p1", interior_points(n, 0.0, 1.0));
    case Family::MjwMems: return one_param("r", closed_points(n, 0.0, 1.0));
    case Family::Nmems: return nmems_grid(n);
    case Family::Bell: return {Params{}};
  }
  return {};
}

/// The seven published identities.
inline std::vector<Relation> registry() {
  using detail::beta_of;
  auto C = [](const Evaluation& e) { return e.concurrence; };
  auto N = [](const Evaluation& e) { return e.negativity; };

  std::vector<Relation> rels;

  const std::vector<Formula> pure_forms = {
      {"4(1-C^2)", [=](const Params&, const Evaluation& e) { return 4.0 * (1.0 - C(e) * C(e)); }},
      {"4(1-4N^2)",
       [=](const Params&, const Evaluation& e) { return 4.0 * (1.0 - 4.0 * N(e) * N(e)); }},
  };
  auto pure_grid = [](int n) { return detail::one_param("alpha", detail::interior_points(n, 0.0, 1.0)); };

  rels.push_back({"R1", Family::PureSchmidt, "pure Schmidt state, sigma_x tangent: K = 4(1-4N^2) = 4(1-C^2)",
                  Quantity::K, Generator::SigmaX, pure_grid, pure_forms, std::nullopt});
  rels.push_back({"R2", Family::PureSchmidt, "pure Schmidt state, sigma_y tangent: K = 4(1-4N^2) = 4(1-C^2)",
                  Quantity::K, Generator::SigmaY, pure_grid, pure_forms, std::nullopt});

  rels.push_back({"R3", Family::MemsRank4, "rank-4 MEMS: sqrt K = (2/3)(1-C) - 4 p4", Quantity::SqrtK,
                  Generator::SigmaX, detail::mems4_grid,
                  {{"(2/3)(1-C)-4p4",
                    [=](const Params& p, const Evaluation& e) {
                      return 2.0 / 3.0 * (1.0 - C(e)) - 4.0 * param_value(p, "p4");
                    }}},
                  std::nullopt});

  rels.push_back({"R4", Family::MemsRank3, "rank-3 MEMS: sqrt K = 2(1-C) - 4 p3", Quantity::SqrtK,
                  Generator::SigmaX,
                  [](int n) { return detail::one_param("p2", detail::interior_points(n, 0.0, 1.0 / 3.0)); },
                  {{"2(1-C)-4p3",
                    [=](const Params& p, const Evaluation& e) {
                      const double p3 = param_value(p, "p2");
                      return 2.0 * (1.0 - C(e)) - 4.0 * p3;
                    }}},
                  std::nullopt});

  rels.push_back({"R5", Family::MemsRank2, "rank-2 MEMS: sqrt K = 2(1-C)", Quantity::SqrtK,
                  Generator::SigmaX,
                  [](int n) { return detail::one_param("p1", detail::interior_points(n, 0.0, 1.0)); },
                  {{"2(1-C)", [=](const Params&, const Evaluation& e) { return 2.0 * (1.0 - C(e)); }}},
                  std::nullopt});

  rels.push_back({"R6", Family::MjwMems, "MEMS for negativity: sqrt K = (4/3)(1-N)", Quantity::SqrtK,
                  Generator::SigmaX,
                  [](int n) { return detail::one_param("r", detail::closed_points(n, 0.0, 0.99)); },
                  {{"(4/3)(1-N)", [=](const Params&, const Evaluation& e) { return 4.0 / 3.0 * (1.0 - N(e)); }}},
                  Formula{"(2/3)(1-2N)",
                          [=](const Params&, const Evaluation& e) { return 2.0 / 3.0 * (1.0 - 2.0 * N(e)); }}});

  rels.push_back({"R7", Family::Nmems, "non-maximally entangled mixed state: sqrt K = 2(1 - 2(alpha/beta)C)",
                  Quantity::SqrtK, Generator::SigmaX, detail::nmems_grid,
                  {{"2(1-2(alpha/beta)C)",
                    [=](const Params& p, const Evaluation& e) {
                      return 2.0 * (1.0 - 2.0 * param_value(p, "alpha") / beta_of(p) * C(e));
                    }}},
                  Formula{"2|1-(beta/alpha)C|", [=](const Params& p, const Evaluation& e) {
                            return 2.0 * std::abs(1.0 - beta_of(p) / param_value(p, "alpha") * C(e));
                          }}});
  return rels;
}

inline std::optional<Relation> find_relation(const std::string& id) {
  for (auto& r : registry())
    if (r.id == id) return r;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Audit

enum class Verdict { Confirmed, Deviation };

inline std::string_view verdict_name(Verdict v) {
  return v == Verdict::Confirmed ? "CONFIRMED" : "DEVIATION";
}

struct AuditRow {
  std::string relation_id;
  Params params;
  Evaluation eval;
  double lhs = 0.0;
  double rhs_paper = 0.0;
  double residual_paper = 0.0;  ///< max over all published forms
  std::optional<double> rhs_corrected;
  std::optional<double> residual_corrected;
};

struct SkippedPoint {
  Params params;
  std::string reason;
};

struct AuditResult {
  std::string relation_id;
  std::vector<AuditRow> rows;
  std::vector<Params> excluded;  ///< maximally mixed reduced state
  std::vector<SkippedPoint> skipped;
  double max_residual_paper = 0.0;
  std::optional<double> max_residual_corrected;
  Verdict verdict = Verdict::Deviation;
};

struct AuditOptions {
  int grid_density = 50;
  double residual_threshold = 1e-10;
  EvalOptions eval;
};

inline AuditResult audit(const Relation& rel, const AuditOptions& opt = {}) {
  AuditResult res;
  res.relation_id = rel.id;
  for (const Params& p : rel.grid(opt.grid_density)) {
    Evaluation e;
    try {
      e = evaluate_point(rel.family, p, rel.generator, opt.eval);
    } catch (const StratumError& err) {
      res.skipped.push_back({p, err.what()});
      continue;
    }
    if (e.reduced_gap <= kMaximallyMixedMargin) {
      res.excluded.push_back(p);
      continue;
    }
    AuditRow row;
    row.relation_id = rel.id;
    row.params = p;
    row.eval = e;
    row.lhs = rel.lhs == Quantity::K ? e.k : e.sqrt_k;
    row.rhs_paper = rel.published.front().eval(p, e);
    for (const auto& f : rel.published)
      row.residual_paper = std::max(row.residual_paper, std::abs(row.lhs - f.eval(p, e)));
    res.max_residual_paper = std::max(res.max_residual_paper, row.residual_paper);
    if (rel.corrected) {
      row.rhs_corrected = rel.corrected->eval(p, e);
      row.residual_corrected = std::abs(row.lhs - *row.rhs_corrected);
      res.max_residual_corrected =
          std::max(res.max_residual_corrected.value_or(0.0), *row.residual_corrected);
    }
    res.rows.push_back(std::move(row));
  }
  const bool ok = !res.rows.empty() && res.max_residual_paper < opt.residual_threshold;
  res.verdict = ok ? Verdict::Confirmed : Verdict::Deviation;
  return res;
}

namespace detail {
inline std::string csv_num(double v) { return std::isfinite(v) ? format_g17(v) : "nan"; }

inline std::vector<std::string> param_columns(const std::vector<AuditResult>& results) {
  std::vector<std::string> cols;
  auto add = [&](const Params& p) {
    for (const auto& kv : p)
      if (std::find(cols.begin(), cols.end(), kv.first) == cols.end()) cols.push_back(kv.first);
  };
  for (const auto& r : results) {
    for (const auto& row : r.rows) add(row.params);
    for (const auto& s : r.skipped) add(s.params);
  }
  return cols;
}

inline void write_params(std::ostream& os, const std::vector<std::string>& cols, const Params& p) {
  for (const auto& c : cols) {
    os << ',';
    for (const auto& [k, v] : p)
      if (k == c) os << csv_num(v);
  }
}
}  // namespace detail

/// CSV: relation_id,<params>,lhs,rhs_paper,residual_paper,rhs_corrected,residual_corrected,status
/// Parameter columns are the union over all results; cells are empty where a
/// relation has no such parameter. Skipped points carry status SKIPPED.
inline void write_audit_csv(std::ostream& os, const std::vector<AuditResult>& results,
                            double residual_threshold = 1e-10) {
  const auto cols = detail::param_columns(results);
  os << "relation_id";
  for (const auto& c : cols) os << ',' << c;
  os << ",lhs,rhs_paper,residual_paper,rhs_corrected,residual_corrected,status\n";
  for (const auto& r : results) {
    for (const auto& row : r.rows) {
      os << row.relation_id;
      detail::write_params(os, cols, row.params);
      os << ',' << detail::csv_num(row.lhs) << ',' << detail::csv_num(row.rhs_paper) << ','
         << detail::csv_num(row.residual_paper) << ','
         << (row.rhs_corrected ? detail::csv_num(*row.rhs_corrected) : "") << ','
         << (row.residual_corrected ? detail::csv_num(*row.residual_corrected) : "") << ','
         << (row.residual_paper < residual_threshold ? "CONFIRMED" : "DEVIATION") << '\n';
    }
    for (const auto& s : r.skipped) {
      os << r.relation_id;
      detail::write_params(os, cols, s.params);
      os << ",,,,,,SKIPPED\n";
    }
  }
}

inline void write_audit_summary(std::ostream& os, const std::vector<AuditResult>& results) {
  const auto rels = registry();
  for (const auto& r : results) {
    const auto it = std::find_if(rels.begin(), rels.end(),
                                 [&](const Relation& x) { return x.id == r.relation_id; });
    os << r.relation_id << "  " << verdict_name(r.verdict) << "  points=" << r.rows.size()
       << " excluded=" << r.excluded.size() << " skipped=" << r.skipped.size()
       << "  max_residual_paper=" << detail::csv_num(r.max_residual_paper);
    if (r.max_residual_corrected) {
      os << "  max_residual_corrected=" << detail::csv_num(*r.max_residual_corrected);
      if (it != rels.end() && it->corrected) os << " [" << it->corrected->text << "]";
    }
    os << '\n';
    if (it != rels.end()) os << "    " << it->description << '\n';
    for (const auto& s : r.skipped) {
      os << "    skipped";
      for (const auto& [k, v] : s.params) os << ' ' << k << '=' << detail::csv_num(v);
      os << ": " << s.reason << '\n';
    }
  }
}

/// Parses `relation_id,status` lines (header optional).
inline std::map<std::string, std::string> parse_expected_status(const std::string& text) {
  std::map<std::string, std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.empty() || line == "relation_id,status") continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ValidationError("expected-status line without comma: " + line);
    out[line.substr(0, comma)] = line.substr(comma + 1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sweep

struct SweepRow {
  Params params;
  double negativity = 0.0;
  double concurrence = 0.0;
  double k_sx = 0.0;
  double k_sy = 0.0;
  double sqrt_k_sx = 0.0;
};

struct SweepTable {
  std::vector<std::string> param_names;
  std::vector<SweepRow> rows;
};

inline SweepTable sweep(Family family, const std::vector<Params>& grid, const EvalOptions& opt = {}) {
  SweepTable t;
  for (auto name : family_info(family).params) t.param_names.emplace_back(name);
  std::vector<Params> points = grid;
  detail::sort_lexicographic(points);
  for (const auto& p : points) {
    SweepRow row;
    row.params = p;
    const DensityMatrix rho = generate(descriptor(family, p));
    row.negativity = negativity(rho, opt.subsystem, opt.tol);
    row.concurrence = concurrence(rho, opt.tol);
    const DensityMatrix red = reduce(rho, opt.subsystem, opt.tol);
    auto k_of = [&](Generator g) {
      try {
        return metric_eval(red, tangent_from_generator(red, generator_matrix(g), opt.tol), opt.mc, opt.tol);
      } catch (const StratumError&) {
        return std::numeric_limits<double>::quiet_NaN();
      }
    };
    row.k_sx = k_of(Generator::SigmaX);
    row.k_sy = k_of(Generator::SigmaY);
    row.sqrt_k_sx = std::sqrt(row.k_sx);
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline SweepTable sweep(Family family, int density, const EvalOptions& opt = {}) {
  return sweep(family, family_grid(family, density), opt);
}

inline void write_sweep_csv(std::ostream& os, const SweepTable& t) {
  for (const auto& n : t.param_names) os << n << ',';
  os << "negativity,concurrence,K_sx,K_sy,sqrtK_sx\n";
  for (const auto& r : t.rows) {
    for (const auto& [k, v] : r.params) os << detail::csv_num(v) << ',';
    os << detail::csv_num(r.negativity) << ',' << detail::csv_num(r.concurrence) << ','
       << detail::csv_num(r.k_sx) << ',' << detail::csv_num(r.k_sy) << ','
       << detail::csv_num(r.sqrt_k_sx) << '\n';
  }
}

}  // namespace qgeom
