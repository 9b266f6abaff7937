// qgeom: entanglement measures, monotone metrics, family sweeps, identity
// audits and channel application from the command line.
//
// Exit codes: 0 success, 2 validation failure, 3 audit deviation.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qgeom/qgeom.hpp"

namespace {

using namespace qgeom;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitDeviation = 3;

std::string fmt12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct StateSource {
  std::string family;
  std::string file;
  std::optional<double> alpha, p, p1, p2, p4, r;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--family", family, "state family: pure, mems4, mems3, mems2, mjw, nmems, bell");
    cmd->add_option("--file", file, "JSON state file");
    cmd->add_option("--alpha", alpha, "Schmidt coefficient (pure, nmems)");
    cmd->add_option("--p", p, "mixing weight (nmems)");
    cmd->add_option("--p1", p1, "weight of |psi-> (mems2)");
    cmd->add_option("--p2", p2, "weight of |00> (mems4, mems3)");
    cmd->add_option("--p4", p4, "weight of |11> (mems4)");
    cmd->add_option("--r", r, "coherence parameter (mjw)");
  }

  std::string label() const {
    if (!file.empty()) return file;
    std::string s = family + "(";
    bool first = true;
    auto put = [&](const char* n, const std::optional<double>& v) {
      if (!v) return;
      s += (first ? "" : ", ") + std::string(n) + "=" + fmt12(*v);
      first = false;
    };
    put("alpha", alpha), put("p", p), put("p1", p1), put("p2", p2), put("p4", p4), put("r", r);
    return s + ")";
  }

  DensityMatrix load(const Tolerances& tol) const {
    if (!file.empty() && !family.empty()) throw ValidationError("give either --file or --family, not both");
    if (!file.empty()) return load_state(file, tol);
    if (family.empty()) throw ValidationError("a state source is required: --file or --family");
    const auto fam = family_from_name(family);
    if (!fam) throw ValidationError("unknown family '" + family + "'");
    FamilyDescriptor d{*fam, {}};
    auto put = [&](const char* n, const std::optional<double>& v) {
      if (v) d.params[n] = *v;
    };
    put("alpha", alpha), put("p", p), put("p1", p1), put("p2", p2), put("p4", p4), put("r", r);
    return generate(d);
  }
};

struct Settings {
  Tolerances tol;
  std::string mc_name = default_mc_function().name;
  int subsystem = 1;
  double residual_threshold = 1e-10;

  void add_to(CLI::App* cmd, bool with_subsystem = true) {
    cmd->add_option("--mc-function", mc_name, "Morozova-Cencov function")->capture_default_str();
    if (with_subsystem) {
      cmd->add_option("--subsystem", subsystem, "subsystem kept on reduction (1 or 2)")
          ->check(CLI::IsMember({1, 2}))
          ->capture_default_str();
    }
    cmd->add_option("--tol-herm", tol.herm, "Hermiticity tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--tol-psd", tol.psd, "negative-eigenvalue clipping tolerance")->check(CLI::PositiveNumber);
  }

  MCFunction mc() const {
    auto f = find_mc_function(mc_name);
    if (!f) throw ValidationError("unknown MC function '" + mc_name + "'");
    return *f;
  }
  Subsystem part() const { return subsystem == 2 ? Subsystem::Second : Subsystem::First; }
  EvalOptions eval() const { return {part(), mc(), tol}; }
};

ComplexMatrix load_generator(const std::string& spec, std::size_t dim) {
  ComplexMatrix g;
  if (spec == "sx") g = pauli_x();
  else if (spec == "sy") g = pauli_y();
  else if (spec == "sz") g = pauli_z();
  else g = matrix_from_json(read_text_file(spec));
  if (g.rows() != dim) throw ValidationError("generator dimension does not match the state");
  return g;
}

/// Single-qubit base point: the state itself or its reduction.
DensityMatrix base_point(const DensityMatrix& rho, const Settings& s) {
  return rho.dim() == 2 ? rho : reduce(rho, s.part(), s.tol);
}

bool is_maximally_mixed(const DensityMatrix& rho, const Tolerances& tol) {
  const auto v = eigenvalues(rho.matrix(), tol);
  return v.front() - v.back() <= kMaximallyMixedMargin;
}

int cmd_measure(const StateSource& src, const Settings& s) {
  const DensityMatrix rho = src.load(s.tol);
  if (rho.dim() != 4) throw ValidationError("measure requires a two-qubit state");
  std::cout << "state: " << src.label() << '\n';
  std::cout << "negativity  N = " << fmt12(negativity(rho, s.part(), s.tol)) << '\n';
  std::cout << "concurrence C = " << fmt12(concurrence(rho, s.tol)) << '\n';
  for (auto part : {Subsystem::First, Subsystem::Second}) {
    std::cout << "reduced spectrum A" << static_cast<int>(part) << ":";
    for (double v : eigenvalues(reduce(rho, part, s.tol).matrix(), s.tol)) std::cout << ' ' << fmt12(v);
    std::cout << '\n';
  }
  return kExitOk;
}

int cmd_metric(const StateSource& src, const Settings& s, const std::string& generator) {
  const DensityMatrix base = base_point(src.load(s.tol), s);
  const TangentVector a = tangent_from_generator(base, load_generator(generator, 2), s.tol);
  const double k = metric_eval(base, a, s.mc(), s.tol);
  std::cout << "state: " << src.label() << '\n';
  std::cout << "mc-function: " << s.mc_name << "  generator: " << generator << '\n';
  std::cout << "K       = " << fmt12(k) << '\n';
  std::cout << "sqrt(K) = " << fmt12(std::sqrt(k)) << '\n';
  if (is_maximally_mixed(base, s.tol)) {
    std::cout << "note: the single-qubit state is maximally mixed; it commutes with every "
                 "generator, so the tangent i[rho, K] and the metric vanish\n";
  }
  return kExitOk;
}

int cmd_sweep(const std::string& family, int grid, const std::string& out, const Settings& s) {
  const auto fam = family_from_name(family);
  if (!fam) throw ValidationError("unknown family '" + family + "'");
  const SweepTable table = sweep(*fam, grid, s.eval());
  if (out.empty()) {
    write_sweep_csv(std::cout, table);
    std::cerr << "rows: " << table.rows.size() << '\n';
  } else {
    std::ofstream os(out);
    if (!os) throw ValidationError("cannot write " + out);
    write_sweep_csv(os, table);
    std::cout << "rows: " << table.rows.size() << " -> " << out << '\n';
  }
  return kExitOk;
}

int cmd_audit(const std::vector<std::string>& ids, int grid, const std::string& out,
              const std::string& expect, const Settings& s) {
  std::vector<Relation> selected;
  if (ids.empty()) {
    selected = registry();
  } else {
    for (const auto& id : ids) {
      auto rel = find_relation(id);
      if (!rel) throw ValidationError("unknown relation '" + id + "'");
      selected.push_back(*rel);
    }
  }
  AuditOptions opt{grid, s.residual_threshold, s.eval()};
  std::vector<AuditResult> results;
  for (const auto& rel : selected) results.push_back(audit(rel, opt));

  if (!out.empty()) {
    std::ofstream os(out);
    if (!os) throw ValidationError("cannot write " + out);
    write_audit_csv(os, results, s.residual_threshold);
  }
  write_audit_summary(std::cout, results);

  if (!expect.empty()) {
    const auto expected = parse_expected_status(read_text_file(expect));
    bool match = true;
    for (const auto& r : results) {
      auto it = expected.find(r.relation_id);
      const std::string actual(verdict_name(r.verdict));
      if (it == expected.end()) {
        std::cout << "expect: " << r.relation_id << " not listed (actual " << actual << ")\n";
        match = false;
      } else if (it->second != actual) {
        std::cout << "expect: " << r.relation_id << " expected " << it->second << ", got " << actual << '\n';
        match = false;
      }
    }
    std::cout << (match ? "verdicts match expected status\n" : "verdicts differ from expected status\n");
    return match ? kExitOk : kExitDeviation;
  }
  for (const auto& r : results)
    if (r.verdict == Verdict::Deviation) return kExitDeviation;
  return kExitOk;
}

int cmd_channel(const StateSource& src, const Settings& s, const std::string& channel, double q,
                const std::string& out, const std::string& generator, bool literal) {
  const auto kind = channel_kind_from_name(channel);
  if (!kind) throw ValidationError("unknown channel '" + channel + "'");
  const KrausChannel qubit = make_qubit_channel(*kind, q);
  const DensityMatrix rho = src.load(s.tol);
  const KrausChannel ch = rho.dim() == 2 ? qubit : local_product(qubit, qubit);
  const DensityMatrix mapped = apply_channel(ch, rho, s.tol);
  if (out.empty()) {
    std::cout << state_to_json(mapped);
  } else {
    save_state(out, mapped);
    std::cout << "wrote " << out << '\n';
  }
  if (!generator.empty()) {
    const DensityMatrix base = base_point(rho, s);
    const TangentVector a = tangent_from_generator(base, load_generator(generator, 2), s.tol);
    const auto rep = monotonicity_check(base, a, qubit, s.mc(),
                                        literal ? MonotonicityMode::Literal : MonotonicityMode::Standard, s.tol);
    std::cout << "monotonicity (" << (literal ? "literal" : "standard") << ", " << channel << " q=" << fmt12(q)
              << "): ";
    if (rep.skipped) {
      std::cout << "skipped: " << rep.note << '\n';
    } else {
      std::cout << "lhs=" << fmt12(rep.lhs) << " rhs=" << fmt12(rep.rhs)
                << " holds=" << (rep.holds ? "true" : "false") << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monotone metrics on qubit state space and two-qubit entanglement measures"};
  app.require_subcommand(1);

  StateSource src;
  Settings settings;
  std::string generator = "sx";
  std::string out;
  int grid = 50;
  std::vector<std::string> relation_ids;
  std::string expect;
  std::string channel;
  double q = 0.0;
  bool literal = false;
  std::string sweep_family;

  auto* measure = app.add_subcommand("measure", "negativity, concurrence and reduced spectra");
  src.add_to(measure);
  settings.add_to(measure);

  auto* metric = app.add_subcommand("metric", "metric K and sqrt(K) for a tangent i[rho, K]");
  src.add_to(metric);
  settings.add_to(metric);
  metric->add_option("--generator", generator, "sx, sy, sz or a JSON matrix file")->capture_default_str();

  auto* sweep_cmd = app.add_subcommand("sweep", "tabulate measures and metric over a family grid");
  sweep_cmd->add_option("--family", sweep_family, "state family")->required();
  sweep_cmd->add_option("--grid", grid, "grid density")->check(CLI::PositiveNumber)->capture_default_str();
  sweep_cmd->add_option("--out", out, "CSV output path (stdout if omitted)");
  settings.add_to(sweep_cmd);

  auto* audit_cmd = app.add_subcommand("audit", "audit the registered identities");
  audit_cmd->add_option("--relations", relation_ids, "comma-separated relation ids (default: all)")
      ->delimiter(',');
  audit_cmd->add_option("--grid", grid, "grid density per parameter")->check(CLI::Range(2, 100000))
      ->capture_default_str();
  audit_cmd->add_option("--out", out, "CSV report path");
  audit_cmd->add_option("--expect", expect, "expected-status CSV (relation_id,status)");
  audit_cmd->add_option("--residual-threshold", settings.residual_threshold, "CONFIRMED threshold")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  settings.add_to(audit_cmd);

  auto* channel_cmd = app.add_subcommand("channel", "apply a qubit channel (on each qubit of a pair)");
  src.add_to(channel_cmd);
  settings.add_to(channel_cmd);
  channel_cmd->add_option("--channel", channel,
                          "identity, depolarizing, dephasing, amplitude-damping, bit-flip")
      ->required();
  channel_cmd->add_option("--q", q, "channel strength in [0, 1] (gamma for amplitude damping)")
      ->capture_default_str();
  channel_cmd->add_option("--out", out, "output state file (stdout if omitted)");
  channel_cmd->add_option("--generator", generator, "tangent generator for a monotonicity report");
  channel_cmd->add_flag("--literal", literal, "report K at the mapped state with the unmapped tangent");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*measure) return cmd_measure(src, settings);
    if (*metric) return cmd_metric(src, settings, generator);
    if (*sweep_cmd) return cmd_sweep(sweep_family, grid, out, settings);
    if (*audit_cmd) return cmd_audit(relation_ids, grid, out, expect, settings);
    if (*channel_cmd) {
      // --generator defaults to "sx" for `metric`; here it is opt-in.
      const std::string gen = channel_cmd->count("--generator") ? generator : "";
      return cmd_channel(src, settings, channel, q, out, gen, literal);
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const StratumError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}
