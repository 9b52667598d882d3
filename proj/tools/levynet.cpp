#include "levynet/levynet.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>

using namespace levynet;
using nlohmann::json;

namespace {

struct Options {
  std::string config;
  std::optional<double> u;
  std::optional<std::string> regime;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
  bool diagnostics = false;
};

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_num(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

class Csv {
 public:
  explicit Csv(std::ostream& os) : os_(os) {}
  Csv& field(const std::string& s) {
    if (!first_) os_ << ',';
    os_ << s;
    first_ = false;
    return *this;
  }
  Csv& field(double x) { return field(num(x)); }
  Csv& omega(const Vector& w) {
    for (Eigen::Index i = 0; i < w.size(); ++i) field(w[i]);
    return *this;
  }
  Csv& omega_header(int n) {
    for (int i = 1; i <= n; ++i) field("omega" + std::to_string(i));
    return *this;
  }
  void end() {
    os_ << '\n';
    first_ = true;
  }

 private:
  std::ostream& os_;
  bool first_ = true;
};

json to_json(const IndexSet& s) {
  json a = json::array();
  for (int i : s) a.push_back(i + 1);
  return a;
}

std::string set_text(const IndexSet& s) {
  std::string t = "{";
  for (size_t i = 0; i < s.size(); ++i) t += (i ? "," : "") + std::to_string(s[i] + 1);
  return t + "}";
}

std::string rate_text(const Rate& r) {
  std::ostringstream os;
  bool first = true;
  for (const auto& t : r.terms()) {
    if (!first) os << " + ";
    first = false;
    os << t.c;
    if (t.e != 0) os << " u^" << t.e;
  }
  return os.str();
}

double resolve_u(const Options& o, const RunConfig& rc) {
  if (o.u) return *o.u;
  if (!rc.u_list.empty()) return rc.u_list.front();
  return 1.0;
}

Regime resolve_regime(const Options& o, const RunConfig& rc) {
  if (o.regime) return *o.regime == "light" ? Regime::light : Regime::heavy;
  if (rc.regime) return *rc.regime;
  throw ConfigError("no regime given; use --regime or the config 'regime' key");
}

const LevyModel& need_input(const RunConfig& rc) {
  if (!rc.input) throw ConfigError("config has no 'input' block");
  return *rc.input;
}

const std::vector<Vector>& need_omegas(const RunConfig& rc) {
  if (rc.omegas.empty()) throw ConfigError("config has no 'omega' block");
  return rc.omegas;
}

SimConfig sim_config(const Options& o, const RunConfig& rc) {
  SimConfig c = rc.simulation.value_or(SimConfig{});
  c.u = resolve_u(o, rc);
  if (o.seed) c.seed = *o.seed;
  return c;
}

int cmd_validate(const Options& o, const RunConfig& rc, std::ostream& os) {
  NetworkSpec spec = build_network(rc.network.routing, rc.network.rates);
  ValidationReport rep = validate_assumptions(spec, resolve_u(o, rc));
  json j;
  j["pass"] = rep.pass();
  j["checks"] = json::array();
  for (const auto& c : rep.checks) j["checks"].push_back({{"id", c.id}, {"pass", c.pass}, {"detail", c.detail}});
  j["warnings"] = rep.warnings;
  os << j.dump(2) << '\n';
  return rep.pass() ? 0 : 1;
}

int cmd_structure(const Options& o, const RunConfig& rc, std::ostream& os) {
  NetworkSpec spec = build_network(rc.network.routing, rc.network.rates);
  RateClassPartition part = partition_rates(spec);
  const int n = spec.size();
  if (o.format == "table") {
    os << "node  phat        parent  S            D            S*           D*           class  frak_r\n";
    for (int j = 0; j < n; ++j) {
      auto [Ss, Ds] = starred_sets(spec, part, j);
      os << std::left << std::setw(6) << j + 1 << std::setw(12) << short_num(spec.phat[j])
         << std::setw(8) << (spec.ancestor[j] < 0 ? std::string("-") : std::to_string(spec.ancestor[j] + 1))
         << std::setw(13) << set_text(spec.sets_S[j]) << std::setw(13) << set_text(spec.sets_D[j])
         << std::setw(13) << set_text(Ss) << std::setw(13) << set_text(Ds) << std::setw(7)
         << part.class_of[j] + 1 << short_num(part.fractions[j]) << '\n';
    }
    os << "\nclass  nodes   reference  rate\n";
    for (int k = 0; k < part.count(); ++k) {
      const auto& c = part.classes[k];
      os << std::left << std::setw(7) << k + 1
         << std::setw(8) << (std::to_string(c.first + 1) + "-" + std::to_string(c.last + 1))
         << std::setw(11) << part.reference_node[k] + 1 << rate_text(part.reference_rate[k]) << '\n';
    }
    return 0;
  }
  json j;
  j["n"] = n;
  j["phat"] = std::vector<double>(spec.phat.data(), spec.phat.data() + n);
  j["nodes"] = json::array();
  for (int i = 0; i < n; ++i) {
    auto [Ss, Ds] = starred_sets(spec, part, i);
    j["nodes"].push_back({{"node", i + 1},
                          {"parent", spec.ancestor[i] < 0 ? json(nullptr) : json(spec.ancestor[i] + 1)},
                          {"S", to_json(spec.sets_S[i])},
                          {"D", to_json(spec.sets_D[i])},
                          {"S_star", to_json(Ss)},
                          {"D_star", to_json(Ds)},
                          {"class", part.class_of[i] + 1},
                          {"fraction", part.fractions[i]}});
  }
  j["classes"] = json::array();
  for (int k = 0; k < part.count(); ++k) {
    const auto& c = part.classes[k];
    IndexSet members;
    for (int i = c.first; i <= c.last; ++i) members.push_back(i);
    json terms = json::array();
    for (const auto& t : part.reference_rate[k].terms()) terms.push_back({{"c", t.c}, {"e", t.e}});
    j["classes"].push_back({{"nodes", to_json(members)},
                            {"anchor", part.anchors[k] + 1},
                            {"reference_node", part.reference_node[k] + 1},
                            {"reference_rate", terms}});
  }
  os << j.dump(2) << '\n';
  return 0;
}

int cmd_lst_exact(const Options& o, const RunConfig& rc, std::ostream& os) {
  NetworkSpec spec = build_network(rc.network.routing, rc.network.rates);
  const LevyModel& model = need_input(rc);
  const auto& omegas = need_omegas(rc);
  const double u = resolve_u(o, rc);
  const int n = spec.size();
  Csv csv(os);
  csv.omega_header(n).field("value");
  if (o.diagnostics) {
    csv.field("prefactor");
    for (int j = 1; j < n; ++j)
      csv.field("factor" + std::to_string(j)).field("removable" + std::to_string(j))
          .field("iterations" + std::to_string(j)).field("residual" + std::to_string(j));
  }
  csv.end();
  for (const auto& w : omegas) {
    LstEvaluation ev = joint_lst_exact(spec, model, w, u);
    csv.omega(w).field(ev.value);
    if (o.diagnostics) {
      csv.field(ev.prefactor);
      for (const auto& f : ev.factors)
        csv.field(f.value).field(f.removable ? "1" : "0").field(std::to_string(f.iterations))
            .field(f.residual);
    }
    csv.end();
  }
  return 0;
}

int cmd_lst_limit(const Options& o, const RunConfig& rc, std::ostream& os) {
  NetworkSpec spec = build_network(rc.network.routing, rc.network.rates);
  RateClassPartition part = partition_rates(spec);
  TailPair tail = tail_pair(need_input(rc), resolve_regime(o, rc));
  const int n = spec.size();
  Csv csv(os);
  csv.omega_header(n).field("value");
  for (int k = 1; k <= part.count(); ++k) csv.field("F" + std::to_string(k));
  for (int k = 1; k <= part.count(); ++k) csv.field("singular" + std::to_string(k));
  csv.end();
  for (const auto& w : need_omegas(rc)) {
    LimitLst l = joint_lst_limit(spec, part, tail, w);
    csv.omega(w).field(l.value);
    for (double f : l.factors) csv.field(f);
    for (bool s : l.singular) csv.field(s ? "1" : "0");
    csv.end();
  }
  return 0;
}

int cmd_simulate(const Options& o, const RunConfig& rc, std::ostream& os, bool compare) {
  NetworkSpec spec = build_network(rc.network.routing, rc.network.rates);
  const LevyModel& model = need_input(rc);
  const auto& omegas = need_omegas(rc);
  SimConfig cfg = sim_config(o, rc);
  auto rows = empirical_lst(simulate_workload(spec, model, cfg), omegas);
  Csv csv(os);
  csv.omega_header(spec.size()).field("empirical").field("se");
  if (compare)
    csv.field("exact").field("gap").field("gap_over_se");
  else
    csv.field("ci_low").field("ci_high");
  csv.end();
  for (const auto& r : rows) {
    csv.omega(r.omega).field(r.mean).field(r.se);
    if (compare) {
      double exact = joint_lst_exact(spec, model, r.omega, cfg.u).value;
      double gap = std::abs(r.mean - exact);
      double ratio = r.se > 0 ? gap / r.se : (gap == 0 ? 0.0 : std::numeric_limits<double>::infinity());
      csv.field(exact).field(gap).field(ratio);
    } else {
      csv.field(r.ci_low).field(r.ci_high);
    }
    csv.end();
  }
  return 0;
}

int cmd_sweep(const Options& o, const RunConfig& rc, std::ostream& os) {
  NetworkSpec spec = build_network(rc.network.routing, rc.network.rates);
  std::vector<double> us = rc.u_list;
  if (o.u) us = {*o.u};
  if (us.empty()) throw ConfigError("sweep needs a 'u' list or --u");
  std::optional<SimConfig> sim;
  if (rc.simulation) {
    sim = *rc.simulation;
    if (o.seed) sim->seed = *o.seed;
  }
  auto rows = convergence_study(spec, need_input(rc), resolve_regime(o, rc), need_omegas(rc), us, sim);
  Csv csv(os);
  csv.field("u").omega_header(spec.size()).field("exact_scaled").field("limit").field("gap");
  if (sim) csv.field("empirical").field("empirical_se");
  csv.end();
  for (const auto& r : rows) {
    csv.field(r.u).omega(r.omega).field(r.exact_scaled).field(r.limit).field(r.gap);
    if (sim) csv.field(r.empirical.value_or(NAN)).field(r.empirical_se.value_or(NAN));
    csv.end();
  }
  return 0;
}

int fail(const std::string& kind, const std::string& message, int code) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Levy-driven tree network workload analysis"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* c) {
    c->add_option("--config", o.config, "run config JSON")->required()->check(CLI::ExistingFile);
    c->add_option("--u", o.u, "scaling parameter u")->check(CLI::PositiveNumber);
    c->add_option("--out", o.out, "output file (default stdout)");
  };
  auto add_regime = [&](CLI::App* c) {
    c->add_option("--regime", o.regime, "light or heavy")->check(CLI::IsMember({"light", "heavy"}));
  };
  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "simulation seed"); };

  auto* validate = app.add_subcommand("validate", "check network assumptions");
  add_common(validate);
  auto* structure = app.add_subcommand("structure", "print structural sets and rate classes");
  add_common(structure);
  structure->add_option("--format", o.format, "json or table")->check(CLI::IsMember({"json", "table"}));
  auto* exact = app.add_subcommand("lst-exact", "exact joint transform");
  add_common(exact);
  exact->add_flag("--diagnostics", o.diagnostics, "per-factor columns");
  auto* limit = app.add_subcommand("lst-limit", "limiting joint transform");
  add_common(limit);
  add_regime(limit);
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo transform estimate");
  add_common(simulate);
  add_seed(simulate);
  auto* compare = app.add_subcommand("compare", "Monte Carlo against exact transform");
  add_common(compare);
  add_seed(compare);
  auto* sweep = app.add_subcommand("sweep", "exact to limit convergence study");
  add_common(sweep);
  add_regime(sweep);
  add_seed(sweep);

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig rc = load_run_config(o.config);
    std::ofstream file;
    if (!o.out.empty()) {
      file.open(o.out);
      if (!file) throw ConfigError("cannot write '" + o.out + "'");
    }
    std::ostream& os = o.out.empty() ? std::cout : file;
    if (*validate) return cmd_validate(o, rc, os);
    if (*structure) return cmd_structure(o, rc, os);
    if (*exact) return cmd_lst_exact(o, rc, os);
    if (*limit) return cmd_lst_limit(o, rc, os);
    if (*simulate) return cmd_simulate(o, rc, os, false);
    if (*compare) return cmd_simulate(o, rc, os, true);
    if (*sweep) return cmd_sweep(o, rc, os);
  } catch (const StructuralError& e) {
    return fail(e.kind(), e.what(), 2);
  } catch (const Error& e) {
    return fail(e.kind(), e.what(), 3);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), 3);
  }
  return 3;
}
