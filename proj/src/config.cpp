#include "levynet/config.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace levynet {

namespace {

using nlohmann::json;

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

void only_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

const json& need(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError("missing key '" + key + "' in " + where);
  return j.at(key);
}

double number(const json& j, const std::string& key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_number()) throw ConfigError("'" + key + "' in " + where + " must be a number");
  double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("'" + key + "' in " + where + " must be finite");
  return x;
}

long integer(const json& j, const std::string& key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_number_integer()) throw ConfigError("'" + key + "' in " + where + " must be an integer");
  return v.get<long>();
}

std::string text(const json& j, const std::string& key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_string()) throw ConfigError("'" + key + "' in " + where + " must be a string");
  return v.get<std::string>();
}

NetworkInput network_from(const json& j) {
  only_keys(j, {"n", "edges", "rates"}, "network");
  long n = integer(j, "n", "network");
  if (n < 1) throw ConfigError("network needs n >= 1");
  NetworkInput in;
  std::vector<Edge> edges;
  const json& E = need(j, "edges", "network");
  if (!E.is_array()) throw ConfigError("'edges' must be an array");
  for (const auto& e : E) {
    only_keys(e, {"from", "to", "p"}, "edge");
    long a = integer(e, "from", "edge"), b = integer(e, "to", "edge");
    if (a < 1 || a > n || b < 1 || b > n) throw ConfigError("edge node index outside 1..n");
    edges.push_back({static_cast<int>(a - 1), static_cast<int>(b - 1), number(e, "p", "edge")});
  }
  try {
    in.routing = RoutingMatrix::from_edges(static_cast<int>(n), edges);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  const json& R = need(j, "rates", "network");
  if (!R.is_array()) throw ConfigError("'rates' must be an array");
  std::vector<std::optional<Rate>> rates(n);
  for (const auto& r : R) {
    only_keys(r, {"node", "terms"}, "rate");
    long node = integer(r, "node", "rate");
    if (node < 1 || node > n) throw ConfigError("rate node index outside 1..n");
    if (rates[node - 1]) throw ConfigError("node " + std::to_string(node) + " has two rates");
    const json& T = need(r, "terms", "rate");
    if (!T.is_array()) throw ConfigError("'terms' must be an array");
    std::vector<Term> terms;
    for (const auto& t : T) {
      only_keys(t, {"c", "e"}, "term");
      terms.push_back({number(t, "c", "term"), number(t, "e", "term")});
    }
    try {
      rates[node - 1] = Rate(terms);
    } catch (const Error& e) {
      throw ConfigError("node " + std::to_string(node) + ": " + e.what());
    }
  }
  for (long i = 0; i < n; ++i) {
    if (!rates[i]) throw ConfigError("node " + std::to_string(i + 1) + " has no rate");
    in.rates.push_back(*rates[i]);
  }
  return in;
}

JobDistribution jobs_from(const json& j) {
  if (!j.is_object()) throw ConfigError("'jobs' must be an object");
  std::string d = text(j, "dist", "jobs");
  if (d == "exponential") {
    only_keys(j, {"dist", "rate"}, "jobs");
    return ExponentialJobs{number(j, "rate", "jobs")};
  }
  if (d == "deterministic") {
    only_keys(j, {"dist", "size"}, "jobs");
    return DeterministicJobs{number(j, "size", "jobs")};
  }
  if (d == "erlang") {
    only_keys(j, {"dist", "shape", "rate"}, "jobs");
    return ErlangJobs{static_cast<int>(integer(j, "shape", "jobs")), number(j, "rate", "jobs")};
  }
  throw ConfigError("unknown job distribution '" + d + "'");
}

LevyModel model_from(const json& j) {
  if (!j.is_object()) throw ConfigError("'input' must be an object");
  std::string kind = text(j, "kind", "input");
  LevyModel m;
  if (kind == "brownian") {
    only_keys(j, {"kind", "variance"}, "input");
    m = Brownian{number(j, "variance", "input")};
  } else if (kind == "stable_sum") {
    only_keys(j, {"kind", "components"}, "input");
    const json& cs = need(j, "components", "input");
    if (!cs.is_array()) throw ConfigError("'components' must be an array");
    StableSum s;
    for (const auto& c : cs) {
      only_keys(c, {"alpha", "C"}, "component");
      s.components.push_back({number(c, "alpha", "component"), number(c, "C", "component")});
    }
    m = s;
  } else if (kind == "centered_gamma") {
    only_keys(j, {"kind", "shape", "rate"}, "input");
    m = CenteredGamma{number(j, "shape", "input"), number(j, "rate", "input")};
  } else if (kind == "compound_poisson") {
    only_keys(j, {"kind", "intensity", "jobs"}, "input");
    m = CompoundPoisson{number(j, "intensity", "input"), jobs_from(need(j, "jobs", "input"))};
  } else {
    throw ConfigError("unknown input kind '" + kind + "'");
  }
  try {
    check_model(m);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  return m;
}

Vector omega_point(const json& p, int n) {
  if (!p.is_array() || static_cast<int>(p.size()) != n)
    throw ConfigError("each omega point needs " + std::to_string(n) + " entries");
  Vector w(n);
  for (int i = 0; i < n; ++i) {
    if (!p[i].is_number()) throw ConfigError("omega entries must be numbers");
    w[i] = p[i].get<double>();
    if (!std::isfinite(w[i]) || w[i] < 0) throw ConfigError("omega entries must be >= 0");
  }
  return w;
}

std::vector<double> axis(const json& a) {
  only_keys(a, {"from", "to", "count", "spacing"}, "omega grid axis");
  double lo = number(a, "from", "omega grid axis"), hi = number(a, "to", "omega grid axis");
  long count = integer(a, "count", "omega grid axis");
  std::string spacing = a.contains("spacing") ? text(a, "spacing", "omega grid axis") : "linear";
  if (count < 1) throw ConfigError("grid count must be >= 1");
  if (lo < 0 || hi < lo) throw ConfigError("grid needs 0 <= from <= to");
  if (spacing != "linear" && spacing != "log") throw ConfigError("spacing must be linear or log");
  if (spacing == "log" && !(lo > 0)) throw ConfigError("log spacing needs from > 0");
  std::vector<double> v;
  for (long i = 0; i < count; ++i) {
    double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    v.push_back(spacing == "log" ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
  }
  if (count > 1) v.back() = hi;
  return v;
}

std::vector<Vector> omegas_from(const json& j, int n) {
  only_keys(j, {"points", "grid"}, "omega");
  if (j.contains("points") == j.contains("grid"))
    throw ConfigError("omega needs exactly one of 'points' or 'grid'");
  std::vector<Vector> out;
  if (j.contains("points")) {
    const json& P = j.at("points");
    if (!P.is_array()) throw ConfigError("'points' must be an array");
    for (const auto& p : P) out.push_back(omega_point(p, n));
    return out;
  }
  const json& G = j.at("grid");
  if (!G.is_array() || static_cast<int>(G.size()) != n)
    throw ConfigError("omega grid needs one axis per node");
  std::vector<std::vector<double>> axes;
  for (const auto& a : G) axes.push_back(axis(a));
  std::vector<int> idx(n, 0);
  while (true) {
    Vector w(n);
    for (int i = 0; i < n; ++i) w[i] = axes[i][idx[i]];
    out.push_back(w);
    int k = n - 1;
    while (k >= 0 && ++idx[k] == static_cast<int>(axes[k].size())) idx[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

SimConfig simulation_from(const json& j) {
  only_keys(j, {"replications", "horizon", "step", "seed", "method", "threads"}, "simulation");
  SimConfig c;
  if (j.contains("replications")) c.replications = static_cast<int>(integer(j, "replications", "simulation"));
  if (j.contains("horizon")) c.horizon = number(j, "horizon", "simulation");
  if (j.contains("step")) c.step = number(j, "step", "simulation");
  if (j.contains("seed")) c.seed = static_cast<std::uint64_t>(integer(j, "seed", "simulation"));
  if (j.contains("threads")) c.threads = static_cast<int>(integer(j, "threads", "simulation"));
  if (j.contains("method")) {
    std::string m = text(j, "method", "simulation");
    if (m == "auto") c.method = SimMethod::automatic;
    else if (m == "event") c.method = SimMethod::event;
    else if (m == "grid") c.method = SimMethod::grid;
    else if (m == "majorant") c.method = SimMethod::majorant;
    else throw ConfigError("unknown simulation method '" + m + "'");
  }
  if (c.replications < 1) throw ConfigError("replications must be >= 1");
  if (!(c.step > 0)) throw ConfigError("step must be positive");
  if (c.horizon && !(*c.horizon > 0)) throw ConfigError("horizon must be positive");
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace

NetworkInput parse_network(const std::string& json_text) { return network_from(parse_text(json_text)); }

LevyModel parse_model(const std::string& json_text) { return model_from(parse_text(json_text)); }

RunConfig parse_run_config(const std::string& json_text, const std::string& base_dir) {
  json j = parse_text(json_text);
  only_keys(j, {"network", "input", "omega", "u", "regime", "simulation"}, "config");
  RunConfig rc;
  const json& net = need(j, "network", "config");
  if (net.is_string()) {
    std::filesystem::path p(net.get<std::string>());
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    rc.network = network_from(parse_text(read_file(p.string())));
  } else {
    rc.network = network_from(net);
  }
  const int n = rc.network.routing.size();
  if (j.contains("input")) rc.input = model_from(j.at("input"));
  if (j.contains("omega")) rc.omegas = omegas_from(j.at("omega"), n);
  if (j.contains("u")) {
    const json& u = j.at("u");
    auto add = [&](const json& v) {
      if (!v.is_number() || !(v.get<double>() > 0)) throw ConfigError("u values must be positive numbers");
      rc.u_list.push_back(v.get<double>());
    };
    if (u.is_array())
      for (const auto& v : u) add(v);
    else
      add(u);
  }
  if (j.contains("regime")) {
    std::string r = text(j, "regime", "config");
    if (r == "light") rc.regime = Regime::light;
    else if (r == "heavy") rc.regime = Regime::heavy;
    else throw ConfigError("regime must be light or heavy");
  }
  if (j.contains("simulation")) rc.simulation = simulation_from(j.at("simulation"));
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  std::string base = std::filesystem::path(path).parent_path().string();
  return parse_run_config(read_file(path), base.empty() ? "." : base);
}

}  // namespace levynet
