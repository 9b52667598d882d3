#include "levynet/network.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace levynet {

RoutingMatrix RoutingMatrix::from_edges(int n, const std::vector<Edge>& edges) {
  if (n < 1) throw StructuralError("network needs at least one node");
  RoutingMatrix P(n);
  for (const auto& e : edges) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
      throw StructuralError("edge endpoint out of range");
    P(e.from, e.to) += e.p;
  }
  return P;
}

Vector NetworkSpec::rates_at(double u) const {
  Vector r(size());
  for (int i = 0; i < size(); ++i) r[i] = rates[i](u);
  return r;
}

NetworkSpec build_network(const RoutingMatrix& routing, const RateSchedule& rates) {
  const int n = routing.size();
  if (n < 1) throw StructuralError("network needs at least one node");
  if (static_cast<int>(rates.size()) != n) {
    std::ostringstream m;
    m << "rate schedule has " << rates.size() << " entries for " << n << " nodes";
    throw StructuralError(m.str());
  }
  for (const auto& r : rates)
    if (r.terms().empty()) throw StructuralError("empty rate function");
  NetworkSpec spec;
  spec.routing = routing;
  spec.rates = rates;
  spec.ancestor.assign(n, -1);
  for (int j = 0; j < n; ++j) {
    int parents = 0;
    for (int i = 0; i < n; ++i) {
      double p = routing(i, j);
      if (!std::isfinite(p) || p < 0 || p > 1) {
        std::ostringstream m;
        m << "column " << j + 1 << ": entry p(" << i + 1 << "," << j + 1 << ") outside [0,1]";
        throw StructuralError(m.str());
      }
      if (p == 0) continue;
      if (i >= j) {
        std::ostringstream m;
        m << "column " << j + 1 << ": mass on or below the diagonal at row " << i + 1;
        throw StructuralError(m.str());
      }
      ++parents;
      spec.ancestor[j] = i;
    }
    if (j > 0 && parents != 1) {
      std::ostringstream m;
      m << "column " << j + 1 << " has " << parents << " positive entries, expected exactly one";
      throw StructuralError(m.str());
    }
  }
  for (int i = 0; i < n; ++i) {
    double s = routing.matrix().row(i).sum();
    if (s > 1 + 1e-12) {
      std::ostringstream m;
      m << "row " << i + 1 << " sums to " << s << " > 1";
      throw StructuralError(m.str());
    }
  }
  spec.phat = Vector::Zero(n);
  spec.phat[0] = 1;
  for (int j = 1; j < n; ++j) spec.phat[j] = routing(spec.ancestor[j], j) * spec.phat[spec.ancestor[j]];
  spec.sets_S.resize(n);
  spec.sets_D.resize(n);
  for (int j = 0; j < n; ++j) {
    spec.sets_S[j].push_back(j);
    for (int i = j + 1; i < n; ++i)
      if (spec.ancestor[i] < j) spec.sets_S[j].push_back(i);
    for (int i = 0; i < n; ++i)
      if (routing(j, i) > 0) spec.sets_D[j].push_back(i);
  }
  return spec;
}

std::pair<IndexSet, IndexSet> structural_sets(const NetworkSpec& spec, int j) {
  if (j < 0 || j >= spec.size()) throw DomainError("node index out of range");
  return {spec.sets_S[j], spec.sets_D[j]};
}

bool ValidationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.pass; });
}

bool n2_holds_at(const NetworkSpec& spec, double u) {
  for (int j = 0; j + 1 < spec.size(); ++j)
    if (!(spec.rates[j](u) / spec.phat[j] > spec.rates[j + 1](u) / spec.phat[j + 1])) return false;
  return true;
}

ValidationReport validate_assumptions(const NetworkSpec& spec, double u_probe) {
  if (!(u_probe > 0)) throw DomainError("u_probe must be positive");
  const int n = spec.size();
  ValidationReport rep;
  rep.checks.push_back({"N1", true, "tree routing, strictly upper triangular"});

  std::ostringstream n2;
  bool n2ok = true;
  for (int j = 0; j + 1 < n; ++j) {
    double a = spec.rates[j](u_probe) / spec.phat[j];
    double b = spec.rates[j + 1](u_probe) / spec.phat[j + 1];
    if (!(a > b)) {
      if (!n2ok) n2 << "; ";
      n2ok = false;
      n2 << "r_" << j + 1 << "/phat_" << j + 1 << " = " << a << " <= r_" << j + 2 << "/phat_"
         << j + 2 << " = " << b;
    }
  }
  if (n2ok) n2 << "r_j/phat_j strictly decreasing";
  std::ostringstream id;
  id << "N2@" << u_probe;
  rep.checks.push_back({id.str(), n2ok, n2.str()});

  std::ostringstream asym;
  bool asym_ok = true;
  for (int j = 0; j + 1 < n; ++j) {
    int s = asymptotic_sign(spec.rates[j], spec.phat[j], spec.rates[j + 1], spec.phat[j + 1]);
    if (s != 1) {
      if (!asym_ok) asym << "; ";
      asym_ok = false;
      asym << "pair (" << j + 1 << "," << j + 2 << ") "
           << (s == 0 ? "coincides asymptotically" : "reverses for large u");
    }
  }
  if (asym_ok) asym << "leading terms ordered for large u";
  rep.checks.push_back({"N2-asymptotic", asym_ok, asym.str()});

  std::ostringstream rr;
  bool r_ok = true;
  for (int j = 0; j < n; ++j)
    for (int i = j + 1; i < n; ++i) {
      double lim = ratio_limit(spec.rates[i], spec.rates[j]);
      if (std::isinf(lim)) {
        if (!r_ok) rr << "; ";
        r_ok = false;
        rr << "r_" << i + 1 << "/r_" << j + 1 << " diverges";
      } else if (lim > 1 + 1e-12) {
        std::ostringstream w;
        w << "R: lim r_" << i + 1 << "/r_" << j + 1 << " = " << lim << " exceeds 1";
        rep.warnings.push_back(w.str());
      }
    }
  if (r_ok) rr << "all ratio limits finite";
  rep.checks.push_back({"R", r_ok, rr.str()});

  double fail_lo = 0, fail_hi = 0;
  bool any_fail = false;
  for (int k = 0; k <= 120; ++k) {
    double u = std::pow(10.0, -6 + 0.1 * k);
    if (!n2_holds_at(spec, u)) {
      if (!any_fail) fail_lo = u;
      fail_hi = u;
      any_fail = true;
    }
  }
  if (any_fail) {
    std::ostringstream w;
    w << "N2 fails on the scan grid for u in [" << fail_lo << ", " << fail_hi << "]";
    rep.warnings.push_back(w.str());
  }
  bool grow = true, shrink = true;
  for (const auto& r : spec.rates) {
    grow = grow && r.leading().e > 0;
    shrink = shrink && r.leading().e < 0;
  }
  if (grow) rep.warnings.push_back("all rates grow with u: light-traffic scaling");
  else if (shrink) rep.warnings.push_back("all rates vanish with u: heavy-traffic scaling");
  else rep.warnings.push_back("rates neither all grow nor all vanish with u");
  return rep;
}

}  // namespace levynet
