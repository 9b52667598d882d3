#include "levynet/monomial.hpp"

#include "levynet/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace levynet {

Rate::Rate(std::vector<Term> terms) {
  if (terms.empty()) throw DomainError("rate needs at least one term");
  for (const auto& t : terms)
    if (!(t.c > 0) || !std::isfinite(t.c) || !std::isfinite(t.e))
      throw DomainError("rate terms need finite c > 0 and finite exponents");
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.e > b.e; });
  for (const auto& t : terms) {
    if (!terms_.empty() && std::abs(terms_.back().e - t.e) <= kExponentTol)
      terms_.back().c += t.c;
    else
      terms_.push_back(t);
  }
}

double Rate::operator()(double u) const {
  double s = 0;
  for (const auto& t : terms_) s += t.c * std::pow(u, t.e);
  return s;
}

Rate Rate::scaled(double c, double e) const {
  std::vector<Term> out;
  for (const auto& t : terms_) out.push_back({t.c * c, t.e + e});
  return Rate(out);
}

double ratio_limit(const Rate& a, const Rate& b) {
  double ea = a.leading().e, eb = b.leading().e;
  if (std::abs(ea - eb) <= kExponentTol) return a.leading().c / b.leading().c;
  return ea > eb ? std::numeric_limits<double>::infinity() : 0.0;
}

int asymptotic_sign(const Rate& a, double wa, const Rate& b, double wb) {
  std::vector<Term> all;
  for (const auto& t : a.terms()) all.push_back({t.c / wa, t.e});
  for (const auto& t : b.terms()) all.push_back({-t.c / wb, t.e});
  std::sort(all.begin(), all.end(), [](const Term& x, const Term& y) { return x.e > y.e; });
  std::size_t i = 0;
  while (i < all.size()) {
    double sum = 0, mag = 0;
    double e = all[i].e;
    for (; i < all.size() && std::abs(all[i].e - e) <= kExponentTol; ++i) {
      sum += all[i].c;
      mag = std::max(mag, std::abs(all[i].c));
    }
    if (std::abs(sum) > 1e-12 * mag) return sum > 0 ? 1 : -1;
  }
  return 0;
}

}  // namespace levynet
