#pragma once

#include <vector>

namespace levynet {

struct Term {
  double c;
  double e;
};

// A rate function r(u) = sum_k c_k u^{e_k} with c_k > 0.
// Terms are kept merged by exponent and sorted by decreasing exponent.
class Rate {
 public:
  Rate() = default;
  explicit Rate(std::vector<Term> terms);
  static Rate constant(double c) { return Rate({{c, 0.0}}); }
  static Rate monomial(double c, double e) { return Rate({{c, e}}); }

  double operator()(double u) const;
  const std::vector<Term>& terms() const { return terms_; }
  const Term& leading() const { return terms_.front(); }

  Rate scaled(double c, double e = 0.0) const;

 private:
  std::vector<Term> terms_;
};

// Exponents closer than this are treated as equal.
inline constexpr double kExponentTol = 1e-12;

// lim_{u->inf} a(u)/b(u); +inf when a grows faster.
double ratio_limit(const Rate& a, const Rate& b);

// Sign of lim_{u->inf} (a(u)/wa - b(u)/wb): +1, -1 or 0 when every
// coefficient cancels.
int asymptotic_sign(const Rate& a, double wa, const Rate& b, double wb);

}  // namespace levynet
