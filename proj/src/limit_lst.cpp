#include "levynet/limit_lst.hpp"

#include "levynet/roots.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace levynet {

double psi_limit(double alpha, double C, double frak_r, double phat, double s) {
  return frak_r * s + C * std::pow(phat, alpha) * std::pow(s, alpha);
}

double psi_limit_inverse(double alpha, double C, double frak_r, double phat, double x,
                         double tol) {
  if (!(alpha > 1) || !(C > 0) || !(frak_r > 0) || !(phat > 0))
    throw DomainError("limit inverse needs alpha > 1, C > 0, frak_r > 0, phat > 0");
  if (!(x >= 0) || !std::isfinite(x)) throw DomainError("limit inverse needs finite x >= 0");
  if (x == 0) return 0.0;
  const double k = C * std::pow(phat, alpha);
  auto f = [&](double s) { return frak_r * s + k * std::pow(s, alpha); };
  auto df = [&](double s) { return frak_r + k * alpha * std::pow(s, alpha - 1); };
  auto res = invert_convex_increasing(f, df, x, x / frak_r, tol);
  if (!res.converged) {
    std::ostringstream m;
    m << "limit inverse at " << x << " did not converge (residual " << res.residual << ")";
    throw NumericalError(m.str());
  }
  return res.root;
}

namespace {

// Sum of phat_i w_i over S*_l: S_l restricted to the class of l.
double sigma(const NetworkSpec& spec, const RateClassPartition& part, const Vector& w, int l) {
  const auto& I = part.classes[part.class_of[l]];
  double s = 0;
  for (int i : spec.sets_S[l])
    if (I.contains(i)) s += spec.phat[i] * w[i];
  return s;
}

double sum_over_children(const NetworkSpec& spec, const RateClassPartition& part,
                         const Vector& w, int l) {
  const auto& I = part.classes[part.class_of[l]];
  double s = 0;
  for (int m : spec.sets_D[l])
    if (I.contains(m)) s += spec.phat[m] * w[m];
  return s;
}

double frak_F(const NetworkSpec& spec, const RateClassPartition& part, const Vector& w, int j) {
  const auto& I = part.classes[part.class_of[j + 1]];
  const auto& fr = part.fractions;
  const auto& ph = spec.phat;
  double F = 0;
  for (int l = j + 1; l <= I.last; ++l)
    F += (fr[l - 1] / ph[l - 1] - fr[l] / ph[l]) * sigma(spec, part, w, l);
  return F;
}

void check_omega(const NetworkSpec& spec, const Vector& omega) {
  if (omega.size() != spec.size()) throw DomainError("omega has the wrong length");
  for (int i = 0; i < omega.size(); ++i)
    if (!std::isfinite(omega[i]) || omega[i] < 0)
      throw DomainError("omega entries must be finite and nonnegative");
}

bool class_is_zero(const RateClass& I, const Vector& w) {
  for (int i = I.first; i <= I.last; ++i)
    if (w[i] != 0) return false;
  return true;
}

struct ClassConstants {
  double A = 0, A_scale = 0;
  std::vector<NodeConstants> nodes;
};

ClassConstants class_constants(const NetworkSpec& spec, const RateClassPartition& part,
                               const TailPair& tail, const Vector& w, int k) {
  const auto& I = part.classes[k];
  const auto& fr = part.fractions;
  const auto& ph = spec.phat;
  ClassConstants cc;
  double pos = 0, neg = 0;
  for (int l = I.first; l <= I.last; ++l) {
    pos += fr[l] / ph[l] * sum_over_children(spec, part, w, l);
    neg += w[l] * fr[l];
  }
  neg += tail.frakC * std::pow(sigma(spec, part, w, I.first), tail.alpha);
  cc.A = pos - neg;
  cc.A_scale = std::max(pos, neg);
  for (int j = I.first; j < I.last; ++j) {
    NodeConstants nc;
    nc.same_class_next = true;
    nc.F = frak_F(spec, part, w, j);
    nc.psi_inv = psi_limit_inverse(tail.alpha, tail.frakC, fr[j], ph[j], nc.F);
    nc.C = nc.psi_inv - sigma(spec, part, w, j) / ph[j];
    nc.D = nc.psi_inv - sigma(spec, part, w, j + 1) / ph[j];
    cc.nodes.push_back(nc);
  }
  return cc;
}

}  // namespace

LimitConstants limit_constants(const NetworkSpec& spec, const RateClassPartition& part,
                               const TailPair& tail, const Vector& omega) {
  check_omega(spec, omega);
  LimitConstants lc;
  lc.tail = tail;
  lc.nodes.assign(std::max(0, spec.size() - 1), NodeConstants{});
  for (int k = 0; k < part.count(); ++k) {
    auto cc = class_constants(spec, part, tail, omega, k);
    lc.A.push_back(cc.A);
    for (int j = part.classes[k].first; j < part.classes[k].last; ++j)
      lc.nodes[j] = cc.nodes[j - part.classes[k].first];
  }
  return lc;
}

Vector scaled_argument(const RateClassPartition& part, const TailPair& tail,
                       const Vector& omega) {
  Vector w(omega.size());
  for (int i = 0; i < omega.size(); ++i)
    w[i] = omega[i] * std::pow(part.fractions[i], tail.beta);
  return w;
}

std::optional<double> class_factor(const NetworkSpec& spec, const RateClassPartition& part,
                                   const TailPair& tail, const Vector& omega_tilde, int k,
                                   double singular_tol) {
  if (k < 0 || k >= part.count()) throw DomainError("class index out of range");
  check_omega(spec, omega_tilde);
  const auto& I = part.classes[k];
  if (class_is_zero(I, omega_tilde)) return 1.0;
  auto cc = class_constants(spec, part, tail, omega_tilde, k);
  if (!(std::abs(cc.A) > singular_tol * cc.A_scale)) return std::nullopt;
  double value = omega_tilde[I.last] * part.fractions[I.last] / std::abs(cc.A);
  for (std::size_t i = 0; i < cc.nodes.size(); ++i) {
    const auto& nc = cc.nodes[i];
    int j = I.first + static_cast<int>(i);
    double scale = std::max(nc.psi_inv, sigma(spec, part, omega_tilde, j + 1) / spec.phat[j]);
    if (!(std::abs(nc.D) > singular_tol * scale)) return std::nullopt;
    value *= std::abs(nc.C) / std::abs(nc.D);
  }
  return value;
}

SingularResult singular_limit(const NetworkSpec& spec, const RateClassPartition& part,
                              const TailPair& tail, const Vector& omega_tilde, int k,
                              SingularOptions opt) {
  if (k < 0 || k >= part.count()) throw DomainError("class index out of range");
  check_omega(spec, omega_tilde);
  const auto& I = part.classes[k];
  SingularResult res{1.0, {}, {}};
  if (class_is_zero(I, omega_tilde)) return res;
  if (opt.eps.size() < 3) throw DomainError("singular limit needs at least three eps values");
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> U(0.5, 1.5);
  Vector e = Vector::Zero(omega_tilde.size());
  double scale = 0;
  for (int i = I.first; i <= I.last; ++i) {
    e[i] = U(rng);
    scale = std::max(scale, omega_tilde[i]);
  }
  for (double eps : opt.eps) {
    Vector w = omega_tilde + eps * scale * e;
    auto v = class_factor(spec, part, tail, w, k, 0.0);
    if (!v) throw SingularityError("perturbed class factor is still singular", k);
    res.raw.push_back(*v);
  }
  for (std::size_t i = 1; i < opt.eps.size(); ++i) {
    double q = opt.eps[i - 1] / opt.eps[i];
    res.extrapolated.push_back((q * res.raw[i] - res.raw[i - 1]) / (q - 1));
  }
  for (std::size_t i = 1; i < res.extrapolated.size(); ++i) {
    double a = res.extrapolated[i], b = res.extrapolated[i - 1];
    if (!(std::abs(a - b) <= opt.agreement * std::max(std::abs(a), std::abs(b)))) {
      std::ostringstream m;
      m << "singular limit of class " << k + 1 << " did not settle: " << b << " vs " << a;
      throw SingularityError(m.str(), k);
    }
  }
  res.value = res.extrapolated.back();
  return res;
}

LimitLst joint_lst_limit(const NetworkSpec& spec, const RateClassPartition& part,
                         const TailPair& tail, const Vector& omega, SingularOptions opt) {
  check_omega(spec, omega);
  Vector w = scaled_argument(part, tail, omega);
  LimitLst out{1.0, {}, {}};
  for (int k = 0; k < part.count(); ++k) {
    auto f = class_factor(spec, part, tail, w, k);
    bool singular = !f.has_value();
    double v = singular ? singular_limit(spec, part, tail, w, k, opt).value : *f;
    out.factors.push_back(v);
    out.singular.push_back(singular);
    out.value *= v;
  }
  return out;
}

ExpansionCoefficients expansion_coefficients(const NetworkSpec& spec,
                                             const RateClassPartition& part,
                                             const TailPair& tail, const Vector& omega) {
  check_omega(spec, omega);
  const int n = spec.size();
  const auto& fr = part.fractions;
  const auto& ph = spec.phat;
  const double a = tail.alpha, C = tail.frakC, beta = tail.beta;
  Vector w = scaled_argument(part, tail, omega);
  auto tail_sum = [&](int j) {
    const auto& I = part.classes[part.class_of[j]];
    double s = 0;
    for (int l = j; l <= I.last; ++l)
      s += fr[l] / ph[l] * sum_over_children(spec, part, w, l) -
           omega[l] * std::pow(fr[l], a * beta);
    return s;
  };
  ExpansionCoefficients ex;
  ex.a = Vector(n);
  for (int j = 0; j < n; ++j) ex.a[j] = tail_sum(j) - C * std::pow(sigma(spec, part, w, j), a);
  const int m = std::max(0, n - 1);
  ex.b = ex.c = ex.d = ex.f = ex.g = Vector(m);
  for (int j = 0; j + 1 < n; ++j) {
    bool same = part.class_of[j] == part.class_of[j + 1];
    double s0 = sigma(spec, part, w, j), s1 = sigma(spec, part, w, j + 1);
    ex.b[j] = tail_sum(j + 1) - C * std::pow(ph[j], a) * std::pow(s1 / ph[j], a);
    ex.f[j] = same ? frak_F(spec, part, w, j) : fr[j] / ph[j] * s1;
    ex.g[j] = same ? psi_limit_inverse(a, C, fr[j], ph[j], ex.f[j]) : ex.f[j] / fr[j];
    ex.c[j] = (same ? ex.g[j] : 0.0) - s0 / ph[j];
  }
  for (int j = 0; j + 1 < n; ++j) {
    bool same = part.class_of[j] == part.class_of[j + 1];
    ex.d[j] = same ? ex.g[j] - sigma(spec, part, w, j + 1) / ph[j] : ex.a[j + 1] / fr[j];
  }
  return ex;
}

double expansion_a_from_f(const NetworkSpec& spec, const RateClassPartition& part,
                          const TailPair& tail, const Vector& omega, int j) {
  check_omega(spec, omega);
  const int n = spec.size();
  if (j < 0 || j >= n) throw DomainError("node index out of range");
  const auto& fr = part.fractions;
  const auto& ph = spec.phat;
  const double a = tail.alpha, C = tail.frakC, beta = tail.beta;
  if (j == n - 1 || part.class_of[j] != part.class_of[j + 1])
    return -omega[j] * std::pow(fr[j], a * beta) -
           C * std::pow(ph[j], a) * std::pow(omega[j], a) * std::pow(fr[j], a * beta);
  Vector w = scaled_argument(part, tail, omega);
  double s = sigma(spec, part, w, j);
  return frak_F(spec, part, w, j) - fr[j] * s / ph[j] - C * std::pow(s, a);
}

namespace {

// Bracketed bisection, independent of the Newton solver used above.
double invert_by_bisection(double rj, double k, double alpha, double x) {
  if (x <= 0) return 0.0;
  if (alpha == 2.0) return 2 * x / (rj + std::sqrt(rj * rj + 4 * k * x));
  double lo = 0, hi = x / rj;
  for (int it = 0; it < 2000; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (rj * mid + k * std::pow(mid, alpha) < x ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void check_tail(double alpha, double C) {
  if (!(alpha > 1 && alpha <= 2) || !(C > 0))
    throw DomainError("closed forms need alpha in (1,2] and C > 0");
}

}  // namespace

double closed_form_two_layer(const TwoLayerParams& params, const Vector& omega) {
  check_tail(params.alpha, params.C);
  const double a = params.alpha, C = params.C, beta = 1 / (a - 1);
  const int n = static_cast<int>(params.p.size()) + 1;
  if (params.p.empty() || params.frak_r.size() != params.p.size() || omega.size() != n)
    throw DomainError("two-layer parameters do not match omega");
  double F1 = 1 / (1 + C * std::pow(omega[0], a - 1));
  // Index l = 2..n maps to entry l - 2 of p and frak_r.
  auto p = [&](int l) { return params.p[l - 2]; };
  auto r = [&](int l) { return params.frak_r[l - 2]; };
  std::vector<double> w(n + 1);
  bool zero = true;
  for (int l = 2; l <= n; ++l) {
    w[l] = std::pow(r(l), beta) * omega[l - 1];
    zero = zero && w[l] == 0;
  }
  if (zero) return F1;
  double den = 0, pw = 0;
  for (int l = 2; l <= n; ++l) {
    den += w[l] * r(l);
    pw += p(l) * w[l];
  }
  den += C * std::pow(pw, a);
  double F2 = w[n] * r(n) / den;
  for (int j = 2; j <= n - 1; ++j) {
    double arg = 0, tail_j = 0, tail_j1 = 0;
    for (int l = j + 1; l <= n; ++l) arg += (r(j) / p(j) - r(l) / p(l)) * p(l) * w[l];
    for (int l = j; l <= n; ++l) tail_j += p(l) * w[l] / p(j);
    for (int l = j + 1; l <= n; ++l) tail_j1 += p(l) * w[l] / p(j);
    double inv = invert_by_bisection(r(j), C * std::pow(p(j), a), a, arg);
    F2 *= std::abs(inv - tail_j) / std::abs(inv - tail_j1);
  }
  return F1 * F2;
}

double closed_form_tandem(const TandemParams& params, const Vector& omega) {
  check_tail(params.alpha, params.C);
  const double a = params.alpha, C = params.C, beta = 1 / (a - 1);
  const int n = static_cast<int>(params.frak_r.size());
  int total = 0;
  for (int s : params.class_sizes) {
    if (s < 1) throw DomainError("class sizes must be positive");
    total += s;
  }
  if (total != n || omega.size() != n) throw DomainError("tandem parameters do not match omega");
  const auto& r = params.frak_r;
  double value = 1;
  int q = 0;
  for (int s : params.class_sizes) {
    int last = q + s - 1;
    if (r[q] != 1.0) throw DomainError("tandem fractions must equal 1 at each class anchor");
    bool zero = true;
    for (int i = q; i <= last; ++i) zero = zero && omega[i] == 0;
    if (!zero) {
      double den = -omega[q] - C * std::pow(omega[q], a);
      for (int l = q + 1; l <= last; ++l) den += (r[l - 1] - r[l]) * omega[l] * std::pow(r[l], beta);
      double F = omega[last] * std::pow(r[last], a * beta) / den;
      for (int j = q; j < last; ++j) {
        double arg = 0;
        for (int l = j + 1; l <= last; ++l) arg += (r[l - 1] - r[l]) * omega[l] * std::pow(r[l], beta);
        double inv = invert_by_bisection(r[j], C, a, arg);
        F *= (inv - omega[j] * std::pow(r[j], beta)) / (inv - omega[j + 1] * std::pow(r[j + 1], beta));
      }
      value *= std::abs(F);
    }
    q = last + 1;
  }
  return value;
}

}  // namespace levynet
