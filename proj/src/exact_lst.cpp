#include "levynet/exact_lst.hpp"

#include "levynet/roots.hpp"

#include <cmath>
#include <sstream>

namespace levynet {

namespace {

void check_node(const NetworkSpec& spec, int j) {
  if (j < 0 || j >= spec.size()) throw DomainError("node index out of range");
}

void check_omega(const NetworkSpec& spec, const Vector& omega) {
  if (omega.size() != spec.size()) throw DomainError("omega has the wrong length");
  for (int i = 0; i < omega.size(); ++i)
    if (!std::isfinite(omega[i]) || omega[i] < 0)
      throw DomainError("omega entries must be finite and nonnegative");
}

double weighted(const NetworkSpec& spec, const Vector& omega, const IndexSet& set) {
  double s = 0;
  for (int i : set) s += spec.phat[i] * omega[i];
  return s;
}

}  // namespace

double psi(const NetworkSpec& spec, const LevyModel& model, int j, double s, double u) {
  check_node(spec, j);
  if (!(s >= 0)) throw DomainError("psi needs s >= 0");
  return spec.rates[j](u) * s + laplace_exponent(model, spec.phat[j] * s);
}

double psi_derivative(const NetworkSpec& spec, const LevyModel& model, int j, double s,
                      double u) {
  check_node(spec, j);
  return spec.rates[j](u) + spec.phat[j] * laplace_exponent_derivative(model, spec.phat[j] * s);
}

double psi_slope(const NetworkSpec& spec, const LevyModel& model, int j, double x, double y,
                 double u) {
  check_node(spec, j);
  const double p = spec.phat[j];
  return spec.rates[j](u) + p * laplace_exponent_slope(model, p * x, p * y);
}

PhiInverse phi_inverse_detail(const NetworkSpec& spec, const LevyModel& model, int j,
                              double x, double u, RootOptions opt) {
  check_node(spec, j);
  if (!(x >= 0) || !std::isfinite(x)) throw DomainError("inverse needs finite x >= 0");
  if (x == 0) return {0.0, 0.0, 0};
  const double r = spec.rates[j](u);
  auto f = [&](double s) { return psi(spec, model, j, s, u); };
  auto df = [&](double s) { return psi_derivative(spec, model, j, s, u); };
  auto res = invert_convex_increasing(f, df, x, x / r, opt.tol, opt.max_iter);
  if (!res.converged) {
    std::ostringstream m;
    m << "inverse of psi_" << j + 1 << " at " << x << " did not converge (residual "
      << res.residual << ")";
    throw NumericalError(m.str());
  }
  return {res.root, res.residual, res.iterations};
}

double phi_inverse(const NetworkSpec& spec, const LevyModel& model, int j, double x, double u,
                   RootOptions opt) {
  return phi_inverse_detail(spec, model, j, x, u, opt).value;
}

double kappa(const NetworkSpec& spec, const Vector& omega, int j, double u, KappaForm form) {
  const int n = spec.size();
  if (j < 0 || j + 1 >= n) throw DomainError("kappa index out of range");
  if (omega.size() != n) throw DomainError("omega has the wrong length");
  Vector c(n);
  for (int l = 0; l < n; ++l) c[l] = spec.rates[l](u) / spec.phat[l];
  double k = 0;
  if (form == KappaForm::sum_over_S) {
    for (int l = j + 1; l < n; ++l) k += (c[l - 1] - c[l]) * weighted(spec, omega, spec.sets_S[l]);
  } else {
    for (int i = j + 1; i < n; ++i) {
      int a = std::max(j, spec.ancestor[i]);
      k += (c[a] - c[i]) * spec.phat[i] * omega[i];
    }
  }
  return k;
}

double delta(const NetworkSpec& spec, const Vector& omega, int j) {
  check_node(spec, j);
  return weighted(spec, omega, spec.sets_S[j]) / spec.phat[j];
}

double delta_hat(const NetworkSpec& spec, const Vector& omega, int j) {
  if (j < 0 || j + 1 >= spec.size()) throw DomainError("node index out of range");
  return weighted(spec, omega, spec.sets_S[j + 1]) / spec.phat[j];
}

LstEvaluation joint_lst_exact(const NetworkSpec& spec, const LevyModel& model,
                              const Vector& omega, double u, RootOptions opt) {
  check_model(model);
  check_omega(spec, omega);
  if (!(u > 0)) throw DomainError("u must be positive");
  const int n = spec.size();
  LstEvaluation ev;
  const double wn = omega[n - 1];
  const double rn = spec.rates[n - 1](u);
  ev.prefactor = wn > 0 ? rn * wn / psi(spec, model, n - 1, wn, u) : 1.0;
  double value = ev.prefactor;
  for (int j = 0; j + 1 < n; ++j) {
    ExactFactor f{};
    f.kappa = kappa(spec, omega, j, u);
    f.delta = delta(spec, omega, j);
    f.delta_hat = delta_hat(spec, omega, j);
    auto inv = phi_inverse_detail(spec, model, j, f.kappa, u, opt);
    const double x = inv.value;
    f.iterations = inv.iterations;
    f.residual = inv.residual;
    f.phi_kappa = x;
    f.phi_minus_delta = x - f.delta;
    f.phi_minus_delta_hat = x - f.delta_hat;
    f.kappa_minus_psi_delta_hat = f.kappa - psi(spec, model, j, f.delta_hat, u);
    f.kappa_minus_psi_delta = f.kappa - psi(spec, model, j, f.delta, u);
    const double s_arg = std::max({1.0, x, f.delta});
    const double s_val = std::max({1.0, f.kappa});
    f.removable = std::abs(f.phi_minus_delta) < 1e-9 * s_arg ||
                  std::abs(f.phi_minus_delta_hat) < 1e-9 * s_arg ||
                  std::abs(f.kappa_minus_psi_delta) < 1e-9 * s_val ||
                  std::abs(f.kappa_minus_psi_delta_hat) < 1e-9 * s_val;
    f.value = psi_slope(spec, model, j, x, f.delta_hat, u) / psi_slope(spec, model, j, x, f.delta, u);
    value *= f.value;
    ev.factors.push_back(f);
  }
  if (!std::isfinite(value) || value <= 0 || value > 1 + 1e-9) {
    std::ostringstream m;
    m << "transform value " << value << " outside (0,1]";
    throw NumericalError(m.str());
  }
  ev.value = std::min(value, 1.0);
  return ev;
}

}  // namespace levynet
