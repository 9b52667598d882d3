#pragma once

#include "levynet/levy.hpp"
#include "levynet/network.hpp"

#include <vector>

namespace levynet {

struct RootOptions {
  double tol = 1e-12;
  int max_iter = 200;
};

// psi_j(s) = r_j(u) s + phi(phat_j s).
double psi(const NetworkSpec& spec, const LevyModel& model, int j, double s, double u);
double psi_derivative(const NetworkSpec& spec, const LevyModel& model, int j, double s,
                      double u);
// (psi_j(x) - psi_j(y)) / (x - y), continuous at x == y.
double psi_slope(const NetworkSpec& spec, const LevyModel& model, int j, double x,
                 double y, double u);

struct PhiInverse {
  double value;
  double residual;
  int iterations;
};

PhiInverse phi_inverse_detail(const NetworkSpec& spec, const LevyModel& model, int j,
                              double x, double u, RootOptions opt = {});
double phi_inverse(const NetworkSpec& spec, const LevyModel& model, int j, double x,
                   double u, RootOptions opt = {});

enum class KappaForm { sum_over_S, max_ancestor };

// kappa for the factor at node j (0 <= j <= n-2), i.e. the quantity attached to
// the pair (j, j+1).
double kappa(const NetworkSpec& spec, const Vector& omega, int j, double u,
             KappaForm form = KappaForm::sum_over_S);

double delta(const NetworkSpec& spec, const Vector& omega, int j);
double delta_hat(const NetworkSpec& spec, const Vector& omega, int j);

struct ExactFactor {
  double kappa;
  double delta;
  double delta_hat;
  double phi_kappa;
  double phi_minus_delta;
  double phi_minus_delta_hat;
  double kappa_minus_psi_delta_hat;
  double kappa_minus_psi_delta;
  double value;
  bool removable;  // raw quotient is 0/0-like at this omega
  int iterations;
  double residual;
};

struct LstEvaluation {
  double value;
  double prefactor;
  std::vector<ExactFactor> factors;
};

LstEvaluation joint_lst_exact(const NetworkSpec& spec, const LevyModel& model,
                              const Vector& omega, double u, RootOptions opt = {});

}  // namespace levynet
