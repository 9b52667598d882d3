#pragma once

#include "levynet/exact_lst.hpp"
#include "levynet/levy.hpp"
#include "levynet/network.hpp"
#include "levynet/partition.hpp"

#include <optional>
#include <vector>

namespace levynet {

// Psi(s) = frak_r s + C phat^alpha s^alpha.
double psi_limit(double alpha, double C, double frak_r, double phat, double s);
double psi_limit_inverse(double alpha, double C, double frak_r, double phat, double x,
                         double tol = 1e-12);

struct NodeConstants {
  bool same_class_next = false;  // class_of(j) == class_of(j+1)
  double F = 0;
  double psi_inv = 0;
  double C = 0;
  double D = 0;
};

struct LimitConstants {
  TailPair tail;
  std::vector<double> A;             // per class
  std::vector<NodeConstants> nodes;  // per node j <= n-2
};

// Constants evaluated at the given argument (no frak_r^beta scaling applied).
LimitConstants limit_constants(const NetworkSpec& spec, const RateClassPartition& part,
                               const TailPair& tail, const Vector& omega);

struct LimitLst {
  double value;
  std::vector<double> factors;  // F_k per class
  std::vector<bool> singular;   // factor resolved by singular_limit
};

struct SingularOptions {
  std::vector<double> eps{1e-5, 1e-6, 1e-7};
  double agreement = 1e-4;
  unsigned seed = 20240607u;
};

// Omega scaled by frak_r^beta.
Vector scaled_argument(const RateClassPartition& part, const TailPair& tail,
                       const Vector& omega);

// Class factor F_k evaluated at omega_tilde (already scaled). Returns nullopt when
// |A| or some |D_j| is below tolerance.
std::optional<double> class_factor(const NetworkSpec& spec, const RateClassPartition& part,
                                   const TailPair& tail, const Vector& omega_tilde, int k,
                                   double singular_tol = 1e-9);

LimitLst joint_lst_limit(const NetworkSpec& spec, const RateClassPartition& part,
                         const TailPair& tail, const Vector& omega,
                         SingularOptions opt = {});

struct SingularResult {
  double value;
  std::vector<double> raw;           // F_k along omega* + eps e
  std::vector<double> extrapolated;  // first-order Richardson estimates
};

// Resolves class factor k at an argument where it is 0/0 by perturbation.
SingularResult singular_limit(const NetworkSpec& spec, const RateClassPartition& part,
                              const TailPair& tail, const Vector& omega_tilde, int k,
                              SingularOptions opt = {});

// Coefficients a_j..g_j of the expansion of the exact transform at
// omega*(u) = r(u)^beta omega. a has n entries; the others n-1.
struct ExpansionCoefficients {
  Vector a, b, c, d, f, g;
};

ExpansionCoefficients expansion_coefficients(const NetworkSpec& spec,
                                             const RateClassPartition& part,
                                             const TailPair& tail, const Vector& omega);

// a_j written through f_j and the class indicator.
double expansion_a_from_f(const NetworkSpec& spec, const RateClassPartition& part,
                          const TailPair& tail, const Vector& omega, int j);

struct TwoLayerParams {
  std::vector<double> p;       // p_2..p_n
  std::vector<double> frak_r;  // frak_r_2..frak_r_n
  double alpha;
  double C;
};

struct TandemParams {
  std::vector<int> class_sizes;
  std::vector<double> frak_r;  // per node, 1 at every class anchor
  double alpha;
  double C;
};

double closed_form_two_layer(const TwoLayerParams& params, const Vector& omega);
double closed_form_tandem(const TandemParams& params, const Vector& omega);

}  // namespace levynet
