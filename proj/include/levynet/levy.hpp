#pragma once

#include "levynet/types.hpp"

#include <random>
#include <string>
#include <variant>
#include <vector>

namespace levynet {

using Rng = std::mt19937_64;

struct DeterministicJobs {
  double size;
};
struct ExponentialJobs {
  double rate;
};
struct ErlangJobs {
  int shape;
  double rate;
};
using JobDistribution = std::variant<DeterministicJobs, ExponentialJobs, ErlangJobs>;

struct CompoundPoisson {
  double intensity;
  JobDistribution jobs;
};

struct CenteredGamma {
  double shape;
  double rate;
};

struct StableComponent {
  double alpha;
  double C;
};

struct StableSum {
  std::vector<StableComponent> components;
};

struct Brownian {
  double variance;
};

using LevyModel = std::variant<CompoundPoisson, CenteredGamma, StableSum, Brownian>;

enum class Regime { light, heavy };

struct TailPair {
  double alpha;
  double frakC;
  double beta;
  Regime regime;
};

// Throws DomainError on invalid parameters.
void check_model(const LevyModel& model);
std::string model_name(const LevyModel& model);

// E B^k for the job law.
double job_moment(const JobDistribution& jobs, int k);

// phi(s) = log E exp(-s J(1)).
double laplace_exponent(const LevyModel& model, double s);
double laplace_exponent_derivative(const LevyModel& model, double s);
// (phi(x) - phi(y)) / (x - y), and phi'(x) when x == y.
double laplace_exponent_slope(const LevyModel& model, double x, double y);

TailPair tail_pair(const LevyModel& model, Regime regime);

// Var J(1) when finite; 2 sum C_k for stable sums.
double dispersion(const LevyModel& model);

double sample_increment(const LevyModel& model, double dt, Rng& rng);

struct Jump {
  double time;
  double size;
};

// Jump epochs and sizes of a compound Poisson input on [0, horizon].
std::vector<Jump> sample_jumps(const CompoundPoisson& model, double horizon, Rng& rng);

// Totally skewed stable draw with E exp(-s X) = exp(C s^alpha).
double sample_skewed_stable(double alpha, double C, Rng& rng);

}  // namespace levynet
