#pragma once

#include "levynet/levy.hpp"
#include "levynet/network.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace levynet {

enum class SimMethod { automatic, event, grid, majorant };

struct SimConfig {
  double u = 1.0;
  std::optional<double> horizon;
  double step = 0.01;
  int replications = 1000;
  std::uint64_t seed = 1;
  SimMethod method = SimMethod::automatic;
  int threads = 0;  // 0: LEVYNET_THREADS or hardware concurrency
};

using WorkloadSample = Vector;

// 50 (max phat)^2 dispersion / (min r)^2.
double default_horizon(const NetworkSpec& spec, const LevyModel& model, double u);

SimMethod resolve_method(const LevyModel& model, SimMethod method);

std::vector<WorkloadSample> simulate_workload(const NetworkSpec& spec,
                                              const LevyModel& model,
                                              const SimConfig& cfg);

// Streaming mean and variance; merge is associative.
struct RunningMoments {
  long long count = 0;
  double mean = 0;
  double m2 = 0;
  void push(double x);
  void merge(const RunningMoments& other);
  double variance() const { return count > 1 ? m2 / (count - 1) : 0.0; }
};

struct EmpiricalLst {
  Vector omega;
  double mean;
  double se;
  double ci_low;
  double ci_high;
};

std::vector<EmpiricalLst> empirical_lst(const std::vector<WorkloadSample>& samples,
                                        const std::vector<Vector>& omegas);

struct ConvergenceRow {
  double u;
  Vector omega;
  double exact_scaled;
  double limit;
  double gap;
  std::optional<double> empirical;
  std::optional<double> empirical_se;
};

std::vector<ConvergenceRow> convergence_study(const NetworkSpec& spec,
                                              const LevyModel& model, Regime regime,
                                              const std::vector<Vector>& omegas,
                                              const std::vector<double>& u_list,
                                              std::optional<SimConfig> sim = {});

int worker_count(int requested);

}  // namespace levynet
