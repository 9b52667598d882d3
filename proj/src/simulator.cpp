#include "levynet/simulator.hpp"

#include "levynet/exact_lst.hpp"
#include "levynet/limit_lst.hpp"
#include "levynet/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

namespace levynet {

namespace {

std::uint64_t splitmix64(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Running suprema of J(t) - c_j t for every node slope c_j.
Vector suprema_event(const CompoundPoisson& m, const Vector& c, double T, Rng& rng) {
  const double drift = m.intensity * job_moment(m.jobs, 1);
  Vector best = Vector::Zero(c.size());
  double S = 0;
  for (const auto& jump : sample_jumps(m, T, rng)) {
    S += jump.size;
    for (int j = 0; j < c.size(); ++j)
      best[j] = std::max(best[j], S - (drift + c[j]) * jump.time);
  }
  return best;
}

Vector suprema_grid(const LevyModel& m, const Vector& c, double T, double h, Rng& rng) {
  const long steps = std::max(1L, std::lround(T / h));
  Vector best = Vector::Zero(c.size());
  double J = 0;
  for (long k = 1; k <= steps; ++k) {
    J += sample_increment(m, h, rng);
    const double t = k * h;
    for (int j = 0; j < c.size(); ++j) best[j] = std::max(best[j], J - c[j] * t);
  }
  return best;
}

// Faces of the concave majorant on [0, T] from uniform stick breaking; the
// supremum of J(t) - c t is the sum of the positive parts of h - c l.
Vector suprema_majorant(const LevyModel& m, const Vector& c, double T, Rng& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Vector best = Vector::Zero(c.size());
  double rest = T;
  const double floor = T * 1e-16;
  auto face = [&](double len) {
    if (!(len > 0)) return;
    double h = sample_increment(m, len, rng);
    for (int j = 0; j < c.size(); ++j) best[j] += std::max(0.0, h - c[j] * len);
  };
  while (rest > floor) {
    double len = U(rng) * rest;
    face(len);
    rest -= len;
  }
  face(rest);
  return best;
}

}  // namespace

double default_horizon(const NetworkSpec& spec, const LevyModel& model, double u) {
  Vector r = spec.rates_at(u);
  double pmax = spec.phat.maxCoeff();
  double T = 50 * pmax * pmax * dispersion(model) / (r.minCoeff() * r.minCoeff());
  return std::isfinite(T) && T > 0 ? T : 1.0;
}

SimMethod resolve_method(const LevyModel& model, SimMethod method) {
  bool cp = std::holds_alternative<CompoundPoisson>(model);
  if (method == SimMethod::automatic) return cp ? SimMethod::event : SimMethod::majorant;
  if (method == SimMethod::event && !cp)
    throw DomainError("event-driven simulation needs compound Poisson input");
  return method;
}

int worker_count(int requested) {
  int n = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LEVYNET_THREADS")) {
    int cap = std::atoi(env);
    if (cap > 0) n = std::min(n > 0 ? n : cap, cap);
  }
  return std::max(1, n);
}

std::vector<WorkloadSample> simulate_workload(const NetworkSpec& spec, const LevyModel& model,
                                              const SimConfig& cfg) {
  check_model(model);
  if (cfg.replications < 1) throw DomainError("replications must be >= 1");
  if (!(cfg.step > 0)) throw DomainError("grid step must be positive");
  if (!(cfg.u > 0)) throw DomainError("u must be positive");
  if (cfg.horizon && !(*cfg.horizon > 0)) throw DomainError("horizon must be positive");
  const SimMethod method = resolve_method(model, cfg.method);
  double T = cfg.horizon ? *cfg.horizon : default_horizon(spec, model, cfg.u);
  if (!cfg.horizon && method == SimMethod::majorant) T *= 1e4;
  const int n = spec.size();
  Vector c(n);
  for (int j = 0; j < n; ++j) c[j] = spec.rates[j](cfg.u) / spec.phat[j];
  if (c.minCoeff() <= 0) throw DomainError("every node needs a positive rate");

  std::vector<WorkloadSample> out(cfg.replications);
  auto run = [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      Rng rng(splitmix64(cfg.seed, static_cast<std::uint64_t>(i)));
      Vector M;
      switch (method) {
        case SimMethod::event:
          M = suprema_event(std::get<CompoundPoisson>(model), c, T, rng);
          break;
        case SimMethod::grid:
          M = suprema_grid(model, c, T, cfg.step, rng);
          break;
        default:
          M = suprema_majorant(model, c, T, rng);
          break;
      }
      Vector X = spec.phat.cwiseProduct(M);
      Vector Q(n);
      for (int j = 0; j < n; ++j) {
        int a = spec.ancestor[j];
        double q = X[j] - (a >= 0 ? spec.routing(a, j) * X[a] : 0.0);
        if (q < 0 && q > -1e-9 * std::max(1.0, std::abs(X[j]))) q = 0;
        Q[j] = q;
      }
      out[i] = Q;
    }
  };
  const int workers = std::min(worker_count(cfg.threads), cfg.replications);
  if (workers <= 1) {
    run(0, cfg.replications);
  } else {
    std::vector<std::thread> pool;
    const int chunk = (cfg.replications + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      int b = w * chunk, e = std::min(cfg.replications, b + chunk);
      if (b < e) pool.emplace_back(run, b, e);
    }
    for (auto& t : pool) t.join();
  }
  return out;
}

void RunningMoments::push(double x) {
  ++count;
  double d = x - mean;
  mean += d / count;
  m2 += d * (x - mean);
}

void RunningMoments::merge(const RunningMoments& o) {
  if (o.count == 0) return;
  if (count == 0) {
    *this = o;
    return;
  }
  long long total = count + o.count;
  double d = o.mean - mean;
  mean += d * o.count / total;
  m2 += o.m2 + d * d * static_cast<double>(count) * o.count / total;
  count = total;
}

std::vector<EmpiricalLst> empirical_lst(const std::vector<WorkloadSample>& samples,
                                        const std::vector<Vector>& omegas) {
  if (samples.empty()) throw DomainError("empirical transform needs samples");
  std::vector<EmpiricalLst> out;
  for (const auto& w : omegas) {
    if (w.size() != samples.front().size()) throw DomainError("omega has the wrong length");
    RunningMoments acc;
    for (const auto& q : samples) acc.push(std::exp(-w.dot(q)));
    double se = std::sqrt(acc.variance() / acc.count);
    out.push_back({w, acc.mean, se, std::max(0.0, acc.mean - 1.96 * se),
                   std::min(1.0, acc.mean + 1.96 * se)});
  }
  return out;
}

std::vector<ConvergenceRow> convergence_study(const NetworkSpec& spec, const LevyModel& model,
                                              Regime regime, const std::vector<Vector>& omegas,
                                              const std::vector<double>& u_list,
                                              std::optional<SimConfig> sim) {
  const TailPair tail = tail_pair(model, regime);
  const auto part = partition_rates(spec);
  std::vector<double> limits;
  for (const auto& w : omegas) limits.push_back(joint_lst_limit(spec, part, tail, w).value);
  std::vector<ConvergenceRow> rows;
  for (double u : u_list) {
    Vector scale = spec.rates_at(u).array().pow(tail.beta).matrix();
    std::vector<EmpiricalLst> emp;
    if (sim) {
      SimConfig cfg = *sim;
      cfg.u = u;
      auto samples = simulate_workload(spec, model, cfg);
      for (auto& q : samples) q = q.cwiseProduct(scale);
      emp = empirical_lst(samples, omegas);
    }
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      ConvergenceRow row;
      row.u = u;
      row.omega = omegas[i];
      row.exact_scaled = joint_lst_exact(spec, model, omegas[i].cwiseProduct(scale), u).value;
      row.limit = limits[i];
      row.gap = std::abs(row.exact_scaled - row.limit);
      if (sim) {
        row.empirical = emp[i].mean;
        row.empirical_se = emp[i].se;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace levynet
