#include "levynet/levy.hpp"

#include "levynet/roots.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace levynet {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// v - log1p(v), accurate for small v.
double log1p_remainder(double v) {
  if (std::abs(v) < 0.1) {
    double term = v, sum = 0;
    for (int m = 2; m < 60; ++m) {
      term *= -v;
      double add = term / m;
      sum += add;
      if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
    }
    return -sum;
  }
  return v - std::log1p(v);
}

// (v - log1p v) / v.
double gamma_g(double v) {
  if (v == 0) return 0;
  if (std::abs(v) < 0.1) {
    double term = 1, sum = 0;
    for (int m = 2; m < 60; ++m) {
      term *= -v;
      double add = -term / m;
      sum += add;
      if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  return (v - std::log1p(v)) / v;
}

// E B^m / m! for m >= 2, as a lazy sequence.
struct MomentSeries {
  const JobDistribution& jobs;
  double a = 0;
  int m = 1;
  explicit MomentSeries(const JobDistribution& j) : jobs(j) {
    a = job_moment(jobs, 1);
  }
  double next() {
    ++m;
    std::visit(overloaded{[&](const DeterministicJobs& d) { a *= d.size / m; },
                          [&](const ExponentialJobs& e) { a *= 1.0 / e.rate; },
                          [&](const ErlangJobs& e) { a *= (e.shape + m - 1.0) / (m * e.rate); }},
               jobs);
    return a;
  }
};

double job_mean(const JobDistribution& jobs) { return job_moment(jobs, 1); }

// Series scale below which the power series of the job transform is used.
double series_scale(const JobDistribution& jobs) {
  return std::visit(overloaded{[](const DeterministicJobs& d) { return d.size; },
                               [](const ExponentialJobs& e) { return 1.0 / e.rate; },
                               [](const ErlangJobs& e) { return e.shape / e.rate; }},
                    jobs);
}

// b(s) - 1 + s E B.
double cp_h(const JobDistribution& jobs, double s) {
  if (s * series_scale(jobs) < 0.5) {
    MomentSeries ms(jobs);
    double sum = 0, pw = -s;
    for (int m = 2; m < 400; ++m) {
      pw *= -s;
      double add = ms.next() * pw;
      sum += add;
      if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  return std::visit(
      overloaded{[&](const DeterministicJobs& d) { return std::expm1(-s * d.size) + s * d.size; },
                 [&](const ExponentialJobs& e) { return s * s / (e.rate * (e.rate + s)); },
                 [&](const ErlangJobs& e) {
                   return std::expm1(-e.shape * std::log1p(s / e.rate)) + e.shape * s / e.rate;
                 }},
      jobs);
}

// E B + b'(s).
double cp_dh(const JobDistribution& jobs, double s) {
  return std::visit(
      overloaded{[&](const DeterministicJobs& d) { return -d.size * std::expm1(-s * d.size); },
                 [&](const ExponentialJobs& e) {
                   return s * (2 * e.rate + s) / (e.rate * (e.rate + s) * (e.rate + s));
                 },
                 [&](const ErlangJobs& e) {
                   return -(e.shape / e.rate) * std::expm1(-(e.shape + 1.0) * std::log1p(s / e.rate));
                 }},
      jobs);
}

// (h(x) - h(y)) / (x - y), x != y.
double cp_slope(const JobDistribution& jobs, double x, double y) {
  if (const auto* e = std::get_if<ExponentialJobs>(&jobs)) {
    double mu = e->rate;
    return (mu * (x + y) + x * y) / (mu * (mu + x) * (mu + y));
  }
  if (std::max(x, y) * series_scale(jobs) < 0.5) {
    MomentSeries ms(jobs);
    double sum = 0, H = x + y, ypow = y, sign = 1;
    for (int m = 2; m < 400; ++m) {
      double add = sign * ms.next() * H;
      sum += add;
      if (std::abs(add) <= 1e-17 * std::abs(sum)) break;
      ypow *= y;
      H = x * H + ypow;
      sign = -sign;
    }
    return sum;
  }
  double lo = std::min(x, y), hi = std::max(x, y);
  double b_slope = std::visit(
      overloaded{[&](const DeterministicJobs& d) {
                   return std::exp(-lo * d.size) * std::expm1(-(hi - lo) * d.size) / (hi - lo);
                 },
                 [&](const ExponentialJobs&) { return 0.0; },
                 [&](const ErlangJobs& e) {
                   double blo = std::pow(1 + lo / e.rate, -e.shape);
                   return blo * std::expm1(-e.shape * std::log1p((hi - lo) / (e.rate + lo))) /
                          (hi - lo);
                 }},
      jobs);
  return job_mean(jobs) + b_slope;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

void check_model(const LevyModel& model) {
  std::visit(
      overloaded{
          [](const CompoundPoisson& m) {
            require(std::isfinite(m.intensity) && m.intensity >= 0,
                    "compound Poisson intensity must be >= 0");
            std::visit(overloaded{[](const DeterministicJobs& d) {
                                    require(std::isfinite(d.size) && d.size > 0,
                                            "job size must be > 0");
                                  },
                                  [](const ExponentialJobs& e) {
                                    require(std::isfinite(e.rate) && e.rate > 0,
                                            "job rate must be > 0");
                                  },
                                  [](const ErlangJobs& e) {
                                    require(e.shape >= 1 && std::isfinite(e.rate) && e.rate > 0,
                                            "Erlang jobs need shape >= 1 and rate > 0");
                                  }},
                       m.jobs);
          },
          [](const CenteredGamma& m) {
            require(std::isfinite(m.shape) && m.shape > 0 && std::isfinite(m.rate) && m.rate > 0,
                    "gamma input needs shape > 0 and rate > 0");
          },
          [](const StableSum& m) {
            require(!m.components.empty(), "stable sum needs at least one component");
            for (const auto& c : m.components)
              require(c.alpha > 1 && c.alpha <= 2 && std::isfinite(c.C) && c.C > 0,
                      "stable components need alpha in (1,2] and C > 0");
          },
          [](const Brownian& m) {
            require(std::isfinite(m.variance) && m.variance > 0, "variance must be > 0");
          }},
      model);
}

std::string model_name(const LevyModel& model) {
  return std::visit(overloaded{[](const CompoundPoisson&) { return std::string("compound_poisson"); },
                               [](const CenteredGamma&) { return std::string("centered_gamma"); },
                               [](const StableSum&) { return std::string("stable_sum"); },
                               [](const Brownian&) { return std::string("brownian"); }},
                    model);
}

double job_moment(const JobDistribution& jobs, int k) {
  return std::visit(overloaded{[&](const DeterministicJobs& d) { return std::pow(d.size, k); },
                               [&](const ExponentialJobs& e) {
                                 return std::tgamma(k + 1.0) / std::pow(e.rate, k);
                               },
                               [&](const ErlangJobs& e) {
                                 double p = 1;
                                 for (int i = 0; i < k; ++i) p *= (e.shape + i) / e.rate;
                                 return p;
                               }},
                    jobs);
}

double laplace_exponent(const LevyModel& model, double s) {
  if (!(s >= 0)) throw DomainError("Laplace exponent needs s >= 0");
  return std::visit(
      overloaded{[&](const CompoundPoisson& m) { return m.intensity * cp_h(m.jobs, s); },
                 [&](const CenteredGamma& m) { return m.shape * log1p_remainder(s / m.rate); },
                 [&](const StableSum& m) {
                   double v = 0;
                   for (const auto& c : m.components) v += c.C * std::pow(s, c.alpha);
                   return v;
                 },
                 [&](const Brownian& m) { return 0.5 * m.variance * s * s; }},
      model);
}

double laplace_exponent_derivative(const LevyModel& model, double s) {
  if (!(s >= 0)) throw DomainError("Laplace exponent needs s >= 0");
  return std::visit(
      overloaded{[&](const CompoundPoisson& m) { return m.intensity * cp_dh(m.jobs, s); },
                 [&](const CenteredGamma& m) { return m.shape * s / (m.rate * (m.rate + s)); },
                 [&](const StableSum& m) {
                   double v = 0;
                   if (s > 0)
                     for (const auto& c : m.components)
                       v += c.C * c.alpha * std::pow(s, c.alpha - 1);
                   return v;
                 },
                 [&](const Brownian& m) { return m.variance * s; }},
      model);
}

double laplace_exponent_slope(const LevyModel& model, double x, double y) {
  if (!(x >= 0) || !(y >= 0)) throw DomainError("Laplace exponent needs s >= 0");
  if (x == y) return laplace_exponent_derivative(model, x);
  return std::visit(
      overloaded{[&](const CompoundPoisson& m) { return m.intensity * cp_slope(m.jobs, x, y); },
                 [&](const CenteredGamma& m) {
                   double lo = std::min(x, y), hi = std::max(x, y);
                   double g = m.rate;
                   double v = (hi - lo) / (g + lo);
                   return m.shape / (g * (g + lo)) * (lo + g * gamma_g(v));
                 },
                 [&](const StableSum& m) {
                   double v = 0;
                   for (const auto& c : m.components) v += c.C * power_slope(c.alpha, x, y);
                   return v;
                 },
                 [&](const Brownian& m) { return 0.5 * m.variance * (x + y); }},
      model);
}

TailPair tail_pair(const LevyModel& model, Regime regime) {
  check_model(model);
  auto make = [&](double a, double c) { return TailPair{a, c, 1.0 / (a - 1.0), regime}; };
  return std::visit(
      overloaded{[&](const CompoundPoisson& m) {
                   if (regime == Regime::light)
                     throw UnsupportedRegime("compound Poisson input has no light-traffic pair");
                   return make(2.0, m.intensity * job_moment(m.jobs, 2) / 2);
                 },
                 [&](const CenteredGamma& m) {
                   if (regime == Regime::light)
                     throw UnsupportedRegime("gamma input has no light-traffic pair");
                   return make(2.0, m.shape / (2 * m.rate * m.rate));
                 },
                 [&](const StableSum& m) {
                   double a = m.components.front().alpha;
                   for (const auto& c : m.components)
                     a = regime == Regime::heavy ? std::min(a, c.alpha) : std::max(a, c.alpha);
                   double C = 0;
                   for (const auto& c : m.components)
                     if (std::abs(c.alpha - a) <= 1e-12) C += c.C;
                   return make(a, C);
                 },
                 [&](const Brownian& m) { return make(2.0, m.variance / 2); }},
      model);
}

double dispersion(const LevyModel& model) {
  return std::visit(
      overloaded{[](const CompoundPoisson& m) { return m.intensity * job_moment(m.jobs, 2); },
                 [](const CenteredGamma& m) { return m.shape / (m.rate * m.rate); },
                 [](const StableSum& m) {
                   double c = 0;
                   for (const auto& k : m.components) c += k.C;
                   return 2 * c;
                 },
                 [](const Brownian& m) { return m.variance; }},
      model);
}

namespace {

double sample_job(const JobDistribution& jobs, Rng& rng) {
  return std::visit(overloaded{[](const DeterministicJobs& d) { return d.size; },
                               [&](const ExponentialJobs& e) {
                                 return std::exponential_distribution<double>(e.rate)(rng);
                               },
                               [&](const ErlangJobs& e) {
                                 return std::gamma_distribution<double>(e.shape, 1.0 / e.rate)(rng);
                               }},
                    jobs);
}

}  // namespace

double sample_skewed_stable(double alpha, double C, Rng& rng) {
  if (alpha == 2.0) return std::normal_distribution<double>(0.0, std::sqrt(2 * C))(rng);
  const double pi = std::numbers::pi;
  double sigma = std::pow(-C * std::cos(pi * alpha / 2), 1.0 / alpha);
  double V = std::uniform_real_distribution<double>(-pi / 2, pi / 2)(rng);
  double W = std::exponential_distribution<double>(1.0)(rng);
  double t = std::tan(pi * alpha / 2);
  double B = std::atan(t) / alpha;
  double S = std::pow(1 + t * t, 1 / (2 * alpha));
  double X = S * std::sin(alpha * (V + B)) / std::pow(std::cos(V), 1 / alpha) *
             std::pow(std::cos(V - alpha * (V + B)) / W, (1 - alpha) / alpha);
  return sigma * X;
}

double sample_increment(const LevyModel& model, double dt, Rng& rng) {
  if (!(dt > 0)) throw DomainError("increment length must be positive");
  return std::visit(
      overloaded{[&](const CompoundPoisson& m) {
                   if (m.intensity == 0) return 0.0;
                   long k = std::poisson_distribution<long>(m.intensity * dt)(rng);
                   double s = 0;
                   for (long i = 0; i < k; ++i) s += sample_job(m.jobs, rng);
                   return s - m.intensity * dt * job_mean(m.jobs);
                 },
                 [&](const CenteredGamma& m) {
                   double g = std::gamma_distribution<double>(m.shape * dt, 1.0 / m.rate)(rng);
                   return g - m.shape * dt / m.rate;
                 },
                 [&](const StableSum& m) {
                   double s = 0;
                   for (const auto& c : m.components) s += sample_skewed_stable(c.alpha, c.C * dt, rng);
                   return s;
                 },
                 [&](const Brownian& m) {
                   return std::normal_distribution<double>(0.0, std::sqrt(m.variance * dt))(rng);
                 }},
      model);
}

std::vector<Jump> sample_jumps(const CompoundPoisson& model, double horizon, Rng& rng) {
  std::vector<Jump> out;
  if (model.intensity == 0) return out;
  std::exponential_distribution<double> gap(model.intensity);
  double t = gap(rng);
  while (t <= horizon) {
    out.push_back({t, sample_job(model.jobs, rng)});
    t += gap(rng);
  }
  return out;
}

}  // namespace levynet
