#include <doctest.h>

#include "oracles.hpp"

#include <cstdlib>

using namespace levynet;

namespace {

NetworkSpec tandem2(double r1, double r2) {
  RoutingMatrix P(2);
  P(0, 1) = 1;
  return build_network(P, {Rate::constant(r1), Rate::constant(r2)});
}

NetworkSpec single(double r) { return build_network(RoutingMatrix(1), {Rate::constant(r)}); }

}  // namespace

TEST_CASE("degenerate input gives empty workload") {
  SimConfig cfg;
  cfg.replications = 50;
  auto s = simulate_workload(single(1.0), CompoundPoisson{0.0, ExponentialJobs{1}}, cfg);
  REQUIRE(s.size() == 50);
  for (auto& q : s) CHECK(q[0] == 0.0);
}

TEST_CASE("method resolution") {
  CHECK(resolve_method(CompoundPoisson{1, ExponentialJobs{1}}, SimMethod::automatic) ==
        SimMethod::event);
  CHECK(resolve_method(Brownian{1}, SimMethod::automatic) == SimMethod::majorant);
  CHECK(resolve_method(StableSum{{{1.5, 1}}}, SimMethod::automatic) == SimMethod::majorant);
  CHECK_THROWS_AS(resolve_method(Brownian{1}, SimMethod::event), DomainError);
  CHECK(default_horizon(single(2.0), Brownian{4.0}, 1.0) == doctest::Approx(50.0));
}

TEST_CASE("single-node Brownian workload is exponential") {
  double r = 1.5, s2 = 2.0;
  SimConfig cfg;
  cfg.replications = 10000;
  cfg.seed = 3;
  auto s = simulate_workload(single(r), Brownian{s2}, cfg);
  std::vector<double> x;
  for (auto& q : s) x.push_back(q[0]);
  double rate = 2 * r / s2;
  double p = oracle::ks_pvalue(x, [&](double v) { return 1 - std::exp(-rate * v); });
  CHECK(p > 0.01);

  cfg.method = SimMethod::grid;
  cfg.replications = 2000;
  cfg.step = 0.1;
  auto coarse = simulate_workload(single(r), Brownian{s2}, cfg);
  cfg.step = 0.025;
  auto fine = simulate_workload(single(r), Brownian{s2}, cfg);
  std::vector<Vector> om{Vector::Constant(1, 1.0)};
  double exact = joint_lst_exact(single(r), Brownian{s2}, om[0], 1.0).value;
  auto ec = empirical_lst(coarse, om)[0];
  auto ef = empirical_lst(fine, om)[0];
  CHECK(ec.mean > ef.mean);
  CHECK(ef.mean > exact - 3 * ef.se);
}

TEST_CASE("M/M/1 workload tail") {
  double lam = 1, mu = 2, r = 0.5, c = r + lam / mu;
  SimConfig cfg;
  cfg.replications = 20000;
  cfg.seed = 4;
  auto s = simulate_workload(single(r), CompoundPoisson{lam, ExponentialJobs{mu}}, cfg);
  for (double x : {0.0, 0.5, 1.0, 2.0}) {
    double want = lam / (c * mu) * std::exp(-(mu - lam / c) * x);
    double hit = 0;
    for (auto& q : s) hit += q[0] > x;
    hit /= s.size();
    double se = std::sqrt(want * (1 - want) / s.size());
    CHECK(std::abs(hit - want) < 4 * se);
  }
}

TEST_CASE("seed determinism and thread independence") {
  auto spec = oracle::six_node();
  SimConfig cfg;
  cfg.u = 3;
  cfg.replications = 64;
  cfg.seed = 11;
  for (const LevyModel& m : std::vector<LevyModel>{Brownian{50}, CompoundPoisson{20, ErlangJobs{2, 1}},
                                                   StableSum{{{1.5, 5}}}}) {
    cfg.threads = 1;
    auto a = simulate_workload(spec, m, cfg);
    auto b = simulate_workload(spec, m, cfg);
    cfg.threads = 3;
    auto c = simulate_workload(spec, m, cfg);
    for (int i = 0; i < cfg.replications; ++i) {
      CHECK(a[i] == b[i]);
      CHECK(a[i] == c[i]);
      CHECK(a[i].minCoeff() >= 0.0);
    }
    cfg.seed = 12;
    auto d = simulate_workload(spec, m, cfg);
    CHECK_FALSE(a[0] == d[0]);
    cfg.seed = 11;
  }
  CHECK(worker_count(2) == 2);
  CHECK(worker_count(0) >= 1);
}

TEST_CASE("empirical transform basics") {
  std::vector<WorkloadSample> s{Vector::Constant(2, 0.5), (Vector(2) << 1.0, 0.0).finished(),
                                Vector::Constant(2, 2.0)};
  auto e = empirical_lst(s, {Vector::Zero(2), Vector::Constant(2, 1.0), Vector::Constant(2, 5.0),
                             Vector::Constant(2, 500.0)});
  CHECK(e[0].mean == 1.0);
  CHECK(e[0].se == 0.0);
  CHECK(e[1].mean > e[2].mean);
  CHECK(e[2].mean > e[3].mean);
  CHECK(e[3].mean >= 0.0);
  CHECK(e[1].ci_low <= e[1].mean);
  CHECK(e[1].ci_high >= e[1].mean);
  CHECK_THROWS_AS(empirical_lst({}, {Vector::Zero(2)}), DomainError);

  RunningMoments a, b, all;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> N(3, 2);
  for (int i = 0; i < 1000; ++i) {
    double x = N(rng);
    (i % 3 ? a : b).push(x);
    all.push(x);
  }
  a.merge(b);
  CHECK(a.count == all.count);
  CHECK(a.mean == doctest::Approx(all.mean).epsilon(1e-12));
  CHECK(a.variance() == doctest::Approx(all.variance()).epsilon(1e-10));
}

TEST_CASE("Brownian tandem against the exact transform") {
  auto spec = tandem2(2, 1);
  SimConfig cfg;
  cfg.replications = 20000;
  cfg.seed = 5;
  auto s = simulate_workload(spec, Brownian{1}, cfg);
  for (auto& q : s) CHECK(q.minCoeff() >= 0.0);
  std::vector<Vector> om;
  for (double a : {0.0, 0.5, 2.0})
    for (double b : {0.0, 0.5, 2.0}) om.push_back((Vector(2) << a, b).finished());
  auto e = empirical_lst(s, om);
  int ok = 0;
  for (std::size_t i = 0; i < om.size(); ++i) {
    double x = joint_lst_exact(spec, Brownian{1}, om[i], 1.0).value;
    ok += std::abs(e[i].mean - x) <= 3 * e[i].se + 1e-12;
  }
  CHECK(ok >= 8);

  SimConfig longer = cfg;
  longer.horizon = 2 * default_horizon(spec, Brownian{1}, 1.0);
  SimConfig base = cfg;
  base.method = SimMethod::grid;
  base.step = 0.02;
  base.replications = 4000;
  longer.method = SimMethod::grid;
  longer.step = 0.02;
  longer.replications = 4000;
  auto e1 = empirical_lst(simulate_workload(spec, Brownian{1}, base), om);
  auto e2 = empirical_lst(simulate_workload(spec, Brownian{1}, longer), om);
  for (std::size_t i = 0; i < om.size(); ++i)
    CHECK(std::abs(e1[i].mean - e2[i].mean) <= std::max(e1[i].se, 1e-12));
}

TEST_CASE("tree network against the exact transform") {
  auto spec = oracle::six_node();
  std::mt19937_64 rng(6);
  std::vector<Vector> om;
  for (int i = 0; i < 12; ++i) {
    Vector w(6);
    for (int k = 0; k < 6; ++k) w[k] = std::uniform_real_distribution<double>(0, 2)(rng);
    om.push_back(w);
  }
  for (const LevyModel& m :
       std::vector<LevyModel>{Brownian{100}, CompoundPoisson{40, ExponentialJobs{0.5}}}) {
    SimConfig cfg;
    cfg.u = 3;
    cfg.replications = 10000;
    cfg.seed = 7;
    auto e = empirical_lst(simulate_workload(spec, m, cfg), om);
    int ok = 0;
    for (std::size_t i = 0; i < om.size(); ++i) {
      double x = joint_lst_exact(spec, m, om[i], 3.0).value;
      ok += std::abs(e[i].mean - x) <= 4 * e[i].se;
    }
    CHECK(ok >= 11);
  }
}

TEST_CASE("convergence study with Monte Carlo column") {
  SimConfig cfg;
  cfg.replications = 500;
  auto rows = convergence_study(single(1.0), Brownian{1.0}, Regime::heavy,
                                {Vector::Constant(1, 0.7)}, {1.0, 4.0}, cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].empirical.has_value());
  CHECK(rows[0].empirical_se.has_value());
  CHECK(rows[0].exact_scaled == doctest::Approx(rows[0].limit).epsilon(1e-12));
}
