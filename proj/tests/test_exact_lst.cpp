#include <doctest.h>

#include "oracles.hpp"

using namespace levynet;

namespace {

NetworkSpec single(double r) { return build_network(RoutingMatrix(1), {Rate::constant(r)}); }

NetworkSpec tandem(const std::vector<double>& r) {
  int n = static_cast<int>(r.size());
  RoutingMatrix P(n);
  RateSchedule rs;
  for (int j = 0; j < n; ++j) {
    if (j + 1 < n) P(j, j + 1) = 1;
    rs.push_back(Rate::constant(r[j]));
  }
  return build_network(P, rs);
}

std::vector<LevyModel> models() {
  return {Brownian{1.3}, CompoundPoisson{0.9, ExponentialJobs{1.4}},
          CompoundPoisson{1.5, DeterministicJobs{0.6}}, CenteredGamma{2.0, 1.5},
          StableSum{{{1.4, 0.8}, {1.9, 0.5}}}};
}

Vector random_omega(std::mt19937_64& rng, int n, double scale) {
  std::uniform_real_distribution<double> U(0, 1);
  Vector w(n);
  for (int i = 0; i < n; ++i) w[i] = scale * U(rng);
  return w;
}

}  // namespace

TEST_CASE("psi and its inverse") {
  auto s1 = single(1.0);
  CHECK(psi(s1, Brownian{1.0}, 0, 1.0, 1.0) == doctest::Approx(1.5));
  CHECK(psi(s1, CenteredGamma{1, 1}, 0, 0.0, 1.0) == 0.0);
  CHECK(psi(single(2.0), CenteredGamma{1, 1}, 0, 1.0, 1.0) ==
        doctest::Approx(2 + std::log(0.5) + 1).epsilon(1e-14));
  CHECK(psi(single(2.0), CenteredGamma{1, 1}, 0, 1.0, 1.0) == doctest::Approx(2.3069).epsilon(1e-4));
  CHECK(phi_inverse(s1, Brownian{2.0}, 0, 2.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(phi_inverse(s1, Brownian{2.0}, 0, 0.0, 1.0) == 0.0);
  CHECK_THROWS_AS(psi(s1, Brownian{1}, 0, -1.0, 1.0), DomainError);
  CHECK_THROWS_AS(phi_inverse(s1, Brownian{1}, 0, -1.0, 1.0), DomainError);

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> U(0, 100);
  for (int it = 0; it < 100; ++it) {
    auto t = oracle::random_tree(rng, 6);
    auto spec = oracle::build(t);
    for (const auto& m : models()) {
      int j = it % t.n;
      double x = U(rng);
      auto res = phi_inverse_detail(spec, m, j, x, 1.7);
      CHECK(std::abs(psi(spec, m, j, res.value, 1.7) - x) <= 1e-12 * std::max(1.0, x));
      CHECK(res.iterations <= 200);
    }
  }
}

TEST_CASE("kappa") {
  auto t2 = tandem({2, 1});
  Vector w(2);
  w << 0, 1;
  CHECK(kappa(t2, w, 0, 1.0) == doctest::Approx(1.0));
  CHECK(kappa(t2, w, 0, 1.0, KappaForm::max_ancestor) == doctest::Approx(1.0));
  CHECK(kappa(t2, Vector::Zero(2), 0, 1.0) == 0.0);
  CHECK_THROWS_AS(kappa(t2, w, 1, 1.0), DomainError);

  std::mt19937_64 rng(2);
  for (int it = 0; it < 300; ++it) {
    auto t = oracle::random_tree(rng, 12, 2);
    auto spec = oracle::build(t);
    auto om = random_omega(rng, t.n, 3.0);
    double u = 1.0 + 9.0 * (it % 7) / 6.0;
    for (int j = 0; j + 1 < t.n; ++j) {
      double a = kappa(spec, om, j, u, KappaForm::sum_over_S);
      double b = kappa(spec, om, j, u, KappaForm::max_ancestor);
      CHECK(a >= 0);
      CHECK(std::abs(a - b) <= 1e-12 * std::max(std::abs(a), 1e-300));
    }
  }
}

TEST_CASE("single node reduces to the generalized Pollaczek-Khinchine transform") {
  for (double r : {0.5, 2.0}) {
    auto spec = single(r);
    for (const auto& m : models())
      for (double w : {1e-8, 1e-3, 0.2, 1.0, 13.0, 400.0}) {
        double want = r * w / psi(spec, m, 0, w, 1.0);
        CHECK(joint_lst_exact(spec, m, Vector::Constant(1, w), 1.0).value ==
              doctest::Approx(want).epsilon(1e-14));
      }
    for (double w : {0.1, 1.0, 10.0})
      CHECK(joint_lst_exact(spec, Brownian{1.7}, Vector::Constant(1, w), 1.0).value ==
            doctest::Approx(oracle::brownian_single(1.7, r, w)).epsilon(1e-13));
    CHECK(joint_lst_exact(spec, Brownian{1}, Vector::Zero(1), 1.0).value == 1.0);
  }
}

TEST_CASE("tandem: equal frequencies give the single-queue transform of total workload") {
  std::vector<double> r{3.0, 2.2, 1.1};
  auto spec = tandem(r);
  for (const auto& m : models())
    for (double w : {0.05, 0.7, 4.0}) {
      Vector om = Vector::Constant(3, w);
      double want = r[2] * w / psi(spec, m, 2, w, 1.0);
      CHECK(joint_lst_exact(spec, m, om, 1.0).value == doctest::Approx(want).epsilon(1e-11));
    }
}

TEST_CASE("ancestor-path frequencies isolate a single supremum") {
  // omega_i = theta phat_k / phat_i on the path root..k gives <omega, Q> = theta Xbar_k.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(0.05, 3.0);
  for (int it = 0; it < 200; ++it) {
    auto t = oracle::random_tree(rng, 9);
    auto spec = oracle::build(t);
    const LevyModel m = models()[it % 5];
    int k = it % t.n;
    double theta = U(rng);
    Vector om = Vector::Zero(t.n);
    for (int i = k; i >= 0; i = spec.ancestor[i]) om[i] = theta * spec.phat[k] / spec.phat[i];
    double u = 1.3;
    double want = spec.rates[k](u) * theta / psi(spec, m, k, theta, u);
    CHECK(joint_lst_exact(spec, m, om, u).value == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("range, monotonicity, continuity at zero entries, assembled product") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> U(0, 1);
  for (int it = 0; it < 200; ++it) {
    auto t = oracle::random_tree(rng, 8, 2);
    auto spec = oracle::build(t);
    const LevyModel m = models()[it % 5];
    double u = 1.5;
    auto om = random_omega(rng, t.n, 2.0);
    auto ev = joint_lst_exact(spec, m, om, u);
    CHECK(ev.value > 0);
    CHECK(ev.value <= 1);
    Vector om2 = om;
    for (int i = 0; i < t.n; ++i) om2[i] += U(rng);
    CHECK(joint_lst_exact(spec, m, om2, u).value <= ev.value * (1 + 1e-12));

    double raw = ev.prefactor;
    bool clean = true;
    for (const auto& f : ev.factors) {
      raw *= f.phi_minus_delta / f.phi_minus_delta_hat * f.kappa_minus_psi_delta_hat /
             f.kappa_minus_psi_delta;
      clean = clean && !f.removable;
    }
    if (clean) CHECK(raw == doctest::Approx(ev.value).epsilon(1e-7));

    int z = it % t.n;
    Vector zero = om;
    zero[z] = 0;
    Vector near = zero;
    near[z] = 1e-9;
    double a = joint_lst_exact(spec, m, zero, u).value;
    double b = joint_lst_exact(spec, m, near, u).value;
    double tol = std::holds_alternative<StableSum>(m) ? 1e-3 : 1e-6;
    CHECK(a == doctest::Approx(b).epsilon(tol));
    CHECK(a >= b);
  }
}

TEST_CASE("marginal of the root queue") {
  auto spec = oracle::six_node();
  for (const auto& m : models())
    for (double w : {0.01, 0.5, 5.0}) {
      Vector om = Vector::Zero(6);
      om[0] = w;
      double want = spec.rates[0](3.0) * w / psi(spec, m, 0, w, 3.0);
      auto ev = joint_lst_exact(spec, m, om, 3.0);
      CHECK(ev.value == doctest::Approx(want).epsilon(1e-10));
      CHECK(ev.factors.size() == 5);
    }
  auto ev0 = joint_lst_exact(spec, Brownian{1}, Vector::Zero(6), 3.0);
  CHECK(ev0.value == 1.0);
  CHECK_THROWS_AS(joint_lst_exact(spec, Brownian{1}, Vector::Constant(6, -1.0), 3.0),
                  DomainError);
  CHECK_THROWS_AS(joint_lst_exact(spec, Brownian{1}, Vector::Zero(5), 3.0), DomainError);
}
