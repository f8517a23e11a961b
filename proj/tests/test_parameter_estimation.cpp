#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "qkdrate/parameter_estimation.hpp"

using namespace qkd;

TEST_CASE("xi bound values and monotonicity") {
  // eps = 1 removes the first term entirely
  CHECK(xi_bound(1.0, 2, 100.0) ==
        doctest::Approx(std::sqrt(2.0 * std::log(101.0) / 800.0)).epsilon(1e-15));
  CHECK(xi_bound(1.0, 2, 100.0) ==
        doctest::Approx(0.10741415778240385).epsilon(1e-14));
  CHECK(xi_bound(1e-9, 2, 1e6) ==
        doctest::Approx(0.002458512989412349).epsilon(1e-14));

  CHECK(xi_bound(1e-9, 2, 1e4) > xi_bound(1e-9, 2, 1e6));
  double prev = xi_bound(1e-9, 2, 10.0);
  for (double m : {1e2, 1e3, 1e4, 1e6, 1e8}) {
    const double xi = xi_bound(1e-9, 2, m);
    CHECK(xi < prev);
    prev = xi;
  }
  CHECK(xi_bound(1e-9, 3, 1e4) > xi_bound(1e-9, 2, 1e4));
  CHECK(xi_bound(1e-2, 2, 1e4) < xi_bound(1e-3, 2, 1e4));

  CHECK_THROWS_AS(xi_bound(0.0, 2, 100.0), std::domain_error);
  CHECK_THROWS_AS(xi_bound(1.5, 2, 100.0), std::domain_error);
  CHECK_THROWS_AS(xi_bound(1e-9, 1, 100.0), std::domain_error);
  CHECK_THROWS_AS(xi_bound(1e-9, 2, 0.0), std::domain_error);
}

TEST_CASE("scheme dispatch") {
  const double eps = 1e-9, m = 1e5;
  CHECK(n_pe_parameters(ProtocolSpec::bb84()) == 2);
  CHECK(n_pe_parameters(ProtocolSpec::six_state()) == 3);
  CHECK(n_pe_parameters(ProtocolSpec::d_bases(5)) == 6);
  CHECK(scheme_xi(ProtocolSpec::bb84(PeScheme::Cpovm), eps, m) ==
        doctest::Approx(xi_bound(eps, 2, m)).epsilon(1e-15));
  CHECK(scheme_xi(ProtocolSpec::bb84(PeScheme::Ipovm), eps, m) ==
        doctest::Approx(xi_bound(eps / 2.0, 2, m / 2.0)).epsilon(1e-15));
  CHECK(scheme_xi(ProtocolSpec::six_state(PeScheme::Ipovm), eps, m) ==
        doctest::Approx(xi_bound(eps / 3.0, 2, m / 3.0)).epsilon(1e-15));
  CHECK(scheme_xi(ProtocolSpec::six_state(PeScheme::Cpovm), eps, m) ==
        doctest::Approx(xi_bound(eps, 2, m)).epsilon(1e-15));
  CHECK(scheme_xi(ProtocolSpec::d_bases(5, PeScheme::Cpovm), eps, m) ==
        doctest::Approx(xi_bound(eps, 2, m)).epsilon(1e-15));
  CHECK_THROWS_AS(scheme_xi(ProtocolSpec::d_bases(5, PeScheme::Ipovm), eps, m),
                  std::invalid_argument);
}

TEST_CASE("the common POVM always beats per-parameter estimation") {
  for (double eps : {1e-3, 1e-6, 1e-9, 1e-12}) {
    for (double m : {1e3, 1e4, 1e5, 1e6, 1e8}) {
      for (auto proto : {ProtocolSpec::bb84(), ProtocolSpec::six_state()}) {
        auto ipovm = proto;
        ipovm.pe = PeScheme::Ipovm;
        auto cpovm = proto;
        cpovm.pe = PeScheme::Cpovm;
        CHECK(scheme_xi(cpovm, eps, m) < scheme_xi(ipovm, eps, m));
      }
    }
  }
}

TEST_CASE("worst-case error rate") {
  const auto bb84 = ProtocolSpec::bb84();
  SUBCASE("perfect statistics") {
    const auto out = worst_case_q(0.07, 0.0, bb84);
    CHECK(out.q_eff == 0.07);
    CHECK_FALSE(out.clamped);
  }
  SUBCASE("inside the domain") {
    const auto out = worst_case_q(0.05, 0.01, bb84);
    CHECK(out.q_eff == doctest::Approx(0.06).epsilon(1e-15));
    CHECK_FALSE(out.clamped);
  }
  SUBCASE("clamped at the entropy boundary") {
    const auto out = worst_case_q(0.45, 0.2, bb84);
    CHECK(out.q_eff == 0.5);
    CHECK(out.clamped);
  }
  SUBCASE("d-dimensional boundary is (d-1)/d") {
    const auto out = worst_case_q(0.6, 0.2, ProtocolSpec::d_bases(5));
    CHECK(out.q_eff == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(out.clamped);
  }
  CHECK_THROWS_AS(worst_case_q(0.6, 0.0, bb84), std::domain_error);
  CHECK_THROWS_AS(worst_case_q(0.05, -0.1, bb84), std::domain_error);
}

TEST_CASE("relative entropy") {
  const std::vector<double> half = {0.5, 0.5};
  const std::vector<double> p = {0.6, 0.4};
  const std::vector<double> point = {1.0, 0.0};
  CHECK(relative_entropy(p, p) == 0.0);
  CHECK(relative_entropy(point, half) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(relative_entropy(p, half) ==
        doctest::Approx(0.029049405545331361).epsilon(1e-14));
  const std::vector<double> three = {0.2, 0.3, 0.5};
  CHECK_THROWS_AS(relative_entropy(p, three), std::invalid_argument);
  CHECK_THROWS_AS(relative_entropy(half, point), std::invalid_argument);
}

TEST_CASE("pinsker inequality on random distribution pairs") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    const int k = 2 + static_cast<int>(rng() % 5);
    std::vector<double> p(k), q(k);
    double ps = 0.0, qs = 0.0;
    for (int i = 0; i < k; ++i) {
      ps += (p[i] = unif(rng));
      qs += (q[i] = unif(rng));
    }
    for (int i = 0; i < k; ++i) {
      p[i] /= ps;
      q[i] /= qs;
    }
    double half_l1 = 0.0;
    for (int i = 0; i < k; ++i) half_l1 += std::abs(p[i] - q[i]);
    half_l1 *= 0.5;
    const double bound = std::sqrt(relative_entropy(p, q) * std::log(2.0) / 2.0);
    CHECK(half_l1 <= bound + 1e-12);
  }
}

TEST_CASE("monte carlo estimation bound") {
  SUBCASE("deterministic distribution never deviates") {
    const auto res = simulate_pe_bound({1.0, 0.0}, 100, 0.1, 1000, 3);
    CHECK(res.violation_rate == 0.0);
  }
  SUBCASE("violation rate stays below eps") {
    const auto res1 = simulate_pe_bound({0.95, 0.05}, 100, 0.1, 10000, 1);
    CHECK(res1.violation_rate <= 0.1);
    const auto res2 = simulate_pe_bound({0.95, 0.05}, 100, 0.5, 10000, 1);
    CHECK(res2.violation_rate <= 0.5);
  }
  SUBCASE("fixed seed reproduces the violation rate") {
    const auto a = simulate_pe_bound({0.7, 0.2, 0.1}, 200, 0.25, 2000, 99);
    const auto b = simulate_pe_bound({0.7, 0.2, 0.1}, 200, 0.25, 2000, 99);
    CHECK(a.violation_rate == b.violation_rate);
    CHECK(a.xi_used == b.xi_used);
    CHECK(a.xi_used == doctest::Approx(xi_bound(0.25, 3, 200.0)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(simulate_pe_bound({0.5, 0.6}, 10, 0.1, 10, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(simulate_pe_bound({1.0}, 10, 0.1, 10, 1), std::invalid_argument);
}
