#include <doctest.h>

#include <cmath>
#include <random>

#include "../oracles/oracles.hpp"
#include "draws.hpp"
#include "fixtures.hpp"
#include "regext/assumptions.hpp"
#include "regext/roots.hpp"

using namespace regext;

namespace {

oracle::Market market_of(const ModelParams& p) {
  return {p.rho(), p.sigma(Regime::first), p.sigma(Regime::second), p.lambda(Regime::first),
          p.lambda(Regime::second)};
}

}  // namespace

TEST_SUITE("roots") {
  TEST_CASE("reference parameters against the high-precision polynomial roots") {
    const auto r = solve_characteristic(fixtures::reference());
    CHECK(r.alpha3 == doctest::Approx(0.47223651756545216806).epsilon(1e-14));
    CHECK(r.alpha4 == doctest::Approx(5.3261565629769881629).epsilon(1e-14));
    CHECK(r.alpha5 == doctest::Approx(0.65455291600623263478).epsilon(1e-14));
    CHECK(r.a1 == doctest::Approx(-0.87186621113844782701).epsilon(1e-13));
    CHECK(r.a2 == doctest::Approx(0.24626116495009658347).epsilon(1e-13));
    CHECK(r.a3 == doctest::Approx(-0.61939746787006188551).epsilon(1e-13));
    CHECK(r.a4 == doctest::Approx(0.69398385819727135642).epsilon(1e-13));
    CHECK(r.alpha3 * r.alpha4 == doctest::Approx(2.5152).epsilon(1e-4));
  }

  TEST_CASE("ordering, symmetry and Vieta identities") {
    const auto p = fixtures::reference();
    const auto r = solve_characteristic(p);
    CHECK(r.alpha1 < r.alpha2);
    CHECK(r.alpha2 < 0.0);
    CHECK(0.0 < r.alpha3);
    CHECK(r.alpha3 < r.alpha4);
    CHECK(r.alpha1 == -r.alpha4);
    CHECK(r.alpha2 == -r.alpha3);
    const double s1 = 0.38 * 0.38, s2 = 1.9 * 1.9, rho = 1.0 / 3.0;
    const double ao = 0.25 * s1 * s2, bo = -0.5 * s1 * (rho + 0.44) - 0.5 * s2 * (rho + 1.7);
    const double co = (rho + 1.7) * (rho + 0.44) - 1.7 * 0.44;
    CHECK(r.beta1 * r.beta2 == doctest::Approx(co / ao).epsilon(1e-10));
    CHECK(r.beta1 + r.beta2 == doctest::Approx(-bo / ao).epsilon(1e-10));
    CHECK(r.alpha3 * r.alpha3 + r.alpha4 * r.alpha4 ==
          doctest::Approx((2 * s1 * (rho + 0.44) + 2 * s2 * (rho + 1.7)) / (s1 * s2)).epsilon(1e-10));
  }

  TEST_CASE("equal volatilities and rates give the closed-form roots") {
    const double sigma = 0.8, rho = 0.2, lam = 0.7;
    const auto p = validate({rho, sigma, sigma, lam, lam, 0.0, CostFunction::exponential(1.0)});
    const auto r = solve_characteristic(p);
    CHECK(r.alpha3 * r.alpha3 == doctest::Approx(2 * rho / (sigma * sigma)).epsilon(1e-12));
    CHECK(r.alpha4 * r.alpha4 == doctest::Approx(2 * (rho + 2 * lam) / (sigma * sigma)).epsilon(1e-12));
  }

  TEST_CASE("random draws: residuals, a1 routes, sign lemma, a4 chain") {
    std::mt19937_64 g(314159);
    for (int n = 0; n < 1000; ++n) {
      const auto p = draws::market(g);
      const auto r = solve_characteristic(p);
      const auto m = market_of(p);
      const auto ref = oracle::positive_quartic_roots(m);
      CAPTURE(n);
      REQUIRE(std::isfinite(static_cast<double>(ref[1])));
      CHECK(r.alpha3 == doctest::Approx(static_cast<double>(ref[0])).epsilon(1e-10));
      CHECK(r.alpha4 == doctest::Approx(static_cast<double>(ref[1])).epsilon(1e-10));

      const double l1 = p.lambda(Regime::first), l2 = p.lambda(Regime::second), rho = p.rho();
      const double s1 = p.sigma(Regime::first);
      const double simple = -(0.5 * s1 * s1 * r.alpha3 * r.alpha4 + rho + l1) / l1 + rho / (rho + l2);
      CHECK(r.a1 == doctest::Approx(simple).epsilon(1e-9));
      CHECK(check_sign_lemma(r));
      const double chain = (0.5 * s1 * s1 * (r.alpha3 * r.alpha3 + r.alpha4 * r.alpha4) - (rho + l1)) / l1;
      CHECK(r.a4 > chain);
      CHECK(chain > 0.0);
    }
  }

  TEST_CASE("quartic residual within the scaled tolerance") {
    const auto p = fixtures::reference();
    const auto r = solve_characteristic(p);
    const double scale = (p.rho() + 1.7) * (p.rho() + 0.44);
    for (double a : {r.alpha1, r.alpha2, r.alpha3, r.alpha4}) {
      CHECK(std::abs(quartic_residual(p, a)) <= 1e-10 * scale);
    }
  }

  TEST_CASE("a2 from its closed form and the sign lemma on the sample boxes") {
    for (int k = 1; k <= 3; ++k) {
      const auto p = fixtures::sample_box(k);
      const auto r = solve_characteristic(p);
      const double l1 = p.lambda(Regime::first);
      const double a2 =
          (phi(p, Regime::first, r.alpha3) - phi(p, Regime::first, r.alpha4)) / (l1 * (r.alpha4 - r.alpha3));
      CHECK(r.a2 == doctest::Approx(a2).epsilon(1e-14));
      CHECK(check_sign_lemma(r));
    }
  }
}
