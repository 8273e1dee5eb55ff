#include "doctest.h"

#include <toa/arrival.hpp>
#include <toa/specfun.hpp>

#include <cmath>
#include <functional>
#include <vector>

namespace {

using toa::Complex;

double rel(Complex got, Complex want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}
double rel(double got, double want) { return rel(Complex{got, 0.0}, Complex{want, 0.0}); }

double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * ((i % 2) ? 4.0 : 2.0);
  return s * h / 3.0;
}

// Exact arrival distribution of the monomial presets N p^k e^{-p^2/2} Theta(p):
// the amplitude is a gamma integral with b = (1 + i T)/2 (m = hbar = 1),
//   Pi_k(T) = N^2 Gamma(k/2 + 3/4)^2 2^{k + 3/2} / (4 h) (1 + T^2)^{-(k/2 + 3/4)}.
double monomial_pi_exact(int k, double T) {
  const double n2 = 2.0 / toa::gamma_real(k + 0.5);
  const double g = toa::gamma_real(0.5 * k + 0.75);
  const double c = n2 * g * g * std::pow(2.0, k + 1.5) / (4.0 * toa::planck_h);
  return c * std::pow(1.0 + T * T, -(0.5 * k + 0.75));
}

}  // namespace

TEST_SUITE("arrival") {
  TEST_CASE("monomial presets: exact distribution oracle") {
    for (int k : {0, 1, 2}) {
      const toa::MomentumState st = toa::monomial_state(k);
      CHECK(rel(toa::state_norm(st), 1.0) < 1e-10);
      for (double T : {-2.0, 0.3, 1.0, 5.0, 30.0}) {
        const double pi_plus = std::norm(toa::toa_amplitude(T, +1, st));
        CHECK(rel(pi_plus, monomial_pi_exact(k, T)) < 1e-8);
        // No left-moving component.
        CHECK(std::abs(toa::toa_amplitude(T, -1, st)) < 1e-12);
      }
    }
    // Frozen tail constants: Pi_k(T) -> C_k T^{-(2u + 3/2)}, u = k/2.
    CHECK(monomial_pi_exact(1, 0.0) == doctest::Approx(0.4173089).epsilon(1e-5));
    CHECK(monomial_pi_exact(2, 0.0) == doctest::Approx(0.5720698).epsilon(1e-5));
    // Distribution normalisation: ∫ Pi dT = 1 (Simpson on the closed form plus
    // the analytic T^{-(2u+3/2)} tails).
    for (int k : {1, 2}) {
      const double s_exp = k + 1.5;
      const double body =
          simpson([k](double T) { return monomial_pi_exact(k, T); }, -400.0, 400.0,
                  400000);
      const double tails = 2.0 * monomial_pi_exact(k, 0.0) *
                           std::pow(400.0, -(s_exp - 1.0)) / (s_exp - 1.0);
      CHECK(std::abs(body + tails - 1.0) < 1e-5);
    }
  }

  TEST_CASE("interval probability against the closed form") {
    const toa::MomentumState k2 = toa::monomial_state(2);
    const double direct = toa::interval_probability(-30.0, 30.0, k2);
    const double oracle =
        simpson([](double T) { return monomial_pi_exact(2, T); }, -30.0, 30.0, 120000);
    CHECK(rel(direct, oracle) < 1e-7);
    // Additivity.
    CHECK(std::abs(toa::interval_probability(0.0, 1.0, k2) +
                   toa::interval_probability(1.0, 3.0, k2) -
                   toa::interval_probability(0.0, 3.0, k2)) < 1e-8);
  }

  TEST_CASE("arrival-time operator on the k = 2 preset") {
    const toa::MomentumState k2 = toa::monomial_state(2);
    REQUIRE(k2.domain_ok);
    const toa::MomentumState tk2 = toa::apply_T_operator(k2);
    // T^ (N p^2 e^{-p^2/2}) = -i m hbar N (3/2 - p^2) e^{-p^2/2}.
    const double N = std::sqrt(2.0 / toa::gamma_real(2.5));
    for (double p : {0.5, 1.3}) {
      const Complex want =
          Complex{0.0, -1.0} * N * (1.5 - p * p) * std::exp(-0.5 * p * p);
      CHECK(rel(tk2.psi(p), want) < 1e-12);
    }
    // ||T^ psi||^2 = 2 exactly for this preset.
    const double n = toa::t_operator_norm(k2);
    CHECK(rel(n * n, 2.0) < 1e-9);
    // Moments of Pi: <T> = 0, <T^2> = ||T^ psi||^2, small variance defect.
    CHECK(std::abs(toa::first_moment(k2)) < 1e-6);
    CHECK(std::abs(toa::second_moment(k2) - 2.0) < 2e-3);
    CHECK(std::abs(toa::variance_defect(k2)) < 2e-3);
    // k = 1 is outside the operator domain.
    CHECK_FALSE(toa::monomial_state(1).domain_ok);
    CHECK_THROWS_AS((void)toa::apply_T_operator(toa::monomial_state(1)),
                    toa::DomainError);
  }

  TEST_CASE("long-time tails follow the small-momentum power law") {
    // Watson prefactor equals the exact tail constant C_k for the monomials.
    for (int k : {0, 1, 2}) {
      const toa::MomentumState st = toa::monomial_state(k);
      CHECK(rel(toa::tail_watson_prefactor(st), monomial_pi_exact(k, 0.0)) < 1e-10);
      CHECK(toa::tail_watson_slope(0.5 * k) == doctest::Approx(-(k + 1.5)));
      const toa::TailFit fit = toa::tail_exponent(st, 20.0, 120.0);
      CHECK(std::abs(fit.slope / (k + 1.5) + 1.0) < 0.02);
      CHECK(rel(fit.prefactor, monomial_pi_exact(k, 0.0)) < 0.05);
      CHECK(std::abs(fit.slope_drift) < 0.05);
    }
    // No power-law info for the Gaussian preset.
    CHECK_THROWS_AS(
        (void)toa::tail_watson_prefactor(toa::gaussian_state(10.0, 1.0, -5.0)),
        toa::DomainError);
  }

  TEST_CASE("gaussian packet: capture, covariance, reversal") {
    const toa::MomentumState g = toa::gaussian_state(10.0, 1.0, -5.0);
    CHECK(rel(toa::state_norm(g), 1.0) < 1e-10);
    std::vector<double> grid(701);
    for (int i = 0; i < 701; ++i) grid[i] = -0.5 + 2.1 * i / 700.0;
    const toa::DistributionResult res = toa::toa_distribution(grid, g);
    CHECK(res.captured_norm >= 0.9999);
    CHECK(res.captured_norm <= 1.0 + 1e-6);
    CHECK_FALSE(res.grid_warning);
    for (double v : res.values) CHECK(v >= 0.0);
    // A grid that stops short of the arrival peak must warn.
    std::vector<double> short_grid(121);
    for (int i = 0; i < 121; ++i) short_grid[i] = -0.5 + 0.8 * i / 120.0;
    CHECK(toa::toa_distribution(short_grid, g).grid_warning);
    // Evolution covariance Pi(T; psi(0)) = Pi(T - t; psi(t)).
    const toa::MomentumState gt = toa::evolve_state(g, 1.0);
    for (double T : {0.35, 0.5, 0.8})
      CHECK(rel(std::norm(toa::toa_amplitude(T, +1, g)),
                std::norm(toa::toa_amplitude(T - 1.0, +1, gt))) < 1e-8);
    // Conjugation reversal Pi(T; psi) = Pi(-T; conj psi).
    const toa::MomentumState gc = toa::conjugate_state(g);
    for (double T : {0.3, 0.5, 0.9})
      CHECK(rel(std::norm(toa::toa_amplitude(T, +1, g)),
                std::norm(toa::toa_amplitude(-T, +1, gc))) < 1e-10);
    // Reflection swaps the momentum sectors.
    const toa::MomentumState gr = toa::reflect_state(g);
    CHECK(rel(std::norm(toa::toa_amplitude(-0.5, -1, gr)),
              std::norm(toa::toa_amplitude(0.5, +1, g))) < 1e-10);
  }

  TEST_CASE("sampled states reproduce their analytic source") {
    const toa::MomentumState k2 = toa::monomial_state(2);
    std::vector<double> ps(400);
    std::vector<Complex> amps(400);
    for (int i = 0; i < 400; ++i) {
      ps[i] = 10.0 * i / 399.0;
      amps[i] = k2.psi(ps[i]);
    }
    const toa::MomentumState smp = toa::sampled_state(ps, amps);
    CHECK(rel(toa::state_norm(smp), 1.0) < 1e-8);
    for (double p : {0.37, 1.234}) CHECK(rel(smp.psi(p), k2.psi(p)) < 1e-6);
    // Deep in the Gaussian tail the cubic's relative error grows like (p h)^4
    // while the absolute error stays ~ f''''(p) h^4 ~ 5e-11; bound it there.
    CHECK(std::abs(smp.psi(5.5) - k2.psi(5.5)) < 1e-9);
    CHECK(rel(toa::toa_amplitude(0.3, +1, smp), toa::toa_amplitude(0.3, +1, k2)) <
          1e-5);
    CHECK(smp.domain_ok);  // quadratic small-p behaviour detected
    // A k = 1 sample set must be rejected by the domain probe.
    const toa::MomentumState k1 = toa::monomial_state(1);
    for (int i = 0; i < 400; ++i) amps[i] = k1.psi(ps[i]);
    CHECK_FALSE(toa::sampled_state(ps, amps).domain_ok);
  }

  TEST_CASE("backflow: negative flux with a positive arrival density") {
    // Release points put both packets at x = 0 at t = 0.5, so the local
    // amplitude ratio stays inside the interference window (1, k2/k1) for
    // several beat periods of exp(i(k2^2-k1^2)t/2); a local plane-wave
    // estimate then gives J ~ -0.3 at the deepest dip.
    const toa::MomentumState two = toa::superposition(
        toa::gaussian_state(3.0, 0.8, -1.5), toa::gaussian_state(10.0, 0.8, -5.0),
        Complex{1.0, 0.0}, Complex{1.0, 0.0});
    CHECK(rel(toa::state_norm(two), 1.0) < 1e-8);
    std::vector<double> t_grid(101);
    for (int i = 0; i < 101; ++i) t_grid[i] = 0.3 + 1.0 * i / 100.0;
    const auto intervals = toa::backflow_scan(two, 0.0, t_grid);
    REQUIRE(!intervals.empty());
    // The probability flux dips negative inside the reported interval while
    // the arrival density there stays strictly positive.
    const double t_mid = 0.5 * (intervals[0].first + intervals[0].second);
    CHECK(toa::flux(0.0, t_mid, two) < 0.0);
    const double pi_mid = std::norm(toa::toa_amplitude(t_mid, +1, two)) +
                          std::norm(toa::toa_amplitude(t_mid, -1, two));
    CHECK(pi_mid > 0.0);
    // Reflection maps J(0, t) to -J(0, -t).
    const toa::MomentumState mirror = toa::reflect_state(two);
    CHECK(rel(toa::flux(0.0, 0.7, mirror), -toa::flux(0.0, -0.7, two)) < 1e-6);
  }
}
