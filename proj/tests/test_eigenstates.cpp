#include "doctest.h"

#include <toa/eigenstates.hpp>
#include <toa/oscint.hpp>

#include <cmath>

namespace {

using toa::Complex;

double rel(Complex got, Complex want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace

TEST_SUITE("eigenstates") {
  TEST_CASE("momentum representation") {
    const toa::EigenstateSpec spec{0.01, +1, 1.0, 0.0};
    // Support and modulus: Theta(alpha p) (|p| / (m h))^{1/2}.
    CHECK(toa::ab_momentum_amp(-2.0, spec) == Complex{0.0, 0.0});
    const Complex v = toa::ab_momentum_amp(3.0, spec);
    CHECK(std::abs(v) == doctest::Approx(std::sqrt(3.0 / toa::planck_h)).epsilon(1e-14));
    // Phase e^{i p^2 (T - t) / (2 m hbar)}.
    CHECK(std::arg(v) == doctest::Approx(9.0 * 0.01 / 2.0).epsilon(1e-12));
    // Mirror sector.
    const toa::EigenstateSpec minus{0.01, -1, 1.0, 0.0};
    CHECK(toa::ab_momentum_amp(3.0, minus) == Complex{0.0, 0.0});
    CHECK(rel(toa::ab_momentum_amp(-3.0, minus), v) < 1e-14);
  }

  TEST_CASE("coordinate amplitude at the arrival point") {
    const toa::EigenstateSpec spec{0.01, +1, 1.0, 0.0};
    const Complex amp = toa::ab_coordinate_amp(0.0, spec);
    // |<0|T+>| = (m hbar / T)^{3/4} 2^{-1/4} Gamma(3/4) / (h sqrt(m)).
    CHECK(std::abs(amp) == doctest::Approx(5.186166).epsilon(1e-5));
    CHECK(std::arg(amp) == doctest::Approx(3.0 * toa::pi / 8.0).epsilon(1e-12));
    CHECK(toa::ab_density_x0(0.01) == doctest::Approx(std::norm(amp)).epsilon(1e-12));
    CHECK(toa::ab_density_x0(0.01) == doctest::Approx(26.8963).epsilon(1e-5));
    // Density scales as T^{-3/2}.
    CHECK(toa::ab_density_x0(0.001) * std::pow(0.001, 1.5) ==
          doctest::Approx(toa::ab_density_x0(0.01) * std::pow(0.01, 1.5))
              .epsilon(1e-12));
  }

  TEST_CASE("closed form against the defining contour integral") {
    for (double T : {0.01, 0.001}) {
      for (double x : {-1.5, -0.7, -0.2, 0.0, 0.1, 0.2}) {
        const toa::EigenstateSpec spec{T, +1, 1.0, 0.0};
        const Complex exact = toa::ab_coordinate_amp(x, spec, toa::EvalMethod::exact);
        const Complex quad =
            toa::ab_coordinate_amp(x, spec, toa::EvalMethod::contour, 1e-11);
        CHECK(rel(exact, quad) < 1e-8);
      }
    }
    // Negative effective time uses conjugation-reflection inside `exact` and a
    // mirrored descent path inside `contour`.
    for (double x : {-0.5, 0.3}) {
      const toa::EigenstateSpec spec{-0.01, +1, 1.0, 0.0};
      CHECK(rel(toa::ab_coordinate_amp(x, spec, toa::EvalMethod::exact),
                toa::ab_coordinate_amp(x, spec, toa::EvalMethod::contour, 1e-11)) <
            1e-8);
    }
    // Laboratory time enters only through T - t.
    const toa::EigenstateSpec lab{0.01, +1, 1.0, 0.004};
    CHECK(rel(toa::ab_coordinate_amp(-0.4, lab, toa::EvalMethod::exact),
              toa::ab_coordinate_amp(-0.4, lab, toa::EvalMethod::contour, 1e-11)) <
          1e-8);
    // Mass dependence.
    const toa::EigenstateSpec heavy{0.01, +1, 2.5, 0.0};
    CHECK(rel(toa::ab_coordinate_amp(-0.8, heavy, toa::EvalMethod::exact),
              toa::ab_coordinate_amp(-0.8, heavy, toa::EvalMethod::contour, 1e-11)) <
          1e-8);
    // Coincidence T = t is not a function and must be rejected.
    const toa::EigenstateSpec bad{0.01, +1, 1.0, 0.01};
    CHECK_THROWS_AS((void)toa::ab_coordinate_amp(0.0, bad), toa::DomainError);
  }

  TEST_CASE("far zone: algebraic tail and oscillatory window") {
    // x >> sqrt(hbar T / m): T-independent x^{-3/2} decay with phase 3 pi / 4.
    const toa::EigenstateSpec a{0.01, +1, 1.0, 0.0};
    const toa::EigenstateSpec b{0.001, +1, 1.0, 0.0};
    const Complex va = toa::ab_coordinate_amp(5.0, a);
    const Complex vb = toa::ab_coordinate_amp(5.0, b);
    CHECK(rel(va, vb) < 2e-3);
    // Gamma(3/2) hbar^{3/2} / (h sqrt(m)) = 0.141047 in these units.
    const Complex lead = 0.886226925452758 / toa::planck_h *
                         std::exp(Complex{0.0, 0.75 * toa::pi}) / std::pow(5.0, 1.5);
    CHECK(rel(va, lead) < 2e-3);
    CHECK(std::abs(lead) == doctest::Approx(0.141047 / std::pow(5.0, 1.5)).epsilon(1e-4));
    // Asymptotic evaluation method against the closed form.
    for (double x : {-1.5, 1.5}) {
      const Complex ex = toa::ab_coordinate_amp(x, a, toa::EvalMethod::exact);
      const Complex as = toa::ab_coordinate_amp(x, a, toa::EvalMethod::asymptotic);
      CHECK(rel(ex, as) < 0.01);
    }
    // |z| < 10 is outside the advertised asymptotic domain.
    CHECK_THROWS_AS(
        (void)toa::ab_coordinate_amp(-0.5, a, toa::EvalMethod::asymptotic),
        toa::DomainError);
  }

  TEST_CASE("flux at the origin: closed form vs quadrature") {
    // J(0) = Gamma(3/4) Gamma(5/4) hbar^2 / (sqrt 2 h^2 T^2) = 1 / (16 pi T^2).
    CHECK(toa::ab_flux_x0(0.01) ==
          doctest::Approx(1.0 / (16.0 * toa::pi * 1e-4)).epsilon(1e-12));
    CHECK(toa::ab_flux_x0(0.01) == doctest::Approx(198.9436789).epsilon(1e-7));
    CHECK(rel(Complex{toa::ab_flux_x0_numeric(0.01), 0.0},
              Complex{toa::ab_flux_x0(0.01), 0.0}) < 1e-6);
    // T^{-2} scaling.
    CHECK(toa::ab_flux_x0(0.005) / toa::ab_flux_x0(0.01) ==
          doctest::Approx(4.0).epsilon(1e-12));
    // Mass invariance of J(0;T) (m enters only through the eliminated z).
    CHECK(toa::ab_flux_x0(0.01, 2.5) == doctest::Approx(toa::ab_flux_x0(0.01)));
  }

  TEST_CASE("symmetrised self-adjoint variant") {
    // Real at t = 0 and equal to twice the real part of the one-sided form.
    for (double x : {-1.2, -0.3, 0.15}) {
      const Complex v = toa::tminus_coordinate_amp(x, 0.01);
      CHECK(std::abs(v.imag()) < 1e-10 * std::abs(v));
      const Complex one = toa::ab_coordinate_amp(x, toa::EigenstateSpec{0.01, +1, 1.0, 0.0});
      CHECK(rel(v, 2.0 * one.real()) < 1e-12);
    }
    // t != 0 splits the arguments: <x|(T-t)+> + conj(<x|(T+t)+>).
    const double T = 0.01, t = 0.002;
    const Complex manual =
        toa::ab_coordinate_amp(-0.6, toa::EigenstateSpec{T - t, +1, 1.0, 0.0}) +
        std::conj(toa::ab_coordinate_amp(-0.6, toa::EigenstateSpec{T + t, +1, 1.0, 0.0}));
    CHECK(rel(toa::tminus_coordinate_amp(-0.6, T, t), manual) < 1e-12);
    // Oscillations densify away from the origin: count sign changes of the
    // real part on [-2, -1] vs [-0.9, -0.1] (phase ~ m x^2 / (2 hbar T)).
    const auto crossings = [](double lo, double hi) {
      int n = 0;
      const int N = 4000;
      double prev = toa::tminus_coordinate_amp(lo, 0.01).real();
      for (int i = 1; i <= N; ++i) {
        const double x = lo + (hi - lo) * i / N;
        const double cur = toa::tminus_coordinate_amp(x, 0.01).real();
        if ((prev < 0.0 && cur > 0.0) || (prev > 0.0 && cur < 0.0)) ++n;
        prev = cur;
      }
      return n;
    };
    const int far = crossings(-2.0, -1.0);
    const int near = crossings(-0.9, -0.1);
    CHECK(far > near);
    CHECK(far > 3 * near / 2);
  }

  TEST_CASE("regularised eigenstates: cutoff structure") {
    const toa::GrtSpec spec{0.01, 0.2, +1, 1.0};
    // Above the cutoff: sharp eigenstate times a constant phase.
    const double p = 0.4;
    const Complex lhs = toa::grt_momentum_amp(p, spec);
    const Complex rhs =
        toa::ab_momentum_amp(p, toa::EigenstateSpec{0.01, +1, 1.0, 0.0}) *
        std::exp(Complex{0.0, -0.01 * 0.04 / 2.0});
    CHECK(rel(lhs, rhs) < 1e-13);
    // Modulus continuous across |p| = eps.
    const double below = std::abs(toa::grt_momentum_amp(0.2 * (1 - 1e-9), spec));
    const double above = std::abs(toa::grt_momentum_amp(0.2 * (1 + 1e-9), spec));
    CHECK(rel(Complex{below, 0.0}, Complex{above, 0.0}) < 1e-6);
    // Wrong-sign momenta excluded.
    CHECK(toa::grt_momentum_amp(-0.4, spec) == Complex{0.0, 0.0});

    // Sub-cutoff piece obeys its rigorous bound and the pieces sum to the amp.
    for (double x : {-1.0, 0.0, 2.0}) {
      const toa::GrtParts parts = toa::grt_coordinate_parts(x, 0.0, spec);
      CHECK(std::abs(parts.i1) <= toa::grt_i1_bound(spec));
      CHECK(rel(parts.i1 + parts.i2, toa::grt_coordinate_amp(x, 0.0, spec)) < 1e-14);
    }
  }

  TEST_CASE("regularised eigenstates: sharp-cutoff limit") {
    const toa::EigenstateSpec ab{0.01, +1, 1.0, 0.0};
    const Complex target = toa::ab_coordinate_amp(-1.0, ab);
    double prev = 1e300;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
      const toa::GrtSpec spec{0.01, eps, +1, 1.0};
      const double dev = rel(toa::grt_coordinate_amp(-1.0, 0.0, spec), target);
      CHECK(dev < prev);
      prev = dev;
    }
    CHECK(prev < 1e-2);
  }
}
