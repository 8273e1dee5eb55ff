#pragma once
#include <toa/common.hpp>

namespace toa {

// Real-argument gamma function (Lanczos approximation, ~1e-14 relative for
// moderate arguments; reflection formula for x < 1/2). Throws DomainError at
// the poles x = 0, -1, -2, ...
double gamma_real(double x);

// Faddeeva function w(z) = exp(-z^2) erfc(-i z), rational approximation of
// Weideman (SIAM J. Numer. Anal. 31, 1994) with N = 48 terms in the upper
// half-plane, reflected via w(z) = 2 exp(-z^2) - w(-z) below the axis.
Complex faddeeva_w(Complex z);

// Lower incomplete gamma gamma(a, z) by the alternating power series
//   z^a sum_n (-z)^n / (n! (a+n)),
// truncated when the tail is below 1e-13 relative (cap 500 terms). Throws
// ConvergenceError when the cap is hit or when cancellation among the terms
// has destroyed the requested accuracy (large |z|); callers then switch to
// quadrature. Throws DomainError at a = 0, -1, -2, ...
Complex lower_incomplete_gamma(Complex a, Complex z);

// Core entire function for the parabolic-cylinder order -3/2:
//   G(z) = Gamma(3/2) e^{z^2/4} D_{-3/2}(z) = ∫_0^∞ t^{1/2} e^{-t^2/2 - z t} dt.
// Evaluated by regime: Maclaurin series (|z| <= pcf_series_radius), direct
// damped quadrature on the band, Poincare expansion with the recessive
// exponential term beyond pcf_asymptotic_radius. Regimes overlap; see
// pcf_selfcheck.
Complex pcf_g(Complex z);
Complex pcf_g_series(Complex z);       // accurate for |z| <~ 5.2
Complex pcf_g_quadrature(Complex z);   // accurate for |z| <~ 8.5 (any arg)
Complex pcf_g_asymptotic(Complex z);   // requires |z| >= 6
Complex pcf_d_m32(Complex z);          // D_{-3/2}(z) = e^{-z^2/4} G(z) / Gamma(3/2)

// Evaluate every regime valid at z and return the largest pairwise relative
// disagreement (0 when fewer than two regimes overlap there). Throws
// ToleranceError if the regimes disagree beyond 1e-8.
double pcf_selfcheck(Complex z);

inline constexpr double pcf_series_radius = 4.0;
inline constexpr double pcf_asymptotic_radius = 7.5;

}  // namespace toa
