#pragma once
#include <toa/common.hpp>
#include <toa/oscint.hpp>

namespace toa {

// Free-particle time-of-arrival eigenstate |T, alpha> for arrival at x = 0,
// evolved to laboratory time t (so the effective parameter is T - t).
// Momentum representation:
//   <p|T,alpha; t> = Theta(alpha p) (|p| / (m h))^{1/2} exp(i p^2 (T - t) / (2 m hbar)).
struct EigenstateSpec {
  double T = 0.0;
  int alpha = +1;  // +1: right-movers, -1: left-movers
  double m = 1.0;
  double t = 0.0;
};

enum class EvalMethod { exact, contour, asymptotic };

// Smallest |T - t| accepted by the coordinate-space routines; the amplitude
// scales like |T - t|^{-3/4} and is not a function at coincidence.
inline constexpr double min_time_scale = 1e-6;

Complex ab_momentum_amp(double p, const EigenstateSpec& spec);

// Coordinate amplitude <x|T,alpha; t>.
//  exact      : closed form through the parabolic-cylinder core pcf_g,
//               <x|T+> = e^{i 3 pi/8} (m hbar / T)^{3/4} G(z) / (h m^{1/2}),
//               z = x e^{-i pi/4} (m / (hbar T))^{1/2}   (T = effective time > 0;
//               negative effective times via <x|T+> = conj(<-x|(-T)+>)).
//  contour    : descent-contour quadrature of the defining p-integral.
//  asymptotic : leading large-|z| forms (algebraic tail for x > 0, WKB-like
//               oscillation for x < 0); requires |z| >= 10.
Complex ab_coordinate_amp(double x, const EigenstateSpec& spec,
                          EvalMethod method = EvalMethod::exact, double tol = 1e-10);

// |<x=0|T,alpha>|^2 at t = 0 (closed form).
double ab_density_x0(double T, double m = 1.0);

// Probability flux of the alpha = +1 eigenstate at x = 0 and time t = 0,
// J = (hbar / m) Im[conj(psi) d_x psi]; closed form
//   J(0) = Gamma(3/4) Gamma(5/4) hbar^2 / (sqrt(2) h^2 T^2).
double ab_flux_x0(double T, double m = 1.0);
// Same quantity from contour quadrature of the amplitude and its derivative
// (derivative taken by weighting the integrand with i p / hbar).
double ab_flux_x0_numeric(double T, double m = 1.0, double tol = 1e-10);

// Self-adjoint variant obtained by symmetrising right-movers:
//   <x|T; t>_- = <x|(T - t)+> + conj(<x|(T + t)+>)   (right-moving sector);
// real-valued at t = 0. Requires |T - t|, |T + t| >= min_time_scale.
Complex tminus_coordinate_amp(double x, double T, double t = 0.0, double m = 1.0);

// Regularised (self-adjoint) eigenstates with momentum cutoff epsilon:
//   <p|T, sign>_eps = Theta(sign p) (h m |f_eps(p)|)^{-1/2} exp(i T F(p) / (m hbar)),
//   F(p) = (p^2 - eps^2)/2          for |p| >= eps,
//          eps^2 ln(|p| / eps)      for |p| <  eps.
struct GrtSpec {
  double T = 0.0;
  double epsilon = 0.0;
  int sign = +1;
  double m = 1.0;
};

Complex grt_momentum_amp(double p, const GrtSpec& spec);

// Coordinate amplitude split at the cutoff: i1 = ∫_0^eps, i2 = ∫_eps^∞
// (sign = +1; sign = -1 follows by x -> -x). i1 uses the incomplete-gamma
// power series when |x eps / hbar| is small enough for it to converge
// cleanly, otherwise direct quadrature.
struct GrtParts {
  Complex i1{};
  Complex i2{};
};
GrtParts grt_coordinate_parts(double x, double t, const GrtSpec& spec, double tol = 1e-10);
Complex grt_coordinate_amp(double x, double t, const GrtSpec& spec, double tol = 1e-10);

// Rigorous modulus bound |i1| <= (2 eps)^{3/2} / (h m^{1/2}).
double grt_i1_bound(const GrtSpec& spec);

}  // namespace toa
