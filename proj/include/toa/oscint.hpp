#pragma once
#include <toa/common.hpp>

#include <functional>
#include <utility>
#include <vector>

namespace toa {

struct QuadratureReport {
  Complex value{};
  double error_estimate{};
  long evaluations{};
};

using ComplexIntegrand = std::function<Complex(Complex)>;

// Piecewise-linear integration path: straight segments in the complex plane,
// optionally followed by a terminal ray. The ray is walked in blocks of
// doubling length and truncated once block contributions fall below
// damping_threshold relative to the accumulated value (never before
// ray_min_length, which callers set past any saddle / stationary point).
struct ContourPath {
  std::vector<std::pair<Complex, Complex>> segments;
  bool has_ray = false;
  Complex ray_origin{};
  Complex ray_direction{};     // unit modulus
  double ray_min_length = 0.0;
  double damping_threshold = 1e-16;
};

// Descent contour for half-line integrands of the form
//   p^{1/2} exp(i x p / hbar) exp(i p^2 T / (2 m hbar)),  T != 0:
// a vertical segment from 0 to i*m*x/|T| followed by a 45-degree ray
// (direction exp(+i pi/4) for T > 0, exp(-i pi/4) for T < 0). Along this
// path both exponentials decay and the path stays off the negative real
// axis, so principal-branch p^{1/2} is smooth on it.
ContourPath build_toa_contour(double x, double T, double m);

// Adaptive Gauss-Kronrod (G7, K15) on the straight segment [a, b].
// abs_tol is an absolute tolerance on the accumulated error estimate.
// Throws ToleranceError (carrying the best value found) when panels at the
// maximum refinement depth still exceed their local budget.
QuadratureReport integrate_segment(const ComplexIntegrand& f, Complex a, Complex b,
                                   double abs_tol);

// Integrate f along a full ContourPath. The tolerance budget is split between
// the straight segments and the ray blocks; evaluation order is fixed, so
// results are bitwise reproducible.
QuadratureReport integrate_contour(const ComplexIntegrand& f, const ContourPath& path,
                                   double abs_tol);

// ∫_0^{p_max} f(p) dp for integrands damped like exp(-c p^4) (c > 0) times a
// slowly growing prefactor. p_max is derived from c and tol with a safety
// margin so the discarded tail is negligible against tol.
QuadratureReport integrate_damped_quartic(const ComplexIntegrand& f, double c,
                                          double tol);

namespace slow_oracle {
// Brute-force composite Kronrod rule on [0, p_max] with dyadic panel
// refinement; accepts once two successive refinements agree within tol
// (relative, with an absolute floor of tol). Validation oracle only — cost
// grows linearly with p_max times the local frequency, so production code
// must use the contour/damped routines instead.
QuadratureReport integrate_real_axis(const ComplexIntegrand& f, double p_max,
                                     double tol);
}  // namespace slow_oracle

}  // namespace toa
