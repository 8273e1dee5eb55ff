#pragma once
#include <toa/common.hpp>

namespace toa {

// Normalised quasi-eigenstate packet peaked at arrival time T with width
// parameter deltaT, evolved to laboratory time t:
//   <p|Psi(t)> = (2 pi^{1/4} deltaT^{1/2} / (h m)^{1/2}) p^{1/2}
//                exp(i (T - t) p^2 / (2 m hbar))
//                exp(-deltaT^2 p^4 / (8 m^2 hbar^2))  Theta(p).
struct QuasiSpec {
  double T = 0.0;
  double deltaT = 0.0;
  double t = 0.0;
  double m = 1.0;
};

Complex quasi_momentum_amp(double p, const QuasiSpec& spec);

// Position-space wave function and its x-derivative (derivative evaluated by
// weighting the momentum integrand with i p / hbar, never by differencing).
Complex quasi_coordinate_amp(double x, const QuasiSpec& spec, double tol = 1e-10);
Complex quasi_coordinate_deriv(double x, const QuasiSpec& spec, double tol = 1e-10);

// Overlap <Psi_{T'}|Psi_T> for equal deltaT: equals w((T - T') / (2 deltaT))
// with w the Faddeeva function — exact for every separation.
Complex quasi_overlap(double T, double Tprime, double deltaT);

// Momentum moments (closed form):
//   <p^n> = (sqrt(pi) deltaT / (h m)) Gamma((n+2)/4) (2 m hbar / deltaT)^{(n+2)/2}.
double quasi_moment(const QuasiSpec& spec, int n);
double quasi_mean_energy(const QuasiSpec& spec);   // <p^2>/(2m) = hbar / (sqrt(pi) m deltaT)
double quasi_energy_width(const QuasiSpec& spec);  // sqrt(1/2 - 1/pi) hbar / deltaT

// Density centroid <x>(t) = -(Gamma(3/4)/pi) (h / (m deltaT))^{1/2} (T - t)
// and its (constant) velocity <p>/m.
double quasi_centroid(const QuasiSpec& spec);
double quasi_centroid_velocity(const QuasiSpec& spec);

// Probability flux J(x, t) of the packet.
double quasi_flux(double x, const QuasiSpec& spec, double tol = 1e-10);

// Closed forms at the arrival event (x = 0, t = T):
//   density |psi(0,T)|^2 = (m / (h deltaT))^{1/2} Gamma(3/8)^2 / (pi 2^{5/4})
//   flux    J(0, T)      = Gamma(3/8) Gamma(5/8) / (2 pi^{3/2} deltaT).
double quasi_peak_density(const QuasiSpec& spec);
double quasi_peak_flux(const QuasiSpec& spec);

// Norm of (T^ - T)|Psi> at t = 0: the arrival-time operator acts analytically
// as T^ Psi = T Psi + (i deltaT^2 p^2 / (2 m hbar)) Psi, so the residual is
// the norm of the second term, evaluated here by quadrature of
// (deltaT^2 / (2 m hbar))^2 <p^4>; closed form deltaT / sqrt(2). Requires t = 0.
double quasi_eigen_residual(const QuasiSpec& spec, double tol = 1e-10);

// Position-space norms over an adaptive window: full line and x > 0 only.
// Position-space norms certify to ~1e-7: each inner amplitude evaluation
// carries ~1e-2 tol noise and the window spans ~10 length units.
double quasi_norm_position(const QuasiSpec& spec, double tol = 1e-7);
double quasi_right_norm(const QuasiSpec& spec, double tol = 1e-7);

}  // namespace toa
