#pragma once
#include <toa/common.hpp>

#include <functional>
#include <vector>

namespace toa {

// Leading small-momentum behaviour psi ~ c g^u in the energy-like variable
// g = p^2 / (2 m hbar), used for analytic tail completion of arrival-time
// distributions (long-time tails follow a Watson-lemma power law).
struct PowerLawInfo {
  double u = 0.0;
  double c = 0.0;
  bool valid = false;
};

// A one-dimensional momentum-space state. psi/dpsi are amplitudes on the real
// axis; dpsi is the analytic derivative (required by the arrival-time
// operator). Constructed states are normalised to unit L2 norm.
struct MomentumState {
  std::function<Complex(double)> psi;
  std::function<Complex(double)> dpsi;
  double mass = 1.0;
  bool domain_ok = false;   // psi(p)/p^{3/2} -> 0 as p -> 0 (operator domain)
  bool is_real = false;     // psi real-valued on the axis
  PowerLawInfo small_p;
  double support_min = 0.0;  // quadrature window [support_min, support_max]
  double support_max = 0.0;
  int sign_support = 0;      // +1 if support in p>0, -1 if p<0, 0 mixed
};

// Presets ------------------------------------------------------------------
// Gaussian wave packet exp(-(p-p0)^2/(4 sigma^2)) exp(-i p x0 / hbar).
MomentumState gaussian_state(double p0, double sigma, double x0, double m = 1.0);
// Monomial-damped right-mover N p^k exp(-p^2/2) Theta(p); in the operator
// domain for k >= 2.
MomentumState monomial_state(int k, double m = 1.0);
// Renormalised superposition ca * a + cb * b.
MomentumState superposition(const MomentumState& a, const MomentumState& b,
                            Complex ca, Complex cb);
// Cubic local interpolation through samples (p_i, amp_i), p_i strictly
// increasing; Gaussian taper to zero outside the sampled window; derivative
// is the analytic derivative of the interpolant. Renormalised on construction.
MomentumState sampled_state(const std::vector<double>& p,
                            const std::vector<Complex>& amp, double m = 1.0);

// State transforms ----------------------------------------------------------
MomentumState conjugate_state(const MomentumState& s);       // psi -> conj(psi)
MomentumState reflect_state(const MomentumState& s);         // psi(p) -> conj(psi(-p))
MomentumState evolve_state(const MomentumState& s, double t);  // * exp(-i p^2 t / (2 m hbar))

double state_norm(const MomentumState& s);  // L2 norm by quadrature

// Arrival-time amplitude <T, alpha|psi> =
//   ∫ Theta(alpha p) (|p|/(m h))^{1/2} exp(-i p^2 T/(2 m hbar)) psi(p) dp.
Complex toa_amplitude(double T, int alpha, const MomentumState& s, double tol = 1e-10);

// Arrival-time distribution Pi(T) = |<T,+|psi>|^2 + |<T,-|psi>|^2 on a grid,
// with captured probability and an analytic estimate of the norm beyond the
// grid (from the power-law tail when available, else from an edge fit).
struct DistributionResult {
  std::vector<double> T_grid;
  std::vector<double> values;
  std::vector<double> comp_plus;
  std::vector<double> comp_minus;
  double captured_norm = 0.0;
  double missing_norm_estimate = 0.0;
  bool grid_warning = false;  // missing norm above the warn threshold
};
DistributionResult toa_distribution(const std::vector<double>& T_grid,
                                    const MomentumState& s, double tol = 1e-8,
                                    double warn_missing = 1e-4);

// ∫_{T1}^{T2} Pi(T) dT by adaptive quadrature in T.
double interval_probability(double T1, double T2, const MomentumState& s,
                            double tol = 1e-8);

// Arrival-time operator (T^ psi)(p) = -i m hbar (psi'(p)/p - psi(p)/(2 p^2))
// on right-movers. Throws DomainError unless s.domain_ok.
MomentumState apply_T_operator(const MomentumState& s);
// ||T^ psi|| by quadrature (without renormalising).
double t_operator_norm(const MomentumState& s);

// Moments of Pi with analytic tail completion: the T-grid integration is
// truncated at +-X and completed with a three-term power-law fit
// A T^{-s} + B T^{-s-1} + C T^{-s-2}, s = 2u + 3/2, matched at the edge.
double first_moment(const MomentumState& s, double tol = 1e-6);
double second_moment(const MomentumState& s, double tol = 1e-4);
// <T^2>_Pi - ||T^ psi||^2 (vanishes on operator eigenstates' ideal limit;
// finite for domain states).
double variance_defect(const MomentumState& s, double tol = 1e-4);

// Long-time tail diagnostics. Pi(T) ~ prefactor * T^{-slope_magnitude} with
//   slope 2u + 3/2 and prefactor |c|^2 (m h)^{1/2} Gamma(u + 3/4)^2 / (4 pi^{3/2})
// for psi ~ c g^u near p = 0 (Watson's lemma applied to the arrival
// amplitude in the variable g = p^2 / (2 m hbar)).
double tail_watson_slope(double u);                      // returns -(2u + 3/2)
double tail_watson_prefactor(const MomentumState& s);    // throws without power-law info
struct TailFit {
  double slope = 0.0;       // fitted d ln Pi / d ln T
  double prefactor = 0.0;   // fitted Pi * T^{-slope} at the window centre
  double slope_drift = 0.0; // slope change across the window (systematic)
};
TailFit tail_exponent(const MomentumState& s, double T_lo, double T_hi, int n_pts = 25,
                      double tol = 1e-10);

// Position-space amplitude and flux of the evolving packet.
Complex coordinate_amp(double x, double t, const MomentumState& s, double tol = 1e-10);
double flux(double x, double t, const MomentumState& s, double tol = 1e-10);

// Flux at fixed x over a time grid; returns maximal intervals [t_a, t_b]
// where J < 0 (strictly; an exact zero counts as non-negative).
std::vector<std::pair<double, double>> backflow_scan(const MomentumState& s, double x,
                                                     const std::vector<double>& t_grid,
                                                     double tol = 1e-12);

}  // namespace toa
