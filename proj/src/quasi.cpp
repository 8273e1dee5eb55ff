#include <toa/quasi.hpp>
#include <toa/oscint.hpp>
#include <toa/specfun.hpp>

#include <cmath>

namespace toa {
namespace {

void require(const QuasiSpec& s) {
  if (!(s.m > 0) || !(s.deltaT > 0))
    throw DomainError("quasi: m and deltaT must be positive");
}

double quartic_c(const QuasiSpec& s) {
  return s.deltaT * s.deltaT / (8.0 * s.m * s.m * hbar * hbar);
}

double prefactor(const QuasiSpec& s) {
  return 2.0 * std::pow(pi, 0.25) * std::sqrt(s.deltaT) /
         std::sqrt(planck_h * s.m);
}

// psi(x) and d/dx psi(x) share one momentum integral; `order` adds (i p/hbar)^order.
Complex coord_integral(double x, const QuasiSpec& s, int order, double tol) {
  const double c = quartic_c(s);
  const double k1 = x / hbar;
  const double k2 = (s.T - s.t) / (2.0 * s.m * hbar);
  const auto f = [=](Complex p) -> Complex {
    Complex val = std::sqrt(p) *
                  std::exp(Complex{0.0, 1.0} * (k1 * p + k2 * p * p)) *
                  std::exp(-c * p * p * p * p);
    for (int i = 0; i < order; ++i) val *= Complex{0.0, 1.0} * p / hbar;
    return val;
  };
  QuadratureReport r = integrate_damped_quartic(f, c, tol);
  // <x|p> = h^{-1/2} e^{i p x / hbar} contributes the extra h^{-1/2}.
  return prefactor(s) / std::sqrt(planck_h) * r.value;
}

}  // namespace

Complex quasi_momentum_amp(double p, const QuasiSpec& s) {
  require(s);
  if (p <= 0.0) return {};
  const double c = quartic_c(s);
  return prefactor(s) * std::sqrt(p) *
         std::exp(Complex{0.0, (s.T - s.t) * p * p / (2.0 * s.m * hbar)}) *
         std::exp(-c * p * p * p * p);
}

Complex quasi_coordinate_amp(double x, const QuasiSpec& s, double tol) {
  require(s);
  return coord_integral(x, s, 0, tol);
}

Complex quasi_coordinate_deriv(double x, const QuasiSpec& s, double tol) {
  require(s);
  return coord_integral(x, s, 1, tol);
}

Complex quasi_overlap(double T, double Tprime, double deltaT) {
  if (!(deltaT > 0)) throw DomainError("quasi_overlap: deltaT must be positive");
  return faddeeva_w(Complex{(T - Tprime) / (2.0 * deltaT), 0.0});
}

double quasi_moment(const QuasiSpec& s, int n) {
  require(s);
  if (n < 0) throw DomainError("quasi_moment: n must be non-negative");
  return std::sqrt(pi) * s.deltaT / (planck_h * s.m) *
         gamma_real(0.25 * (n + 2)) *
         std::pow(2.0 * s.m * hbar / s.deltaT, 0.5 * (n + 2));
}

double quasi_mean_energy(const QuasiSpec& s) {
  return quasi_moment(s, 2) / (2.0 * s.m);
}

double quasi_energy_width(const QuasiSpec& s) {
  require(s);
  return std::sqrt(0.5 - 1.0 / pi) * hbar / s.deltaT;
}

double quasi_centroid(const QuasiSpec& s) {
  require(s);
  return -(gamma_real(0.75) / pi) * std::sqrt(planck_h / (s.m * s.deltaT)) *
         (s.T - s.t);
}

double quasi_centroid_velocity(const QuasiSpec& s) {
  return quasi_moment(s, 1) / s.m;
}

double quasi_flux(double x, const QuasiSpec& s, double tol) {
  require(s);
  const Complex psi = quasi_coordinate_amp(x, s, tol);
  const Complex dpsi = quasi_coordinate_deriv(x, s, tol);
  return (hbar / s.m) * std::imag(std::conj(psi) * dpsi);
}

double quasi_peak_density(const QuasiSpec& s) {
  require(s);
  const double g38 = gamma_real(0.375);
  return std::sqrt(s.m / (planck_h * s.deltaT)) * g38 * g38 /
         (pi * std::pow(2.0, 1.25));
}

double quasi_peak_flux(const QuasiSpec& s) {
  require(s);
  return gamma_real(0.375) * gamma_real(0.625) /
         (2.0 * std::pow(pi, 1.5) * s.deltaT);
}

double quasi_eigen_residual(const QuasiSpec& s, double tol) {
  require(s);
  if (s.t != 0.0)
    throw DomainError("quasi_eigen_residual: defined at t = 0 only");
  // ||(T^ - T) Psi||^2 = (deltaT^2/(2 m hbar))^2 <p^4>, <p^4> by quadrature.
  const double c = quartic_c(s);
  const double pref2 = prefactor(s) * prefactor(s);
  const auto f = [c, pref2](Complex p) -> Complex {
    const Complex p2 = p * p;
    return pref2 * p * p2 * p2 * std::exp(-2.0 * c * p2 * p2);
  };
  QuadratureReport r = integrate_damped_quartic(f, 2.0 * c, tol);
  const double p4 = r.value.real();
  const double coef = s.deltaT * s.deltaT / (2.0 * s.m * hbar);
  return coef * std::sqrt(p4);
}

double quasi_norm_position(const QuasiSpec& s, double tol) {
  require(s);
  // |psi(x)|^2 falls off like x^{-3} beyond the packet; pick the window from
  // the classical spread plus a fixed margin, then add nothing (tail ~ 1e-6).
  const double speed = quasi_centroid_velocity(s);
  const double span = std::abs(quasi_centroid(s)) + 20.0 * speed * s.deltaT + 10.0;
  const auto f = [&](Complex x) -> Complex {
    const Complex v = quasi_coordinate_amp(x.real(), s, tol * 1e-2);
    return std::norm(v);
  };
  QuadratureReport r =
      integrate_segment(f, Complex{-span, 0.0}, Complex{span, 0.0}, tol);
  return r.value.real();
}

double quasi_right_norm(const QuasiSpec& s, double tol) {
  require(s);
  const double speed = quasi_centroid_velocity(s);
  const double span = std::abs(quasi_centroid(s)) + 20.0 * speed * s.deltaT + 10.0;
  const auto f = [&](Complex x) -> Complex {
    const Complex v = quasi_coordinate_amp(x.real(), s, tol * 1e-2);
    return std::norm(v);
  };
  QuadratureReport r = integrate_segment(f, Complex{0.0, 0.0}, Complex{span, 0.0}, tol);
  return r.value.real();
}

}  // namespace toa
