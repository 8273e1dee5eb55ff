#include <toa/eigenstates.hpp>
#include <toa/specfun.hpp>

#include <cmath>

namespace toa {
namespace {

// Defining momentum integral of <x|T+> (effective time already folded in):
//   (1/(h sqrt(m))) ∫_0^∞ p^{1/2} exp(i x p / hbar) exp(i p^2 T / (2 m hbar)) dp,
// evaluated along a descent contour. sqrt(p) is the principal branch; the
// contour stays off the negative real axis.
Complex half_line_amp_contour(double x, double T_eff, double m, double tol) {
  ContourPath path = build_toa_contour(x, T_eff, m);
  const double k1 = x / hbar;
  const double k2 = T_eff / (2.0 * m * hbar);
  const auto f = [k1, k2](Complex p) -> Complex {
    return std::sqrt(p) * std::exp(Complex{0.0, 1.0} * (k1 * p + k2 * p * p));
  };
  // The amplitude scales like (m hbar/|T|)^{3/4}/(h sqrt(m)); feed the
  // quadrature an absolute tolerance matched to the requested relative one.
  const double scale = std::pow(m * hbar / std::abs(T_eff), 0.75);
  QuadratureReport r = integrate_contour(f, path, tol * scale);
  return r.value / (planck_h * std::sqrt(m));
}

Complex amp_exact_positive_T(double x, double T_eff, double m) {
  const Complex z = x * std::sqrt(m / (hbar * T_eff)) *
                    std::exp(Complex{0.0, -0.25 * pi});
  const Complex phase = std::exp(Complex{0.0, 0.375 * pi});
  return phase * std::pow(m * hbar / T_eff, 0.75) * pcf_g(z) /
         (planck_h * std::sqrt(m));
}

Complex amp_asymptotic_positive_T(double x, double T_eff, double m) {
  const double az = std::abs(x) * std::sqrt(m / (hbar * T_eff));
  if (az < 10.0)
    throw DomainError("ab_coordinate_amp: asymptotic form requires |z| >= 10");
  if (x > 0.0) {
    // Endpoint (Watson) term: algebraic decay, independent of T.
    return gamma_real(1.5) * std::pow(hbar, 1.5) *
           std::exp(Complex{0.0, 0.75 * pi}) /
           (planck_h * std::sqrt(m) * std::pow(x, 1.5));
  }
  // Stationary-phase term: WKB-like oscillation exp(-i m x^2 / (2 hbar T)).
  return std::sqrt(m * (-x) / planck_h) *
         std::exp(Complex{0.0, 0.25 * pi}) *
         std::exp(Complex{0.0, -m * x * x / (2.0 * hbar * T_eff)}) / T_eff;
}

}  // namespace

Complex ab_momentum_amp(double p, const EigenstateSpec& spec) {
  if (!(spec.m > 0)) throw DomainError("ab_momentum_amp: mass must be positive");
  if (p * spec.alpha <= 0.0) return {};
  const double T_eff = spec.T - spec.t;
  return std::sqrt(std::abs(p) / (spec.m * planck_h)) *
         std::exp(Complex{0.0, p * p * T_eff / (2.0 * spec.m * hbar)});
}

Complex ab_coordinate_amp(double x, const EigenstateSpec& spec, EvalMethod method,
                          double tol) {
  if (!(spec.m > 0)) throw DomainError("ab_coordinate_amp: mass must be positive");
  const double T_eff = spec.T - spec.t;
  if (std::abs(T_eff) < min_time_scale)
    throw DomainError("ab_coordinate_amp: |T - t| below the resolvable scale (1e-6)");
  // Left-movers mirror right-movers spatially: <x|T-> = <-x|T+>.
  const double xs = (spec.alpha >= 0) ? x : -x;
  switch (method) {
    case EvalMethod::contour:
      return half_line_amp_contour(xs, T_eff, spec.m, tol);
    case EvalMethod::asymptotic:
      if (T_eff > 0.0) return amp_asymptotic_positive_T(xs, T_eff, spec.m);
      return std::conj(amp_asymptotic_positive_T(-xs, -T_eff, spec.m));
    case EvalMethod::exact:
    default:
      if (T_eff > 0.0) return amp_exact_positive_T(xs, T_eff, spec.m);
      // Complex conjugation reverses the effective time and inverts space.
      return std::conj(amp_exact_positive_T(-xs, -T_eff, spec.m));
  }
}

double ab_density_x0(double T, double m) {
  if (!(T > 0) || !(m > 0)) throw DomainError("ab_density_x0: T and m must be positive");
  const double g34 = gamma_real(0.75);
  return std::pow(m * hbar / T, 1.5) * g34 * g34 /
         (std::sqrt(2.0) * planck_h * planck_h * m);
}

double ab_flux_x0(double T, double m) {
  if (!(T > 0) || !(m > 0)) throw DomainError("ab_flux_x0: T and m must be positive");
  return gamma_real(0.75) * gamma_real(1.25) * hbar * hbar /
         (std::sqrt(2.0) * planck_h * planck_h * T * T);
}

double ab_flux_x0_numeric(double T, double m, double tol) {
  if (!(T > 0) || !(m > 0))
    throw DomainError("ab_flux_x0_numeric: T and m must be positive");
  ContourPath path = build_toa_contour(0.0, T, m);
  const double k2 = T / (2.0 * m * hbar);
  const auto base = [k2](Complex p) -> Complex {
    return std::sqrt(p) * std::exp(Complex{0.0, 1.0} * k2 * p * p);
  };
  const auto deriv = [&base](Complex p) -> Complex {
    return base(p) * Complex{0.0, 1.0} * p / hbar;
  };
  const double scale = std::pow(m * hbar / T, 0.75);
  const Complex psi =
      integrate_contour(base, path, tol * scale).value / (planck_h * std::sqrt(m));
  const Complex dpsi =
      integrate_contour(deriv, path, tol * scale * std::sqrt(2.0 * m / T)).value /
      (planck_h * std::sqrt(m));
  return (hbar / m) * std::imag(std::conj(psi) * dpsi);
}

Complex tminus_coordinate_amp(double x, double T, double t, double m) {
  EigenstateSpec fwd{T - t, +1, m, 0.0};
  EigenstateSpec bwd{T + t, +1, m, 0.0};
  return ab_coordinate_amp(x, fwd) + std::conj(ab_coordinate_amp(x, bwd));
}

Complex grt_momentum_amp(double p, const GrtSpec& spec) {
  if (!(spec.m > 0) || !(spec.epsilon > 0))
    throw DomainError("grt_momentum_amp: m and epsilon must be positive");
  if (p * spec.sign <= 0.0) return {};
  const double ap = std::abs(p);
  const double e = spec.epsilon;
  // |f_eps(p)| = 1/|p| outside the cutoff, |p|/eps^2 inside.
  const double mod_f = (ap >= e) ? 1.0 / ap : ap / (e * e);
  const double F = (ap >= e) ? 0.5 * (p * p - e * e) : e * e * std::log(ap / e);
  return std::exp(Complex{0.0, spec.T * F / (spec.m * hbar)}) /
         std::sqrt(planck_h * spec.m * mod_f);
}

double grt_i1_bound(const GrtSpec& spec) {
  return std::pow(2.0 * spec.epsilon, 1.5) / (planck_h * std::sqrt(spec.m));
}

GrtParts grt_coordinate_parts(double x, double t, const GrtSpec& spec, double tol) {
  if (!(spec.m > 0) || !(spec.epsilon > 0))
    throw DomainError("grt_coordinate_parts: m and epsilon must be positive");
  const double xs = (spec.sign >= 0) ? x : -x;
  const double e = spec.epsilon;
  const double m = spec.m;
  const double Teff = spec.T - t;
  GrtParts parts;

  // i1 = ∫_0^eps: with p = eps u the integrand is
  //   (eps^{3/2}/(h sqrt m)) u^{A-1} exp(i x eps u / hbar) exp(-i eps^2 t u^2/(2 m hbar)),
  //   A = 1/2 + i T eps^2 / (m hbar).
  // Expanding the t-exponential gives incomplete-gamma series terms
  //   S(B, w) = sum_n w^n / (n! (B+n)) = (-w)^{-B} gamma(B, -w),  w = i x eps / hbar.
  const Complex A{0.5, spec.T * e * e / (m * hbar)};
  const double pref1 = std::pow(e, 1.5) / (planck_h * std::sqrt(m));
  const Complex w{0.0, xs * e / hbar};
  bool series_ok = std::abs(xs) * e / hbar <= 30.0;
  if (series_ok) {
    try {
      const Complex beta{0.0, -e * e * t / (2.0 * m * hbar)};
      Complex sum{};
      Complex coef{1.0, 0.0};
      for (int k = 0; k < 60; ++k) {
        const Complex B = A + 2.0 * k;
        Complex S;
        if (w == Complex{})
          S = 1.0 / B;
        else
          S = std::exp(-B * std::log(-w)) * lower_incomplete_gamma(B, -w);
        const Complex term = coef * S;
        sum += term;
        if (k > 2 && std::abs(term) <= 1e-15 * std::abs(sum)) break;
        coef *= beta / static_cast<double>(k + 1);
        if (k == 59)
          throw ConvergenceError("grt_coordinate_parts: t-expansion did not converge");
      }
      parts.i1 = pref1 * sum;
    } catch (const ConvergenceError&) {
      series_ok = false;
    }
  }
  if (!series_ok) {
    // Direct quadrature after p = eps e^s (s <= 0): the u^{A-1} endpoint
    // becomes a smooth exponential e^{2 A s}, |e^{2 A s}| = e^s.
    const double k1 = xs * e / hbar;
    const double k2 = -e * e * t / (2.0 * m * hbar);
    const Complex A2 = 2.0 * A;
    const auto f = [k1, k2, A2](Complex s) -> Complex {
      const Complex v2 = std::exp(2.0 * s);
      return std::exp(A2 * s) * std::exp(Complex{0.0, 1.0} * (k1 * v2 + k2 * v2 * v2));
    };
    QuadratureReport r =
        integrate_segment(f, Complex{-30.0, 0.0}, Complex{0.0, 0.0}, tol);
    parts.i1 = pref1 * 2.0 * r.value;
  }

  // i2 = ∫_eps^∞ = e^{-i T eps^2/(2 m hbar)} [ <x|(T-t)+> - (1/(h sqrt m)) ∫_0^eps ... ],
  // reusing the closed-form half-line amplitude and a short [0, eps] patch.
  EigenstateSpec ab{spec.T, +1, m, t};
  const Complex full = ab_coordinate_amp(xs, ab);
  const double k1 = xs / hbar;
  const double k2 = Teff / (2.0 * m * hbar);
  const auto g = [k1, k2](Complex p) -> Complex {
    return std::sqrt(p) * std::exp(Complex{0.0, 1.0} * (k1 * p + k2 * p * p));
  };
  QuadratureReport patch = integrate_segment(g, Complex{0.0, 0.0}, Complex{e, 0.0},
                                             tol * std::pow(e, 1.5));
  const Complex phase = std::exp(Complex{0.0, -spec.T * e * e / (2.0 * m * hbar)});
  parts.i2 = phase * (full - patch.value / (planck_h * std::sqrt(m)));
  return parts;
}

Complex grt_coordinate_amp(double x, double t, const GrtSpec& spec, double tol) {
  GrtParts parts = grt_coordinate_parts(x, t, spec, tol);
  return parts.i1 + parts.i2;
}

}  // namespace toa
