#include <toa/arrival.hpp>
#include <toa/oscint.hpp>
#include <toa/specfun.hpp>

#include <algorithm>
#include <cmath>
#include <memory>

namespace toa {
namespace {

// <T,alpha| integral over one half-line piece [a, b] of the support, with
// p = sign q^2 to absorb the |p|^{1/2} endpoint at the origin:
//   ∫ (|p|/(m h))^{1/2} e^{-i p^2 T/(2 m hbar)} psi(p) dp
//     = (2 / (m h)^{1/2}) ∫ q^2 e^{-i q^4 T/(2 m hbar)} psi(sign q^2) dq.
Complex half_line_toa_amp(double T, int sign, double a, double b,
                          const MomentumState& st, double tol) {
  const double qlo = std::sqrt(std::max(0.0, (sign > 0) ? a : -b));
  const double qhi = std::sqrt(std::max(0.0, (sign > 0) ? b : -a));
  if (!(qhi > qlo)) return {};
  const double k = T / (2.0 * st.mass * hbar);
  const double sg = (sign > 0) ? 1.0 : -1.0;
  const auto f = [&st, k, sg](Complex q) -> Complex {
    const double qr = q.real();
    const double p2 = qr * qr * qr * qr;
    return qr * qr * std::exp(Complex{0.0, -k * p2}) * st.psi(sg * qr * qr);
  };
  QuadratureReport r =
      integrate_segment(f, Complex{qlo, 0.0}, Complex{qhi, 0.0}, tol);
  return 2.0 / std::sqrt(st.mass * planck_h) * r.value;
}

double norm_on(const MomentumState& st, double a, double b) {
  if (!(b > a)) return 0.0;
  const auto f = [&st](Complex p) -> Complex { return std::norm(st.psi(p.real())); };
  return integrate_segment(f, Complex{a, 0.0}, Complex{b, 0.0}, 1e-12).value.real();
}

// Limit sampling of psi(p)/p^{3/2} -> 0 (operator-domain test) on the side(s)
// the support touches the origin.
bool sample_domain(const std::function<Complex(double)>& psi, int sign_support) {
  double scale = 0.0;
  for (double p : {0.5, 1.0, 2.0}) {
    if (sign_support >= 0) scale = std::max(scale, std::abs(psi(p)));
    if (sign_support <= 0) scale = std::max(scale, std::abs(psi(-p)));
  }
  if (scale == 0.0) return true;
  const auto ratio = [&](double p) { return std::abs(psi(p)) / std::pow(std::abs(p), 1.5); };
  bool ok = true;
  if (sign_support >= 0) ok = ok && (ratio(1e-6) < 0.5 * ratio(1e-2) || ratio(1e-6) < 1e-9 * scale);
  if (sign_support <= 0) ok = ok && (ratio(-1e-6) < 0.5 * ratio(-1e-2) || ratio(-1e-6) < 1e-9 * scale);
  return ok;
}

struct TailCoeffs {
  double A = 0.0, B = 0.0, C = 0.0;
  double s = 0.0;
  bool ok = false;
};

double pi_value(const MomentumState& st, double T, double tol);

// Fit Pi(side * T) * T^s ~ A + B/T + C/T^2 on T in [0.7 X, X].
TailCoeffs fit_tail(const MomentumState& st, double X, int side, double s_exp,
                    double tol) {
  constexpr int n = 12;
  double S[5] = {0, 0, 0, 0, 0};
  double R[3] = {0, 0, 0};
  for (int i = 0; i < n; ++i) {
    const double T = 0.7 * X + 0.3 * X * i / (n - 1.0);
    const double tau = X / T;
    const double v = pi_value(st, side * T, tol) * std::pow(T, s_exp);
    double tp = 1.0;
    for (int m = 0; m < 5; ++m) {
      S[m] += tp;
      if (m < 3) R[m] += v * tp;
      tp *= tau;
    }
  }
  // Solve the 3x3 normal equations by Cramer's rule.
  const double M[3][3] = {{S[0], S[1], S[2]}, {S[1], S[2], S[3]}, {S[2], S[3], S[4]}};
  const auto det3 = [](const double m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  const double D = det3(M);
  TailCoeffs out;
  out.s = s_exp;
  if (D == 0.0) return out;
  double Mx[3][3];
  double a[3];
  for (int c = 0; c < 3; ++c) {
    std::copy(&M[0][0], &M[0][0] + 9, &Mx[0][0]);
    for (int r = 0; r < 3; ++r) Mx[r][c] = R[r];
    a[c] = det3(Mx) / D;
  }
  out.A = a[0];
  out.B = a[1] * X;
  out.C = a[2] * X * X;
  out.ok = true;
  return out;
}

// ∫_X^∞ T^m (A T^{-s} + B T^{-s-1} + C T^{-s-2}) dT; requires s > m + 1.
double tail_integral(const TailCoeffs& tc, double X, int m) {
  const double s = tc.s;
  if (!(s > m + 1.0)) throw DomainError("tail completion: integral diverges");
  return tc.A * std::pow(X, m + 1.0 - s) / (s - m - 1.0) +
         tc.B * std::pow(X, m - s) / (s - m) +
         tc.C * std::pow(X, m - 1.0 - s) / (s - m + 1.0);
}

double tail_slope_guess(const MomentumState& st) {
  if (st.small_p.valid) return 2.0 * st.small_p.u + 1.5;
  // Two-point estimate at a fixed far pair.
  const double T1 = 70.0, T2 = 100.0;
  const double p1 = pi_value(st, T1, 1e-12) + pi_value(st, -T1, 1e-12);
  const double p2 = pi_value(st, T2, 1e-12) + pi_value(st, -T2, 1e-12);
  if (p1 <= 0.0 || p2 <= 0.0) return 4.0;
  return std::log(p1 / p2) / std::log(T2 / T1);
}

double pi_value(const MomentumState& st, double T, double tol) {
  double out = 0.0;
  if (st.support_max > 0.0) {
    const Complex ap = half_line_toa_amp(T, +1, std::max(0.0, st.support_min),
                                         st.support_max, st, tol);
    out += std::norm(ap);
  }
  if (st.support_min < 0.0) {
    const Complex am = half_line_toa_amp(T, -1, st.support_min,
                                         std::min(0.0, st.support_max), st, tol);
    out += std::norm(am);
  }
  return out;
}

// Moment ∫ T^m Pi(T) dT over [-X, X] plus analytic completions.
double moment_with_tails(const MomentumState& st, int m, double X, double tol) {
  const double s_exp = tail_slope_guess(st);
  const double amp_tol = std::min(tol * 1e-3, 1e-10);
  const auto f = [&](Complex T) -> Complex {
    double w = 1.0;
    for (int i = 0; i < m; ++i) w *= T.real();
    return w * pi_value(st, T.real(), amp_tol);
  };
  double total = 0.0;
  total += integrate_segment(f, Complex{0.0, 0.0}, Complex{X, 0.0}, tol / 4).value.real();
  total += integrate_segment(f, Complex{-X, 0.0}, Complex{0.0, 0.0}, tol / 4).value.real();
  const double sgn_left = (m % 2 == 1) ? -1.0 : 1.0;
  for (int side : {+1, -1}) {
    // States whose density has already decayed below resolution at the edge
    // (e.g. far inside an exponential regime) need no completion there.
    if (pi_value(st, side * X, amp_tol) <= 1e-16) continue;
    if (!(s_exp > m + 1.0))
      throw DomainError("moment_with_tails: tail exponent too shallow; moment diverges");
    const TailCoeffs tc = fit_tail(st, X, side, s_exp, amp_tol);
    total += ((side > 0) ? 1.0 : sgn_left) * tail_integral(tc, X, m);
  }
  return total;
}

}  // namespace

MomentumState gaussian_state(double p0, double sigma, double x0, double m) {
  if (!(sigma > 0) || !(m > 0))
    throw DomainError("gaussian_state: sigma and m must be positive");
  MomentumState st;
  const double norm_c = std::pow(2.0 * pi * sigma * sigma, -0.25);
  st.psi = [=](double p) -> Complex {
    const double d = p - p0;
    return norm_c * std::exp(-d * d / (4.0 * sigma * sigma)) *
           std::exp(Complex{0.0, -p * x0 / hbar});
  };
  st.dpsi = [=, psi = st.psi](double p) -> Complex {
    const double d = p - p0;
    return psi(p) * (Complex{-d / (2.0 * sigma * sigma), 0.0} +
                     Complex{0.0, -x0 / hbar});
  };
  st.mass = m;
  st.domain_ok = false;  // psi(0) != 0
  st.is_real = (x0 == 0.0);
  // psi(0) != 0, but the leading-constant window shrinks like sigma^2/p0 and
  // the coefficient underflows for fast packets; no usable power-law tag.
  st.small_p.valid = false;
  st.support_min = p0 - 10.0 * sigma;
  st.support_max = p0 + 10.0 * sigma;
  st.sign_support = (st.support_min >= 0.0) ? +1 : ((st.support_max <= 0.0) ? -1 : 0);
  return st;
}

MomentumState monomial_state(int k, double m) {
  if (k < 0) throw DomainError("monomial_state: k must be non-negative");
  if (!(m > 0)) throw DomainError("monomial_state: mass must be positive");
  MomentumState st;
  const double N = std::sqrt(2.0 / gamma_real(k + 0.5));
  st.psi = [=](double p) -> Complex {
    if (p <= 0.0) return {};
    return N * std::pow(p, k) * std::exp(-0.5 * p * p);
  };
  st.dpsi = [=](double p) -> Complex {
    if (p <= 0.0) return {};
    return N * (k * std::pow(p, k - 1) - std::pow(p, k + 1)) * std::exp(-0.5 * p * p);
  };
  st.mass = m;
  st.domain_ok = (k >= 2);
  st.is_real = true;
  st.small_p.valid = true;
  st.small_p.u = 0.5 * k;
  st.small_p.c = N * std::pow(2.0 * m * hbar, 0.5 * k);
  st.support_min = 0.0;
  st.support_max = 10.0;
  st.sign_support = +1;
  return st;
}

MomentumState superposition(const MomentumState& a, const MomentumState& b,
                            Complex ca, Complex cb) {
  if (a.mass != b.mass) throw DomainError("superposition: mismatched masses");
  MomentumState st;
  st.mass = a.mass;
  st.support_min = std::min(a.support_min, b.support_min);
  st.support_max = std::max(a.support_max, b.support_max);
  st.sign_support = (st.support_min >= 0.0) ? +1 : ((st.support_max <= 0.0) ? -1 : 0);
  auto raw = [pa = a.psi, pb = b.psi, ca, cb](double p) -> Complex {
    return ca * pa(p) + cb * pb(p);
  };
  MomentumState probe;
  probe.psi = raw;
  const double nrm = std::sqrt(norm_on(probe, st.support_min, st.support_max));
  if (!(nrm > 0)) throw DomainError("superposition: zero norm");
  st.psi = [raw, nrm](double p) -> Complex { return raw(p) / nrm; };
  st.dpsi = [da = a.dpsi, db = b.dpsi, ca, cb, nrm](double p) -> Complex {
    return (ca * da(p) + cb * db(p)) / nrm;
  };
  st.domain_ok = a.domain_ok && b.domain_ok;
  st.is_real = a.is_real && b.is_real && ca.imag() == 0.0 && cb.imag() == 0.0;
  if (a.small_p.valid && b.small_p.valid) {
    if (a.small_p.u == b.small_p.u) {
      st.small_p.valid = true;
      st.small_p.u = a.small_p.u;
      st.small_p.c = std::abs(ca * a.small_p.c + cb * b.small_p.c) / nrm;
    } else {
      const auto& lead = (a.small_p.u < b.small_p.u) ? a : b;
      const Complex coef = (a.small_p.u < b.small_p.u) ? ca : cb;
      st.small_p.valid = true;
      st.small_p.u = lead.small_p.u;
      st.small_p.c = std::abs(coef) * lead.small_p.c / nrm;
    }
  }
  return st;
}

MomentumState sampled_state(const std::vector<double>& p,
                            const std::vector<Complex>& amp, double m) {
  if (p.size() != amp.size() || p.size() < 4)
    throw DomainError("sampled_state: need >= 4 matching samples");
  for (std::size_t i = 1; i < p.size(); ++i)
    if (!(p[i] > p[i - 1]))
      throw DomainError("sampled_state: abscissae must be strictly increasing");
  auto grid = std::make_shared<std::vector<double>>(p);
  auto vals = std::make_shared<std::vector<Complex>>(amp);
  const double edge_h = 2.0 * ((p.back() - p.front()) / (p.size() - 1.0));

  // Local 4-point Lagrange cubic; deriv = analytic derivative of the local
  // cubic. Gaussian taper to zero outside the sampled window.
  auto eval = [grid, vals, edge_h](double x, bool deriv) -> Complex {
    const auto& g = *grid;
    const auto& v = *vals;
    if (x < g.front() || x > g.back()) {
      const bool left = x < g.front();
      const double d = left ? (g.front() - x) : (x - g.back());
      const Complex edge = left ? v.front() : v.back();
      const double damp = std::exp(-(d / edge_h) * (d / edge_h));
      if (!deriv) return edge * damp;
      const double sgn = left ? 1.0 : -1.0;
      return edge * damp * (-2.0 * d / (edge_h * edge_h)) * (-sgn);
    }
    const auto it = std::upper_bound(g.begin(), g.end(), x);
    std::size_t i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - g.begin() - 1, 0));
    std::size_t lo = (i == 0) ? 0 : i - 1;
    lo = std::min(lo, g.size() - 4);
    Complex acc{};
    for (std::size_t j = lo; j < lo + 4; ++j) {
      if (!deriv) {
        double L = 1.0;
        for (std::size_t k2 = lo; k2 < lo + 4; ++k2)
          if (k2 != j) L *= (x - g[k2]) / (g[j] - g[k2]);
        acc += v[j] * L;
      } else {
        double Ld = 0.0;
        for (std::size_t d1 = lo; d1 < lo + 4; ++d1) {
          if (d1 == j) continue;
          double term = 1.0 / (g[j] - g[d1]);
          for (std::size_t k2 = lo; k2 < lo + 4; ++k2)
            if (k2 != j && k2 != d1) term *= (x - g[k2]) / (g[j] - g[k2]);
          Ld += term;
        }
        acc += v[j] * Ld;
      }
    }
    return acc;
  };

  MomentumState st;
  st.mass = m;
  st.support_min = p.front() - 4.0 * edge_h;
  st.support_max = p.back() + 4.0 * edge_h;
  st.sign_support = (st.support_min >= 0.0) ? +1 : ((st.support_max <= 0.0) ? -1 : 0);
  MomentumState probe;
  probe.psi = [eval](double x) { return eval(x, false); };
  const double nrm = std::sqrt(norm_on(probe, st.support_min, st.support_max));
  if (!(nrm > 0)) throw DomainError("sampled_state: zero norm");
  st.psi = [eval, nrm](double x) { return eval(x, false) / nrm; };
  st.dpsi = [eval, nrm](double x) { return eval(x, true) / nrm; };
  st.is_real = true;
  for (const Complex& c : amp)
    if (c.imag() != 0.0) st.is_real = false;
  st.domain_ok = (st.support_min >= 0.0 || st.support_max <= 0.0)
                     ? sample_domain(st.psi, st.sign_support)
                     : sample_domain(st.psi, 0);
  return st;
}

MomentumState conjugate_state(const MomentumState& s) {
  MomentumState st = s;
  st.psi = [f = s.psi](double p) { return std::conj(f(p)); };
  st.dpsi = [f = s.dpsi](double p) { return std::conj(f(p)); };
  return st;
}

MomentumState reflect_state(const MomentumState& s) {
  MomentumState st = s;
  st.psi = [f = s.psi](double p) { return std::conj(f(-p)); };
  st.dpsi = [f = s.dpsi](double p) { return -std::conj(f(-p)); };
  st.support_min = -s.support_max;
  st.support_max = -s.support_min;
  st.sign_support = -s.sign_support;
  return st;
}

MomentumState evolve_state(const MomentumState& s, double t) {
  MomentumState st = s;
  const double k = t / (2.0 * s.mass * hbar);
  st.psi = [f = s.psi, k](double p) -> Complex {
    return f(p) * std::exp(Complex{0.0, -k * p * p});
  };
  st.dpsi = [f = s.psi, df = s.dpsi, k](double p) -> Complex {
    return (df(p) + f(p) * Complex{0.0, -2.0 * k * p}) *
           std::exp(Complex{0.0, -k * p * p});
  };
  if (t != 0.0) st.is_real = false;
  return st;
}

double state_norm(const MomentumState& s) {
  double out = 0.0;
  if (s.support_max > 0.0) out += norm_on(s, std::max(0.0, s.support_min), s.support_max);
  if (s.support_min < 0.0) out += norm_on(s, s.support_min, std::min(0.0, s.support_max));
  return std::sqrt(out);
}

Complex toa_amplitude(double T, int alpha, const MomentumState& s, double tol) {
  if (alpha >= 0) {
    if (!(s.support_max > 0.0)) return {};
    return half_line_toa_amp(T, +1, std::max(0.0, s.support_min), s.support_max, s, tol);
  }
  if (!(s.support_min < 0.0)) return {};
  return half_line_toa_amp(T, -1, s.support_min, std::min(0.0, s.support_max), s, tol);
}

DistributionResult toa_distribution(const std::vector<double>& T_grid,
                                    const MomentumState& s, double tol,
                                    double warn_missing) {
  if (T_grid.size() < 2) throw DomainError("toa_distribution: need at least 2 grid points");
  for (std::size_t i = 1; i < T_grid.size(); ++i)
    if (!(T_grid[i] > T_grid[i - 1]))
      throw DomainError("toa_distribution: grid must be strictly increasing");
  DistributionResult out;
  out.T_grid = T_grid;
  const std::size_t n = T_grid.size();
  out.values.resize(n);
  out.comp_plus.resize(n);
  out.comp_minus.resize(n);
  const double amp_tol = std::min(tol * 1e-2, 1e-9);
  for (std::size_t i = 0; i < n; ++i) {
    const Complex ap = toa_amplitude(T_grid[i], +1, s, amp_tol);
    const Complex am = toa_amplitude(T_grid[i], -1, s, amp_tol);
    out.comp_plus[i] = std::norm(ap);
    out.comp_minus[i] = std::norm(am);
    out.values[i] = out.comp_plus[i] + out.comp_minus[i];
  }
  // Captured probability: Simpson on uniform grids (trapezoid fallback).
  double h = T_grid[1] - T_grid[0];
  bool uniform = true;
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (std::abs((T_grid[i + 1] - T_grid[i]) - h) > 1e-9 * std::abs(h)) uniform = false;
  double cap = 0.0;
  if (uniform && n >= 3) {
    std::size_t last = (n % 2 == 1) ? n - 1 : n - 2;
    for (std::size_t i = 0; i + 2 <= last; i += 2)
      cap += h / 3.0 * (out.values[i] + 4.0 * out.values[i + 1] + out.values[i + 2]);
    if (last == n - 2) cap += 0.5 * h * (out.values[n - 2] + out.values[n - 1]);
  } else {
    for (std::size_t i = 0; i + 1 < n; ++i)
      cap += 0.5 * (T_grid[i + 1] - T_grid[i]) * (out.values[i] + out.values[i + 1]);
  }
  out.captured_norm = cap;
  // Missing-norm estimate from the edge values and the tail exponent.
  const double s_exp = tail_slope_guess(s);
  double missing = 0.0;
  if (T_grid.back() > 0.0 && out.values.back() > 0.0 && s_exp > 1.0)
    missing += out.values.back() * T_grid.back() / (s_exp - 1.0);
  if (T_grid.front() < 0.0 && out.values.front() > 0.0 && s_exp > 1.0)
    missing += out.values.front() * (-T_grid.front()) / (s_exp - 1.0);
  out.missing_norm_estimate = missing;
  out.grid_warning = missing > warn_missing;
  return out;
}

double interval_probability(double T1, double T2, const MomentumState& s, double tol) {
  if (!(T2 > T1)) throw DomainError("interval_probability: need T2 > T1");
  const double amp_tol = std::min(tol * 1e-2, 1e-9);
  const auto f = [&](Complex T) -> Complex {
    return pi_value(s, T.real(), amp_tol);
  };
  return integrate_segment(f, Complex{T1, 0.0}, Complex{T2, 0.0}, tol).value.real();
}

MomentumState apply_T_operator(const MomentumState& s) {
  if (!s.domain_ok)
    throw DomainError("apply_T_operator: state outside the operator domain "
                      "(psi / p^{3/2} must vanish at p = 0)");
  MomentumState st;
  st.mass = s.mass;
  st.support_min = s.support_min;
  st.support_max = s.support_max;
  st.sign_support = s.sign_support;
  st.is_real = false;
  st.domain_ok = false;
  const double mh = s.mass * hbar;
  st.psi = [f = s.psi, df = s.dpsi, mh](double p) -> Complex {
    if (p == 0.0) return {};
    return Complex{0.0, -mh} * (df(p) / p - f(p) / (2.0 * p * p));
  };
  st.dpsi = nullptr;  // second derivative of the input is not available
  return st;
}

double t_operator_norm(const MomentumState& s) {
  MomentumState ts = apply_T_operator(s);
  // |T^ psi|^2 with p = sign q^2 against the residual p^{-1/2}-type growth.
  double out = 0.0;
  for (int side : {+1, -1}) {
    const double a = (side > 0) ? std::max(0.0, s.support_min) : s.support_min;
    const double b = (side > 0) ? s.support_max : std::min(0.0, s.support_max);
    if (!((side > 0 && b > 0) || (side < 0 && a < 0))) continue;
    const double qlo = std::sqrt(std::max(0.0, (side > 0) ? a : -b));
    const double qhi = std::sqrt(std::max(0.0, (side > 0) ? b : -a));
    if (!(qhi > qlo)) continue;
    const auto f = [&ts, side](Complex q) -> Complex {
      const double qr = q.real();
      return 2.0 * qr * std::norm(ts.psi(side * qr * qr));
    };
    out += integrate_segment(f, Complex{qlo, 0.0}, Complex{qhi, 0.0}, 1e-12).value.real();
  }
  return std::sqrt(out);
}

double first_moment(const MomentumState& s, double tol) {
  return moment_with_tails(s, 1, 60.0, tol);
}

double second_moment(const MomentumState& s, double tol) {
  return moment_with_tails(s, 2, 100.0, tol);
}

double variance_defect(const MomentumState& s, double tol) {
  const double n = t_operator_norm(s);
  return second_moment(s, tol) - n * n;
}

double tail_watson_slope(double u) { return -(2.0 * u + 1.5); }

double tail_watson_prefactor(const MomentumState& s) {
  if (!s.small_p.valid)
    throw DomainError("tail_watson_prefactor: state carries no small-momentum power law");
  const double g = gamma_real(s.small_p.u + 0.75);
  return s.small_p.c * s.small_p.c * std::sqrt(s.mass * planck_h) * g * g /
         (4.0 * std::pow(pi, 1.5));
}

TailFit tail_exponent(const MomentumState& s, double T_lo, double T_hi, int n_pts,
                      double tol) {
  if (!(T_hi > T_lo) || !(T_lo > 0) || n_pts < 4)
    throw DomainError("tail_exponent: need 0 < T_lo < T_hi and n_pts >= 4");
  std::vector<double> lt(n_pts), lp(n_pts);
  for (int i = 0; i < n_pts; ++i) {
    const double T = T_lo * std::pow(T_hi / T_lo, i / (n_pts - 1.0));
    const double v = pi_value(s, T, tol);
    if (!(v > 0.0)) throw NumericsError("tail_exponent: non-positive density in window");
    lt[i] = std::log(T);
    lp[i] = std::log(v);
  }
  const auto fit = [&](int i0, int i1, double& slope, double& icept) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = i1 - i0;
    for (int i = i0; i < i1; ++i) {
      sx += lt[i];
      sy += lp[i];
      sxx += lt[i] * lt[i];
      sxy += lt[i] * lp[i];
    }
    const double d = n * sxx - sx * sx;
    slope = (n * sxy - sx * sy) / d;
    icept = (sy - slope * sx) / n;
  };
  TailFit out;
  double icept = 0.0;
  fit(0, n_pts, out.slope, icept);
  out.prefactor = std::exp(icept);  // Pi ~ prefactor * T^{slope}
  double s1 = 0, s2 = 0, dummy = 0;
  fit(0, n_pts / 2, s1, dummy);
  fit(n_pts / 2, n_pts, s2, dummy);
  out.slope_drift = s2 - s1;
  return out;
}

Complex coordinate_amp(double x, double t, const MomentumState& s, double tol) {
  const double k1 = x / hbar;
  const double k2 = t / (2.0 * s.mass * hbar);
  const auto f = [&](Complex p) -> Complex {
    const double pr = p.real();
    return s.psi(pr) * std::exp(Complex{0.0, k1 * pr - k2 * pr * pr});
  };
  QuadratureReport r = integrate_segment(f, Complex{s.support_min, 0.0},
                                         Complex{s.support_max, 0.0}, tol);
  return r.value / std::sqrt(planck_h);
}

double flux(double x, double t, const MomentumState& s, double tol) {
  const double k1 = x / hbar;
  const double k2 = t / (2.0 * s.mass * hbar);
  const auto base = [&](Complex p) -> Complex {
    const double pr = p.real();
    return s.psi(pr) * std::exp(Complex{0.0, k1 * pr - k2 * pr * pr});
  };
  const auto weighted = [&](Complex p) -> Complex {
    return base(p) * Complex{0.0, p.real() / hbar};
  };
  const Complex psi = integrate_segment(base, Complex{s.support_min, 0.0},
                                        Complex{s.support_max, 0.0}, tol)
                          .value / std::sqrt(planck_h);
  const Complex dpsi = integrate_segment(weighted, Complex{s.support_min, 0.0},
                                         Complex{s.support_max, 0.0}, tol)
                           .value / std::sqrt(planck_h);
  return (hbar / s.mass) * std::imag(std::conj(psi) * dpsi);
}

std::vector<std::pair<double, double>> backflow_scan(const MomentumState& s, double x,
                                                     const std::vector<double>& t_grid,
                                                     double tol) {
  std::vector<std::pair<double, double>> intervals;
  bool in_run = false;
  double run_start = 0.0, run_last = 0.0;
  for (double t : t_grid) {
    const double J = flux(x, t, s, 1e-12);
    // Strictly negative beyond noise counts as backflow; an exact zero is
    // treated as non-negative.
    if (J < -tol) {
      if (!in_run) {
        in_run = true;
        run_start = t;
      }
      run_last = t;
    } else if (in_run) {
      intervals.emplace_back(run_start, run_last);
      in_run = false;
    }
  }
  if (in_run) intervals.emplace_back(run_start, run_last);
  return intervals;
}

}  // namespace toa
