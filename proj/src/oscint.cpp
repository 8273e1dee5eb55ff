#include <toa/oscint.hpp>

#include <algorithm>
#include <cmath>

namespace toa {
namespace {

// 15-point Kronrod / 7-point Gauss nodes and weights (QUADPACK dqk15).
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline void kahan_add(Complex& sum, Complex& comp, Complex term) {
  Complex y = term - comp;
  Complex t = sum + y;
  comp = (t - sum) - y;
  sum = t;
}

struct Panel {
  Complex value;
  double err;
};

Panel kronrod_panel(const ComplexIntegrand& f, Complex a, Complex b, long& evals) {
  const Complex c = 0.5 * (a + b);
  const Complex h = 0.5 * (b - a);
  const Complex fc = f(c);
  Complex i7 = wg[3] * fc;
  Complex i15 = wgk[7] * fc;
  for (int j = 0; j < 7; ++j) {
    const Complex fp = f(c + xgk[j] * h);
    const Complex fm = f(c - xgk[j] * h);
    i15 += wgk[j] * (fp + fm);
    if (j % 2 == 1) i7 += wg[j / 2] * (fp + fm);
  }
  evals += 15;
  i15 *= h;
  i7 *= h;
  return {i15, std::abs(i15 - i7)};
}

struct Node {
  Complex a;
  Complex b;
  Complex value;
  double err;
};

}  // namespace

// Globally adaptive bisection: always split the interval with the largest
// error estimate until the summed estimate meets the budget. A per-panel
// budget (tolerance halving along the recursion) would wedge against the
// roundoff floor — once a panel's estimate is dominated by cancellation
// noise, bisection shrinks estimate and budget at the same rate and the
// refinement never terminates. The global queue instead spends work only
// where it still pays.
//
// The Gauss/Kronrod difference can be fooled on oscillatory integrands when
// a panel width aligns with the period (both rules integrate the panel
// wrongly but agree). Each converged generation is therefore verified by
// bisecting every panel once and comparing the two sums; halving the width
// de-tunes any alignment, so a spurious agreement shows up as a coarse/fine
// discrepancy and refinement resumes. Gives up honestly (ToleranceError)
// when the evaluation budget is exhausted.
QuadratureReport integrate_segment(const ComplexIntegrand& f, Complex a, Complex b,
                                   double abs_tol) {
  if (abs_tol <= 0) throw DomainError("integrate_segment: tolerance must be positive");
  constexpr long max_evals = 900000;
  const double min_len = 1e-14 * std::abs(b - a);
  long evals = 0;

  const auto by_err = [](const Node& u, const Node& v) { return u.err < v.err; };
  std::vector<Node> queue;   // heap ordered by error estimate
  std::vector<Node> frozen;  // intervals too short to split further
  const auto push = [&](Node n) {
    if (std::abs(n.b - n.a) <= min_len) {
      frozen.push_back(n);
    } else {
      queue.push_back(n);
      std::push_heap(queue.begin(), queue.end(), by_err);
    }
  };
  const auto split = [&](const Node& n) {
    const Complex m = 0.5 * (n.a + n.b);
    Panel left = kronrod_panel(f, n.a, m, evals);
    Panel right = kronrod_panel(f, m, n.b, evals);
    push({n.a, m, left.value, left.err});
    push({m, n.b, right.value, right.err});
    return left.err + right.err - n.err;
  };
  const auto total = [&](double& err_out) {
    Complex sum{};
    Complex comp{};
    err_out = 0.0;
    for (const auto& n : queue) {
      kahan_add(sum, comp, n.value);
      err_out += n.err;
    }
    for (const auto& n : frozen) {
      kahan_add(sum, comp, n.value);
      err_out += n.err;
    }
    return sum;
  };

  Panel first = kronrod_panel(f, a, b, evals);
  push({a, b, first.value, first.err});
  double running_err = first.err;

  double sweep_dev = 0.0;
  for (;;) {
    while (running_err > abs_tol && !queue.empty() && evals < max_evals) {
      std::pop_heap(queue.begin(), queue.end(), by_err);
      Node worst = queue.back();
      queue.pop_back();
      running_err += split(worst);
    }
    double err = 0.0;
    const Complex coarse = total(err);
    if (err > abs_tol || queue.empty() || evals >= max_evals) {
      const double achieved = std::max(err, sweep_dev);
      if (achieved > abs_tol)
        throw ToleranceError("integrate_segment: requested tolerance not met", coarse,
                             achieved);
      return {coarse, achieved, evals};
    }
    // Verification sweep: bisect every remaining panel once.
    std::vector<Node> parents;
    parents.swap(queue);
    for (const auto& n : parents) split(n);
    const Complex fine = total(running_err);
    sweep_dev = std::abs(fine - coarse);
    if (sweep_dev <= abs_tol && running_err <= abs_tol)
      return {fine, std::max(running_err, sweep_dev), evals};
  }
}

ContourPath build_toa_contour(double x, double T, double m) {
  if (T == 0.0) throw DomainError("build_toa_contour: T must be nonzero");
  if (!(m > 0.0)) throw DomainError("build_toa_contour: mass must be positive");
  ContourPath path;
  const double aT = std::abs(T);
  const double y0 = m * x / aT;
  const Complex turn{0.0, y0};
  if (y0 != 0.0) path.segments.push_back({Complex{0.0, 0.0}, turn});
  path.has_ray = true;
  path.ray_origin = turn;
  const double s = (T > 0) ? 1.0 : -1.0;
  path.ray_direction = Complex{std::sqrt(0.5), s * std::sqrt(0.5)};
  // Gaussian factor decays over sqrt(2 m hbar / |T|); for x < 0 the modulus
  // peaks where the ray crosses the stationary point -m x / T on the real
  // axis, a distance sqrt(2) m |x| / |T| along the ray.
  const double diffusion = std::sqrt(2.0 * m * hbar / aT);
  path.ray_min_length =
      ((x < 0) ? std::sqrt(2.0) * m * (-x) / aT : 0.0) + 10.0 * diffusion + 10.0;
  return path;
}

QuadratureReport integrate_contour(const ComplexIntegrand& f, const ContourPath& path,
                                   double abs_tol) {
  if (abs_tol <= 0) throw DomainError("integrate_contour: tolerance must be positive");
  Complex total{};
  Complex comp{};
  double err = 0.0;
  long evals = 0;
  // A piece may legitimately bottom out on its cancellation floor (error
  // bounded by roundoff on the local modulus) while the contour total is
  // large; accept the best value with its honest error and enforce only the
  // aggregate budget at the end.
  const auto integrate_piece = [&f](Complex a, Complex b, double tol) {
    try {
      return integrate_segment(f, a, b, tol);
    } catch (const ToleranceError& e) {
      return QuadratureReport{e.best, e.achieved, 0};
    }
  };
  const double seg_budget = path.has_ray ? 0.5 * abs_tol : abs_tol;
  const std::size_t nseg = path.segments.size();
  for (const auto& [a, b] : path.segments) {
    if (std::abs(b - a) == 0.0) continue;
    QuadratureReport r = integrate_piece(a, b, seg_budget / std::max<std::size_t>(nseg, 1));
    kahan_add(total, comp, r.value);
    err += r.error_estimate;
    evals += r.evaluations;
  }
  if (path.has_ray) {
    const double ray_tol = 0.5 * abs_tol;
    double covered = 0.0;
    double step = 1.0;
    int quiet = 0;
    for (int k = 0;; ++k) {
      if (k > 200 || covered > 1e7)
        throw ConvergenceError("integrate_contour: ray contribution failed to decay");
      const Complex a = path.ray_origin + covered * path.ray_direction;
      const Complex b = path.ray_origin + (covered + step) * path.ray_direction;
      // Halving per chunk keeps the summed budget <= ray_tol; the floor at
      // 2^-20 keeps far-out chunk tolerances reachable (a slowly decaying
      // integrand must reach the non-decay detector below, not wedge on an
      // impossible chunk tolerance first).
      const double tol_k = ray_tol / std::pow(2.0, std::min(k + 1, 20));
      QuadratureReport r = integrate_piece(a, b, tol_k);
      kahan_add(total, comp, r.value);
      err += r.error_estimate;
      evals += r.evaluations;
      covered += step;
      step = std::min(2.0 * step, 512.0);
      if (covered >= path.ray_min_length) {
        const double scale = std::max(std::abs(total), 1e-12);
        if (std::abs(r.value) <= path.damping_threshold * scale) {
          if (++quiet >= 2) break;
        } else {
          quiet = 0;
        }
      }
    }
  }
  if (err > abs_tol)
    throw ToleranceError("integrate_contour: requested tolerance not met", total, err);
  return {total, err, evals};
}

QuadratureReport integrate_damped_quartic(const ComplexIntegrand& f, double c,
                                          double tol) {
  if (!(c > 0.0)) throw DomainError("integrate_damped_quartic: damping constant must be positive");
  if (tol <= 0) throw DomainError("integrate_damped_quartic: tolerance must be positive");
  const double L = std::log(1.0 / std::min(std::max(tol, 1e-300), 1e-6)) + 12.0;
  const double p_max = std::pow(L / c, 0.25);
  return integrate_segment(f, Complex{0.0, 0.0}, Complex{p_max, 0.0}, tol);
}

namespace slow_oracle {

QuadratureReport integrate_real_axis(const ComplexIntegrand& f, double p_max,
                                     double tol) {
  if (!(p_max > 0.0)) throw DomainError("integrate_real_axis: p_max must be positive");
  if (tol <= 0) throw DomainError("integrate_real_axis: tolerance must be positive");
  long evals = 0;
  Complex prev{};
  for (long n = 64; n <= (1L << 21); n *= 2) {
    Complex sum{};
    Complex comp{};
    const double h = p_max / static_cast<double>(n);
    for (long i = 0; i < n; ++i) {
      Panel p = kronrod_panel(f, Complex{i * h, 0.0}, Complex{(i + 1) * h, 0.0}, evals);
      kahan_add(sum, comp, p.value);
    }
    if (n > 64) {
      const double diff = std::abs(sum - prev);
      if (diff <= tol * std::max(std::abs(sum), 1.0)) return {sum, diff, evals};
    }
    prev = sum;
  }
  throw ConvergenceError("integrate_real_axis: dyadic refinement stalled");
}

}  // namespace slow_oracle
}  // namespace toa
