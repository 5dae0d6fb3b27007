#pragma once

// Independent numerical oracle: integrates the complexified equation
// psi'' = (V - E) psi along x(t) = t - i*eps from both endpoints with
// exponent-selected initial data, matches at t_match via a normalized
// Wronskian, and root-finds eigenvalues by scan + bracket refinement.
//
// Initial data come from the endpoint Frobenius series of the equation in
// y = sin^2 x (left) or u = cos^2 x (right), built term by term from the
// ODE's own recurrence -- independent of the hypergeometric evaluators the
// oracle is meant to check. The bare power w^{1/2+s*beta} is the series'
// leading term; the full series is required for eigenvalue accuracy once
// eps is not small.
//
// Integer exponent difference (integer alpha or beta) makes the subdominant
// endpoint series logarithmic. For such a branch the mismatch is the
// partner-family Wronskian times the normalized resonance ("no-log")
// polynomial N2(E): its roots are exactly the genuine subdominant-family
// levels, while the remaining levels of the formal series coincide
// identically with partner-family states (Euler transformation of the
// terminating 2F1), so the zero set equals the full formal spectrum.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "ptwell/model.hpp"

namespace ptwell::shoot {

using Complex = std::complex<double>;

/// Discretization: endpoints offset by delta in t, total RK4 step budget,
/// and the matching abscissa.
struct IntegrationGrid {
  double delta = 1e-4;
  int steps = 20000;
  double t_match = kHalfPi / 2.0;

  void validate() const {
    if (!(delta > 0.0 && delta < t_match && t_match < kHalfPi - delta))
      throw std::invalid_argument("IntegrationGrid: need 0 < delta < t_match < pi/2 - delta");
    if (steps <= 0) throw std::invalid_argument("IntegrationGrid: steps must be positive");
  }
};

enum class Side { left, right };

struct ShotResult {
  Complex psi{0.0, 0.0};
  Complex dpsi{0.0, 0.0};  // d psi / dt at t_match
  Side side = Side::left;
  double log_scale = 0.0;  // ln of the factor divided out on overflow
};

struct EigenvalueSearch {
  double e_min = 0.0;
  double e_max = 0.0;
  double scan_step = 0.1;
  double tol = 1e-8;  // relative width target of the refinement bracket
  int max_refine = 200;

  void validate() const {
    if (!(e_min < e_max)) throw std::invalid_argument("EigenvalueSearch: need e_min < e_max");
    if (!(scan_step > 0.0)) throw std::invalid_argument("EigenvalueSearch: scan_step must be > 0");
    if (!(tol > 0.0)) throw std::invalid_argument("EigenvalueSearch: tol must be > 0");
    if (max_refine <= 0) throw std::invalid_argument("EigenvalueSearch: max_refine must be > 0");
  }
};

struct EigenvalueResult {
  double energy = 0.0;
  double residual = 0.0;  // |mismatch| at the refined minimum
  bool converged = false;
};

/// psi'' = (V(x) - E) psi.
inline Complex ode_rhs(const WellParameters& p, double E, const Complex& x, const Complex& psi) {
  return (potential_value(p, x) - E) * psi;
}

namespace detail {

// Coefficient polynomials of the Frobenius recurrence for the equation in
// the endpoint variable (y at the left, u = 1 - y at the right), after
// clearing the 1/(1-y) pole:
//   P(r+m) c_m + Q(r+m-1) c_{m-1} + R(r+m-2) c_{m-2} = 0,  c_0 = 1,
// where bb is the local strength (beta left, alpha right) and aa the other.
struct IndicialPolys {
  double b4, a4, E;
  double P(double s) const { return s * (s - 1.0) + 0.5 * s - b4; }
  double Q(double s) const { return -2.0 * s * (s - 1.0) - 1.5 * s + 0.25 * E + b4 - a4; }
  double R(double s) const { return s * s - 0.25 * E; }
};

inline bool subdominant_resonant(double bb, int sign) {
  if (sign != -1) return false;
  const double r = std::round(bb);
  return r >= 1.0 && std::abs(bb - r) < 1e-9;
}

struct EndpointSeries {
  double mu = 0.0;        // exponent in the endpoint variable
  std::vector<double> c;  // series coefficients, c[0] = 1
};

inline EndpointSeries endpoint_series(double bb, double aa, int sign, double E, double abs_w0) {
  if (std::abs(bb) < 1e-8)
    throw std::domain_error("endpoint series: degenerate (coalescing) exponents");
  if (subdominant_resonant(bb, sign))
    throw std::domain_error("endpoint series: integer exponent difference (logarithmic case)");
  if (abs_w0 > 0.4)
    throw std::domain_error("endpoint series: start point too far from the endpoint (epsilon too large)");
  const IndicialPolys ip{(bb * bb - 0.25) / 4.0, (aa * aa - 0.25) / 4.0, E};
  EndpointSeries es;
  es.mu = 0.25 + 0.5 * sign * bb;
  es.c = {1.0};
  constexpr int kMaxTerms = 80;
  double scale = 1.0;
  int small_run = 0;
  for (int m = 1; m <= kMaxTerms; ++m) {
    const double num = ip.Q(es.mu + m - 1) * es.c[m - 1] +
                       (m >= 2 ? ip.R(es.mu + m - 2) * es.c[m - 2] : 0.0);
    es.c.push_back(-num / ip.P(es.mu + m));
    const double bound = std::abs(es.c.back()) * std::pow(abs_w0, m);
    scale = std::max(scale, bound);
    if (bound < 1e-17 * scale) {
      if (++small_run >= 2) break;
    } else {
      small_run = 0;
    }
  }
  return es;
}

// Resonance numerator of the subdominant series at an endpoint with integer
// strength bb = N: the series is log-free exactly at the roots of this
// degree-N polynomial in E.
inline double nolog_polynomial(double bb, double aa, double E) {
  const int N = static_cast<int>(std::llround(bb));
  if (N < 1) throw std::invalid_argument("nolog_polynomial: needs integer strength >= 1");
  const IndicialPolys ip{(bb * bb - 0.25) / 4.0, (aa * aa - 0.25) / 4.0, E};
  const double mu = 0.25 - 0.5 * bb;
  std::vector<double> c = {1.0};
  for (int m = 1; m < N; ++m) {
    const double num =
        ip.Q(mu + m - 1) * c[m - 1] + (m >= 2 ? ip.R(mu + m - 2) * c[m - 2] : 0.0);
    c.push_back(-num / ip.P(mu + m));
  }
  return ip.Q(mu + N - 1) * c[N - 1] + (N >= 2 ? ip.R(mu + N - 2) * c[N - 2] : 0.0);
}

// Evaluate the series solution and its t-derivative at the start point.
inline std::pair<Complex, Complex> eval_series(const EndpointSeries& es, Side side,
                                               const Complex& x0) {
  Complex w, dw_dt, base;
  if (side == Side::left) {
    const Complex sx = std::sin(x0);
    w = sx * sx;
    dw_dt = std::sin(2.0 * x0);
    base = std::pow(sx, 2.0 * es.mu);
  } else {
    const Complex cx = std::cos(x0);
    w = cx * cx;
    dw_dt = -std::sin(2.0 * x0);
    base = std::pow(cx, 2.0 * es.mu);
  }
  Complex s0(0.0, 0.0), s1(0.0, 0.0);
  for (int m = static_cast<int>(es.c.size()) - 1; m >= 0; --m) {
    s0 = s0 * w + es.c[m];
    s1 = s1 * w + es.c[m] * (es.mu + m);
  }
  const Complex psi = base * s0;
  const Complex dpsi = base / w * s1 * dw_dt;
  return {psi, dpsi};
}

}  // namespace detail

/// Series-resolved initial data (psi, dpsi/dt) at the start abscissa of one
/// side; `sign` selects the exponent family (sigma at the left, tau at the
/// right). Leading order is w^{1/2 + sign*beta} (left) / w^{1/2 + sign*alpha}
/// (right) with w = x(delta) resp. pi/2 - x(pi/2 - delta).
inline std::pair<Complex, Complex> initial_values(int sign, Side side, const WellParameters& p,
                                                  const Contour& contour,
                                                  const IntegrationGrid& grid, double E) {
  grid.validate();
  if (sign != 1 && sign != -1) throw std::invalid_argument("initial_values: sign must be +1/-1");
  if (side == Side::left) {
    const Complex x0 = contour_point(contour, grid.delta);
    const auto es = detail::endpoint_series(p.beta, p.alpha, sign, E, std::abs(map_y(x0)));
    return detail::eval_series(es, side, x0);
  }
  const Complex x0 = contour_point(contour, kHalfPi - grid.delta);
  const auto es =
      detail::endpoint_series(p.alpha, p.beta, sign, E, std::abs(Complex(1.0, 0.0) - map_y(x0)));
  return detail::eval_series(es, side, x0);
}

namespace detail {

// Fixed t-grid with the potential precomputed at nodes and midpoints; the
// expensive trigonometry is E-independent and shared across an entire scan.
struct SidePlan {
  Side side = Side::left;
  double t0 = 0.0;
  double h = 0.0;  // signed step
  int nsteps = 0;
  std::vector<Complex> v_node;  // V at t0 + i h, i = 0..nsteps
  std::vector<Complex> v_mid;   // V at t0 + (i + 1/2) h, i = 0..nsteps-1
};

inline SidePlan make_plan(const WellParameters& p, const Contour& c, const IntegrationGrid& g,
                          Side side) {
  g.validate();
  SidePlan pl;
  pl.side = side;
  const double span = kHalfPi - 2.0 * g.delta;
  const double t0 = (side == Side::left) ? g.delta : kHalfPi - g.delta;
  const double t1 = g.t_match;
  const double len = std::abs(t1 - t0);
  pl.nsteps = std::max(16, static_cast<int>(std::lround(g.steps * len / span)));
  pl.t0 = t0;
  pl.h = (t1 - t0) / pl.nsteps;
  pl.v_node.resize(pl.nsteps + 1);
  pl.v_mid.resize(pl.nsteps);
  for (int i = 0; i <= pl.nsteps; ++i)
    pl.v_node[i] = potential_value(p, contour_point(c, t0 + i * pl.h));
  for (int i = 0; i < pl.nsteps; ++i)
    pl.v_mid[i] = potential_value(p, contour_point(c, t0 + (i + 0.5) * pl.h));
  return pl;
}

inline ShotResult integrate_plan(const SidePlan& pl, double E,
                                 const std::pair<Complex, Complex>& init) {
  Complex psi = init.first;
  Complex dpsi = init.second;
  double log_scale = 0.0;
  const double h = pl.h;
  for (int i = 0; i < pl.nsteps; ++i) {
    const Complex f0 = pl.v_node[i] - E;
    const Complex fm = pl.v_mid[i] - E;
    const Complex f1 = pl.v_node[i + 1] - E;
    const Complex k1p = dpsi;
    const Complex k1d = f0 * psi;
    const Complex k2p = dpsi + 0.5 * h * k1d;
    const Complex k2d = fm * (psi + 0.5 * h * k1p);
    const Complex k3p = dpsi + 0.5 * h * k2d;
    const Complex k3d = fm * (psi + 0.5 * h * k2p);
    const Complex k4p = dpsi + h * k3d;
    const Complex k4d = f1 * (psi + h * k3p);
    psi += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    dpsi += h / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
    if ((i + 1) % 100 == 0) {
      const double m = std::max(std::abs(psi), std::abs(dpsi));
      if (m > 1e100) {
        psi /= m;
        dpsi /= m;
        log_scale += std::log(m);
      }
      if (!std::isfinite(m)) throw std::runtime_error("integrate: non-finite state");
    }
  }
  if (!std::isfinite(std::abs(psi)) || !std::isfinite(std::abs(dpsi)))
    throw std::runtime_error("integrate: non-finite state");
  return {psi, dpsi, pl.side, log_scale};
}

struct MismatchContext {
  WellParameters params;
  Contour contour;
  IntegrationGrid grid;
  Branch branch{+1, +1};
  int sigma_eff = +1;
  int tau_eff = +1;
  bool left_resonant = false;
  bool right_resonant = false;
  SidePlan left_plan;
  SidePlan right_plan;
};

// Hermitian mode keeps delta > 0 but the endpoint families are barely
// separated once an exponent is close to 1/2; flag that regime.
inline bool hermitian_ill_conditioned(const Branch& br, const WellParameters& p,
                                      const Contour& c) {
  if (c.epsilon > 0.0) return false;
  return std::abs(br.sigma * p.beta) < 0.05 || std::abs(br.tau * p.alpha) < 0.05;
}

inline MismatchContext make_mismatch_context(const Branch& br, const WellParameters& p,
                                             const Contour& c, const IntegrationGrid& g) {
  MismatchContext ctx{p, c, g, br, +1, +1, false, false, {}, {}};
  ctx.left_resonant = subdominant_resonant(p.beta, br.sigma);
  ctx.right_resonant = subdominant_resonant(p.alpha, br.tau);
  ctx.sigma_eff = ctx.left_resonant ? +1 : br.sigma;
  ctx.tau_eff = ctx.right_resonant ? +1 : br.tau;
  ctx.left_plan = make_plan(p, c, g, Side::left);
  ctx.right_plan = make_plan(p, c, g, Side::right);
  return ctx;
}

inline Complex eval_mismatch(const MismatchContext& ctx, double E) {
  const auto init_l =
      initial_values(ctx.sigma_eff, Side::left, ctx.params, ctx.contour, ctx.grid, E);
  const auto init_r =
      initial_values(ctx.tau_eff, Side::right, ctx.params, ctx.contour, ctx.grid, E);
  const ShotResult L = integrate_plan(ctx.left_plan, E, init_l);
  const ShotResult R = integrate_plan(ctx.right_plan, E, init_r);
  const Complex t1 = L.psi * R.dpsi;
  const Complex t2 = L.dpsi * R.psi;
  const double norm = std::max(std::abs(t1), std::abs(t2));
  Complex w = (norm > 0.0) ? (t1 - t2) / norm : (t1 - t2);
  if (ctx.left_resonant) {
    const double n2 = nolog_polynomial(ctx.params.beta, ctx.params.alpha, E);
    w *= n2 / (1.0 + std::abs(n2));
  }
  if (ctx.right_resonant) {
    const double n2 = nolog_polynomial(ctx.params.alpha, ctx.params.beta, E);
    w *= n2 / (1.0 + std::abs(n2));
  }
  return w;
}

}  // namespace detail

/// One RK4 shot from an endpoint to t_match.
inline ShotResult integrate(const WellParameters& p, double E, const Contour& c,
                            const IntegrationGrid& g, Side side,
                            const std::pair<Complex, Complex>& init) {
  return detail::integrate_plan(detail::make_plan(p, c, g, side), E, init);
}

/// Scaled Wronskian of the two shots at t_match, normalized by
/// max(|psi_L dpsi_R|, |dpsi_L psi_R|); zero iff the shots are linearly
/// dependent. For a branch whose subdominant endpoint series is logarithmic
/// (integer strength) this is the partner-family Wronskian times the
/// normalized no-log polynomial -- zero exactly on the formal spectrum.
inline Complex mismatch(double E, const Branch& br, const WellParameters& p, const Contour& c,
                        const IntegrationGrid& g) {
  return detail::eval_mismatch(detail::make_mismatch_context(br, p, c, g), E);
}

namespace detail {

// Golden-section minimization of f on [a, b] down to the width target, with
// a final three-point parabolic polish.
template <typename F>
inline std::pair<double, double> minimize_bracket(F&& f, double a, double b, double width_target,
                                                  int max_evals) {
  constexpr double kInvPhi = 0.61803398874989484820;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  int evals = 2;
  while (b - a > width_target && evals < max_evals) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
    ++evals;
  }
  double xb = (f1 < f2) ? x1 : x2;
  double fb = std::min(f1, f2);
  // parabola through (a, m, b) on f^2; vertex inside the bracket only
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fbb = f(b);
  const double d1 = (m - a), d2 = (b - m);
  const double ya = fa * fa, ym = fm * fm, yb = fbb * fbb;
  const double denom = d2 * (ym - ya) - d1 * (yb - ym);
  if (std::abs(denom) > 0.0) {
    const double v = m - 0.5 * (d1 * d1 * (yb - ym) + d2 * d2 * (ym - ya)) / (-denom);
    if (v > a && v < b) {
      const double fv = f(v);
      if (fv < fb) {
        xb = v;
        fb = fv;
      }
    }
  }
  if (fm < fb) {
    xb = m;
    fb = fm;
  }
  return {xb, fb};
}

}  // namespace detail

/// Scan |mismatch| over [e_min, e_max], refine every local minimum below 0.1
/// by golden section + parabolic polish, and report refined minima in
/// ascending E. Entries with final |mismatch| < 1e-6 are converged
/// eigenvalues; others are kept flagged. Deterministic.
inline std::vector<EigenvalueResult> find_eigenvalues(const EigenvalueSearch& search,
                                                      const Branch& br, const WellParameters& p,
                                                      const Contour& c, const IntegrationGrid& g) {
  search.validate();
  if (detail::hermitian_ill_conditioned(br, p, c))
    std::fprintf(stderr,
                 "ptwell: warning: eps = 0 with an endpoint strength below 0.05 is badly "
                 "ill-conditioned\n");
  const auto ctx = detail::make_mismatch_context(br, p, c, g);
  const auto f = [&](double E) { return std::abs(detail::eval_mismatch(ctx, E)); };

  const int n_scan = static_cast<int>(std::floor((search.e_max - search.e_min) / search.scan_step)) + 1;
  std::vector<double> es(n_scan), vals(n_scan);
  for (int i = 0; i < n_scan; ++i) {
    es[i] = search.e_min + i * search.scan_step;
    vals[i] = f(es[i]);
  }

  std::vector<EigenvalueResult> out;
  for (int i = 0; i < n_scan; ++i) {
    if (vals[i] >= 0.1) continue;
    const bool left_ok = (i == 0) || vals[i] <= vals[i - 1];
    const bool right_ok = (i == n_scan - 1) || vals[i] <= vals[i + 1];
    if (!(left_ok && right_ok)) continue;
    const double lo = std::max(search.e_min, es[i] - search.scan_step);
    const double hi = std::min(search.e_max, es[i] + search.scan_step);
    const double width = std::max(search.tol * std::max(std::abs(es[i]), 1e-4), 1e-13);
    auto [e_ref, r_ref] = detail::minimize_bracket(f, lo, hi, width, search.max_refine);
    out.push_back({e_ref, r_ref, r_ref < 1e-6});
  }

  std::sort(out.begin(), out.end(),
            [](const EigenvalueResult& a, const EigenvalueResult& b) { return a.energy < b.energy; });
  // merge duplicates refined from adjacent scan candidates; the scan cannot
  // resolve minima closer than one step anyway
  std::vector<EigenvalueResult> dedup;
  for (const auto& r : out) {
    if (!dedup.empty() && std::abs(r.energy - dedup.back().energy) < 0.5 * search.scan_step) {
      if (r.residual < dedup.back().residual) dedup.back() = r;
    } else {
      dedup.push_back(r);
    }
  }
  return dedup;
}

/// Scaled defect of a sampled function against psi'' + (E - V) psi = 0 along
/// the contour: max over interior nodes of
/// |psi''_fd + (E - V) psi| / max(|psi''_fd|, |(E - V) psi|, 1e-30).
/// psi''_fd is the five-point fourth-order central difference in t. The
/// stencil step balances H^4 truncation against the 1/H^2 amplification of
/// psi-sample rounding: ~E^{-1/3} in the oscillatory bulk, and proportional
/// to the distance from the endpoint singularities where the prefactor
/// derivatives grow like |w|^{-4}. Keeps the floor near 1e-8 in doubles;
/// a plain grid-step stencil bottoms out around 1e-6.
inline double residual_norm(const std::function<Complex(const Complex&)>& psi_fn,
                            const WellParameters& p, double E, const Contour& c,
                            const IntegrationGrid& g) {
  g.validate();
  const int n = g.steps;
  const double t0 = g.delta;
  const double t1 = kHalfPi - g.delta;
  const double h = (t1 - t0) / n;
  const double h_bulk = 1.1e-3 * std::cbrt(60.0 / std::max(std::abs(E), 1.0));
  double worst = 0.0;
  for (int i = 1; i < n; ++i) {
    const double t = t0 + i * h;
    const double w_left = std::hypot(t, c.epsilon);
    const double w_right = std::hypot(kHalfPi - t, c.epsilon);
    const double H = std::min(h_bulk, 4.5e-3 * std::min(w_left, w_right));
    if (t - 2.0 * H <= t0 || t + 2.0 * H >= t1) continue;
    const Complex f0 = psi_fn(contour_point(c, t));
    const Complex f1p = psi_fn(contour_point(c, t + H));
    const Complex f1m = psi_fn(contour_point(c, t - H));
    const Complex f2p = psi_fn(contour_point(c, t + 2.0 * H));
    const Complex f2m = psi_fn(contour_point(c, t - 2.0 * H));
    const Complex psidd = (-f2m + 16.0 * f1m - 30.0 * f0 + 16.0 * f1p - f2p) / (12.0 * H * H);
    const Complex rhs = (E - potential_value(p, contour_point(c, t))) * f0;
    const double denom = std::max({std::abs(psidd), std::abs(rhs), 1e-30});
    worst = std::max(worst, std::abs(psidd + rhs) / denom);
  }
  return worst;
}

}  // namespace ptwell::shoot
