#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "ptwell/exact.hpp"
#include "ptwell/shoot.hpp"
#include "test_util.hpp"

using namespace ptwell;
using testutil::rel_err;

namespace {

const WellParameters kFlagship = WellParameters::from_couplings(2.5, 1.25);
const WellParameters kGeneric = WellParameters::from_couplings(1.3, 0.8);  // alpha=.8, beta=.3

// residual of the equation in y for a pure power y^mu near y = 0, reduced
// by y^(mu-1): vanishes exactly at the indicial exponent.
double indicial_residual(double mu, double alpha, double beta, double E, double y) {
  const double lead = mu * (mu - 1.0) * std::pow(y, mu - 1.0) * (1.0 - y) +
                      (0.5 - y) * mu * std::pow(y, mu - 1.0) +
                      0.25 * (E - (beta * beta - 0.25) / y - (alpha * alpha - 0.25) / (1.0 - y)) *
                          std::pow(y, mu);
  return lead / std::pow(y, mu - 1.0);
}

// least-squares fit of samples f(z_i) against {z^e, z^-e, z^(e+2), z^(-e+2)};
// returns the coefficient of z^e. Normal equations, complex, 4x4.
testutil::Complex fit_threshold_coefficient(const std::vector<double>& zs,
                                            const std::vector<Complex>& fs, double e) {
  constexpr int nb = 4;
  const double expo[nb] = {e, -e, e + 2.0, -e + 2.0};
  Complex ata[nb][nb] = {};
  Complex atb[nb] = {};
  for (std::size_t i = 0; i < zs.size(); ++i) {
    double base[nb];
    for (int j = 0; j < nb; ++j) base[j] = std::pow(zs[i], expo[j]);
    for (int j = 0; j < nb; ++j) {
      for (int l = 0; l < nb; ++l) ata[j][l] += base[j] * base[l];
      atb[j] += base[j] * fs[i];
    }
  }
  int perm[nb] = {0, 1, 2, 3};
  for (int col = 0; col < nb; ++col) {
    int piv = col;
    for (int r = col + 1; r < nb; ++r)
      if (std::abs(ata[perm[r]][col]) > std::abs(ata[perm[piv]][col])) piv = r;
    std::swap(perm[col], perm[piv]);
    for (int r = col + 1; r < nb; ++r) {
      const Complex f = ata[perm[r]][col] / ata[perm[col]][col];
      for (int l = col; l < nb; ++l) ata[perm[r]][l] -= f * ata[perm[col]][l];
      atb[perm[r]] -= f * atb[perm[col]];
    }
  }
  Complex x[nb];
  for (int r = nb - 1; r >= 0; --r) {
    Complex s = atb[perm[r]];
    for (int l = r + 1; l < nb; ++l) s -= ata[perm[r]][l] * x[l];
    x[r] = s / ata[perm[r]][r];
  }
  return x[0];
}

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& fs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lx = std::log(xs[i]);
    const double ly = std::log(fs[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(xs.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("exponents and indicial consistency") {
  const auto e = exact::exponents(kFlagship, Branch(+1, +1));
  CHECK(e.kappa == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(e.lambda == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(e.mu == doctest::Approx(0.625).epsilon(1e-15));
  const auto em = exact::exponents(kFlagship, Branch(-1, +1));
  CHECK(em.kappa == doctest::Approx(-0.25).epsilon(1e-14));

  for (const Branch& br : all_branches()) {
    const auto ex = exact::exponents(kFlagship, br);
    CHECK(std::abs(4.0 * ex.mu * (ex.mu - 0.5) - (kFlagship.beta * kFlagship.beta - 0.25)) < 1e-13);
    CHECK(std::abs(4.0 * ex.nu * (ex.nu - 0.5) - (kFlagship.alpha * kFlagship.alpha - 0.25)) <
          1e-13);
    // numeric indicial substitution: the y^(mu-1) coefficient vanishes as y -> 0
    CHECK(std::abs(indicial_residual(ex.mu, kFlagship.alpha, kFlagship.beta, 7.3, 1e-9)) < 1e-6);
  }
}

TEST_CASE("termination_k examples") {
  CHECK(exact::termination_k(kFlagship, Branch(+1, +1), 0) == doctest::Approx(3.75).epsilon(1e-15));
  CHECK(exact::termination_k(kFlagship, Branch(-1, -1), 0) ==
        doctest::Approx(-1.75).epsilon(1e-15));
  CHECK(exact::energy(kFlagship, Branch(-1, -1), 0) == doctest::Approx(3.0625).epsilon(1e-15));
  // symmetric well: (+,-) and (-,+) are coupling-independent, |k| = 2n+1
  for (double Bsym : {0.9, 1.25, 2.0}) {
    const auto ps = WellParameters::from_couplings(Bsym, Bsym);
    for (int n = 0; n <= 3; ++n) {
      CHECK(exact::termination_k(ps, Branch(+1, -1), n) ==
            doctest::Approx(2.0 * n + 1.0).epsilon(1e-13));
      CHECK(exact::energy(ps, Branch(-1, +1), n) ==
            doctest::Approx((2.0 * n + 1.0) * (2.0 * n + 1.0)).epsilon(1e-13));
    }
  }
}

TEST_CASE("energy: Hermitian recovery, expanded form, shift invariances") {
  const double expect[3] = {14.0625, 33.0625, 60.0625};
  for (int n = 0; n < 3; ++n)
    CHECK(rel_err(exact::energy(kFlagship, Branch(+1, +1), n), expect[n]) < 1e-15);
  for (int n = 0; n <= 5; ++n) {
    const double want = std::pow(kFlagship.A + kFlagship.B + 2.0 * n, 2);
    CHECK(rel_err(exact::energy(kFlagship, Branch(+1, +1), n), want) < 1e-12);
  }
  // free box A=B=1: E_n = 4(n+1)^2
  const auto pbox = WellParameters::from_couplings(1.0, 1.0);
  for (int n = 0; n <= 3; ++n)
    CHECK(rel_err(exact::energy(pbox, Branch(+1, +1), n), 4.0 * (n + 1.0) * (n + 1.0)) < 1e-14);

  CHECK(rel_err(exact::energy(kFlagship, Branch(-1, +1), 0), 5.0625) < 1e-14);

  // E = k^2 exactly, and the expanded quadratic form
  testutil::Rng rng(21);
  for (int i = 0; i < 40; ++i) {
    const auto p = WellParameters::from_strengths(rng.uniform(0.05, 3.0), rng.uniform(0.05, 3.0));
    for (const Branch& br : all_branches()) {
      const int n = static_cast<int>(rng.uniform(0.0, 4.999));
      const double k = exact::termination_k(p, br, n);
      CHECK(exact::energy(p, br, n) == k * k);
      const double expanded = p.alpha * p.alpha + p.beta * p.beta +
                              2.0 * br.sigma * br.tau * p.alpha * p.beta +
                              (4.0 * n + 2.0) * (br.sigma * p.beta + br.tau * p.alpha) +
                              (2.0 * n + 1.0) * (2.0 * n + 1.0);
      CHECK(rel_err(exact::energy(p, br, n), expanded) < 1e-12);
    }
  }

  // Sigma/Delta dependence under strength shifts
  for (double s : {0.1, 0.37}) {
    const auto p_delta = WellParameters::from_strengths(0.8 + s, 0.3 + s);
    const auto p_sigma = WellParameters::from_strengths(0.8 + s, 0.3 - s, true);
    for (int n = 0; n <= 3; ++n) {
      CHECK(rel_err(exact::energy(p_delta, Branch(+1, -1), n),
                    exact::energy(kGeneric, Branch(+1, -1), n)) < 1e-12);
      CHECK(rel_err(exact::energy(p_delta, Branch(-1, +1), n),
                    exact::energy(kGeneric, Branch(-1, +1), n)) < 1e-12);
      CHECK(rel_err(exact::energy(p_sigma, Branch(+1, +1), n),
                    exact::energy(kGeneric, Branch(+1, +1), n)) < 1e-12);
      CHECK(rel_err(exact::energy(p_sigma, Branch(-1, -1), n),
                    exact::energy(kGeneric, Branch(-1, -1), n)) < 1e-12);
    }
  }
}

TEST_CASE("connection_factor nullification at termination") {
  for (const Branch& br : all_branches()) {
    for (int n = 0; n <= 5; ++n) {
      const double kn = exact::termination_k(kGeneric, br, n);
      // the co-factor of the second subseries: G^{(sigma, -tau)} at k_n
      const auto g = exact::connection_factor(kGeneric, Branch(br.sigma, -br.tau), {kn, 0.0});
      CHECK(std::abs(g.value) < 1e-12);
    }
  }
}

TEST_CASE("connection_factor numerator pole reporting and beta -> 0 regularity") {
  // integer alpha with tau = +1 hits Gamma(-alpha)
  CHECK_THROWS_AS(exact::connection_factor(kFlagship, Branch(+1, +1), {1.3, 0.0}),
                  std::domain_error);
  CHECK_NOTHROW(exact::connection_factor(kFlagship, Branch(+1, -1), {1.3, 0.0}));
  // Gamma(1 + sigma*beta) -> 1 as beta -> 0: the factor stays regular
  const auto p_small = WellParameters::from_strengths(0.8, 1e-6, true);
  const auto p_tiny = WellParameters::from_strengths(0.8, 1e-9, true);
  const Complex k{1.3, 0.0};
  const auto g1 = exact::connection_factor(p_small, Branch(+1, +1), k);
  const auto g2 = exact::connection_factor(p_tiny, Branch(+1, +1), k);
  CHECK(rel_err(g1.value, g2.value) < 1e-5);
}

TEST_CASE("connection_factor against a right-threshold least-squares fit") {
  // generic k, non-integer alpha: psi = chi^{(s,t)} sin^kappa cos^lambda has
  // z^{-1/2} psi ~ G^{(s,t)} z^{tau alpha} + G^{(s,-t)} z^{-tau alpha}
  const auto p = WellParameters::from_strengths(0.4, 0.75);
  const Branch br(+1, +1);
  const Complex k{1.3, 0.0};
  std::vector<double> zs;
  std::vector<Complex> fs;
  for (int i = 0; i < 30; ++i) {
    const double z = 1e-3 * std::pow(10.0, i / 29.0);
    const double x = kHalfPi - z;
    const exact::GeneralSolutionSpec gs{{1.0, 0.0}, {0.0, 0.0}, br, k};
    fs.push_back(exact::general_psi(gs, p, {x, 0.0}) / std::sqrt(z));
    zs.push_back(z);
  }
  const Complex fitted = fit_threshold_coefficient(zs, fs, br.tau * p.alpha);
  const Complex want = exact::connection_factor(p, br, k).value;
  CHECK(rel_err(fitted, want) < 1e-6);
}

TEST_CASE("connection_factor_at_termination matches and extends connection_factor") {
  for (const Branch& br : all_branches())
    for (int n = 0; n <= 4; ++n) {
      const Complex via_k =
          exact::connection_factor(kGeneric, br, {exact::termination_k(kGeneric, br, n), 0.0})
              .value;
      const Complex via_n = exact::connection_factor_at_termination(kGeneric, br, n);
      CHECK(rel_err(via_n, via_k) < 1e-12);
    }
  // integer alpha, tau = +1: the pole-free limit exists and is finite
  const Complex g = exact::connection_factor_at_termination(kFlagship, Branch(+1, +1), 1);
  CHECK(std::isfinite(std::abs(g)));
  // cross-check against small detuning of alpha
  const auto p_plus = WellParameters::from_strengths(2.0 + 1e-7, 0.75);
  const auto p_minus = WellParameters::from_strengths(2.0 - 1e-7, 0.75);
  const Complex lim = 0.5 * (exact::connection_factor_at_termination(p_plus, Branch(+1, +1), 1) +
                             exact::connection_factor_at_termination(p_minus, Branch(+1, +1), 1));
  CHECK(rel_err(g, lim) < 1e-5);
}

TEST_CASE("chi basics and the two-path identity on the contour") {
  const Branch br(+1, -1);
  const Complex k{1.3, 0.2};
  CHECK(rel_err(exact::chi(kGeneric, br, k, {0.0, 0.0}), {1.0, 0.0}) < 1e-14);

  // terminating k: matches the terminating evaluator
  const double kn = exact::termination_k(kGeneric, br, 2);
  const Complex y{0.37, -0.11};
  const auto e = exact::exponents(kGeneric, br);
  const Complex poly = specfun::hyp2f1_terminating(2, {0.5 * (e.kappa + e.lambda + kn), 0.0},
                                                   {0.5 + e.kappa, 0.0}, y);
  CHECK(rel_err(exact::chi(kGeneric, br, {kn, 0.0}, y), poly) < 1e-13);

  // chi^{(s,t)} cos^{lambda(t)} = rho^{(s,t)} cos^{lambda(t)} + rho^{(s,-t)} cos^{lambda(-t)}
  const Contour contour(0.1);
  for (int i = 0; i < 50; ++i) {
    const double t = 0.62 + (0.98 - 0.62) * i / 49.0;
    const Complex x = contour_point(contour, t);
    const Complex yy = map_y(x);
    const Complex cx = std::cos(x);
    const auto et = exact::exponents(kGeneric, br);
    const auto emt = exact::exponents(kGeneric, Branch(br.sigma, -br.tau));
    const Complex lhs = exact::chi(kGeneric, br, k, yy) * std::pow(cx, et.lambda);
    const Complex rhs =
        exact::rho(kGeneric, br, k, yy) * std::pow(cx, et.lambda) +
        exact::rho(kGeneric, Branch(br.sigma, -br.tau), k, yy) * std::pow(cx, emt.lambda);
    CHECK(rel_err(lhs, rhs) < 1e-9);
  }
}

TEST_CASE("general_psi reduces to bound_state_psi at termination") {
  const Branch br(-1, +1);
  const auto sol = exact::bound_state(kFlagship, br, 2);
  const exact::GeneralSolutionSpec gs{{1.0, 0.0}, {0.0, 0.0}, br, {sol.k_n, 0.0}};
  const Contour contour(0.1);
  for (double t : {0.3, 0.7, 1.1, 1.4}) {
    const Complex x = contour_point(contour, t);
    CHECK(rel_err(exact::general_psi(gs, kFlagship, x), exact::bound_state_psi(sol, kFlagship, x)) <
          1e-12);
  }
  CHECK_THROWS_AS(
      exact::general_psi({{0.0, 0.0}, {0.0, 0.0}, br, {1.0, 0.0}}, kFlagship, Complex(0.5, 0.0)),
      std::invalid_argument);
}

TEST_CASE("general_psi left-threshold slope with a subdominant admixture") {
  // x^{-1/2} psi ~ C1 x^{sigma beta} + C2 x^{-sigma beta}: with sigma = +1 and
  // C2 != 0 the x -> 0 slope of psi itself is 1/2 - beta
  const exact::GeneralSolutionSpec gs{{1.0, 0.0}, {0.3, 0.0}, Branch(+1, +1), {1.3, 0.0}};
  std::vector<double> xs;
  std::vector<double> fs;
  for (int i = 0; i < 20; ++i) {
    const double x = 1e-8 * std::pow(10.0, 1.0 * i / 19.0);
    xs.push_back(x);
    fs.push_back(std::abs(exact::general_psi(gs, kGeneric, {x, 0.0})));
  }
  CHECK(std::abs(loglog_slope(xs, fs) - (0.5 - kGeneric.beta)) < 1e-3);
}

TEST_CASE("general_psi solves the contour ODE at generic k") {
  // non-terminating momentum, both coefficients active
  const exact::GeneralSolutionSpec gs{{1.0, 0.0}, {0.4, 0.2}, Branch(+1, +1), {1.3, 0.0}};
  const Contour contour(0.1);
  shoot::IntegrationGrid g{};
  g.steps = 4000;
  const double r = shoot::residual_norm(
      [&](const Complex& x) { return exact::general_psi(gs, kGeneric, x); }, kGeneric,
      1.3 * 1.3, contour, g);
  CHECK(r < 1e-7);
}

TEST_CASE("bound_state_psi: n = 0 closed form and node counts") {
  for (const Branch& br : all_branches()) {
    const auto sol = exact::bound_state(kGeneric, br, 0);
    for (double t : {0.4, 0.9, 1.3}) {
      const Complex x{t, -0.1};
      const Complex want = std::pow(std::sin(x), 0.5 + br.sigma * kGeneric.beta) *
                           std::pow(std::cos(x), 0.5 + br.tau * kGeneric.alpha);
      CHECK(rel_err(exact::bound_state_psi(sol, kGeneric, x), want) < 1e-13);
    }
  }
  // Hermitian (+,+) state has exactly n sign changes in (0, pi/2)
  for (int n = 0; n <= 4; ++n) {
    const auto sol = exact::bound_state(kFlagship, Branch(+1, +1), n);
    int changes = 0;
    double prev = exact::bound_state_psi(sol, kFlagship, {1e-3, 0.0}).real();
    for (int i = 2; i < 2000; ++i) {
      const double x = 1e-3 + (kHalfPi - 2e-3) * i / 2000.0;
      const double cur = exact::bound_state_psi(sol, kFlagship, {x, 0.0}).real();
      if (prev * cur < 0.0) ++changes;
      prev = cur;
    }
    CHECK(changes == n);
  }
}

TEST_CASE("threshold_coefficients for terminating and general solutions") {
  const Branch br(+1, +1);
  const auto sol = exact::bound_state(kGeneric, br, 1);
  const auto tc = exact::threshold_coefficients(sol, kGeneric);
  CHECK(tc.left_subdominant == Complex(0.0, 0.0));
  CHECK(tc.right_minus == Complex(0.0, 0.0));
  CHECK(tc.left_dominant == Complex(1.0, 0.0));
  CHECK(rel_err(tc.right_plus, exact::connection_factor_at_termination(kGeneric, br, 1)) < 1e-13);

  const exact::GeneralSolutionSpec gs{{1.0, 0.0}, {0.0, 0.0}, br, {1.3, 0.0}};
  const auto tg = exact::threshold_coefficients(gs, kGeneric);
  CHECK(tg.left_dominant == Complex(1.0, 0.0));

  const auto p_degenerate = WellParameters::from_strengths(1e-9, 0.3, true);
  CHECK_THROWS_AS(exact::threshold_coefficients(gs, p_degenerate), std::domain_error);
}

TEST_CASE("threshold_coefficients match endpoint fits for a generic superposition") {
  const Branch br(+1, +1);
  const exact::GeneralSolutionSpec gs{{0.7, 0.2}, {0.4, -0.1}, br, {1.1, 0.0}};
  const auto tc = exact::threshold_coefficients(gs, kGeneric);

  std::vector<double> zs;
  std::vector<Complex> left_samp, right_samp;
  for (int i = 0; i < 30; ++i) {
    const double z = 1e-3 * std::pow(30.0, i / 29.0);
    zs.push_back(z);
    left_samp.push_back(exact::general_psi(gs, kGeneric, {z, 0.0}) / std::sqrt(z));
    right_samp.push_back(exact::general_psi(gs, kGeneric, {kHalfPi - z, 0.0}) / std::sqrt(z));
  }
  CHECK(rel_err(fit_threshold_coefficient(zs, left_samp, br.sigma * kGeneric.beta),
                tc.left_dominant) < 1e-5);
  CHECK(rel_err(fit_threshold_coefficient(zs, left_samp, -br.sigma * kGeneric.beta),
                tc.left_subdominant) < 1e-5);
  CHECK(rel_err(fit_threshold_coefficient(zs, right_samp, br.tau * kGeneric.alpha), tc.right_plus) <
        1e-5);
  CHECK(rel_err(fit_threshold_coefficient(zs, right_samp, -br.tau * kGeneric.alpha),
                tc.right_minus) < 1e-5);
}
