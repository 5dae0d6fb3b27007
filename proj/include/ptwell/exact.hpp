#pragma once

// Closed-form solution engine: endpoint exponents, the connection factor G,
// the general solution built from 2F1, the four terminating bound-state
// families with their energies and wavefunctions, and threshold asymptotics.

#include <cmath>
#include <complex>
#include <stdexcept>

#include "ptwell/model.hpp"
#include "ptwell/specfun.hpp"

namespace ptwell::exact {

using specfun::Complex;

/// Endpoint exponents kappa = 1/2 + sigma*beta, lambda = 1/2 + tau*alpha
/// and the y-space pair mu = kappa/2, nu = lambda/2.
struct Exponents {
  double kappa = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  double nu = 0.0;
};

inline Exponents exponents(const WellParameters& p, const Branch& br) {
  Exponents e;
  e.kappa = 0.5 + br.sigma * p.beta;
  e.lambda = 0.5 + br.tau * p.alpha;
  e.mu = 0.5 * e.kappa;
  e.nu = 0.5 * e.lambda;
  return e;
}

/// Termination momentum k_n = sigma*beta + tau*alpha + 2n + 1.
inline double termination_k(const WellParameters& p, const Branch& br, int n) {
  if (n < 0) throw std::invalid_argument("termination_k: n must be >= 0");
  return br.sigma * p.beta + br.tau * p.alpha + 2.0 * n + 1.0;
}

/// E_n = k_n^2.
inline double energy(const WellParameters& p, const Branch& br, int n) {
  const double k = termination_k(p, br, n);
  return k * k;
}

struct ConnectionFactor {
  Complex value{0.0, 0.0};
};

/// G = Gamma(1+sigma*beta) Gamma(-tau*alpha)
///     / { Gamma([kappa(sigma)+lambda(-tau)+k]/2) Gamma([kappa(sigma)+lambda(-tau)-k]/2) }.
/// Denominator poles give exact zeros (reciprocal Gamma); numerator poles
/// (1+sigma*beta or -tau*alpha at a non-positive integer, e.g. integer alpha
/// with tau = +1) are reported as errors -- use connection_factor_at_termination
/// for the finite limit at terminating momenta.
inline ConnectionFactor connection_factor(const WellParameters& p, const Branch& br,
                                          const Complex& k) {
  const Complex num1(1.0 + br.sigma * p.beta, 0.0);
  const Complex num2(-br.tau * p.alpha, 0.0);
  if (specfun::near_nonpositive_integer(num1, 1e-10) ||
      specfun::near_nonpositive_integer(num2, 1e-10))
    throw std::domain_error(
        "connection_factor: numerator Gamma pole (integer exponent); a limit procedure is needed");
  const double s = (0.5 + br.sigma * p.beta) + (0.5 - br.tau * p.alpha);
  const Complex dplus = 0.5 * (s + k);
  const Complex dminus = 0.5 * (s - k);
  const Complex num = std::exp(specfun::log_gamma(num1) + specfun::log_gamma(num2));
  return {num * specfun::reciprocal_gamma(dplus) * specfun::reciprocal_gamma(dminus)};
}

/// G^{(sigma,tau)}(k_n) evaluated through the identity
///   Gamma(-tau*alpha) / Gamma(-tau*alpha - n) = (-1)^n (tau*alpha + 1)_n,
/// finite for every alpha (in particular integer alpha with tau = +1, where
/// connection_factor itself reports a pole).
inline Complex connection_factor_at_termination(const WellParameters& p, const Branch& br, int n) {
  if (n < 0) throw std::invalid_argument("connection_factor_at_termination: n must be >= 0");
  const Complex num1(1.0 + br.sigma * p.beta, 0.0);
  if (specfun::near_nonpositive_integer(num1, 1e-10))
    throw std::domain_error("connection_factor_at_termination: Gamma(1 + sigma*beta) pole");
  double poch = 1.0;
  for (int j = 1; j <= n; ++j) poch *= br.tau * p.alpha + static_cast<double>(j);
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  const Complex gnum = std::exp(specfun::log_gamma(num1));
  return gnum * sign * poch *
         specfun::reciprocal_gamma(Complex(1.0 + br.sigma * p.beta + n, 0.0));
}

/// chi^{(sigma,tau)}(y) = 2F1([kappa+lambda+k]/2, [kappa+lambda-k]/2; 1/2+kappa; y).
inline Complex chi(const WellParameters& p, const Branch& br, const Complex& k, const Complex& y,
                   double tol = 1e-12) {
  const Exponents e = exponents(p, br);
  const Complex a = 0.5 * (e.kappa + e.lambda + k);
  const Complex b = 0.5 * (e.kappa + e.lambda - k);
  const Complex c(0.5 + e.kappa, 0.0);
  return specfun::hyp2f1_connected(a, b, c, y, tol);
}

/// rho^{(sigma,tau)}(y) = G^{(sigma,tau)} 2F1(..., 1/2+lambda(tau); 1-y),
/// the y ~ 1 subseries of the connection representation.
inline Complex rho(const WellParameters& p, const Branch& br, const Complex& k, const Complex& y,
                   double tol = 1e-12) {
  const Exponents e = exponents(p, br);
  const Complex a = 0.5 * (e.kappa + e.lambda + k);
  const Complex b = 0.5 * (e.kappa + e.lambda - k);
  const Complex c(0.5 + e.lambda, 0.0);
  const specfun::SeriesResult f = specfun::hyp2f1_series(a, b, c, Complex(1.0, 0.0) - y, tol);
  if (!f.converged) throw std::runtime_error("rho: subseries did not converge");
  return connection_factor(p, br, k).value * f.value;
}

/// General solution data: psi = {C1 chi^{(s,t)} sin^{kappa(s)} + C2 chi^{(-s,t)} sin^{kappa(-s)}} cos^{lambda(t)},
/// with E = k^2.
struct GeneralSolutionSpec {
  Complex C1{1.0, 0.0};
  Complex C2{0.0, 0.0};
  Branch branch{+1, +1};
  Complex k{0.0, 0.0};
};

namespace detail {

inline void require_principal_sector(const Complex& s, const Complex& c) {
  if (std::abs(s) < 1e-12 || std::abs(c) < 1e-12)
    throw std::domain_error("psi: evaluation at a pole of the well");
  if (!(s.real() > 0.0) || !(c.real() > 0.0))
    throw std::domain_error("psi: principal powers need Re sin x > 0 and Re cos x > 0");
}

}  // namespace detail

inline Complex general_psi(const GeneralSolutionSpec& gs, const WellParameters& p,
                           const Complex& x) {
  if (gs.C1 == Complex(0.0, 0.0) && gs.C2 == Complex(0.0, 0.0))
    throw std::invalid_argument("general_psi: (C1, C2) must not both vanish");
  const Complex s = std::sin(x);
  const Complex c = std::cos(x);
  detail::require_principal_sector(s, c);
  const Complex y = s * s;
  const Branch b1 = gs.branch;
  const Branch b2(-b1.sigma, b1.tau);
  const Exponents e1 = exponents(p, b1);
  Complex sum = gs.C1 * chi(p, b1, gs.k, y) * std::pow(s, e1.kappa);
  if (gs.C2 != Complex(0.0, 0.0)) {
    const Exponents e2 = exponents(p, b2);
    sum += gs.C2 * chi(p, b2, gs.k, y) * std::pow(s, e2.kappa);
  }
  return sum * std::pow(c, e1.lambda);
}

/// A terminating state of one family: k_n = sigma*beta + tau*alpha + 2n + 1.
struct BoundStateSolution {
  Branch branch{+1, +1};
  int n = 0;
  double k_n = 0.0;
  double E_n = 0.0;
  Complex C1{1.0, 0.0};
};

inline BoundStateSolution bound_state(const WellParameters& p, const Branch& br, int n,
                                      const Complex& C1 = Complex(1.0, 0.0)) {
  BoundStateSolution s{br, n, termination_k(p, br, n), 0.0, C1};
  s.E_n = s.k_n * s.k_n;
  return s;
}

/// psi_n = C1 sin^{1/2+sigma*beta} x cos^{1/2+tau*alpha} x
///         2F1(-n, n+1+sigma*beta+tau*alpha; 1+sigma*beta; sin^2 x).
/// At integer alpha with tau = -1 and n >= alpha the polynomial carries the
/// analytic factor (1-y)^alpha, which the monomial form cancels away near
/// y = 1; the Euler transformation shows such a state equals the (sigma, +1)
/// member n - alpha with the same C1, and it is evaluated through that form.
inline Complex bound_state_psi(const BoundStateSolution& sol, const WellParameters& p,
                               const Complex& x) {
  if (sol.branch.tau == -1) {
    const double m0 = std::round(p.alpha);
    if (m0 >= 1.0 && std::abs(p.alpha - m0) < 1e-10 && sol.n >= static_cast<int>(m0)) {
      const BoundStateSolution merged{Branch(sol.branch.sigma, +1),
                                      sol.n - static_cast<int>(m0), sol.k_n, sol.E_n, sol.C1};
      return bound_state_psi(merged, p, x);
    }
  }
  if (sol.branch.sigma == -1) {
    const double m0 = std::round(p.beta);
    if (m0 >= 1.0 && std::abs(p.beta - m0) < 1e-10 && sol.n >= static_cast<int>(m0))
      throw std::domain_error(
          "bound_state_psi: integer beta degenerates the sigma = -1 formula (the state is the "
          "(+1, tau) member n - beta up to normalization); evaluate that member instead");
  }
  const Complex s = std::sin(x);
  const Complex c = std::cos(x);
  detail::require_principal_sector(s, c);
  const double kap = 0.5 + sol.branch.sigma * p.beta;
  const double lam = 0.5 + sol.branch.tau * p.alpha;
  const Complex b(sol.n + 1.0 + sol.branch.sigma * p.beta + sol.branch.tau * p.alpha, 0.0);
  const Complex cc(1.0 + sol.branch.sigma * p.beta, 0.0);
  const Complex f = specfun::hyp2f1_terminating(sol.n, b, cc, s * s);
  return sol.C1 * std::pow(s, kap) * std::pow(c, lam) * f;
}

/// Leading threshold coefficients: x^{-1/2} psi ~ left_dominant x^{sigma*beta}
/// + left_subdominant x^{-sigma*beta} at x -> 0, and z^{-1/2} psi ~
/// right_plus z^{tau*alpha} + right_minus z^{-tau*alpha} at z = pi/2 - x -> 0.
/// left_exponent / right_exponent carry sigma*beta / tau*alpha so the record
/// is self-describing.
struct ThresholdCoefficients {
  Complex left_dominant{0.0, 0.0};
  Complex left_subdominant{0.0, 0.0};
  Complex right_plus{0.0, 0.0};
  Complex right_minus{0.0, 0.0};
  double left_exponent = 0.0;
  double right_exponent = 0.0;
};

namespace detail {

inline void require_nondegenerate_exponents(const WellParameters& p) {
  if (std::abs(p.beta) <= 1e-8 || std::abs(p.alpha) <= 1e-8)
    throw std::domain_error("threshold_coefficients: coalescing indicial roots");
}

}  // namespace detail

/// Coefficients for a general two-term solution:
/// right_plus/minus = C1 G^{(sigma,+-tau)} + C2 G^{(-sigma,+-tau)}.
inline ThresholdCoefficients threshold_coefficients(const GeneralSolutionSpec& gs,
                                                    const WellParameters& p) {
  detail::require_nondegenerate_exponents(p);
  const Branch b = gs.branch;
  ThresholdCoefficients tc;
  tc.left_exponent = b.sigma * p.beta;
  tc.right_exponent = b.tau * p.alpha;
  tc.left_dominant = gs.C1;
  tc.left_subdominant = gs.C2;
  tc.right_plus = gs.C1 * connection_factor(p, Branch(b.sigma, b.tau), gs.k).value +
                  gs.C2 * connection_factor(p, Branch(-b.sigma, b.tau), gs.k).value;
  tc.right_minus = gs.C1 * connection_factor(p, Branch(b.sigma, -b.tau), gs.k).value +
                   gs.C2 * connection_factor(p, Branch(-b.sigma, -b.tau), gs.k).value;
  return tc;
}

/// Coefficients for a terminating state: the subdominant entries vanish
/// identically and right_plus = C1 G^{(sigma,tau)}(k_n) through the
/// pole-free limit form.
inline ThresholdCoefficients threshold_coefficients(const BoundStateSolution& sol,
                                                    const WellParameters& p) {
  detail::require_nondegenerate_exponents(p);
  ThresholdCoefficients tc;
  tc.left_exponent = sol.branch.sigma * p.beta;
  tc.right_exponent = sol.branch.tau * p.alpha;
  tc.left_dominant = sol.C1;
  tc.left_subdominant = {0.0, 0.0};
  tc.right_plus = sol.C1 * connection_factor_at_termination(p, sol.branch, sol.n);
  tc.right_minus = {0.0, 0.0};
  return tc;
}

}  // namespace ptwell::exact
