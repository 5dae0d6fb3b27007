#pragma once

// Self-contained complex special-function kernel: log-Gamma (Lanczos),
// reciprocal Gamma (entire), Gauss 2F1 by direct series / terminating
// polynomial / two-term connection formula near y = 1, and Jacobi
// polynomials by three-term recurrence. Double precision throughout,
// principal branches for all complex powers and logs.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace ptwell::specfun {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Outcome of a truncated series evaluation.
struct SeriesResult {
  Complex value{0.0, 0.0};
  int terms_used = 0;
  bool converged = false;
  double est_error = 0.0;  // absolute bound, magnitude of the last retained term
};

/// True if z lies within tol of a non-positive integer 0, -1, -2, ...
/// On success *which (if given) receives that integer.
inline bool near_nonpositive_integer(const Complex& z, double tol, long* which = nullptr) {
  const double r = std::round(z.real());
  if (r > 0.5) return false;
  if (std::abs(z.real() - r) > tol || std::abs(z.imag()) > tol) return false;
  if (which) *which = static_cast<long>(r);
  return true;
}

namespace detail {

// Lanczos approximation, g = 607/128, 15 coefficients (Godfrey's set).
// Gives ~15 significant digits for Re z >= 0.5.
inline constexpr double kLanczosG = 607.0 / 128.0;
inline constexpr double kLanczosCoef[15] = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4,
    0.15808870322491248884e-3,  -0.21026444172410488319e-3,
    0.21743961811521264320e-3,  -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4,
    0.36899182659531622704e-5};

inline Complex log_gamma_lanczos(const Complex& z) {
  // valid for Re z >= 0.5
  const Complex zm = z - 1.0;
  Complex s(kLanczosCoef[0], 0.0);
  for (int k = 1; k < 15; ++k) s += kLanczosCoef[k] / (zm + static_cast<double>(k));
  const Complex t = zm + (kLanczosG + 0.5);
  return 0.5 * std::log(2.0 * kPi) + (zm + 0.5) * std::log(t) - t + std::log(s);
}

}  // namespace detail

/// log Gamma(z), principal branch; exp of the result reproduces Gamma(z).
/// Throws std::domain_error within 1e-12 of a pole (non-positive integer).
inline Complex log_gamma(const Complex& z) {
  if (near_nonpositive_integer(z, 1e-12))
    throw std::domain_error("log_gamma: pole at non-positive integer");
  if (z.real() >= 0.5) return detail::log_gamma_lanczos(z);
  // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
  return std::log(kPi / std::sin(kPi * z)) - detail::log_gamma_lanczos(Complex(1.0, 0.0) - z);
}

/// 1/Gamma(z), entire. Returns exactly 0 within 1e-13 of a non-positive
/// integer (the snap window covers double rounding of termination arguments).
inline Complex reciprocal_gamma(const Complex& z) {
  if (near_nonpositive_integer(z, 1e-13)) return {0.0, 0.0};
  if (z.real() >= 0.5) return std::exp(-detail::log_gamma_lanczos(z));
  // 1/Gamma(z) = sin(pi z) Gamma(1-z) / pi, stable next to the poles
  return std::sin(kPi * z) * std::exp(detail::log_gamma_lanczos(Complex(1.0, 0.0) - z)) / kPi;
}

/// Gauss series sum_{m} (a)_m (b)_m / ((c)_m m!) y^m for |y| <= 0.75.
/// Stops when |term| <= tol*|sum| for two consecutive terms; 500-term cap,
/// converged flag honest. Throws on |y| > 0.75 and on c at a non-positive
/// integer unless a or b terminates the series strictly first.
inline SeriesResult hyp2f1_series(const Complex& a, const Complex& b, const Complex& c,
                                  const Complex& y, double tol) {
  constexpr int kCap = 500;
  if (std::abs(y) > 0.75 + 1e-12)
    throw std::domain_error("hyp2f1_series: |y| > 0.75, outside the direct-series region");
  long cn = 0;
  if (near_nonpositive_integer(c, 1e-10, &cn)) {
    long an = 0, bn = 0;
    const bool a_term = near_nonpositive_integer(a, 1e-10, &an);
    const bool b_term = near_nonpositive_integer(b, 1e-10, &bn);
    long stop = -1;
    if (a_term) stop = -an;
    if (b_term && (stop < 0 || -bn < stop)) stop = -bn;
    if (stop < 0 || stop + 2 >= -cn)
      throw std::invalid_argument("hyp2f1_series: c at a non-positive integer");
  }
  SeriesResult r;
  Complex sum(1.0, 0.0), term(1.0, 0.0);
  int small_run = 0;
  for (int m = 0; m < kCap; ++m) {
    term *= (a + static_cast<double>(m)) * (b + static_cast<double>(m)) * y /
            ((c + static_cast<double>(m)) * static_cast<double>(m + 1));
    sum += term;
    r.terms_used = m + 1;
    r.est_error = std::abs(term);
    if (std::abs(term) <= tol * std::abs(sum)) {
      if (++small_run >= 2) {
        r.converged = true;
        break;
      }
    } else {
      small_run = 0;
    }
  }
  r.value = sum;
  return r;
}

/// Terminating 2F1(-n, b; c; y): exact (n+1)-term polynomial, valid for all
/// complex y. Throws if (c)_m has a pole inside the needed range (c a
/// non-positive integer greater than -n).
inline Complex hyp2f1_terminating(int n, const Complex& b, const Complex& c, const Complex& y) {
  if (n < 0) throw std::invalid_argument("hyp2f1_terminating: n must be >= 0");
  long cj = 0;
  if (near_nonpositive_integer(c, 1e-10, &cj) && -cj < n)
    throw std::invalid_argument("hyp2f1_terminating: Pochhammer pole of (c)_m inside range");
  Complex sum(1.0, 0.0), term(1.0, 0.0);
  for (int m = 0; m < n; ++m) {
    term *= (static_cast<double>(m - n)) * (b + static_cast<double>(m)) * y /
            ((c + static_cast<double>(m)) * static_cast<double>(m + 1));
    sum += term;
  }
  return sum;
}

namespace detail {

inline Complex connected_nondegenerate(const Complex& a, const Complex& b, const Complex& c,
                                       const Complex& y, double tol) {
  // F(a,b;c;y) = G1 F(a,b;a+b-c+1;1-y) + (1-y)^{c-a-b} G2 F(c-a,c-b;c-a-b+1;1-y)
  const Complex cab = c - a - b;
  const Complex g1 = std::exp(log_gamma(c) + log_gamma(cab)) * reciprocal_gamma(c - a) *
                     reciprocal_gamma(c - b);
  const Complex g2 =
      std::exp(log_gamma(c) + log_gamma(-cab)) * reciprocal_gamma(a) * reciprocal_gamma(b);
  const Complex u = Complex(1.0, 0.0) - y;
  if (std::abs(u) < 1e-300) {
    if (cab.real() <= 0.0)
      throw std::domain_error("hyp2f1_connected: divergent at y = 1 for Re(c-a-b) <= 0");
    return g1;  // Gauss summation value
  }
  // the subseries run at machine tolerance: near the logarithmic case the
  // Gamma coefficients grow like 1/(c-a-b - m) and amplify truncation error
  const double stol = std::min(tol, 1e-16);
  const SeriesResult f1 = hyp2f1_series(a, b, a + b - c + 1.0, u, stol);
  const SeriesResult f2 = hyp2f1_series(c - a, c - b, cab + 1.0, u, stol);
  if (!f1.converged || !f2.converged)
    throw std::runtime_error("hyp2f1_connected: connection series did not converge");
  return g1 * f1.value + std::pow(u, cab) * g2 * f2.value;
}

}  // namespace detail

/// 2F1(a,b;c;y) for |y| <= 0.75 (direct series) or |1-y| <= 0.75 (two-term
/// Gauss connection formula). Terminating a or b takes the polynomial fast
/// path, valid everywhere. Integer c-a-b (the logarithmic case) is handled
/// by averaging evaluations at c +- 1e-6.
inline Complex hyp2f1_connected(const Complex& a, const Complex& b, const Complex& c,
                                const Complex& y, double tol) {
  long an = 0, bn = 0;
  if (near_nonpositive_integer(a, 1e-10, &an))
    return hyp2f1_terminating(static_cast<int>(-an), b, c, y);
  if (near_nonpositive_integer(b, 1e-10, &bn))
    return hyp2f1_terminating(static_cast<int>(-bn), a, c, y);
  const double ay = std::abs(y);
  const double au = std::abs(Complex(1.0, 0.0) - y);
  if (ay > 0.75 && au > 0.75)
    throw std::domain_error("hyp2f1_connected: y outside |y| <= 0.75 and |1-y| <= 0.75");
  const Complex cab = c - a - b;
  const double rn = std::round(cab.real());
  const bool degenerate = std::abs(cab.real() - rn) < 1e-8 && std::abs(cab.imag()) < 1e-8;
  // prefer the representation with the smaller argument (fewer, better
  // conditioned terms), except that the logarithmic case stays on the
  // direct series whenever that is available
  if (ay <= 0.75 && (au > 0.75 || (degenerate ? true : ay <= au))) {
    const SeriesResult r = hyp2f1_series(a, b, c, y, tol);
    if (!r.converged) throw std::runtime_error("hyp2f1_connected: direct series did not converge");
    return r.value;
  }
  if (degenerate) {
    const Complex eta(1e-6, 0.0);
    const Complex f_plus = detail::connected_nondegenerate(a, b, c + eta, y, tol);
    const Complex f_minus = detail::connected_nondegenerate(a, b, c - eta, y, tol);
    return 0.5 * (f_plus + f_minus);
  }
  return detail::connected_nondegenerate(a, b, c, y, tol);
}

/// Jacobi polynomial P_n^{(a,b)}(u) by the standard three-term recurrence.
inline Complex jacobi_polynomial(int n, double a, double b, const Complex& u) {
  if (n < 0) throw std::invalid_argument("jacobi_polynomial: n must be >= 0");
  if (n == 0) return {1.0, 0.0};
  const double apb = a + b;
  Complex pm2(1.0, 0.0);
  Complex pm1 = 0.5 * (a - b) + (1.0 + 0.5 * apb) * u;
  for (int m = 2; m <= n; ++m) {
    const double c1 = 2.0 * m * (m + apb) * (2.0 * m + apb - 2.0);
    const double c2 = (2.0 * m + apb - 1.0) * (a * a - b * b);
    const double c3 = (2.0 * m + apb - 1.0) * (2.0 * m + apb) * (2.0 * m + apb - 2.0);
    const double c4 = 2.0 * (m + a - 1.0) * (m + b - 1.0) * (2.0 * m + apb);
    const Complex p = ((c2 + c3 * u) * pm1 - c4 * pm2) / c1;
    pm2 = pm1;
    pm1 = p;
  }
  return pm1;
}

}  // namespace ptwell::specfun
