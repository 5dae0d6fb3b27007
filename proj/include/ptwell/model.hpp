#pragma once

// Problem definition: couplings of the trigonometric well, evaluation of the
// potential at complex points, the straight-line contour x(t) = t - i*eps,
// and the y = sin^2 x change of variables.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace ptwell {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kHalfPi = kPi / 2.0;

/// Couplings of V = A(A-1)/cos^2 x + B(B-1)/sin^2 x with the companion
/// strengths alpha = A - 1/2, beta = B - 1/2. (A, B) are authoritative;
/// alpha, beta are derived once at construction. The default regime is
/// alpha > 0 and beta > 0; anything else needs the explicit unsafe flag.
struct WellParameters {
  double A = 0.0;
  double B = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  bool outside_default_regime = false;
  std::string warning;

  static WellParameters from_couplings(double A, double B, bool allow_unsafe = false) {
    WellParameters p;
    p.A = A;
    p.B = B;
    p.alpha = A - 0.5;
    p.beta = B - 0.5;
    if (!(p.alpha > 0.0 && p.beta > 0.0)) {
      if (!allow_unsafe)
        throw std::invalid_argument(
            "WellParameters: couplings outside alpha, beta > 0; pass the unsafe flag to proceed");
      p.outside_default_regime = true;
      p.warning = "couplings outside the default regime alpha, beta > 0";
    }
    return p;
  }

  static WellParameters from_strengths(double alpha, double beta, bool allow_unsafe = false) {
    return from_couplings(alpha + 0.5, beta + 0.5, allow_unsafe);
  }
};

/// Straight-line contour x(t) = t - i*epsilon; epsilon = 0 recovers the
/// Hermitian real interval.
struct Contour {
  double epsilon = 0.0;

  Contour() = default;
  explicit Contour(double eps) : epsilon(eps) {
    if (!(eps >= 0.0)) throw std::invalid_argument("Contour: epsilon must be >= 0");
  }
};

/// Sign pair (sigma, tau) selecting one of the four solution families.
struct Branch {
  int sigma = +1;
  int tau = +1;

  Branch(int s, int t) : sigma(s), tau(t) {
    if ((s != 1 && s != -1) || (t != 1 && t != -1))
      throw std::invalid_argument("Branch: signs must be +1 or -1");
  }
};

/// The four branches in emission order: (+,+), (+,-), (-,+), (-,-).
inline std::array<Branch, 4> all_branches() {
  return {Branch(+1, +1), Branch(+1, -1), Branch(-1, +1), Branch(-1, -1)};
}

inline Complex contour_point(const Contour& contour, double t) {
  return {t, -contour.epsilon};
}

inline Complex map_y(const Complex& x) {
  const Complex s = std::sin(x);
  return s * s;
}

/// V(x) = A(A-1)/cos^2 x + B(B-1)/sin^2 x. Throws within 1e-12 of a pole.
inline Complex potential_value(const WellParameters& p, const Complex& x) {
  const Complex s = std::sin(x);
  const Complex c = std::cos(x);
  if (std::abs(s) < 1e-12 || std::abs(c) < 1e-12)
    throw std::domain_error("potential_value: evaluation at a pole of the well");
  return p.A * (p.A - 1.0) / (c * c) + p.B * (p.B - 1.0) / (s * s);
}

}  // namespace ptwell
