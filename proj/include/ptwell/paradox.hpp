#pragma once

// The narrative curves around the symmetric well V = g(B)/sin^2 2x,
// g(B) = 4B(B-1): the naive ground-state energy E = 4B^2, the corrected
// broken curve with the regular-solution rule below B = 1/2, the two smooth
// branches E = 4B^2 and E = 4(B-1)^2, plus boundary-condition
// classification of threshold records.

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ptwell/exact.hpp"
#include "ptwell/model.hpp"

namespace ptwell::paradox {

enum class CurveLabel { naive, corrected, pt_plus, pt_minus };

struct CurvePoint {
  double B = 0.0;
  double E = 0.0;
  CurveLabel label = CurveLabel::naive;
  bool physical_hermitian = false;  // point coincides with the corrected curve
};

struct FigureData {
  int figure_id = 0;
  std::vector<std::string> column_names;
  std::vector<std::vector<double>> rows;
};

namespace detail {
inline void require_positive(double B) {
  if (!(B > 0.0)) throw std::invalid_argument("curve: B must be > 0");
}
}  // namespace detail

/// The uncorrected claim E(B) = 4B^2 on the whole grid.
inline std::vector<CurvePoint> naive_curve(const std::vector<double>& b_grid) {
  std::vector<CurvePoint> out;
  out.reserve(b_grid.size());
  for (double B : b_grid) {
    detail::require_positive(B);
    out.push_back({B, 4.0 * B * B, CurveLabel::naive, B >= 0.5});
  }
  return out;
}

/// Regular-solution selection: E = 4B^2 for B >= 1/2, E = 4(1-B)^2 below.
inline std::vector<CurvePoint> corrected_curve(const std::vector<double>& b_grid) {
  std::vector<CurvePoint> out;
  out.reserve(b_grid.size());
  for (double B : b_grid) {
    detail::require_positive(B);
    const double E = (B >= 0.5) ? 4.0 * B * B : 4.0 * (1.0 - B) * (1.0 - B);
    out.push_back({B, E, CurveLabel::corrected, true});
  }
  return out;
}

/// The two smooth branches E^(+) = 4B^2 and E^(-) = 4(B-1)^2 (the n = 0
/// energies of the (+,+) and (-,-) series at alpha = beta = B - 1/2).
inline std::pair<std::vector<CurvePoint>, std::vector<CurvePoint>> pt_curves(
    const std::vector<double>& b_grid) {
  std::vector<CurvePoint> plus, minus;
  plus.reserve(b_grid.size());
  minus.reserve(b_grid.size());
  for (double B : b_grid) {
    detail::require_positive(B);
    plus.push_back({B, 4.0 * B * B, CurveLabel::pt_plus, B >= 0.5});
    minus.push_back({B, 4.0 * (B - 1.0) * (B - 1.0), CurveLabel::pt_minus, B <= 0.5});
  }
  return {std::move(plus), std::move(minus)};
}

/// Status of one endpoint of a solution, derived from its threshold record.
struct EndpointClassification {
  double dominant_exponent = 0.0;  // full-psi exponent of the component that wins as w -> 0
  bool dirichlet = false;          // psi -> 0
  bool restrictive = false;        // lim psi / sqrt(w) = 0
};

struct BoundaryClassification {
  EndpointClassification left;
  EndpointClassification right;
};

namespace detail {

inline EndpointClassification classify_endpoint(const Complex& c_fam, const Complex& c_other,
                                                double fam_exp) {
  // component exponents of psi itself: 1/2 + fam_exp and 1/2 - fam_exp
  const double scale = std::max(std::abs(c_fam), std::abs(c_other));
  const double tol = 1e-12 * std::max(scale, 1e-300);
  EndpointClassification ec;
  double min_exp = 1e300;
  if (std::abs(c_fam) > tol) min_exp = std::min(min_exp, 0.5 + fam_exp);
  if (std::abs(c_other) > tol) min_exp = std::min(min_exp, 0.5 - fam_exp);
  if (min_exp == 1e300) min_exp = 0.5 + fam_exp;  // formally zero solution
  ec.dominant_exponent = min_exp;
  ec.dirichlet = min_exp > 0.0;
  ec.restrictive = min_exp > 0.5;
  return ec;
}

}  // namespace detail

/// Which exponent family dominates at each endpoint, whether the Dirichlet
/// condition psi -> 0 holds, and whether the stricter rule psi/sqrt(w) -> 0
/// holds (it can fail for Dirichlet-satisfying states when the coupling sits
/// below 1/2).
inline BoundaryClassification classify_boundary(const exact::ThresholdCoefficients& tc,
                                                const WellParameters& p) {
  if (std::abs(p.beta) <= 1e-8 || std::abs(p.alpha) <= 1e-8)
    throw std::domain_error("classify_boundary: degenerate exponents");
  BoundaryClassification bc;
  bc.left = detail::classify_endpoint(tc.left_dominant, tc.left_subdominant, tc.left_exponent);
  bc.right = detail::classify_endpoint(tc.right_plus, tc.right_minus, tc.right_exponent);
  return bc;
}

namespace detail {
inline std::vector<double> default_b_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 290; ++i) g.push_back(0.05 + 0.005 * i);
  return g;
}
}  // namespace detail

/// Assemble the data behind one of the four figures. Figure 1 is the well
/// with the three lowest (+,+) levels at the given couplings (V clipped at
/// +-100 for plotting); figures 2-4 are the B-curves on the default grid
/// [0.05, 1.5] step 0.005.
inline FigureData make_figure(int figure_id, const WellParameters& p) {
  FigureData fd;
  fd.figure_id = figure_id;
  switch (figure_id) {
    case 1: {
      fd.column_names = {"t", "V", "E0", "E1", "E2"};
      const Branch pp(+1, +1);
      const double e0 = exact::energy(p, pp, 0);
      const double e1 = exact::energy(p, pp, 1);
      const double e2 = exact::energy(p, pp, 2);
      const int n_points = 2000;
      for (int i = 1; i <= n_points; ++i) {
        const double t = static_cast<double>(i) / (n_points + 1);
        const double x = kHalfPi * t;
        double v = potential_value(p, Complex(x, 0.0)).real();
        v = std::min(100.0, std::max(-100.0, v));
        fd.rows.push_back({t, v, e0, e1, e2});
      }
      return fd;
    }
    case 2: {
      fd.column_names = {"B", "E"};
      for (const auto& cp : naive_curve(detail::default_b_grid())) fd.rows.push_back({cp.B, cp.E});
      return fd;
    }
    case 3: {
      fd.column_names = {"B", "E"};
      for (const auto& cp : corrected_curve(detail::default_b_grid()))
        fd.rows.push_back({cp.B, cp.E});
      return fd;
    }
    case 4: {
      fd.column_names = {"B", "E_plus", "E_minus"};
      const auto [plus, minus] = pt_curves(detail::default_b_grid());
      for (std::size_t i = 0; i < plus.size(); ++i)
        fd.rows.push_back({plus[i].B, plus[i].E, minus[i].E});
      return fd;
    }
    default:
      throw std::invalid_argument("make_figure: figure_id must be 1..4");
  }
}

}  // namespace ptwell::paradox
