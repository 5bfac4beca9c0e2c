#pragma once

// Leading-order 2x2 reduced-matrix eigenvalue predictions: the closed-form
// counterpart of the near-origin pair (co-periodic) and of the colliding
// Bloch pair, used as independent checks on the dense eigensolver.

#include <cmath>
#include <complex>
#include <stdexcept>

#include "bkp/criteria.hpp"
#include "bkp/params.hpp"

namespace bkp::reduced {

using Complex = std::complex<double>;

enum class Regime { PeriodicOrigin, BlochCollision };

struct ReducedPrediction {
  Complex lambda_pair[2];
  Regime regime;
  double discriminant;     // Bloch regime only; 0 otherwise
  double model_error_bound;  // size of the first dropped term
};

/// Near-origin eigenvalue pair of the co-periodic problem at leading order:
/// lambda^2 = -(ell^2/(1+k^2)^2)(ell^2 -+ ell_a^2), sign per sigma.
inline ReducedPrediction lambda_periodic(const PhysicalParams& p, double a,
                                         double ell_sq) {
  const double la2 = criteria::ell_a_sq(p, a);
  const double op = 1.0 + p.k2();
  const double signed_la2 = (p.sigma == Sigma::MinusOne) ? la2 : -la2;
  const double lambda_sq = -(ell_sq / (op * op)) * (ell_sq - signed_la2);

  ReducedPrediction out{};
  out.regime = Regime::PeriodicOrigin;
  out.discriminant = 0.0;
  out.model_error_bound = a * a * ell_sq * (ell_sq + a * a);
  if (lambda_sq >= 0.0) {
    const double r = std::sqrt(lambda_sq);
    out.lambda_pair[0] = Complex(r, 0.0);
    out.lambda_pair[1] = Complex(-r, 0.0);
  } else {
    const double r = std::sqrt(-lambda_sq);
    out.lambda_pair[0] = Complex(0.0, r);
    out.lambda_pair[1] = Complex(0.0, -r);
  }
  return out;
}

/// Colliding Bloch pair near ell_c^2 at leading order; eps = ell^2 - ell_c^2.
/// lambda = i(omega_* + X) with X the roots of the reduced characteristic
/// polynomial; a negative discriminant opens the real parts.
inline ReducedPrediction lambda_bloch(const PhysicalParams& p, double a, double eps,
                                      double xi) {
  if (p.sigma != Sigma::MinusOne)
    throw std::domain_error("lambda_bloch: defined for sigma = -1 only");
  criteria::detail::require_positive_half_open_xi(xi, "lambda_bloch");

  const double k2 = p.k2();
  const double b = p.b;
  const double om = 1.0 - xi;
  const double P = 1.0 + k2 * xi * xi;
  const double Q = 1.0 + k2 * om * om;

  const double trace = eps / (xi * P) + eps / ((xi - 1.0) * Q);
  const double f1 = k2 * xi * xi + (1.0 - b) * k2 * xi + k2 + (b + 1.0);
  const double f2 = k2 * xi * xi + (b - 3.0) * k2 * xi + (3.0 - b) * k2 + (b + 1.0);
  const double constant =
      -(a * a / 4.0) * ((xi - 1.0) * f1 / Q) * (xi * f2 / P) +
      eps * eps / (xi * (xi - 1.0) * P * Q);
  const double disc = trace * trace - 4.0 * constant;

  const double omega_star = criteria::omega_star(xi, p);
  ReducedPrediction out{};
  out.regime = Regime::BlochCollision;
  out.discriminant = disc;
  out.model_error_bound =
      std::abs(eps) * a * a + eps * eps * std::abs(a) + std::abs(a * a * a);
  Complex x_plus, x_minus;
  if (disc >= 0.0) {
    const double s = std::sqrt(disc);
    x_plus = Complex(0.5 * (trace + s), 0.0);
    x_minus = Complex(0.5 * (trace - s), 0.0);
  } else {
    const double s = std::sqrt(-disc);
    x_plus = Complex(0.5 * trace, 0.5 * s);
    x_minus = Complex(0.5 * trace, -0.5 * s);
  }
  out.lambda_pair[0] = Complex(0.0, 1.0) * (omega_star + x_plus);
  out.lambda_pair[1] = Complex(0.0, 1.0) * (omega_star + x_minus);
  return out;
}

}  // namespace bkp::reduced
