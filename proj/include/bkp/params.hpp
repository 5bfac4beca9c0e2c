#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace bkp {

/// Sign of the transverse dispersion term.
enum class Sigma { MinusOne, PlusOne };

inline double sigma_value(Sigma s) { return s == Sigma::MinusOne ? -1.0 : 1.0; }

inline std::string to_string(Sigma s) { return s == Sigma::MinusOne ? "-1" : "+1"; }

/// Model constants shared by every closed form: family parameter b, linear
/// dispersion constant kappa, longitudinal wave number k, transverse sign sigma.
struct PhysicalParams {
  double b;
  double kappa;
  double k;
  Sigma sigma;

  PhysicalParams(double b_, double kappa_, double k_, Sigma sigma_)
      : b(b_), kappa(kappa_), k(k_), sigma(sigma_) {
    if (!(kappa > 0.0)) throw std::invalid_argument("PhysicalParams: kappa must be > 0");
    if (!(k > 0.0)) throw std::invalid_argument("PhysicalParams: k must be > 0");
    if (b == -1.0) throw std::invalid_argument("PhysicalParams: b = -1 is excluded");
    if (!std::isfinite(b) || !std::isfinite(kappa) || !std::isfinite(k))
      throw std::invalid_argument("PhysicalParams: non-finite value");
  }

  double k2() const { return k * k; }
  /// Bifurcation speed of the zero-amplitude branch.
  double c0() const { return kappa / (1.0 + k * k); }
  double sig() const { return sigma_value(sigma); }
};

/// Perturbation quantum numbers selecting one linearized operator:
/// transverse wave number ell, Floquet exponent xi (0 = co-periodic),
/// and the Fourier truncation order.
struct BlochSpec {
  double ell;
  double xi;
  int n_modes;

  BlochSpec(double ell_, double xi_, int n_modes_)
      : ell(ell_), xi(xi_), n_modes(n_modes_) {
    if (n_modes < 8) throw std::invalid_argument("BlochSpec: n_modes must be >= 8");
    if (!(xi > -0.5 && xi <= 0.5)) throw std::invalid_argument("BlochSpec: xi must lie in (-1/2, 1/2]");
    if (!std::isfinite(ell)) throw std::invalid_argument("BlochSpec: ell must be finite");
  }
};

enum class StabilityKind {
  StableImaginary,
  UnstableRealPair,
  UnstableComplexPair,
  Uncertified,
};

inline std::string to_string(StabilityKind kind) {
  switch (kind) {
    case StabilityKind::StableImaginary: return "STABLE_IMAGINARY";
    case StabilityKind::UnstableRealPair: return "UNSTABLE_REAL_PAIR";
    case StabilityKind::UnstableComplexPair: return "UNSTABLE_COMPLEX_PAIR";
    case StabilityKind::Uncertified: return "UNCERTIFIED";
  }
  return "UNCERTIFIED";
}

/// Stability classification plus the enumerated case that produced it and,
/// where meaningful, the quantity whose sign decided (ell_a^2, B, ...).
struct RegionVerdict {
  StabilityKind kind;
  std::string case_label;
  std::optional<double> witness;
};

}  // namespace bkp
