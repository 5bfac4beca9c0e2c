#pragma once

// Closed-form quantities of the linearized problem: dispersion symbols,
// Krein signatures, instability thresholds, collision functions, and the
// (b, k^2) / (b, k^2, xi) region classifiers.

#include <cmath>
#include <stdexcept>
#include <string>

#include "bkp/params.hpp"

namespace bkp::criteria {

namespace detail {

inline void require_positive_half_open_xi(double xi, const char* who) {
  if (!(xi > 0.0 && xi <= 0.5))
    throw std::domain_error(std::string(who) + ": xi must lie in (0, 1/2]; fold negative xi first");
}

inline void require_mode_admissible(int n, double xi) {
  if (xi == 0.0 && n == 0)
    throw std::domain_error("mode n = 0 is excluded on the zero-mean subspace (xi = 0)");
}

}  // namespace detail

/// Fold a Floquet exponent in (-1/2, 1/2] onto (0, 1/2] using the spectral
/// reflection xi -> -xi. Throws for xi = 0.
inline double fold_xi(double xi) {
  if (xi == 0.0) throw std::domain_error("fold_xi: xi = 0 has no Bloch fold");
  return std::abs(xi);
}

/// Dispersion symbol omega_n(ell, xi); the eigenvalues of the flat-state
/// operator are i*omega_n. xi = 0 gives the co-periodic symbol on the
/// zero-mean subspace (n = 0 excluded).
inline double omega_symbol(int n, const BlochSpec& spec, const PhysicalParams& p) {
  detail::require_mode_admissible(n, spec.xi);
  const double N = static_cast<double>(n) + spec.xi;
  const double k2 = p.k2();
  const double denom = 1.0 + k2 * N * N;
  return N * (p.kappa / (1.0 + k2) - p.kappa / denom -
              p.sig() * spec.ell * spec.ell / (N * N * denom));
}

struct MuKrein {
  double mu;
  int krein;  // sign of mu, 0 at an exact zero
};

/// Quadratic-form value mu_n and its sign, the Krein signature of the
/// eigenvalue i*omega_n. omega_n = (n+xi)/(1+k^2(n+xi)^2) * mu_n.
inline MuKrein mu_and_krein(int n, const BlochSpec& spec, const PhysicalParams& p) {
  detail::require_mode_admissible(n, spec.xi);
  const double N = static_cast<double>(n) + spec.xi;
  const double k2 = p.k2();
  const double mu = p.kappa * k2 * (N * N - 1.0) / (1.0 + k2) -
                    p.sig() * spec.ell * spec.ell / (N * N);
  const int krein = (mu > 0.0) - (mu < 0.0);
  return {mu, krein};
}

/// Critical squared transverse wave number of the co-periodic problem;
/// its sign decides long-wave instability for both signs of sigma.
inline double ell_a_sq(const PhysicalParams& p, double a) {
  const double k2 = p.k2();
  const double one_plus = 1.0 + k2;
  return ((p.b + 1.0) + (7.0 - 2.0 * p.b) * k2) * (p.b + 1.0) * one_plus * one_plus /
         (12.0 * p.kappa * k2) * a * a;
}

/// Long-wave co-periodic classification from the sign of ell_a^2, with the
/// matching enumerated (b, k^2) case as label. For sigma = +1 the stability
/// conclusion swaps sign.
inline RegionVerdict classify_periodic(const PhysicalParams& p, double a) {
  const double la2 = ell_a_sq(p, a);
  const double b = p.b;
  const double k2 = p.k2();

  std::string label;
  int sign_la2;  // sign implied by the case enumeration, checked against la2
  if (b > -1.0 && b <= 3.5) {
    label = "(1) -1<b<=7/2";
    sign_la2 = +1;
  } else if (b > 3.5) {
    const double thr = (b + 1.0) / (2.0 * b - 7.0);
    if (k2 < thr) {
      label = "(2) b>7/2, k2<(b+1)/(2b-7)";
      sign_la2 = +1;
    } else if (k2 > thr) {
      label = "b>7/2, k2>(b+1)/(2b-7)";
      sign_la2 = -1;
    } else {
      label = "boundary";
      sign_la2 = 0;
    }
  } else {  // b < -1
    const double thr = (b + 1.0) / (2.0 * b - 7.0);
    if (k2 < thr) {
      label = "(3) b<-1, k2<(b+1)/(2b-7)";
      sign_la2 = +1;
    } else if (k2 > thr) {
      label = "b<-1, k2>(b+1)/(2b-7)";
      sign_la2 = -1;
    } else {
      label = "boundary";
      sign_la2 = 0;
    }
  }

  if (la2 == 0.0 || sign_la2 == 0) return {StabilityKind::Uncertified, "boundary", la2};

  const bool unstable = (p.sigma == Sigma::MinusOne) ? (sign_la2 > 0) : (sign_la2 < 0);
  return {unstable ? StabilityKind::UnstableRealPair : StabilityKind::StableImaginary,
          label, la2};
}

struct EllThresholds {
  double ell0_sq;  // mu_0 sign change
  double ellm_sq;  // mu_{-1} sign change
  double ellc_sq;  // collision of modes 0 and -1
};

/// The three threshold values of ell^2 at a given Floquet exponent;
/// always ell0_sq <= ellc_sq <= ellm_sq with equality iff xi = 1/2.
inline EllThresholds ell_thresholds(double xi, const PhysicalParams& p) {
  detail::require_positive_half_open_xi(xi, "ell_thresholds");
  const double k2 = p.k2();
  const double pref = p.kappa * k2 / (1.0 + k2);
  const double om = 1.0 - xi;

  const double ell0 = pref * (1.0 - xi * xi) * xi * xi;
  const double ellm = pref * xi * (2.0 - xi) * om * om;

  const double P = 1.0 + k2 * xi * xi;
  const double Q = 1.0 + k2 * om * om;
  const double ellc = pref * om * om * xi * xi *
                      ((1.0 + xi) * Q + P * (2.0 - xi)) / (om * Q + P * xi);
  return {ell0, ellm, ellc};
}

/// Discriminant factor B; its sign decides whether the collision at ell_c^2
/// opens an instability band.
inline double b_factor(double xi, const PhysicalParams& p) {
  detail::require_positive_half_open_xi(xi, "b_factor");
  const double k2 = p.k2();
  const double b = p.b;
  const double f1 = k2 * xi * xi + (1.0 - b) * k2 * xi + k2 + (b + 1.0);
  const double f2 = k2 * xi * xi + (b - 3.0) * k2 * xi + (3.0 - b) * k2 + (b + 1.0);
  return f1 * f2;
}

/// Half-width in ell^2 of the instability band centered at ell_c^2.
/// Requires B > 0; the band does not exist otherwise.
inline double epsilon_a(double xi, const PhysicalParams& p, double a) {
  detail::require_positive_half_open_xi(xi, "epsilon_a");
  const double B = b_factor(xi, p);
  if (!(B > 0.0)) throw std::domain_error("epsilon_a: B <= 0, no instability band");
  const double k2 = p.k2();
  const double om = 1.0 - xi;
  const double P = 1.0 + k2 * xi * xi;
  const double Q = 1.0 + k2 * om * om;
  return std::pow(xi, 1.5) * std::pow(om, 1.5) * std::sqrt(P * Q) /
         (om * Q + xi * P) * std::sqrt(B) * std::abs(a);
}

namespace detail {

// Case walk behind classify_bloch; returns the enumerated case label and the
// sign of B it implies. Boundary hits yield sign 0.
struct BlochCase {
  std::string label;
  int sign_b;
};

inline BlochCase bloch_case(double b, double k2, double xi) {
  if (b >= -1.0 && b <= 3.0) return {"(1) -1<=b<=3", +1};

  if (b < -1.0) {
    if (xi == 0.5) {
      const double k2star = -4.0 * (1.0 + b) / (7.0 - 2.0 * b);
      if (k2 == k2star) return {"boundary b<-1, xi=1/2, k2=-4(1+b)/(7-2b)", 0};
      return {"(2) b<-1, xi=1/2, k2!=-4(1+b)/(7-2b)", +1};
    }
    // both denominators are positive here
    const double hi = -(1.0 + b) / (xi * xi + (1.0 - b) * xi + 1.0);
    const double lo = -(1.0 + b) / (xi * xi + (b - 3.0) * xi + (3.0 - b));
    if (k2 > hi || k2 < lo) return {"(3) b<-1, k2 outside (lo,hi)", +1};
    if (k2 == hi || k2 == lo) return {"boundary b<-1", 0};
    return {"B<0 (1) b<-1, lo<k2<hi", -1};
  }

  // b > 3
  const double kc = 4.0 / (b - 3.0);
  if (k2 <= kc) return {"(4) b>3, k2<=4/(b-3)", +1};

  if (xi == 0.5) {
    if (b <= 3.5) return {"(5) 3<b<=7/2, xi=1/2, k2>4/(b-3)", +1};
    const double k2star = -4.0 * (1.0 + b) / (7.0 - 2.0 * b);
    if (k2 == k2star) return {"boundary b>7/2, xi=1/2, k2=-4(1+b)/(7-2b)", 0};
    return {"(6) b>7/2, xi=1/2, k2>4/(b-3)", +1};
  }

  const double t1 = (xi * xi - 3.0 * xi + 3.0) / (1.0 - xi);
  const double t2 = (xi * xi + xi + 1.0) / xi;
  if (b <= t1) return {"(7) 3<b<=(xi^2-3xi+3)/(1-xi)", +1};

  const double u = -(1.0 + b) / (xi * xi + (b - 3.0) * xi + (3.0 - b));
  if (b <= t2) {
    if (k2 < u) return {"(8) t1<b<=t2, 4/(b-3)<k2<u", +1};
    if (k2 == u) return {"boundary t1<b<=t2, k2=u", 0};
    return {"B<0 (2) t1<b<=t2, k2>u", -1};
  }

  const double v = -(1.0 + b) / (xi * xi + (1.0 - b) * xi + 1.0);
  if (k2 < u || k2 > v) return {"(9) b>t2, k2>v or 4/(b-3)<k2<u", +1};
  if (k2 == u || k2 == v) return {"boundary b>t2", 0};
  return {"B<0 (3) b>t2, u<k2<v", -1};
}

}  // namespace detail

/// Bloch-wave classification at Floquet exponent xi from the sign of B.
/// Certified only for sigma = -1; for sigma = +1 no verdict is issued.
inline RegionVerdict classify_bloch(double xi, const PhysicalParams& p) {
  if (p.sigma == Sigma::PlusOne)
    return {StabilityKind::Uncertified, "sigma=+1 not certified", std::nullopt};
  detail::require_positive_half_open_xi(xi, "classify_bloch");

  const double B = b_factor(xi, p);
  const auto c = detail::bloch_case(p.b, p.k2(), xi);
  if (c.sign_b == 0 || B == 0.0) return {StabilityKind::Uncertified, c.label, B};
  return {c.sign_b > 0 ? StabilityKind::UnstableComplexPair : StabilityKind::StableImaginary,
          c.label, B};
}

/// Reference mode for the collision functions.
enum class CollisionRef { ModeMinusOne, ModeZero };

/// Collision function against the reference mode: omega_n - omega_ref,
/// linear in ell^2. The root of the (n=0, ref=-1) function is ell_c^2.
inline double collision_F(int n, double ell_sq, double xi, const PhysicalParams& p,
                          CollisionRef ref = CollisionRef::ModeMinusOne) {
  if (p.sigma != Sigma::MinusOne)
    throw std::domain_error("collision_F: defined for sigma = -1 only");
  detail::require_positive_half_open_xi(xi, "collision_F");
  const double ell = std::sqrt(std::max(ell_sq, 0.0));
  const BlochSpec spec(ell, xi, 8);
  const int ref_mode = (ref == CollisionRef::ModeMinusOne) ? -1 : 0;
  return omega_symbol(n, spec, p) - omega_symbol(ref_mode, spec, p);
}

/// ell^2-slope of the collision function; used to scale root-consistency
/// checks.
inline double collision_F_slope(int n, double xi, const PhysicalParams& p,
                                CollisionRef ref = CollisionRef::ModeMinusOne) {
  return collision_F(n, 1.0, xi, p, ref) - collision_F(n, 0.0, xi, p, ref);
}

/// True iff k^2 <= 3, the condition under which the Bloch classification
/// extends to all ell^2 > 0.
inline bool longwave_guard(double xi, const PhysicalParams& p) {
  detail::require_positive_half_open_xi(xi, "longwave_guard");
  return p.k2() <= 3.0;
}

/// Collision value of ell^2 for the Fourier-mode pair (p, -q); only the
/// sigma = +1 dispersion admits these collisions.
inline double collision_ell_pq(int pm, int qm, const PhysicalParams& p) {
  if (p.sigma != Sigma::PlusOne)
    throw std::domain_error("collision_ell_pq: no such collisions for sigma = -1");
  if (pm < 1 || qm < 1) throw std::domain_error("collision_ell_pq: p, q must be positive");
  const double k2 = p.k2();
  const double P = static_cast<double>(pm), Q = static_cast<double>(qm);
  const double dp = 1.0 + k2 * P * P;
  const double dq = 1.0 + k2 * Q * Q;
  return p.kappa * P * Q * dp * dq / (P * dp + Q * dq) *
         ((P + Q) / (1.0 + k2) - (P * dq + Q * dp) / (dp * dq));
}

/// Spectral separation radius of the flat-state co-periodic operator.
inline double r_star(int n, const PhysicalParams& p) {
  if (n < 2) throw std::domain_error("r_star: n must be >= 2");
  const double k2 = p.k2();
  const double N = static_cast<double>(n);
  return p.kappa * (1.0 / (1.0 + k2) - 1.0 / (1.0 + k2 * N * N));
}

/// Common frequency of the colliding pair at ell = ell_c.
inline double omega_star(double xi, const PhysicalParams& p) {
  detail::require_positive_half_open_xi(xi, "omega_star");
  const double k2 = p.k2();
  const double om = 1.0 - xi;
  const double P = 1.0 + k2 * xi * xi;
  const double Q = 1.0 + k2 * om * om;
  return 2.0 * p.kappa * k2 * xi * om * (1.0 - 2.0 * xi) /
         ((1.0 + k2) * (om * Q + P * xi));
}

}  // namespace bkp::criteria
