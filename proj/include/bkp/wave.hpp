#pragma once

// Periodic traveling-wave construction: third-order small-amplitude expansion
// and a Newton refinement of the profile equation in Fourier-cosine space.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "bkp/params.hpp"

namespace bkp::wave {

/// Expansion coefficients of the small-amplitude wave family.
struct ExpansionCoefficients {
  double A0, A2, A3;  // cos 0z, cos 2z, cos 3z amplitudes at orders a^2, a^2, a^3
  double c0, c2;      // speed c = c0 + a^2 c2
};

inline ExpansionCoefficients expansion_coefficients(const PhysicalParams& p) {
  const double b = p.b;
  const double k2 = p.k2();
  const double op = 1.0 + k2;
  ExpansionCoefficients e;
  e.A0 = op / (4.0 * p.kappa * k2) * ((b - 3.0) * k2 - (b + 1.0));
  e.A2 = (b + 1.0) * op * op / (12.0 * p.kappa * k2);
  e.A3 = (b + 1.0) * op * op * op / (192.0 * p.kappa * p.kappa * k2 * k2) *
         ((2.0 * b + 3.0) * k2 + (b + 1.0));
  e.c0 = p.kappa / op;
  e.c2 = ((-2.0 * b * b + 11.0 * b - 11.0) / 24.0 * k2 +
          (5.0 * b * b - 11.0 * b - 16.0) / 24.0 -
          5.0 * (b + 1.0) * (b + 1.0) / (24.0 * k2)) / p.kappa;
  return e;
}

/// Third-order expansion of the wave: cosine coefficients for harmonics 0..3
/// and the speed through order a^2.
struct StokesWave {
  PhysicalParams params;
  double a;
  std::array<double, 4> cos_coeffs;  // coefficient of cos(j z), j = 0..3
  double c;
};

constexpr double kDefaultAmplitudeCap = 0.2;

inline StokesWave stokes_wave(const PhysicalParams& p, double a,
                              double amplitude_cap = kDefaultAmplitudeCap) {
  if (std::abs(a) > amplitude_cap)
    throw std::domain_error("stokes_wave: |a| exceeds the asymptotic amplitude cap");
  const auto e = expansion_coefficients(p);
  StokesWave w{p, a, {}, 0.0};
  w.cos_coeffs[0] = a * a * e.A0;
  w.cos_coeffs[1] = a;
  w.cos_coeffs[2] = a * a * e.A2;
  w.cos_coeffs[3] = a * a * a * e.A3;
  w.c = e.c0 + a * a * e.c2;
  return w;
}

/// Newton-refined profile: full cosine representation 0..N with the cos z
/// coefficient pinned to a, plus the refined speed.
struct RefinedWave {
  PhysicalParams params;
  double a;
  std::vector<double> cos_coeffs;  // coefficient of cos(j z), j = 0..N
  double c;
  double residual_norm;
};

namespace detail {

// Exponential coefficients e_n = e_{-n} (real, even profile) from cosine ones.
inline std::vector<double> exp_from_cos(const std::vector<double>& cos_coeffs) {
  std::vector<double> e(cos_coeffs.size());
  if (!e.empty()) e[0] = cos_coeffs[0];
  for (std::size_t j = 1; j < e.size(); ++j) e[j] = 0.5 * cos_coeffs[j];
  return e;
}

// Exponential coefficients of F(w; k, c) with m = 0, over modes 0..2M.
// Quadratic terms by full triangular convolution; no FFT, no aliasing.
inline std::vector<double> profile_residual_modes(const std::vector<double>& cos_coeffs,
                                                  double c, const PhysicalParams& p) {
  const int M = static_cast<int>(cos_coeffs.size()) - 1;
  const std::vector<double> e = exp_from_cos(cos_coeffs);
  auto wn = [&](int n) { return (std::abs(n) <= M) ? e[std::abs(n)] : 0.0; };

  const double k2 = p.k2();
  const double b = p.b;
  std::vector<double> f(2 * M + 1, 0.0);
  for (int n = 0; n <= 2 * M; ++n) {
    double lin = ((p.kappa - c) - c * k2 * n * n) * wn(n);
    double ww = 0.0, wwzz = 0.0, wzwz = 0.0;
    for (int m = n - M; m <= M; ++m) {
      const double em = wn(m), enm = wn(n - m);
      const double prod = em * enm;
      ww += prod;
      wwzz += em * (-(double)(n - m) * (n - m)) * enm;
      wzwz += -(double)m * (n - m) * prod;
    }
    f[n] = lin + 0.5 * (b + 1.0) * ww - k2 * wwzz - 0.5 * (b - 1.0) * k2 * wzwz;
  }
  return f;
}

}  // namespace detail

/// L2 norm (mean-normalized inner product) of the profile-equation residual
/// for a cosine-coefficient profile at speed c.
inline double profile_residual(const std::vector<double>& cos_coeffs, double c,
                               const PhysicalParams& p) {
  const auto f = detail::profile_residual_modes(cos_coeffs, c, p);
  double s = f[0] * f[0];
  for (std::size_t n = 1; n < f.size(); ++n) s += 2.0 * f[n] * f[n];
  return std::sqrt(s);
}

inline double profile_residual(const StokesWave& w) {
  return profile_residual({w.cos_coeffs.begin(), w.cos_coeffs.end()}, w.c, w.params);
}

inline double profile_residual(const RefinedWave& w) {
  return profile_residual(w.cos_coeffs, w.c, w.params);
}

struct NewtonFailure : std::runtime_error {
  double last_residual;
  NewtonFailure(const std::string& msg, double r)
      : std::runtime_error(msg), last_residual(r) {}
};

/// Newton refinement of the profile equation in Fourier space. Unknowns are
/// the cosine coefficients j = 0, 2..N and the speed c; the cos z coefficient
/// stays pinned to a (family selection). Plain Newton with step halving.
inline RefinedWave newton_refine(const StokesWave& seed, const PhysicalParams& p,
                                 int n_modes, double tol = 1e-12, int max_iter = 50) {
  if (n_modes < 4) throw std::invalid_argument("newton_refine: n_modes must be >= 4");
  const int N = n_modes;
  const double a = seed.a;

  std::vector<double> w(N + 1, 0.0);
  for (int j = 0; j <= 3 && j <= N; ++j) w[j] = seed.cos_coeffs[j];
  w[1] = a;
  double c = seed.c;

  // Galerkin residual: modes 0..N of F.
  auto residual_vec = [&](const std::vector<double>& wc, double cc) {
    const auto f = detail::profile_residual_modes(wc, cc, p);
    Eigen::VectorXd r(N + 1);
    for (int j = 0; j <= N; ++j) r[j] = f[j];
    return r;
  };

  // Unknowns x = (w_0, w_2, ..., w_N, c).
  auto unpack = [&](const Eigen::VectorXd& x, std::vector<double>& wc, double& cc) {
    wc[0] = x[0];
    for (int j = 2; j <= N; ++j) wc[j] = x[j - 1];
    cc = x[N];
  };
  Eigen::VectorXd x(N + 1);
  x[0] = w[0];
  for (int j = 2; j <= N; ++j) x[j - 1] = w[j];
  x[N] = c;

  const double galerkin_tol = std::max(0.01 * tol, 1e-15);
  Eigen::VectorXd r = residual_vec(w, c);
  double rnorm = r.norm();
  int iter = 0;
  for (; iter < max_iter && rnorm > galerkin_tol; ++iter) {
    // Forward-difference Jacobian; sizes here are small enough not to care.
    Eigen::MatrixXd J(N + 1, N + 1);
    for (int i = 0; i <= N; ++i) {
      const double h = 1e-7 * std::max(1.0, std::abs(x[i]));
      Eigen::VectorXd xh = x;
      xh[i] += h;
      std::vector<double> wh = w;
      double ch = c;
      unpack(xh, wh, ch);
      J.col(i) = (residual_vec(wh, ch) - r) / h;
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
    Eigen::VectorXd dx = lu.solve(-r);
    if (!dx.allFinite())
      throw NewtonFailure("newton_refine: singular Jacobian", rnorm);

    double step = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 12; ++halving) {
      Eigen::VectorXd xt = x + step * dx;
      std::vector<double> wt = w;
      double ct = c;
      unpack(xt, wt, ct);
      Eigen::VectorXd rt = residual_vec(wt, ct);
      const double rtn = rt.norm();
      if (rtn < rnorm || rtn <= galerkin_tol) {
        x = xt;
        w = wt;
        c = ct;
        r = rt;
        rnorm = rtn;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) throw NewtonFailure("newton_refine: line search stalled", rnorm);
  }
  if (rnorm > galerkin_tol)
    throw NewtonFailure("newton_refine: no convergence after max iterations", rnorm);

  RefinedWave out{p, a, w, c, profile_residual(w, c, p)};
  if (out.residual_norm > tol)
    throw NewtonFailure("newton_refine: truncation residual above tolerance",
                        out.residual_norm);
  return out;
}

/// Exponential-basis coefficients of w, w_z, w_zz; indices -m_max..m_max.
struct HarmonicCoefficients {
  int m_max;
  std::vector<std::complex<double>> w, wz, wzz;  // index n + m_max

  std::complex<double> w_at(int n) const { return at(w, n); }
  std::complex<double> wz_at(int n) const { return at(wz, n); }
  std::complex<double> wzz_at(int n) const { return at(wzz, n); }

 private:
  std::complex<double> at(const std::vector<std::complex<double>>& v, int n) const {
    return (std::abs(n) <= m_max) ? v[n + m_max] : std::complex<double>(0.0);
  }
};

inline HarmonicCoefficients wave_derivatives(const std::vector<double>& cos_coeffs,
                                             int n_modes) {
  const int M = n_modes;
  HarmonicCoefficients h;
  h.m_max = M;
  h.w.assign(2 * M + 1, 0.0);
  h.wz.assign(2 * M + 1, 0.0);
  h.wzz.assign(2 * M + 1, 0.0);
  const auto e = detail::exp_from_cos(cos_coeffs);
  for (int n = -M; n <= M; ++n) {
    const double en = (std::abs(n) < static_cast<int>(e.size())) ? e[std::abs(n)] : 0.0;
    h.w[n + M] = en;
    h.wz[n + M] = std::complex<double>(0.0, n) * en;
    h.wzz[n + M] = -static_cast<double>(n) * n * en;
  }
  return h;
}

inline HarmonicCoefficients wave_derivatives(const StokesWave& w, int n_modes) {
  return wave_derivatives({w.cos_coeffs.begin(), w.cos_coeffs.end()}, n_modes);
}

inline HarmonicCoefficients wave_derivatives(const RefinedWave& w, int n_modes) {
  return wave_derivatives(w.cos_coeffs, n_modes);
}

}  // namespace bkp::wave
