#pragma once

// Dense nonsymmetric eigenvalue computation and everything built on it:
// spectral classification, bifurcation-threshold bisection, instability-band
// scanning, and truncation-convergence control.

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bkp/bloch.hpp"
#include "bkp/criteria.hpp"
#include "bkp/params.hpp"
#include "bkp/wave.hpp"

namespace bkp::spectrum {

using Complex = std::complex<double>;

/// Full eigenvalue set of one assembled operator, with the symmetry defect
/// reported rather than assumed zero.
struct SpectrumResult {
  std::vector<Complex> eigenvalues;
  double symmetry_defect;  // Hausdorff distance to the set reflected by l -> -conj(l)
  double max_real;
  std::vector<Complex> near_origin;  // inside radius r_star(2)/2
  BlochSpec spec;
  int n_modes_used;
};

namespace detail {

inline double hausdorff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  auto one_sided = [](const std::vector<Complex>& from, const std::vector<Complex>& to) {
    double worst = 0.0;
    for (const auto& x : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& y : to) best = std::min(best, std::abs(x - y));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace detail

/// All eigenvalues of the dense complex matrix (Schur-based solver).
inline SpectrumResult eigenvalues(const bloch::OperatorMatrix& matrix) {
  if (!matrix.entries.allFinite())
    throw std::invalid_argument("eigenvalues: matrix has non-finite entries");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(matrix.entries, false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigenvalues: QR iteration did not converge");

  SpectrumResult res{{}, 0.0, 0.0, {}, matrix.spec, matrix.spec.n_modes};
  res.eigenvalues.assign(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + solver.eigenvalues().size());

  std::vector<Complex> reflected(res.eigenvalues.size());
  std::transform(res.eigenvalues.begin(), res.eigenvalues.end(), reflected.begin(),
                 [](Complex z) { return -std::conj(z); });
  res.symmetry_defect = detail::hausdorff(res.eigenvalues, reflected);

  res.max_real = 0.0;
  for (const auto& z : res.eigenvalues) res.max_real = std::max(res.max_real, z.real());

  const double r_half = criteria::r_star(2, matrix.params) / 2.0;
  for (const auto& z : res.eigenvalues)
    if (std::abs(z) < r_half) res.near_origin.push_back(z);
  return res;
}

inline double spectral_radius(const SpectrumResult& r) {
  double rad = 0.0;
  for (const auto& z : r.eigenvalues) rad = std::max(rad, std::abs(z));
  return rad;
}

/// Default growth tolerance: the exact dichotomies of the theory need a
/// numerical threshold scaled by the spectral radius.
inline double default_growth_tol(const SpectrumResult& r) {
  return 1e-8 * std::max(1.0, spectral_radius(r));
}

/// Classify one computed spectrum. Untrustworthy numerics (symmetry defect
/// large relative to the growth tolerance) yield UNCERTIFIED.
inline RegionVerdict classify(const SpectrumResult& result, double growth_tol) {
  if (result.symmetry_defect > 10.0 * growth_tol)
    return {StabilityKind::Uncertified, "symmetry-defect", result.symmetry_defect};
  if (result.max_real <= growth_tol)
    return {StabilityKind::StableImaginary, "max_real<=tol", result.max_real};
  bool any_oscillatory = false;
  for (const auto& z : result.eigenvalues)
    if (z.real() > growth_tol && std::abs(z.imag()) > growth_tol) any_oscillatory = true;
  return {any_oscillatory ? StabilityKind::UnstableComplexPair
                          : StabilityKind::UnstableRealPair,
          "max_real>tol", result.max_real};
}

/// Detected bifurcation value of ell^2 with the bracket that pinned it and
/// the closed-form prediction it is compared against.
struct ThresholdResult {
  double ell_star_sq;
  std::pair<double, double> bracket;
  double prediction;
  int iterations;
};

struct BisectionFailure : std::runtime_error {
  RegionVerdict lo_verdict, hi_verdict;
  BisectionFailure(const std::string& msg, RegionVerdict lo, RegionVerdict hi)
      : std::runtime_error(msg), lo_verdict(std::move(lo)), hi_verdict(std::move(hi)) {}
};

namespace detail {

inline bool unstable_at(const std::vector<double>& cos_coeffs, double c,
                        double ell_sq, double xi, int n_modes,
                        const PhysicalParams& p, RegionVerdict* verdict = nullptr) {
  const BlochSpec spec(std::sqrt(std::max(ell_sq, 0.0)), xi, n_modes);
  const auto mat = bloch::assemble(cos_coeffs, c, spec, p);
  const auto res = eigenvalues(mat);
  const double tol = default_growth_tol(res);
  const auto v = classify(res, tol);
  if (verdict) *verdict = v;
  return res.max_real > tol;
}

}  // namespace detail

/// Bisection on ell^2 for the stability/instability changeover of a fixed
/// wave family. The predicate is max_real > growth_tol on the full spectrum.
inline ThresholdResult threshold_bisect(const wave::RefinedWave& w,
                                        const PhysicalParams& p, double xi,
                                        int n_modes,
                                        std::pair<double, double> bracket,
                                        double tol) {
  const double la2 = criteria::ell_a_sq(p, w.a);
  const double prediction = (p.sigma == Sigma::MinusOne) ? la2 : -la2;

  RegionVerdict vlo, vhi;
  bool ulo = detail::unstable_at(w.cos_coeffs, w.c, bracket.first, xi, n_modes, p, &vlo);
  bool uhi = detail::unstable_at(w.cos_coeffs, w.c, bracket.second, xi, n_modes, p, &vhi);
  if (ulo == uhi)
    throw BisectionFailure("threshold_bisect: no sign change in bracket", vlo, vhi);

  double lo = bracket.first, hi = bracket.second;
  int iterations = 0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const bool umid = detail::unstable_at(w.cos_coeffs, w.c, mid, xi, n_modes, p);
    if (umid == ulo)
      lo = mid;
    else
      hi = mid;
    ++iterations;
  }
  return {0.5 * (lo + hi), {lo, hi}, prediction, iterations};
}

/// Default bisection bracket around a closed-form prediction.
inline std::pair<double, double> default_bracket(double prediction) {
  return {0.1 * prediction, 3.0 * prediction};
}

/// Edges of the detected unstable interval in ell^2.
struct BandEdges {
  double lower, upper;
};

/// Grid scan for the instability band in ell^2, with bisection refinement of
/// both edges between neighbouring grid points.
inline std::optional<BandEdges> band_scan(const wave::RefinedWave& w,
                                          const PhysicalParams& p, double xi,
                                          std::pair<double, double> ell_sq_range,
                                          int steps, int n_modes,
                                          double edge_tol = 1e-7) {
  const double lo = ell_sq_range.first, hi = ell_sq_range.second;
  if (!(steps >= 2) || !(hi > lo))
    throw std::invalid_argument("band_scan: bad range or step count");

  std::vector<double> grid(steps);
  std::vector<char> unstable(steps);
  int first = -1, last = -1;
  for (int i = 0; i < steps; ++i) {
    grid[i] = lo + (hi - lo) * i / (steps - 1);
    unstable[i] = detail::unstable_at(w.cos_coeffs, w.c, grid[i], xi, n_modes, p);
    if (unstable[i]) {
      if (first < 0) first = i;
      last = i;
    }
  }
  if (first < 0) return std::nullopt;

  auto refine = [&](double stable_pt, double unstable_pt) {
    while (std::abs(unstable_pt - stable_pt) > edge_tol) {
      const double mid = 0.5 * (stable_pt + unstable_pt);
      if (detail::unstable_at(w.cos_coeffs, w.c, mid, xi, n_modes, p))
        unstable_pt = mid;
      else
        stable_pt = mid;
    }
    return 0.5 * (stable_pt + unstable_pt);
  };

  double lower = grid[first];
  if (first > 0) lower = refine(grid[first - 1], grid[first]);
  double upper = grid[last];
  if (last < steps - 1) upper = refine(grid[last + 1], grid[last]);
  return BandEdges{lower, upper};
}

/// Max displacement of the 6 origin-nearest eigenvalues between truncation
/// N and 2N; the truncation-error control for every verdict.
inline double convergence_check(const std::vector<double>& cos_coeffs, double c,
                                const BlochSpec& spec, const PhysicalParams& p) {
  const auto coarse = eigenvalues(bloch::assemble(cos_coeffs, c, spec, p));
  const BlochSpec fine_spec(spec.ell, spec.xi, 2 * spec.n_modes);
  const auto fine = eigenvalues(bloch::assemble(cos_coeffs, c, fine_spec, p));

  auto nearest_origin = [](std::vector<Complex> v, std::size_t count) {
    std::sort(v.begin(), v.end(),
              [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
    if (v.size() > count) v.resize(count);
    return v;
  };
  const auto c6 = nearest_origin(coarse.eigenvalues, 6);
  const auto f6 = nearest_origin(fine.eigenvalues, 6);

  double worst = 0.0;
  for (const auto& z : c6) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& y : f6) best = std::min(best, std::abs(z - y));
    worst = std::max(worst, best);
  }
  return worst;
}

inline double convergence_check(const wave::RefinedWave& w, const BlochSpec& spec,
                                const PhysicalParams& p) {
  return convergence_check(w.cos_coeffs, w.c, spec, p);
}

inline double convergence_check(const wave::StokesWave& w, const BlochSpec& spec,
                                const PhysicalParams& p) {
  return convergence_check({w.cos_coeffs.begin(), w.cos_coeffs.end()}, w.c, spec, p);
}

}  // namespace bkp::spectrum
