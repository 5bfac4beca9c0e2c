#pragma once

// Truncated matrix of the linearized Bloch operator in the Fourier
// exponential basis, plus a grid-space dual-path check of the assembly.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "bkp/params.hpp"
#include "bkp/wave.hpp"

namespace bkp::bloch {

using Complex = std::complex<double>;

/// Dense matrix of the operator restricted to Fourier modes mode_index.
/// For xi = 0 the zero mode is excluded (zero-mean subspace), dimension 2N;
/// otherwise all modes -N..N are present, dimension 2N+1.
struct OperatorMatrix {
  Eigen::MatrixXcd entries;
  std::vector<int> mode_index;  // Fourier mode of each row/column, ascending
  BlochSpec spec;
  PhysicalParams params;
  std::string wave_tag;
  std::vector<double> wave_cos_coeffs;  // profile used in the assembly
  double wave_speed;
};

inline OperatorMatrix assemble(const std::vector<double>& cos_coeffs, double c,
                               const BlochSpec& spec, const PhysicalParams& p,
                               const std::string& wave_tag = "profile") {
  const int N = spec.n_modes;
  const double xi = spec.xi;
  const double k2 = p.k2();
  const double sig = p.sig();
  const double ell2 = spec.ell * spec.ell;

  std::vector<int> modes;
  modes.reserve(2 * N + 1);
  for (int n = -N; n <= N; ++n) {
    if (xi == 0.0 && n == 0) continue;
    modes.push_back(n);
  }
  const int dim = static_cast<int>(modes.size());

  const auto e = wave::detail::exp_from_cos(cos_coeffs);
  auto what = [&](int d) {
    return (std::abs(d) < static_cast<int>(e.size())) ? e[std::abs(d)] : 0.0;
  };

  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const double M = modes[r] + xi;
    const Complex pre = Complex(0.0, M) / (1.0 + k2 * M * M);
    for (int s = 0; s < dim; ++s) {
      const double Nn = modes[s] + xi;
      const int d = modes[r] - modes[s];
      double bracket = what(d) * (-(p.b + 1.0) - k2 * d * d - k2 * Nn * Nn -
                                  k2 * (p.b - 1.0) * d * Nn);
      if (r == s) bracket += c * (1.0 + k2 * Nn * Nn) - p.kappa - sig * ell2 / (Nn * Nn);
      A(r, s) = pre * bracket;
    }
  }
  return {std::move(A), std::move(modes), spec, p, wave_tag, cos_coeffs, c};
}

inline OperatorMatrix assemble(const wave::StokesWave& w, const BlochSpec& spec,
                               const PhysicalParams& p) {
  return assemble({w.cos_coeffs.begin(), w.cos_coeffs.end()}, w.c, spec, p, "stokes");
}

inline OperatorMatrix assemble(const wave::RefinedWave& w, const BlochSpec& spec,
                               const PhysicalParams& p) {
  return assemble(w.cos_coeffs, w.c, spec, p, "refined");
}

namespace detail {

// Naive DFT of grid samples onto mode n; grid sizes stay small.
inline Complex dft_mode(const std::vector<Complex>& samples, int n) {
  const int G = static_cast<int>(samples.size());
  Complex acc = 0.0;
  for (int g = 0; g < G; ++g) {
    const double z = 2.0 * std::numbers::pi * g / G;
    acc += samples[g] * std::exp(Complex(0.0, -n * z));
  }
  return acc / static_cast<double>(G);
}

}  // namespace detail

/// Residual of the matrix against a direct grid-space application of the
/// operator to the same band-limited function. Pointwise multiplication on
/// an oversampled grid replaces the Toeplitz blocks; the constant-coefficient
/// factors are applied spectrally on both paths.
inline double operator_apply_check(const OperatorMatrix& op,
                                   const Eigen::VectorXcd& test_vector) {
  const int dim = static_cast<int>(op.mode_index.size());
  if (test_vector.size() != dim)
    throw std::invalid_argument("operator_apply_check: dimension mismatch");
  const int N = op.spec.n_modes;
  for (int r = 0; r < dim; ++r) {
    if (std::abs(op.mode_index[r]) > N / 2 && std::abs(test_vector[r]) != 0.0)
      throw std::invalid_argument("operator_apply_check: test vector must be band-limited to N/2");
  }

  const double xi = op.spec.xi;
  const double k2 = op.params.k2();
  const double sig = op.params.sig();
  const double ell2 = op.spec.ell * op.spec.ell;
  const double b = op.params.b;
  const double c = op.wave_speed;

  const int wave_band = static_cast<int>(op.wave_cos_coeffs.size()) - 1;
  const int G = 4 * (N + wave_band + 1);

  // Sample wave and derivatives and the test function on the grid.
  const auto e = wave::detail::exp_from_cos(op.wave_cos_coeffs);
  std::vector<Complex> wg(G), wzg(G), wzzg(G), vg(G), dvg(G), d2vg(G);
  for (int g = 0; g < G; ++g) {
    const double z = 2.0 * std::numbers::pi * g / G;
    double w = e.empty() ? 0.0 : e[0], wz = 0.0, wzz = 0.0;
    for (int j = 1; j <= wave_band; ++j) {
      w += 2.0 * e[j] * std::cos(j * z);
      wz += -2.0 * j * e[j] * std::sin(j * z);
      wzz += -2.0 * j * j * e[j] * std::cos(j * z);
    }
    wg[g] = w;
    wzg[g] = wz;
    wzzg[g] = wzz;
    Complex v = 0.0, dv = 0.0, d2v = 0.0;
    for (int r = 0; r < dim; ++r) {
      const double Nn = op.mode_index[r] + xi;
      const Complex ph = test_vector[r] * std::exp(Complex(0.0, op.mode_index[r] * z));
      v += ph;
      dv += Complex(0.0, Nn) * ph;   // (d/dz + i xi) v
      d2v += -Nn * Nn * ph;
    }
    vg[g] = v;
    dvg[g] = dv;
    d2vg[g] = d2v;
  }

  // Grid-space products, projected back to the retained modes.
  Eigen::VectorXcd result(dim);
  for (int r = 0; r < dim; ++r) {
    const int m = op.mode_index[r];
    const double M = m + xi;
    std::vector<Complex> prod(G);
    for (int g = 0; g < G; ++g)
      prod[g] = -(b + 1.0) * wg[g] * vg[g] + k2 * wzzg[g] * vg[g] +
                k2 * (b - 1.0) * wzg[g] * dvg[g] + k2 * wg[g] * d2vg[g];
    Complex bracket = detail::dft_mode(prod, m);
    bracket += (c * (1.0 + k2 * M * M) - op.params.kappa - sig * ell2 / (M * M)) *
               test_vector[r];
    result[r] = Complex(0.0, M) / (1.0 + k2 * M * M) * bracket;
  }

  const Eigen::VectorXcd by_matrix = op.entries * test_vector;
  const double denom = std::max(by_matrix.norm(), 1e-300);
  return (result - by_matrix).norm() / denom;
}

}  // namespace bkp::bloch
