// Acceptance gate: one line per criterion, PASS/FAIL, nonzero exit on any FAIL.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "bkp/bloch.hpp"
#include "bkp/criteria.hpp"
#include "bkp/reduced.hpp"
#include "bkp/region.hpp"
#include "bkp/spectrum.hpp"
#include "bkp/wave.hpp"

using namespace bkp;
using Complex = std::complex<double>;

namespace {

int g_failures = 0;

void report(int index, const char* title, bool ok, const std::string& detail = "") {
  std::printf("%s  criterion %2d  %s%s%s\n", ok ? "PASS" : "FAIL", index, title,
              detail.empty() ? "" : "  -- ", detail.c_str());
  if (!ok) ++g_failures;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

double hausdorff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  auto side = [](const std::vector<Complex>& from, const std::vector<Complex>& to) {
    double worst = 0.0;
    for (const auto& x : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& y : to) best = std::min(best, std::abs(x - y));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(side(a, b), side(b, a));
}

// --- 1: expansion residual decays like a^4 --------------------------------

void criterion_1() {
  bool ok = true;
  std::string detail;
  for (const auto& p : {PhysicalParams(2.0, 2.0, 1.0, Sigma::MinusOne),
                        PhysicalParams(3.0, 2.0, 0.7, Sigma::MinusOne)}) {
    const double r1 = wave::profile_residual(wave::stokes_wave(p, 0.02));
    const double r2 = wave::profile_residual(wave::stokes_wave(p, 0.01));
    const double ratio = r1 / r2;
    ok = ok && ratio >= 12.0 && ratio <= 20.0;
    detail += "ratio=" + fmt(ratio) + " ";
  }
  report(1, "expansion residual order a^4", ok, detail);
}

// --- 2: refined speed vs expansion speed, quartic gap ----------------------

void criterion_2() {
  const PhysicalParams p(2.0, 2.0, 1.0, Sigma::MinusOne);
  const auto e = wave::expansion_coefficients(p);
  const bool coeffs_ok = std::abs(e.c0 - 1.0) < 1e-14 && std::abs(e.c2 + 1.25) < 1e-14;
  auto gap = [&](double a) {
    const auto w = wave::newton_refine(wave::stokes_wave(p, a), p, 32, 1e-13);
    return std::abs(w.c - (e.c0 + a * a * e.c2));
  };
  const double ratio = gap(0.08) / gap(0.04);
  report(2, "refined speed agrees to quartic order",
         coeffs_ok && ratio >= 12.0 && ratio <= 20.0, "ratio=" + fmt(ratio));
}

// --- 3: zero-amplitude exactness ------------------------------------------

void criterion_3() {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> uell(0.0, 2.0), uxi(-0.5, 0.5), uk(0.3, 2.0),
      ukap(0.5, 4.0);
  // tolerances scale with the entry magnitude: omega_n grows linearly in n
  double worst_entry = 0.0, worst_eig = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const PhysicalParams p(uk(rng), ukap(rng), uk(rng),
                           trial % 2 ? Sigma::MinusOne : Sigma::PlusOne);
    double xi = uxi(rng);
    if (xi == 0.0) xi = 0.25;
    const BlochSpec spec(uell(rng), xi, 12);
    const auto mat = bloch::assemble(wave::stokes_wave(p, 0.0), spec, p);
    for (int r = 0; r < mat.entries.rows(); ++r)
      for (int s = 0; s < mat.entries.cols(); ++s) {
        const Complex want =
            r == s ? Complex(0.0, criteria::omega_symbol(mat.mode_index[r], spec, p))
                   : Complex(0.0);
        const double scale = std::max(1.0, std::abs(want));
        worst_entry = std::max(worst_entry, std::abs(mat.entries(r, s) - want) / scale);
      }
    const auto res = spectrum::eigenvalues(mat);
    for (std::size_t r = 0; r < mat.mode_index.size(); ++r) {
      const Complex want(0.0, criteria::omega_symbol(mat.mode_index[r], spec, p));
      double best = std::numeric_limits<double>::infinity();
      for (const auto& z : res.eigenvalues) best = std::min(best, std::abs(z - want));
      worst_eig = std::max(worst_eig, best / std::max(1.0, std::abs(want)));
    }
  }
  report(3, "zero-amplitude operator and spectrum are exact",
         worst_entry <= 1e-14 && worst_eig <= 1e-12,
         "entry=" + fmt(worst_entry) + " eig=" + fmt(worst_eig));
}

// --- 4: spectral symmetries ------------------------------------------------

void criterion_4() {
  const PhysicalParams p(2.0, 2.0, 1.0, Sigma::MinusOne);
  double worst_defect = 0.0, worst_reflect = 0.0;
  for (double a : {0.01, 0.03, 0.05}) {
    const auto w = wave::newton_refine(wave::stokes_wave(p, a), p, 32);
    for (double ell : {0.1, 0.4, 0.8}) {
      for (double xi : {0.1, 0.25, 0.4}) {
        const auto plus = spectrum::eigenvalues(
            bloch::assemble(w, BlochSpec(ell, xi, 32), p));
        worst_defect = std::max(worst_defect, plus.symmetry_defect);
        // xi -> -xi maps the spectrum to its negative (mode reversal)
        const auto minus = spectrum::eigenvalues(
            bloch::assemble(w, BlochSpec(ell, -xi, 32), p));
        std::vector<Complex> reflected(minus.eigenvalues.size());
        std::transform(minus.eigenvalues.begin(), minus.eigenvalues.end(),
                       reflected.begin(), [](Complex z) { return -z; });
        worst_reflect = std::max(worst_reflect, hausdorff(plus.eigenvalues, reflected));
      }
    }
  }
  report(4, "Hamiltonian and Floquet-reflection symmetries",
         worst_defect <= 1e-8 && worst_reflect <= 1e-10,
         "defect=" + fmt(worst_defect) + " reflect=" + fmt(worst_reflect));
}

// --- 5: co-periodic threshold vs closed form -------------------------------

void criterion_5() {
  const PhysicalParams p(2.0, 2.0, 1.0, Sigma::MinusOne);
  auto rel_err = [&](double a) {
    const auto w = wave::newton_refine(wave::stokes_wave(p, a), p, 32);
    const double pred = criteria::ell_a_sq(p, a);
    const auto t = spectrum::threshold_bisect(w, p, 0.0, 32,
                                              spectrum::default_bracket(pred), 1e-10);
    return std::abs(t.ell_star_sq - pred) / pred;
  };
  const double e1 = rel_err(0.05);
  const double e2 = rel_err(0.025);
  const double shrink = e1 / e2;
  report(5, "detected co-periodic threshold tracks ell_a^2",
         e1 <= 0.10 && shrink >= 3.0 && shrink <= 5.0,
         "rel_err=" + fmt(e1) + " shrink=" + fmt(shrink));
}

// --- 6: unstable pair magnitude at ell^2 = ell_a^2/2 -----------------------

void criterion_6() {
  const PhysicalParams p(2.0, 2.0, 1.0, Sigma::MinusOne);
  const double a = 0.05;
  const auto w = wave::newton_refine(wave::stokes_wave(p, a), p, 32);
  const double ell2 = criteria::ell_a_sq(p, a) / 2.0;
  const auto res = spectrum::eigenvalues(
      bloch::assemble(w, BlochSpec(std::sqrt(ell2), 0.0, 32), p));
  const double want = 1.875e-3;
  const double rel = std::abs(res.max_real - want) / want;
  report(6, "unstable real pair magnitude at half-window", rel <= 0.20,
         "max_real=" + fmt(res.max_real) + " rel=" + fmt(rel));
}

// --- 7: sigma=+1 mirror ----------------------------------------------------

void criterion_7() {
  // ell_**^2 = -ell_a^2 + O(a^4); the quartic constant here is large (~385),
  // so the 10% agreement is checked at the smallest amplitude and the error
  // is required to scale quartically across two halvings.
  const PhysicalParams plus(4.0, 2.0, std::sqrt(6.0), Sigma::PlusOne);
  bool ok = true;
  std::string detail;
  std::vector<double> abs_errs;
  double last_rel = 1.0;
  try {
    for (double a : {0.05, 0.025, 0.0125}) {
      const double pred = -criteria::ell_a_sq(plus, a);
      ok = ok && pred > 0.0;
      const auto w = wave::newton_refine(wave::stokes_wave(plus, a), plus, 32);
      const auto t = spectrum::threshold_bisect(w, plus, 0.0, 32,
                                                spectrum::default_bracket(pred), 1e-10);
      abs_errs.push_back(std::abs(t.ell_star_sq - pred));
      last_rel = std::abs(t.ell_star_sq - pred) / pred;
    }
    for (std::size_t i = 0; i + 1 < abs_errs.size(); ++i) {
      const double ratio = abs_errs[i] / abs_errs[i + 1];
      ok = ok && ratio >= 12.0 && ratio <= 20.0;
      detail += "ratio=" + fmt(ratio) + " ";
    }
    ok = ok && last_rel <= 0.10;
    detail += "rel=" + fmt(last_rel);
  } catch (const std::exception& e) {
    ok = false;
    detail += std::string(" threshold failed: ") + e.what();
  }

  const double a = 0.05;
  const PhysicalParams minus(4.0, 2.0, std::sqrt(6.0), Sigma::MinusOne);
  const auto wm = wave::newton_refine(wave::stokes_wave(minus, a), minus, 32);
  const double ell_a = std::sqrt(-criteria::ell_a_sq(minus, a));
  for (double f : {0.25, 0.5, 1.0, 2.0}) {
    const auto res = spectrum::eigenvalues(
        bloch::assemble(wm, BlochSpec(f * ell_a, 0.0, 32), minus));
    if (res.max_real > spectrum::default_growth_tol(res)) {
      ok = false;
      detail += " unstable at f=" + fmt(f);
    }
  }
  report(7, "sigma=+1 unstable window mirrors -ell_a^2; sigma=-1 stable", ok, detail);
}

// --- 8: Bloch instability band ---------------------------------------------

void criterion_8() {
  const PhysicalParams p(2.0, 2.0, 1.0, Sigma::MinusOne);
  const double a = 0.02, xi = 0.3;
  const auto w = wave::newton_refine(wave::stokes_wave(p, a), p, 32);
  const auto thr = criteria::ell_thresholds(xi, p);
  const double eps = criteria::epsilon_a(xi, p, a);
  const auto band = spectrum::band_scan(
      w, p, xi, {thr.ellc_sq - 3.0 * eps, thr.ellc_sq + 3.0 * eps}, 25, 32, 1e-9);
  bool ok = band.has_value();
  std::string detail;
  if (band) {
    const double center = 0.5 * (band->lower + band->upper);
    const double half = 0.5 * (band->upper - band->lower);
    ok = ok && std::abs(center - thr.ellc_sq) / thr.ellc_sq <= 0.10;
    ok = ok && std::abs(half - eps) / eps <= 0.25;
    detail = "center=" + fmt(center) + " (pred " + fmt(thr.ellc_sq) + ") half=" +
             fmt(half) + " (pred " + fmt(eps) + ")";

    const auto res = spectrum::eigenvalues(
        bloch::assemble(w, BlochSpec(std::sqrt(thr.ellc_sq), xi, 32), p));
    const auto pred = reduced::lambda_bloch(p, a, 0.0, xi);
    const double want_re = std::abs(pred.lambda_pair[0].real());
    const double want_im = criteria::omega_star(xi, p);
    Complex growing = 0.0;
    for (const auto& z : res.eigenvalues)
      if (z.real() > growing.real()) growing = z;
    ok = ok && std::abs(res.max_real - want_re) / want_re <= 0.25;
    ok = ok && std::abs(std::abs(growing.imag()) - want_im) / want_im <= 0.10;
    detail += " re=" + fmt(res.max_real) + " (pred " + fmt(want_re) + ") im=" +
              fmt(std::abs(growing.imag())) + " (pred " + fmt(want_im) + ")";
  } else {
    detail = "no band found";
  }
  report(8, "Bloch band location, width, and colliding pair", ok, detail);
}

// --- 9: B<0 spectral stability across [ell_0^2, ell_-^2] -------------------

void criterion_9() {
  struct Sample {
    double b, kappa, k2, xi;
  };
  // One point from each enumerated B<0 region, chosen so no dispersion
  // collision other than the certified (0,-1) one falls inside the scanned
  // interval (cases 2 and 3 force large k^2, where such collisions exist and
  // genuinely destabilize; the closed form says nothing about those).
  const Sample samples[] = {
      {-2.0, 2.0, 0.39, 0.3}, {3.7, 10.0, 26.0, 0.44}, {4.13, 2.0, 15.2, 0.46}};
  bool ok = true;
  std::string detail;
  const char* want_case[] = {"B<0 (1)", "B<0 (2)", "B<0 (3)"};
  for (int si = 0; si < 3; ++si) {
    const auto& s = samples[si];
    const PhysicalParams p(s.b, s.kappa, std::sqrt(s.k2), Sigma::MinusOne);
    const auto c = criteria::detail::bloch_case(s.b, p.k2(), s.xi);
    if (!(criteria::b_factor(s.xi, p) < 0.0) || c.label.find(want_case[si]) != 0) {
      ok = false;
      detail += "wrong case at b=" + fmt(s.b) + " ";
      continue;
    }
    const auto w = wave::newton_refine(wave::stokes_wave(p, 0.02), p, 32);
    const auto thr = criteria::ell_thresholds(s.xi, p);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double ell2 = thr.ell0_sq + (thr.ellm_sq - thr.ell0_sq) * i / 19.0;
      const auto res = spectrum::eigenvalues(
          bloch::assemble(w, BlochSpec(std::sqrt(ell2), s.xi, 32), p));
      const auto v = spectrum::classify(res, spectrum::default_growth_tol(res));
      if (v.kind != StabilityKind::StableImaginary) ok = false;
      worst = std::max(worst, res.max_real);
    }
    detail += "b=" + fmt(s.b) + ":max_real=" + fmt(worst) + " ";
  }
  report(9, "B<0 samples stay spectrally stable across the interval", ok, detail);
}

// --- 10: enumerated cases vs direct signs ----------------------------------

void criterion_10() {
  std::mt19937 rng(20240501);
  std::uniform_real_distribution<double> ub(-4.0, 8.0), uk2(0.05, 12.0), uxi(0.01, 0.5);
  int checked = 0, agreed = 0;
  while (checked < 10000) {
    const double b = ub(rng), k2 = uk2(rng), xi = uxi(rng);
    if (std::abs(b + 1.0) < 1e-3) continue;
    const PhysicalParams p(b, 2.0, std::sqrt(k2), Sigma::MinusOne);
    const double la2 = criteria::ell_a_sq(p, 0.05);
    const double B = criteria::b_factor(xi, p);
    if (std::abs(la2) < 1e-6 || std::abs(B) < 1e-6) continue;
    ++checked;
    const auto vp = criteria::classify_periodic(p, 0.05);
    const auto vb = criteria::classify_bloch(xi, p);
    const bool p_ok = vp.kind == (la2 > 0.0 ? StabilityKind::UnstableRealPair
                                            : StabilityKind::StableImaginary);
    const bool b_ok = vb.kind == (B > 0.0 ? StabilityKind::UnstableComplexPair
                                          : StabilityKind::StableImaginary);
    if (p_ok && b_ok) ++agreed;
  }
  report(10, "case enumerations match direct sign evaluation", agreed == checked,
         fmt(agreed) + "/" + fmt(checked));
}

// --- 11: region-map boundary -----------------------------------------------

void criterion_11() {
  const auto g = region::region_map(-4.0, 6.0, 0.025, 10.0, 200, 200,
                                    region::Mode::Periodic, Sigma::MinusOne);
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < g.b_values.size() && ok; ++i) {
    const double b = g.b_values[i];
    const bool curve_col = b < -1.0 || b > 3.5;
    const double thr = curve_col ? (b + 1.0) / (2.0 * b - 7.0) : 0.0;
    for (std::size_t j = 0; j < g.k2_values.size(); ++j) {
      const double k2 = g.k2_values[j];
      const auto kind = g.at(i, j).kind;
      const bool shaded = kind == StabilityKind::StableImaginary;
      const bool want = curve_col && k2 > thr;
      if (shaded != want) {
        ok = false;
        detail = "mismatch at b=" + fmt(b) + " k2=" + fmt(k2);
        break;
      }
    }
  }
  report(11, "region map shades exactly k^2>(b+1)/(2b-7) off -1<b<=7/2", ok, detail);
}

// --- 12: xi = 1/2 degeneracy -----------------------------------------------

void criterion_12() {
  const PhysicalParams p(2.0, 2.0, 1.0, Sigma::MinusOne);
  const auto thr = criteria::ell_thresholds(0.5, p);
  const double d = 3.0 / 16.0;
  const bool ok = std::abs(thr.ell0_sq - d) <= 1e-14 &&
                  std::abs(thr.ellc_sq - d) <= 1e-14 &&
                  std::abs(thr.ellm_sq - d) <= 1e-14 &&
                  criteria::omega_star(0.5, p) == 0.0;
  report(12, "all three thresholds collapse to 3/16 at xi=1/2, omega_*=0", ok);
}

// --- 13: truncation control ------------------------------------------------

void criterion_13() {
  struct Case {
    PhysicalParams p;
    double a, ell, xi;
  };
  const PhysicalParams base(2.0, 2.0, 1.0, Sigma::MinusOne);
  const auto thr_b = criteria::ell_thresholds(0.3, base);
  const std::vector<Case> cases = {
      {base, 0.05, std::sqrt(criteria::ell_a_sq(base, 0.05) / 2.0), 0.0},
      {base, 0.02, std::sqrt(thr_b.ellc_sq), 0.3},
      {PhysicalParams(4.0, 2.0, std::sqrt(6.0), Sigma::PlusOne), 0.05,
       std::sqrt(-criteria::ell_a_sq(PhysicalParams(4.0, 2.0, std::sqrt(6.0), Sigma::PlusOne), 0.05) / 2.0),
       0.0},
      {PhysicalParams(-2.0, 2.0, std::sqrt(0.39), Sigma::MinusOne), 0.02,
       std::sqrt(criteria::ell_thresholds(0.3, PhysicalParams(-2.0, 2.0, std::sqrt(0.39), Sigma::MinusOne)).ellc_sq),
       0.3}};
  bool ok = true;
  double worst = 0.0;
  for (const auto& c : cases) {
    const auto w = wave::newton_refine(wave::stokes_wave(c.p, c.a), c.p, 32);
    const double drift = spectrum::convergence_check(w, BlochSpec(c.ell, c.xi, 32), c.p);
    worst = std::max(worst, drift);
    ok = ok && drift <= 1e-10;
  }
  report(13, "origin-nearest eigenvalues settled at N=32 vs 64", ok,
         "worst=" + fmt(worst));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  criterion_13();
  std::printf("%d of 13 criteria passed\n", 13 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
