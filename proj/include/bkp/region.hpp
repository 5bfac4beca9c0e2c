#pragma once

// (b, k^2) region maps from the closed-form classifiers, with CSV and
// minimal-SVG emission.

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "bkp/criteria.hpp"
#include "bkp/io.hpp"
#include "bkp/params.hpp"

namespace bkp::region {

enum class Mode { Periodic, Bloch };

struct RegionGrid {
  std::vector<double> b_values;
  std::vector<double> k2_values;
  std::vector<RegionVerdict> cells;  // row-major: ib * k2.size() + ik
  Mode mode;
  Sigma sigma;
  double xi;  // Bloch mode only

  const RegionVerdict& at(std::size_t ib, std::size_t ik) const {
    return cells[ib * k2_values.size() + ik];
  }
};

inline RegionGrid region_map(double b_min, double b_max, double k2_min, double k2_max,
                             int nb, int nk2, Mode mode, Sigma sigma, double xi = 0.5,
                             double kappa = 2.0, double a = 0.05) {
  RegionGrid g;
  g.mode = mode;
  g.sigma = sigma;
  g.xi = xi;
  g.b_values.resize(nb);
  g.k2_values.resize(nk2);
  for (int i = 0; i < nb; ++i)
    g.b_values[i] = b_min + (b_max - b_min) * (i + 0.5) / nb;
  for (int j = 0; j < nk2; ++j)
    g.k2_values[j] = k2_min + (k2_max - k2_min) * (j + 0.5) / nk2;

  g.cells.reserve(static_cast<std::size_t>(nb) * nk2);
  for (int i = 0; i < nb; ++i) {
    for (int j = 0; j < nk2; ++j) {
      const double b = g.b_values[i];
      const double k = std::sqrt(g.k2_values[j]);
      if (b == -1.0) {
        g.cells.push_back({StabilityKind::Uncertified, "b=-1 excluded", std::nullopt});
        continue;
      }
      const PhysicalParams p(b, kappa, k, sigma);
      g.cells.push_back(mode == Mode::Periodic ? criteria::classify_periodic(p, a)
                                               : criteria::classify_bloch(xi, p));
    }
  }
  return g;
}

inline void write_csv(const RegionGrid& g, std::ostream& os) {
  os << "b,k2,verdict,case,witness\n";
  for (std::size_t i = 0; i < g.b_values.size(); ++i) {
    for (std::size_t j = 0; j < g.k2_values.size(); ++j) {
      const auto& v = g.at(i, j);
      os << io::fmt17(g.b_values[i]) << ',' << io::fmt17(g.k2_values[j]) << ','
         << to_string(v.kind) << ",\"" << v.case_label << "\","
         << (v.witness ? io::fmt17(*v.witness) : "") << '\n';
    }
  }
}

/// Static SVG: shaded cells by verdict plus the boundary curve
/// k^2 = (b+1)/(2b-7) overlay on the periodic map.
inline void write_svg(const RegionGrid& g, std::ostream& os) {
  const double W = 640, H = 480, mL = 60, mB = 40, mT = 20, mR = 20;
  const double b0 = g.b_values.front(), b1 = g.b_values.back();
  const double q0 = g.k2_values.front(), q1 = g.k2_values.back();
  auto px = [&](double b) { return mL + (b - b0) / (b1 - b0) * (W - mL - mR); };
  auto py = [&](double q) { return H - mB - (q - q0) / (q1 - q0) * (H - mT - mB); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
     << H << "\">\n";
  const double cw = (W - mL - mR) / g.b_values.size();
  const double ch = (H - mT - mB) / g.k2_values.size();
  for (std::size_t i = 0; i < g.b_values.size(); ++i) {
    for (std::size_t j = 0; j < g.k2_values.size(); ++j) {
      const char* fill = nullptr;
      switch (g.at(i, j).kind) {
        case StabilityKind::StableImaginary: fill = "#7fa8d9"; break;
        case StabilityKind::UnstableRealPair: fill = "#e8e0d0"; break;
        case StabilityKind::UnstableComplexPair: fill = "#d98f7f"; break;
        case StabilityKind::Uncertified: fill = "#bbbbbb"; break;
      }
      os << "<rect x=\"" << px(g.b_values[i]) - cw / 2 << "\" y=\""
         << py(g.k2_values[j]) - ch / 2 << "\" width=\"" << cw << "\" height=\"" << ch
         << "\" fill=\"" << fill << "\"/>\n";
    }
  }
  // boundary curve overlay where it lies inside the window
  os << "<path d=\"";
  bool pen = false;
  for (int s = 0; s <= 400; ++s) {
    const double b = b0 + (b1 - b0) * s / 400.0;
    if (2.0 * b - 7.0 == 0.0) { pen = false; continue; }
    const double q = (b + 1.0) / (2.0 * b - 7.0);
    if (q < q0 || q > q1 || (b > -1.0 && b < 3.5)) { pen = false; continue; }
    os << (pen ? 'L' : 'M') << px(b) << ' ' << py(q) << ' ';
    pen = true;
  }
  os << "\" stroke=\"black\" fill=\"none\" stroke-width=\"1.5\"/>\n";
  os << "<rect x=\"" << mL << "\" y=\"" << mT << "\" width=\"" << W - mL - mR
     << "\" height=\"" << H - mT - mB
     << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
  os << "<text x=\"" << (mL + W - mR) / 2 << "\" y=\"" << H - 8
     << "\" text-anchor=\"middle\">b</text>\n";
  os << "<text x=\"18\" y=\"" << (mT + H - mB) / 2
     << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << (mT + H - mB) / 2 << ")\">k^2</text>\n";
  os << "</svg>\n";
}

}  // namespace bkp::region
