// bkp: transverse stability toolbox for small-amplitude periodic waves.
//
// Subcommands: wave, spectrum, threshold, band, region, sweep.
// Exit codes: 0 success, 2 invalid arguments, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "bkp/bloch.hpp"
#include "bkp/criteria.hpp"
#include "bkp/io.hpp"
#include "bkp/reduced.hpp"
#include "bkp/region.hpp"
#include "bkp/spectrum.hpp"
#include "bkp/wave.hpp"

namespace {

using nlohmann::json;
using namespace bkp;

struct CommonOpts {
  double b = 2.0;
  double kappa = 2.0;
  double k = 1.0;
  double a = 0.05;
  double sigma = -1.0;
  double ell = 0.1;
  double xi = 0.0;
  int modes = 32;
  double tol = 1e-8;
  std::string out;
  std::string format = "json";
  int workers = 0;
  unsigned seed = 12345;
  int verify = 0;
};

PhysicalParams params_of(const CommonOpts& o) {
  if (o.sigma != -1.0 && o.sigma != 1.0)
    throw std::invalid_argument("--sigma must be -1 or 1");
  return PhysicalParams(o.b, o.kappa, o.k, o.sigma < 0 ? Sigma::MinusOne : Sigma::PlusOne);
}

json provenance(const CommonOpts& o, const std::string& command) {
  return {{"tool_version", io::kToolVersion},
          {"command", command},
          {"b", o.b},
          {"kappa", o.kappa},
          {"k", o.k},
          {"a", o.a},
          {"sigma", o.sigma},
          {"ell", o.ell},
          {"xi", o.xi},
          {"modes", o.modes},
          {"tol", o.tol},
          {"seed", o.seed}};
}

void emit(const json& doc, const std::string& out) {
  // fixed-format dump keeps artifacts byte-identical across runs
  if (out.empty()) {
    std::cout << doc.dump(2) << '\n';
  } else {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot open output file: " + out);
    f << doc.dump(2) << '\n';
  }
}

void emit_text(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot open output file: " + out);
    f << text;
  }
}

wave::RefinedWave make_wave(const CommonOpts& o, const PhysicalParams& p) {
  return wave::newton_refine(wave::stokes_wave(p, o.a), p, o.modes,
                             std::min(o.tol, 1e-10));
}

int cmd_wave(const CommonOpts& o) {
  const auto p = params_of(o);
  const auto w = make_wave(o, p);
  json doc = io::to_json(w);
  doc["provenance"] = provenance(o, "wave");
  emit(doc, o.out);
  return 0;
}

int cmd_spectrum(const CommonOpts& o) {
  const auto p = params_of(o);
  const auto w = make_wave(o, p);
  const BlochSpec spec(o.ell, o.xi, o.modes);
  const auto res = spectrum::eigenvalues(bloch::assemble(w, spec, p));
  const auto verdict = spectrum::classify(res, spectrum::default_growth_tol(res));
  json doc = io::to_json(res);
  doc["verdict"] = io::to_json(verdict);
  doc["provenance"] = provenance(o, "spectrum");
  emit(doc, o.out);
  return verdict.kind == StabilityKind::Uncertified ? 3 : 0;
}

int cmd_threshold(const CommonOpts& o) {
  const auto p = params_of(o);
  const auto w = make_wave(o, p);
  const double la2 = criteria::ell_a_sq(p, o.a);
  const double pred = p.sigma == Sigma::MinusOne ? la2 : -la2;
  if (!(pred > 0.0))
    throw std::runtime_error("threshold: no instability window predicted here");
  const auto t = spectrum::threshold_bisect(w, p, o.xi, o.modes,
                                            spectrum::default_bracket(pred), o.tol);
  json doc = {{"ell_star_sq", t.ell_star_sq},
              {"prediction", t.prediction},
              {"bracket", {t.bracket.first, t.bracket.second}},
              {"iterations", t.iterations},
              {"relative_error", std::abs(t.ell_star_sq - t.prediction) / t.prediction}};
  doc["provenance"] = provenance(o, "threshold");
  emit(doc, o.out);
  return 0;
}

int cmd_band(const CommonOpts& o) {
  const auto p = params_of(o);
  const double xi = criteria::fold_xi(o.xi);
  const auto w = make_wave(o, p);
  const auto thr = criteria::ell_thresholds(xi, p);
  const double eps = criteria::epsilon_a(xi, p, o.a);
  const std::pair<double, double> range{std::max(thr.ellc_sq - 3.0 * eps, 0.0),
                                        thr.ellc_sq + 3.0 * eps};
  const auto band = spectrum::band_scan(w, p, xi, range, 25, o.modes, o.tol);
  json doc = {{"ell_c_sq", thr.ellc_sq},
              {"epsilon_a", eps},
              {"scan_range", {range.first, range.second}},
              {"found", band.has_value()}};
  if (band) {
    doc["band"] = {{"lower", band->lower},
                   {"upper", band->upper},
                   {"center", 0.5 * (band->lower + band->upper)},
                   {"half_width", 0.5 * (band->upper - band->lower)}};
  }
  doc["provenance"] = provenance(o, "band");
  emit(doc, o.out);
  return band ? 0 : 3;
}

struct RegionOpts {
  double b_min = -4.0, b_max = 6.0;
  double k2_min = 0.05, k2_max = 10.0;
  int nb = 200, nk2 = 200;
  std::string mode = "periodic";
};

int cmd_region(const CommonOpts& o, const RegionOpts& r) {
  const auto mode = r.mode == "bloch" ? region::Mode::Bloch : region::Mode::Periodic;
  const auto sigma = o.sigma < 0 ? Sigma::MinusOne : Sigma::PlusOne;
  const double xi = mode == region::Mode::Bloch ? criteria::fold_xi(o.xi == 0.0 ? 0.5 : o.xi)
                                                : 0.5;
  const auto grid = region::region_map(r.b_min, r.b_max, r.k2_min, r.k2_max, r.nb, r.nk2,
                                       mode, sigma, xi, o.kappa, o.a);

  if (o.verify > 0) {
    // eigen-validate a reproducible random cell sample against the closed form
    std::mt19937 rng(o.seed);
    std::uniform_int_distribution<int> ui(0, r.nb - 1), uj(0, r.nk2 - 1);
    int mismatches = 0;
    for (int t = 0; t < o.verify; ++t) {
      const int i = ui(rng), j = uj(rng);
      const auto& cell = grid.at(i, j);
      if (cell.kind == StabilityKind::Uncertified) continue;
      const PhysicalParams p(grid.b_values[i], o.kappa, std::sqrt(grid.k2_values[j]),
                             sigma);
      // keep k^2 * a small so the expansion seed stays inside Newton's basin
      const double a_eff = o.a * std::min(1.0, 1.0 / p.k2());
      const double ell2 = mode == region::Mode::Periodic
                              ? std::abs(criteria::ell_a_sq(p, a_eff)) / 2.0
                              : criteria::ell_thresholds(xi, p).ellc_sq;
      if (!(ell2 > 0.0)) continue;
      const BlochSpec spec(std::sqrt(ell2), mode == region::Mode::Periodic ? 0.0 : xi,
                           o.modes);
      const auto w = wave::newton_refine(wave::stokes_wave(p, a_eff), p, o.modes);
      const auto res = spectrum::eigenvalues(bloch::assemble(w, spec, p));
      const bool grew = res.max_real > spectrum::default_growth_tol(res);
      const bool predicted = cell.kind != StabilityKind::StableImaginary;
      if (grew != predicted) {
        ++mismatches;
        std::cerr << "verify mismatch at b=" << io::fmt17(p.b)
                  << " k2=" << io::fmt17(p.k2()) << '\n';
      }
    }
    if (mismatches > 0) return 3;
  }

  if (o.format == "svg") {
    std::ostringstream svg;
    region::write_svg(grid, svg);
    emit_text(svg.str(), o.out);
  } else if (o.format == "csv") {
    std::ostringstream csv;
    csv << "# bkp " << io::kToolVersion << " region mode=" << r.mode
        << " sigma=" << io::fmt17(o.sigma) << " xi=" << io::fmt17(xi)
        << " kappa=" << io::fmt17(o.kappa) << " a=" << io::fmt17(o.a) << '\n';
    region::write_csv(grid, csv);
    emit_text(csv.str(), o.out);
  } else {
    json cells = json::array();
    for (std::size_t i = 0; i < grid.b_values.size(); ++i)
      for (std::size_t j = 0; j < grid.k2_values.size(); ++j) {
        json c = io::to_json(grid.at(i, j));
        c["b"] = grid.b_values[i];
        c["k2"] = grid.k2_values[j];
        cells.push_back(std::move(c));
      }
    json doc = {{"cells", std::move(cells)}};
    doc["provenance"] = provenance(o, "region");
    emit(doc, o.out);
  }
  return 0;
}

struct SweepAxis {
  std::string name;
  double lo, hi;
  int steps;
};

SweepAxis parse_axis(const std::string& text) {
  SweepAxis ax;
  const auto fail = [&] {
    throw CLI::ValidationError("--axis", "expected name:min:max:steps, got " + text);
  };
  std::istringstream is(text);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(is, part, ':')) parts.push_back(part);
  if (parts.size() != 4) fail();
  ax.name = parts[0];
  static const std::vector<std::string> kAxes{"b", "kappa", "k", "a", "ell", "xi"};
  if (std::find(kAxes.begin(), kAxes.end(), ax.name) == kAxes.end()) fail();
  try {
    ax.lo = std::stod(parts[1]);
    ax.hi = std::stod(parts[2]);
    ax.steps = std::stoi(parts[3]);
  } catch (const std::exception&) {
    fail();
  }
  if (ax.steps < 1) fail();
  return ax;
}

int cmd_sweep(const CommonOpts& o, const std::vector<std::string>& axis_specs,
              const std::string& task) {
  std::vector<SweepAxis> axes;
  for (const auto& s : axis_specs) {
    auto ax = parse_axis(s);
    for (const auto& prev : axes)
      if (prev.name == ax.name) throw CLI::ValidationError("--axis", "duplicate axis " + ax.name);
    axes.push_back(ax);
  }
  if (axes.empty()) throw CLI::ValidationError("--axis", "at least one axis required");
  if (task != "spectrum" && task != "threshold")
    throw CLI::ValidationError("--task", "task must be spectrum or threshold");

  std::size_t total = 1;
  for (const auto& ax : axes) total *= static_cast<std::size_t>(ax.steps);

  auto point_opts = [&](std::size_t flat) {
    CommonOpts po = o;
    for (const auto& ax : axes) {
      const std::size_t i = flat % ax.steps;
      flat /= ax.steps;
      const double v =
          ax.steps == 1 ? ax.lo : ax.lo + (ax.hi - ax.lo) * static_cast<double>(i) / (ax.steps - 1);
      if (ax.name == "b") po.b = v;
      else if (ax.name == "kappa") po.kappa = v;
      else if (ax.name == "k") po.k = v;
      else if (ax.name == "a") po.a = v;
      else if (ax.name == "ell") po.ell = v;
      else if (ax.name == "xi") po.xi = v;
    }
    return po;
  };

  struct Row {
    CommonOpts opts;
    std::string verdict = "UNCERTIFIED";
    double witness = std::nan("");
    double max_real = std::nan("");
    double runtime_ms = 0.0;
    bool failed = false;
  };
  std::vector<Row> rows(total);

  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned workers =
      o.workers > 0 ? static_cast<unsigned>(o.workers) : std::max(1u, hw);
  std::atomic<std::size_t> next{0};
  auto run_cell = [&](std::size_t idx) {
    Row& row = rows[idx];
    row.opts = point_opts(idx);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const auto p = params_of(row.opts);
      const auto w = make_wave(row.opts, p);
      if (task == "spectrum") {
        const BlochSpec spec(row.opts.ell, row.opts.xi, row.opts.modes);
        const auto res = spectrum::eigenvalues(bloch::assemble(w, spec, p));
        const auto v = spectrum::classify(res, spectrum::default_growth_tol(res));
        row.verdict = to_string(v.kind);
        row.witness = v.witness.value_or(std::nan(""));
        row.max_real = res.max_real;
      } else {
        const double la2 = criteria::ell_a_sq(p, row.opts.a);
        const double pred = p.sigma == Sigma::MinusOne ? la2 : -la2;
        if (!(pred > 0.0)) throw std::runtime_error("no window");
        const auto t = spectrum::threshold_bisect(
            w, p, row.opts.xi, row.opts.modes, spectrum::default_bracket(pred),
            row.opts.tol);
        row.verdict = "THRESHOLD";
        row.witness = t.ell_star_sq;
      }
    } catch (const std::exception&) {
      row.failed = true;
    }
    row.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
  };

  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(workers, total); ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) run_cell(i);
    });
  for (auto& th : pool) th.join();

  // single collector, deterministic row order regardless of worker schedule
  std::ostringstream csv;
  csv << "# bkp " << io::kToolVersion << " sweep task=" << task << '\n';
  csv << "b,kappa,k,a,ell,xi,verdict,witness,max_real,runtime_ms\n";
  bool any_failed = false;
  for (const auto& row : rows) {
    any_failed = any_failed || row.failed;
    csv << io::fmt17(row.opts.b) << ',' << io::fmt17(row.opts.kappa) << ','
        << io::fmt17(row.opts.k) << ',' << io::fmt17(row.opts.a) << ','
        << io::fmt17(row.opts.ell) << ',' << io::fmt17(row.opts.xi) << ','
        << (row.failed ? "FAILED" : row.verdict) << ','
        << (std::isnan(row.witness) ? "" : io::fmt17(row.witness)) << ','
        << (std::isnan(row.max_real) ? "" : io::fmt17(row.max_real)) << ','
        << io::fmt17(row.runtime_ms) << '\n';
  }
  emit_text(csv.str(), o.out);
  return any_failed ? 3 : 0;
}

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--b", o.b, "family parameter b")->envname("BKP_B");
  cmd->add_option("--kappa", o.kappa, "dispersion constant kappa > 0")->envname("BKP_KAPPA");
  cmd->add_option("--k", o.k, "longitudinal wave number k > 0")->envname("BKP_K");
  cmd->add_option("--a", o.a, "wave amplitude")->envname("BKP_A");
  cmd->add_option("--sigma", o.sigma, "transverse sign, -1 or 1")->envname("BKP_SIGMA");
  cmd->add_option("--ell", o.ell, "transverse wave number")->envname("BKP_ELL");
  cmd->add_option("--xi", o.xi, "Floquet exponent in (-1/2, 1/2]")->envname("BKP_XI");
  cmd->add_option("--modes", o.modes, "Fourier truncation order")->envname("BKP_MODES");
  cmd->add_option("--tol", o.tol, "bisection / scan tolerance")->envname("BKP_TOL");
  cmd->add_option("--out", o.out, "output file (stdout if omitted)");
  cmd->add_option("--format", o.format, "json, csv, or svg")->envname("BKP_FORMAT");
  cmd->add_option("--workers", o.workers, "worker threads (0 = hardware)")->envname("BKP_WORKERS");
  cmd->add_option("--seed", o.seed, "seed for sampled verification")->envname("BKP_SEED");
  cmd->add_option("--verify", o.verify, "eigen-validate n random region cells");
  cmd->set_config("--config", "", "flat key=value config file; flags override")
      ->envname("BKP_CONFIG");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transverse stability of small-amplitude periodic waves"};
  app.require_subcommand(1);

  CommonOpts o;
  RegionOpts r;
  std::vector<std::string> axis_specs;
  std::string task = "spectrum";

  auto* wave_cmd = app.add_subcommand("wave", "construct and refine one wave");
  auto* spectrum_cmd = app.add_subcommand("spectrum", "full spectrum of one operator");
  auto* threshold_cmd = app.add_subcommand("threshold", "bisect the co-periodic changeover");
  auto* band_cmd = app.add_subcommand("band", "locate the Bloch instability band");
  auto* region_cmd = app.add_subcommand("region", "(b, k^2) stability map");
  auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweep over a grid");
  for (auto* cmd : {wave_cmd, spectrum_cmd, threshold_cmd, band_cmd, region_cmd, sweep_cmd})
    add_common(cmd, o);

  region_cmd->add_option("--bmin", r.b_min, "grid lower bound in b");
  region_cmd->add_option("--bmax", r.b_max, "grid upper bound in b");
  region_cmd->add_option("--k2min", r.k2_min, "grid lower bound in k^2");
  region_cmd->add_option("--k2max", r.k2_max, "grid upper bound in k^2");
  region_cmd->add_option("--nb", r.nb, "grid cells in b");
  region_cmd->add_option("--nk2", r.nk2, "grid cells in k^2");
  region_cmd->add_option("--mode", r.mode, "periodic or bloch")
      ->check(CLI::IsMember({"periodic", "bloch"}));

  sweep_cmd->add_option("--axis", axis_specs, "axis spec name:min:max:steps (repeatable)");
  sweep_cmd->add_option("--task", task, "spectrum or threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (wave_cmd->parsed()) return cmd_wave(o);
    if (spectrum_cmd->parsed()) return cmd_spectrum(o);
    if (threshold_cmd->parsed()) return cmd_threshold(o);
    if (band_cmd->parsed()) return cmd_band(o);
    if (region_cmd->parsed()) return cmd_region(o, r);
    if (sweep_cmd->parsed()) return cmd_sweep(o, axis_specs, task);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
