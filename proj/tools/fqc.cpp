// Command-line front end for the quasicrystal toolkit. Subcommands cover
// point-set generation, weighted comb construction, diffraction, Delone
// classification, comb recovery, spectral support checks, gap dichotomy,
// the nowhere-dense frequency-gap construction, and density measurement.
//
// Exit codes: 0 success, 2 invalid input or guard violation, 3 negative
// mathematical verdict (non-representable input, inconclusive dichotomy).

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include <fqc/config.hpp>
#include <fqc/core.hpp>
#include <fqc/cutproject.hpp>
#include <fqc/density.hpp>
#include <fqc/diffraction.hpp>
#include <fqc/io.hpp>
#include <fqc/lattice.hpp>
#include <fqc/measure.hpp>
#include <fqc/nowhere_dense.hpp>
#include <fqc/pointset.hpp>
#include <fqc/structure.hpp>
#include <fqc/svg.hpp>
#include <fqc/window.hpp>

namespace {

using namespace fqc;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitNegative = 3;

struct GlobalOpts {
  std::string config_path;
  std::string out_dir = ".";
  std::string format = "json";
  int threads = 0;  // 0 = take the config value
};

RunConfig resolve_config(const GlobalOpts& g) {
  RunConfig cfg;
  if (!g.config_path.empty()) cfg = load_config(g.config_path);
  if (g.threads > 0) cfg.threads = g.threads;
  cfg.validate();
  return cfg;
}

std::string out_path(const GlobalOpts& g, const std::string& stem,
                     const std::string& ext) {
  std::string dir = g.out_dir;
  if (!dir.empty() && dir.back() != '/') dir += '/';
  return dir + stem + "." + ext;
}

void emit_pointset(const GlobalOpts& g, const std::string& stem, const PointSet& ps) {
  if (g.format == "csv") {
    write_text(out_path(g, stem, "csv"), to_csv(ps));
  } else {
    write_json(out_path(g, stem, "json"), to_json(ps));
  }
}

void emit_measure(const GlobalOpts& g, const std::string& stem,
                  const DiscreteMeasure& mu) {
  if (g.format == "csv") {
    write_text(out_path(g, stem, "csv"), to_csv(mu));
  } else {
    write_json(out_path(g, stem, "json"), to_json(mu));
  }
}

PointSet read_pointset(const std::string& path) {
  json j = read_json(path);
  guard(j.value("type", "") == "point_set",
        "expected a point_set file: " + path);
  return pointset_from_json(j);
}

// Accepts either a measure file or a point-set file; a point set becomes
// the unit-weight comb on its points.
DiscreteMeasure read_measure_any(const std::string& path) {
  json j = read_json(path);
  std::string type = j.value("type", "");
  if (type == "measure") return measure_from_json(j);
  if (type == "point_set") {
    PointSet ps = pointset_from_json(j);
    std::vector<Atom> atoms;
    atoms.reserve(ps.size());
    for (const Vec& p : ps.points) atoms.push_back({p, Complex(1.0, 0.0)});
    return DiscreteMeasure(std::move(atoms), ps.box, ps.dedup_tol);
  }
  guard(false, "expected a measure or point_set file: " + path);
  return {};
}

Lattice lattice_from_flat(const std::vector<double>& flat) {
  int dim = 0;
  for (int d = 1; d <= kMaxDim; ++d)
    if (static_cast<std::size_t>(d) * d == flat.size()) dim = d;
  guard(dim > 0, "basis must have d*d entries for dimension d in 1..4");
  std::vector<Vec> gens;
  for (int r = 0; r < dim; ++r) {
    Vec v = Vec::zero(dim);
    for (int c = 0; c < dim; ++c) v[c] = flat[static_cast<std::size_t>(r) * dim + c];
    gens.push_back(v);
  }
  return Lattice::from_generators(gens);
}

NowhereDenseConfig ndconfig_from_json(const json& j) {
  NowhereDenseConfig cfg;
  cfg.centers = j.value("centers", cfg.centers);
  cfg.radii = j.value("radii", cfg.radii);
  cfg.epsilon = j.value("epsilon", cfg.epsilon);
  cfg.truncation = j.value("truncation", cfg.truncation);
  cfg.gamma_factor = j.value("gamma_factor", cfg.gamma_factor);
  cfg.max_window_length = j.value("max_window_length", cfg.max_window_length);
  return cfg;
}

// ---- subcommand bodies; each returns the process exit code ----

int run_generate(const GlobalOpts& g, const RunConfig& cfg, const std::string& kind,
                 const std::vector<double>& basis, const std::vector<double>& window,
                 double box_hw, long long count, const std::string& stem) {
  double hw = box_hw > 0 ? box_hw : cfg.box_half_width;

  if (kind == "lattice") {
    Lattice L = lattice_from_flat(basis.empty() ? std::vector<double>{1.0} : basis);
    Box box = Box::symmetric(L.dim, hw);
    std::vector<Vec> pts;
    detail::enumerate_lattice_region(L, box, static_cast<std::size_t>(cfg.enumeration_cap),
                                     [&](const Vec& p) {
                                       if (box.contains(p)) pts.push_back(p);
                                     });
    emit_pointset(g, stem, PointSet(std::move(pts), box, cfg.dedup_tol));
    return kExitOk;
  }

  if (kind == "fibonacci" || kind == "modelset") {
    CutProjectScheme s = fibonacci_scheme();
    double lo, hi_;
    if (window.size() == 2) {
      lo = window[0];
      hi_ = window[1];
    } else {
      guard(kind == "fibonacci", "modelset requires --window LO HI");
      double phi = 0.5 * (1.0 + std::sqrt(5.0));
      lo = -1.0 / phi;
      hi_ = 1.0;
    }
    Box box = Box::symmetric(1, hw);
    if (!(hi_ > lo)) {
      std::fprintf(stderr, "warning: empty window [%g, %g]; writing empty set\n", lo, hi_);
      emit_pointset(g, stem, PointSet({}, box, cfg.dedup_tol));
      return kExitOk;
    }
    WindowRegion region(Box(lo, hi_));
    PointSet ps = model_set(s, region, box, static_cast<std::size_t>(cfg.enumeration_cap));
    emit_pointset(g, stem, ps);
    return kExitOk;
  }

  if (kind == "random") {
    guard(count >= 1, "random generation needs --count >= 1");
    Box box = Box::symmetric(1, hw);
    std::mt19937_64 rng(cfg.seed);
    auto unit = [&rng]() {
      return static_cast<double>(rng() >> 11) * 0x1.0p-53;
    };
    std::vector<Vec> pts;
    pts.reserve(static_cast<std::size_t>(count));
    for (long long i = 0; i < count; ++i)
      pts.push_back(Vec{box.lo[0] + unit() * box.extent(0)});
    emit_pointset(g, stem, PointSet(std::move(pts), box, cfg.dedup_tol));
    return kExitOk;
  }

  guard(false, "unknown generation kind: " + kind);
  return kExitInvalid;
}

int run_measure(const GlobalOpts& g, const RunConfig& cfg, const std::string& input,
                bool model, bool predicted, int spline, double scale, double box_hw,
                double floor_rel, const std::string& stem) {
  double hw = box_hw > 0 ? box_hw : cfg.box_half_width;
  if (model || predicted) {
    CutProjectScheme s = fibonacci_scheme();
    Window wf = bspline_window(spline, scale);
    Box box = Box::symmetric(1, hw);
    DiscreteMeasure mu =
        predicted
            ? predicted_spectrum(s, wf, box, floor_rel,
                                 static_cast<std::size_t>(cfg.enumeration_cap))
            : model_measure(s, wf, box, static_cast<std::size_t>(cfg.enumeration_cap));
    emit_measure(g, stem, mu);
    return kExitOk;
  }
  guard(!input.empty(), "measure needs --input FILE or --model/--predicted");
  emit_measure(g, stem, read_measure_any(input));
  return kExitOk;
}

int run_diffract(const GlobalOpts& g, const RunConfig& cfg, const std::string& input,
                 double radius, double grid_hw, int grid_res, double threshold,
                 double split_threshold, const std::string& stem) {
  DiscreteMeasure mu = read_measure_any(input);
  double R = radius > 0 ? radius : cfg.truncation_radius;
  double hw = grid_hw > 0 ? grid_hw : cfg.grid_half_width;
  int res = grid_res > 0 ? grid_res : cfg.grid_resolution;
  double theta = threshold > 0 ? threshold : cfg.peak_threshold;
  if (split_threshold <= 0) split_threshold = theta;

  Autocorrelation ac = autocorrelation_measure(mu, R);
  FrequencyGrid grid = FrequencyGrid::line(0.0, hw, res);
  guard(mu.dim == 1, "diffract currently renders 1D inputs");
  DiffractionEstimate est = diffraction_estimate(ac, grid, theta, cfg.threads);
  SpectralSplit split = split_pure_point(est, split_threshold);

  write_json(out_path(g, stem, "json"), to_json(est, split));
  write_json(out_path(g, stem + "_peaks", "json"), to_json(est.peaks));
  std::string csv = "frequency,intensity,residual\n";
  for (std::size_t i = 0; i < est.trace.size(); ++i) {
    csv += detail::fmt_double(grid.point(i)[0]) + "," +
           detail::fmt_double(est.trace[i]) + "," +
           detail::fmt_double(est.residual[i]) + "\n";
  }
  write_text(out_path(g, stem + "_trace", "csv"), csv);
  PlotOptions opt;
  opt.title = "diffraction estimate";
  write_text(out_path(g, stem, "svg"), svg_diffraction_plot(est, opt));
  return kExitOk;
}

int run_classify(const GlobalOpts& g, const RunConfig& cfg, const std::string& input,
                 double ball_radius, int centers, const std::string& stem) {
  PointSet ps = read_pointset(input);
  DiscretenessReport rep = classify(ps);
  double ball = ball_radius > 0 ? ball_radius : ps.box.min_extent() / 8.0;
  UniformDensityResult dens = uniform_density(ps, ball, centers);
  json j;
  j["discreteness"] = to_json(rep);
  j["density"] = to_json(dens);
  (void)cfg;
  write_json(out_path(g, stem, "json"), j);
  return kExitOk;
}

int run_density(const GlobalOpts& g, const RunConfig& cfg, const std::string& input,
                double ball_radius, int centers, const std::string& stem) {
  PointSet ps = read_pointset(input);
  double ball = ball_radius > 0 ? ball_radius : ps.box.min_extent() / 8.0;
  UniformDensityResult dens = uniform_density(ps, ball, centers);
  LowerDensityResult lower = lower_density(ps);
  BmDensityResult bm = bm_upper_density(ps);
  json j;
  j["uniform"] = to_json(dens);
  j["point_count"] = rho_density(ps);
  json seq = json::array();
  for (const RadiusDensity& rd : lower.sequence)
    seq.push_back(json{{"radius", rd.radius}, {"count", rd.count}, {"value", rd.value}});
  j["lower_density"] = json{{"value", lower.value}, {"sequence", seq}};
  j["bm_upper_density"] = json{{"value", bm.value},
                               {"substantial", bm.substantial},
                               {"divergence_sum", bm.divergence_sum}};
  (void)cfg;
  write_json(out_path(g, stem, "json"), j);
  return kExitOk;
}

int run_recover(const GlobalOpts& g, const RunConfig& cfg, const std::string& input,
                const std::string& spectrum_path, const std::string& stem) {
  DiscreteMeasure mu = read_measure_any(input);
  DiscreteMeasure spec = read_measure_any(spectrum_path);
  guard(mu.size() > 0, "recover: input measure is empty");
  guard(spec.size() > 0, "recover: spectrum is empty");
  RecoverOptions opt;
  opt.fit.tol = cfg.match_tol * 1e3;  // lattice fitting is coarser than matching
  CombRepresentation rep = recover_comb(mu, spec, opt);
  write_json(out_path(g, stem, "json"), to_json(rep));
  if (!rep.representable) {
    std::fprintf(stderr, "verdict: not representable (residual %g)\n", rep.residual);
    return kExitNegative;
  }
  return kExitOk;
}

int run_nu_h(const GlobalOpts& g, const RunConfig& cfg, const std::string& spectrum_path,
             const std::string& lambda_path, double h, double neighborhood,
             double grid_hw, int grid_res, const std::string& stem) {
  DiscreteMeasure spec = read_measure_any(spectrum_path);
  guard(spec.dim == 1, "nu-h currently handles 1D spectra");
  PointSet lambda = read_pointset(lambda_path);
  DifferenceSet diff = difference_set(lambda, lambda.box.extent(0));
  PointSet support(diff.points, Box::symmetric(lambda.dim, 2 * lambda.box.extent(0)),
                   lambda.dedup_tol);
  double hw = grid_hw > 0 ? grid_hw : cfg.grid_half_width;
  int res = grid_res > 0 ? grid_res : cfg.grid_resolution;
  FrequencyGrid grid = FrequencyGrid::line(0.0, hw, res);
  NuhSupportReport rep = nu_h_support_check(spec, Vec{h}, support, grid, neighborhood,
                                            cfg.match_tol, cfg.threads);
  write_json(out_path(g, stem, "json"), to_json(rep));
  return kExitOk;
}

int run_dichotomy(const GlobalOpts& g, const RunConfig& cfg,
                  const std::string& spectrum_path, std::vector<double> levels,
                  const std::string& stem) {
  DiscreteMeasure spec = read_measure_any(spectrum_path);
  if (levels.empty()) levels = {1e-1, 1e-2, 1e-3};
  (void)cfg;
  DichotomyReport rep = dichotomy_report(spec, levels);
  write_json(out_path(g, stem, "json"), to_json(rep));
  if (rep.verdict == DichotomyVerdict::inconclusive) {
    std::fprintf(stderr, "verdict: inconclusive\n");
    return kExitNegative;
  }
  return kExitOk;
}

int run_nowhere_dense(const GlobalOpts& g, const RunConfig& cfg,
                      const std::string& nd_path, std::vector<double> centers,
                      std::vector<double> radii, double epsilon, double truncation,
                      const std::string& stem) {
  NowhereDenseConfig nd;
  if (!nd_path.empty()) {
    nd = ndconfig_from_json(read_json(nd_path));
  } else {
    nd.centers = centers.empty() ? std::vector<double>{0.4} : centers;
    nd.radii = radii.empty() ? std::vector<double>{0.1} : radii;
    nd.epsilon = epsilon;
    nd.truncation = truncation;
  }
  (void)cfg;
  NowhereDenseReport rep = nowhere_dense_construction(fibonacci_scheme(), nd);
  write_json(out_path(g, stem, "json"), to_json(rep));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for cut-and-project point sets, diffraction "
               "spectra, and periodic comb recovery"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "Run configuration file (JSON)")
      ->envname("FQC_CONFIG");
  app.add_option("--threads", g.threads, "Worker thread cap (overrides config)");
  app.add_option("--out", g.out_dir, "Output directory");
  app.add_option("--format", g.format, "Tabular output format")
      ->check(CLI::IsMember({"json", "csv"}));

  int exit_code = kExitOk;

  // generate
  auto* cg = app.add_subcommand("generate", "Generate a point set file");
  std::string gen_kind, gen_stem = "points";
  std::vector<double> gen_basis, gen_window;
  double gen_box = 0;
  long long gen_count = 200;
  cg->add_option("kind", gen_kind, "lattice|modelset|fibonacci|random")->required();
  cg->add_option("--basis", gen_basis, "Row-major lattice basis (d*d numbers)");
  cg->add_option("--window", gen_window, "Internal window LO HI")->expected(2);
  cg->add_option("--box", gen_box, "Half width of the generation box");
  cg->add_option("--count", gen_count, "Point count for random generation");
  cg->add_option("--name", gen_stem, "Output file stem");
  cg->callback([&] {
    exit_code = run_generate(g, resolve_config(g), gen_kind, gen_basis, gen_window,
                             gen_box, gen_count, gen_stem);
  });

  // measure
  auto* cm = app.add_subcommand("measure", "Build a weighted comb measure file");
  std::string m_input, m_stem = "measure";
  bool m_model = false, m_predicted = false;
  int m_spline = 2;
  double m_scale = 1.0, m_box = 0, m_floor = 1e-6;
  cm->add_option("--input", m_input, "Point set or measure file to reweight");
  cm->add_flag("--model", m_model, "Emit the built-in weighted model comb");
  cm->add_flag("--predicted", m_predicted, "Emit its predicted dual-side spectrum");
  cm->add_option("--spline", m_spline, "Window smoothness order (1..16)");
  cm->add_option("--scale", m_scale, "Window scale");
  cm->add_option("--box", m_box, "Half width of the support box");
  cm->add_option("--floor", m_floor, "Relative weight floor for predicted spectra");
  cm->add_option("--name", m_stem, "Output file stem");
  cm->callback([&] {
    exit_code = run_measure(g, resolve_config(g), m_input, m_model, m_predicted,
                            m_spline, m_scale, m_box, m_floor, m_stem);
  });

  // diffract
  auto* cd = app.add_subcommand("diffract",
                                "Autocorrelation, transform trace, peak extraction");
  std::string d_input, d_stem = "diffraction";
  double d_radius = 0, d_grid_hw = 0, d_threshold = 0, d_split = 0;
  int d_grid_res = 0;
  cd->add_option("--input", d_input, "Measure or point set file")->required();
  cd->add_option("--radius", d_radius, "Averaging radius R");
  cd->add_option("--grid-half-width", d_grid_hw, "Frequency box half width");
  cd->add_option("--grid-res", d_grid_res, "Samples per axis");
  cd->add_option("--threshold", d_threshold, "Relative peak extraction level");
  cd->add_option("--split-threshold", d_split, "Pure-point split level");
  cd->add_option("--name", d_stem, "Output file stem");
  cd->callback([&] {
    exit_code = run_diffract(g, resolve_config(g), d_input, d_radius, d_grid_hw,
                             d_grid_res, d_threshold, d_split, d_stem);
  });

  // classify
  auto* cc = app.add_subcommand("classify",
                                "Discreteness, Delone, and density classification");
  std::string c_input, c_stem = "classify";
  double c_ball = 0;
  int c_centers = 17;
  cc->add_option("--input", c_input, "Point set file")->required();
  cc->add_option("--ball-radius", c_ball, "Counting ball radius");
  cc->add_option("--centers", c_centers, "Number of counting centers");
  cc->add_option("--name", c_stem, "Output file stem");
  cc->callback([&] {
    exit_code = run_classify(g, resolve_config(g), c_input, c_ball, c_centers, c_stem);
  });

  // recover
  auto* cr = app.add_subcommand("recover",
                                "Fit a periodic comb with polynomial weights");
  std::string r_input, r_spectrum, r_stem = "recovered";
  cr->add_option("--input", r_input, "Measure file to represent")->required();
  cr->add_option("--spectrum", r_spectrum, "Spectrum measure file")->required();
  cr->add_option("--name", r_stem, "Output file stem");
  cr->callback([&] {
    exit_code = run_recover(g, resolve_config(g), r_input, r_spectrum, r_stem);
  });

  // nu-h
  auto* cn = app.add_subcommand("nu-h",
                                "Support check for the h-shifted product measure");
  std::string n_spectrum, n_lambda, n_stem = "nu_h";
  double n_h = 0, n_neigh = 1e-2, n_grid_hw = 0;
  int n_grid_res = 0;
  cn->add_option("--spectrum", n_spectrum, "Spectrum measure file")->required();
  cn->add_option("--lambda", n_lambda, "Point set file for the support set")->required();
  cn->add_option("--shift", n_h, "Spectral shift h")->required();
  cn->add_option("--neighborhood", n_neigh, "Support neighborhood radius");
  cn->add_option("--grid-half-width", n_grid_hw, "Frequency box half width");
  cn->add_option("--grid-res", n_grid_res, "Samples per axis");
  cn->add_option("--name", n_stem, "Output file stem");
  cn->callback([&] {
    exit_code = run_nu_h(g, resolve_config(g), n_spectrum, n_lambda, n_h, n_neigh,
                         n_grid_hw, n_grid_res, n_stem);
  });

  // dichotomy
  auto* ci = app.add_subcommand("dichotomy",
                                "Gap growth of spectrum level sets");
  std::string i_spectrum, i_stem = "dichotomy";
  std::vector<double> i_levels;
  ci->add_option("--spectrum", i_spectrum, "Spectrum measure file")->required();
  ci->add_option("--levels", i_levels, "Decreasing relative weight levels");
  ci->add_option("--name", i_stem, "Output file stem");
  ci->callback([&] {
    exit_code = run_dichotomy(g, resolve_config(g), i_spectrum, i_levels, i_stem);
  });

  // construct-nowhere-dense
  auto* cw = app.add_subcommand("construct-nowhere-dense",
                                "Sparse-window construction in frequency space");
  std::string w_path, w_stem = "nowhere_dense";
  std::vector<double> w_centers, w_radii;
  double w_eps = 0.5, w_trunc = 0;
  cw->add_option("--nd-config", w_path, "Construction config file (JSON)");
  cw->add_option("--center", w_centers, "Frequency ball center (repeatable)");
  cw->add_option("--radius", w_radii, "Frequency ball half width (repeatable)");
  cw->add_option("--epsilon", w_eps, "Bandwidth budget");
  cw->add_option("--truncation", w_trunc, "Internal truncation (0 = automatic)");
  cw->add_option("--name", w_stem, "Output file stem");
  cw->callback([&] {
    exit_code = run_nowhere_dense(g, resolve_config(g), w_path, w_centers, w_radii,
                                  w_eps, w_trunc, w_stem);
  });

  // density
  auto* cy = app.add_subcommand("density", "Uniform density measurement");
  std::string y_input, y_stem = "density";
  double y_ball = 0;
  int y_centers = 17;
  cy->add_option("--input", y_input, "Point set file")->required();
  cy->add_option("--ball-radius", y_ball, "Counting ball radius");
  cy->add_option("--centers", y_centers, "Number of counting centers");
  cy->add_option("--name", y_stem, "Output file stem");
  cy->callback([&] {
    exit_code = run_density(g, resolve_config(g), y_input, y_ball, y_centers, y_stem);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  } catch (const GuardError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  }
  return exit_code;
}
