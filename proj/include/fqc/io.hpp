#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "fqc/cutproject.hpp"
#include "fqc/density.hpp"
#include "fqc/diffraction.hpp"
#include "fqc/measure.hpp"
#include "fqc/nowhere_dense.hpp"
#include "fqc/pointset.hpp"
#include "fqc/structure.hpp"
#include "fqc/window.hpp"

namespace fqc {

using json = nlohmann::ordered_json;

// ---- basic encoders ----

inline json to_json(const Vec& v, int dim) {
  json a = json::array();
  for (int i = 0; i < dim; ++i) a.push_back(v[i]);
  return a;
}

inline Vec vec_from_json(const json& a) {
  guard(a.is_array() && !a.empty() && a.size() <= static_cast<std::size_t>(kMaxDim),
        "vec_from_json: expected an array of 1..4 numbers");
  Vec v = Vec::zero(static_cast<int>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v[static_cast<int>(i)] = a[i].get<double>();
  return v;
}

inline json to_json(const Box& b) {
  json lo = json::array();
  json hi = json::array();
  for (int i = 0; i < b.dim; ++i) {
    lo.push_back(b.lo[i]);
    hi.push_back(b.hi[i]);
  }
  return json{{"lo", lo}, {"hi", hi}};
}

inline Box box_from_json(const json& j) {
  Vec lo = vec_from_json(j.at("lo"));
  Vec hi = vec_from_json(j.at("hi"));
  guard(j.at("lo").size() == j.at("hi").size(), "box_from_json: lo/hi dim mismatch");
  Box b(static_cast<int>(j.at("lo").size()));
  for (int i = 0; i < b.dim; ++i) {
    b.lo[i] = lo[i];
    b.hi[i] = hi[i];
  }
  return b;
}

inline json to_json(const PointSet& ps) {
  json pts = json::array();
  for (const Vec& p : ps.points) pts.push_back(to_json(p, ps.dim));
  return json{{"type", "point_set"},
              {"dim", ps.dim},
              {"box", to_json(ps.box)},
              {"dedup_tol", ps.dedup_tol},
              {"points", pts}};
}

inline PointSet pointset_from_json(const json& j) {
  guard(j.value("type", "point_set") == "point_set", "pointset_from_json: wrong type tag");
  Box box = box_from_json(j.at("box"));
  std::vector<Vec> pts;
  for (const json& p : j.at("points")) pts.push_back(vec_from_json(p));
  return PointSet(std::move(pts), box, j.value("dedup_tol", 1e-9));
}

inline json to_json(const DiscreteMeasure& mu) {
  json atoms = json::array();
  for (std::size_t i = 0; i < mu.size(); ++i)
    atoms.push_back(json::array({to_json(mu.support[i], mu.dim), mu.weights[i].real(),
                                 mu.weights[i].imag()}));
  return json{{"type", "measure"},
              {"dim", mu.dim},
              {"box", to_json(mu.box)},
              {"dedup_tol", mu.dedup_tol},
              {"purge_tol", mu.purge_tol},
              {"atoms", atoms}};
}

inline DiscreteMeasure measure_from_json(const json& j) {
  guard(j.value("type", "measure") == "measure", "measure_from_json: wrong type tag");
  Box box = box_from_json(j.at("box"));
  std::vector<Atom> atoms;
  for (const json& a : j.at("atoms"))
    atoms.push_back({vec_from_json(a.at(0)),
                     Complex(a.at(1).get<double>(), a.at(2).get<double>())});
  return DiscreteMeasure(std::move(atoms), box, j.value("dedup_tol", 1e-9),
                         j.value("purge_tol", 1e-14));
}

inline json to_json(const Lattice& L) {
  json gens = json::array();
  for (int jx = 0; jx < L.dim; ++jx) gens.push_back(to_json(L.generator(jx), L.dim));
  return json{{"dim", L.dim}, {"generators", gens}};
}

inline Lattice lattice_from_json(const json& j) {
  std::vector<Vec> gens;
  for (const json& g : j.at("generators")) gens.push_back(vec_from_json(g));
  return Lattice::from_generators(gens);
}

inline json to_json(const CutProjectScheme& s) {
  return json{{"type", "scheme"},
              {"physical_dim", s.physical_dim},
              {"internal_dim", s.internal_dim},
              {"lattice", to_json(s.total)},
              {"det_abs", s.total.det_abs},
              {"p1_injective", s.p1_injective},
              {"p2_injective", s.p2_injective},
              {"p2_dense", s.p2_dense},
              {"p2_max_gap", s.p2_max_gap},
              {"certificate_coeff_radius", s.cert_coeff_radius}};
}

inline json to_json(const FrequencyGrid& g) {
  json res = json::array();
  for (int i = 0; i < g.dim; ++i) res.push_back(g.resolution[i]);
  return json{{"dim", g.dim},
              {"center", to_json(g.center, g.dim)},
              {"half_width", to_json(g.half_width, g.dim)},
              {"resolution", res}};
}

// ---- reports ----

inline json to_json(const DiscretenessReport& r) {
  return json{{"type", "discreteness_report"},
              {"uniformly_discrete", r.uniformly_discrete},
              {"min_separation", r.min_sep},
              {"relatively_dense", r.relatively_dense},
              {"covering_radius", r.covering.radius},
              {"delone", r.delone},
              {"finite_local_complexity", r.flc},
              {"flc_min_gap", r.flc_min_gap},
              {"flc_threshold", r.flc_threshold},
              {"meyer", r.meyer},
              {"diff_cap_radius", r.diff_cap_radius}};
}

inline json to_json(const UniformDensityResult& r) {
  return json{{"type", "uniform_density"},
              {"mean", r.mean},
              {"max_rel_dev", r.max_rel_dev},
              {"converged", r.converged},
              {"ball_radius", r.ball_radius},
              {"centers", r.centers}};
}

inline json to_json(const Autocorrelation& ac) {
  return json{{"type", "autocorrelation"},
              {"R", ac.R},
              {"norm_factor", ac.norm_factor},
              {"cap_radius", ac.cap_radius},
              {"complete", ac.complete},
              {"dropped_pairs", ac.dropped_pairs},
              {"points_used", ac.points_used},
              {"measure", to_json(ac.measure)}};
}

inline json to_json(const DiffractionEstimate& est, const SpectralSplit& split) {
  json peaks = json::array();
  for (std::size_t i = 0; i < est.peaks.size(); ++i)
    peaks.push_back(json::array(
        {to_json(est.peaks.support[i], est.grid.dim), est.peaks.weights[i].real()}));
  return json{{"type", "diffraction_report"},
              {"R", est.R},
              {"threshold", est.threshold},
              {"k_max", est.k_max},
              {"max_trace", est.max_trace},
              {"min_trace", est.min_trace},
              {"imag_leak", est.imag_leak},
              {"positive", est.positive},
              {"grid", to_json(est.grid)},
              {"peaks", peaks},
              {"discrete_mass", split.discrete_mass},
              {"continuous_mass", split.continuous_mass},
              {"min_residual_raw", est.min_residual_raw}};
}

inline json to_json(const TrigPolynomial& p) {
  json fr = json::array(), co = json::array();
  for (std::size_t k = 0; k < p.frequencies.size(); ++k) {
    fr.push_back(to_json(p.frequencies[k], p.dim));
    co.push_back(json::array({p.coefficients[k].real(), p.coefficients[k].imag()}));
  }
  return json{{"freqs", fr}, {"coeffs_re_im", co}};
}

inline TrigPolynomial trig_from_json(const json& j, int dim) {
  TrigPolynomial p;
  p.dim = dim;
  for (const json& f : j.at("freqs")) p.frequencies.push_back(vec_from_json(f));
  for (const json& c : j.at("coeffs_re_im"))
    p.coefficients.push_back(Complex(c.at(0).get<double>(), c.at(1).get<double>()));
  return p;
}

inline json to_json(const CombRepresentation& rep) {
  json tr = json::array(), polys = json::array();
  int dim = rep.lattice.dim;
  for (const Vec& t : rep.translates) tr.push_back(to_json(t, dim));
  for (const TrigPolynomial& p : rep.polys) polys.push_back(to_json(p));
  // infinite residual marks a failed fit; clamp so the value stays numeric
  double resid = std::isfinite(rep.residual)
                     ? rep.residual
                     : std::numeric_limits<double>::max();
  return json{{"type", "comb_representation"},
              {"lattice_basis", to_json(rep.lattice)["generators"]},
              {"translates", tr},
              {"polys", polys},
              {"residual", resid},
              {"representable", rep.representable},
              {"coverage", rep.coverage},
              {"failure", rep.failure}};
}

inline CombRepresentation comb_from_json(const json& j) {
  CombRepresentation rep;
  std::vector<Vec> gens;
  for (const json& g : j.at("lattice_basis")) gens.push_back(vec_from_json(g));
  if (!gens.empty()) rep.lattice = Lattice::from_generators(gens);
  for (const json& t : j.at("translates")) rep.translates.push_back(vec_from_json(t));
  for (const json& p : j.at("polys")) rep.polys.push_back(trig_from_json(p, rep.lattice.dim));
  rep.residual = j.value("residual", 0.0);
  rep.representable = j.value("representable", true);
  rep.coverage = j.value("coverage", 1.0);
  rep.failure = j.value("failure", std::string{});
  return rep;
}

inline json to_json(const DichotomyReport& r) {
  json curve = json::array(), centers = json::array(), counts = json::array();
  for (const auto& [eps, gap] : r.gap_curve) curve.push_back(json::array({eps, gap}));
  for (const Vec& c : r.cluster_centers) centers.push_back(to_json(c, r.dim));
  for (std::size_t n : r.level_counts) counts.push_back(n);
  return json{{"type", "dichotomy_report"},
              {"verdict", to_string(r.verdict)},
              {"gap_curve", curve},
              {"level_counts", counts},
              {"shrink_factor", r.shrink_factor},
              {"cluster_centers", centers},
              {"cluster_cover_radius", r.cluster_cover_radius}};
}

inline json to_json(const NuhSupportReport& r) {
  return json{{"type", "nu_h_support"},
              {"leak", r.leak},
              {"total_energy", r.total_energy},
              {"outside_energy", r.outside_energy},
              {"nu_atoms", r.nu_atoms},
              {"neighborhood", r.neighborhood},
              {"degenerate", r.degenerate}};
}

inline json to_json(const NowhereDenseReport& r) {
  json sets = json::array();
  for (const QSetReport& q : r.sets)
    sets.push_back(json{{"ball", json::array({q.ball_lo, q.ball_hi})},
                        {"density_bound", q.density_bound},
                        {"gamma", q.gamma},
                        {"M", q.M},
                        {"T", q.T},
                        {"q_count", q.q_count},
                        {"omega", json::array({q.omega_lo, q.omega_hi})},
                        {"omega_width", q.omega_width}});
  return json{{"type", "nowhere_dense_report"},
              {"epsilon", r.epsilon},
              {"truncation_used", r.truncation_used},
              {"budget_lhs", r.budget_lhs},
              {"budget_rhs", r.budget_rhs},
              {"extend_rounds", r.extend_rounds},
              {"sets", sets},
              {"surrogate",
               json{{"zero_count", r.surrogate.zeros.size()},
                    {"factor_band", r.surrogate.factor_band},
                    {"bandwidth", r.surrogate.bandwidth},
                    {"bandwidth_squared", r.surrogate.bandwidth_squared},
                    {"budget", r.surrogate.budget},
                    {"max_log10", r.surrogate.max_log10}}}};
}

inline json to_json(const Window& w) {
  return json{{"type", "window"},
              {"name", w.name},
              {"sinc_order", w.sinc_order},
              {"scale", w.scale},
              {"amplitude", w.amplitude},
              {"transform_radius", w.transform_radius},
              {"integral", w.integral},
              {"nonnegative", w.nonnegative}};
}

// ---- CSV ----

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

inline std::string to_csv(const PointSet& ps) {
  std::ostringstream out;
  for (int i = 0; i < ps.dim; ++i) out << (i ? "," : "") << "x" << i;
  out << "\n";
  for (const Vec& p : ps.points) {
    for (int i = 0; i < ps.dim; ++i) out << (i ? "," : "") << detail::fmt_double(p[i]);
    out << "\n";
  }
  return out.str();
}

inline std::string to_csv(const DiscreteMeasure& mu) {
  std::ostringstream out;
  for (int i = 0; i < mu.dim; ++i) out << "x" << i << ",";
  out << "re,im\n";
  for (std::size_t k = 0; k < mu.size(); ++k) {
    for (int i = 0; i < mu.dim; ++i) out << detail::fmt_double(mu.support[k][i]) << ",";
    out << detail::fmt_double(mu.weights[k].real()) << ","
        << detail::fmt_double(mu.weights[k].imag()) << "\n";
  }
  return out.str();
}

inline std::string to_csv(const TransformTrace& tr) {
  std::ostringstream out;
  for (int i = 0; i < tr.grid.dim; ++i) out << "t" << i << ",";
  out << "re,im,abs\n";
  for (std::size_t k = 0; k < tr.values.size(); ++k) {
    Vec t = tr.grid.point(k);
    for (int i = 0; i < tr.grid.dim; ++i) out << detail::fmt_double(t[i]) << ",";
    const Complex& v = tr.values[k];
    out << detail::fmt_double(v.real()) << "," << detail::fmt_double(v.imag()) << ","
        << detail::fmt_double(std::abs(v)) << "\n";
  }
  return out.str();
}

// ---- files ----

inline void write_text(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  guard(f.good(), "write_text: cannot open " + path);
  f << content;
  guard(f.good(), "write_text: write failed for " + path);
}

inline std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  guard(f.good(), "read_text: cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline json read_json(const std::string& path) {
  json j = json::parse(read_text(path), nullptr, false);
  guard(!j.is_discarded(), "read_json: invalid JSON in " + path);
  return j;
}

inline void write_json(const std::string& path, const json& j) {
  write_text(path, j.dump(2) + "\n");
}

}  // namespace fqc
