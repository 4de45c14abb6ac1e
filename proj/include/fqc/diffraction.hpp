#pragma once

#include <vector>

#include "fqc/measure.hpp"
#include "fqc/pointset.hpp"

namespace fqc {

// Volume-normalized autocorrelation at truncation R: atoms at difference
// vectors v = x' - x with weights (2R)^{-n} * sum w(x') conj(w(x)).
// Hermitian symmetry weight(-v) = conj(weight(v)) holds exactly: only
// lex-positive differences are accumulated and the mirror side is emitted as
// exact negations/conjugates.
struct Autocorrelation {
  DiscreteMeasure measure;
  double R = 0;
  double norm_factor = 1;   // (2R)^{-n}
  double cap_radius = 0;    // 0 means uncapped
  bool complete = true;     // false when the cap dropped differences
  std::size_t dropped_pairs = 0;
  std::size_t points_used = 0;
};

namespace detail {

inline Autocorrelation autocorrelate(const std::vector<Vec>& pts,
                                     const std::vector<Complex>& wts, int dim,
                                     double R, double cap_radius, double dedup_tol,
                                     double purge_tol) {
  guard(R > 0, "autocorrelation: R must be positive");
  Box box = Box::symmetric(dim, R);

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (box.contains(pts[i])) keep.push_back(i);
  // inputs are lex sorted, so kept points remain lex sorted
  std::size_t n = keep.size();
  guard(n >= 1, "autocorrelation: no points inside [-R, R]^n");
  guard(n * (n - 1) / 2 <= 100000000ull, "autocorrelation: too many pairs");

  double scale = 1.0;
  for (int i = 0; i < dim; ++i) scale /= 2.0 * R;

  // accumulate lex-positive differences
  std::vector<Atom> pos;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      Vec v = pts[keep[b]] - pts[keep[a]];
      Complex w = wts[keep[b]] * std::conj(wts[keep[a]]);
      pos.push_back({v, w});
    }
  std::sort(pos.begin(), pos.end(),
            [](const Atom& x, const Atom& y) { return lex_less(x.point, y.point); });

  Autocorrelation ac;
  ac.R = R;
  ac.norm_factor = scale;
  ac.cap_radius = cap_radius;
  ac.points_used = n;

  // cluster within dedup_tol (positive side only), then mirror
  std::vector<Vec> cpts;
  std::vector<Complex> cwts;
  std::size_t i = 0;
  while (i < pos.size()) {
    Vec head = pos[i].point;
    CompensatedSum coord[kMaxDim];
    CompensatedComplex w;
    std::size_t j = i, cnt = 0;
    while (j < pos.size() && dist(pos[j].point, head) <= dedup_tol) {
      for (int d = 0; d < dim; ++d) coord[d].add(pos[j].point[d]);
      w.add(pos[j].weight);
      ++cnt;
      ++j;
    }
    Vec mean = Vec::zero(dim);
    for (int d = 0; d < dim; ++d) mean[d] = coord[d].value() / static_cast<double>(cnt);
    bool in_cap = cap_radius <= 0 || norm(mean) <= cap_radius;
    Complex wv = w.value() * scale;
    if (in_cap && std::abs(wv) >= purge_tol) {
      cpts.push_back(mean);
      cwts.push_back(wv);
    } else if (!in_cap) {
      ac.dropped_pairs += 2 * cnt;
    }
    i = j;
  }
  ac.complete = ac.dropped_pairs == 0;

  CompensatedSum zero_w;
  for (std::size_t a = 0; a < n; ++a) zero_w.add(std::norm(wts[keep[a]]));

  DiscreteMeasure& m = ac.measure;
  m.dim = dim;
  m.box = Box::symmetric(dim, 2.0 * R);
  m.dedup_tol = dedup_tol;
  m.purge_tol = purge_tol;
  m.support.reserve(2 * cpts.size() + 1);
  m.weights.reserve(2 * cpts.size() + 1);
  for (std::size_t k = cpts.size(); k-- > 0;) {
    m.support.push_back(-cpts[k]);
    m.weights.push_back(std::conj(cwts[k]));
  }
  m.support.push_back(Vec::zero(dim));
  m.weights.push_back(Complex(zero_w.value() * scale, 0.0));
  for (std::size_t k = 0; k < cpts.size(); ++k) {
    m.support.push_back(cpts[k]);
    m.weights.push_back(cwts[k]);
  }
  return ac;
}

}  // namespace detail

inline Autocorrelation autocorrelation_points(const PointSet& ps, double R,
                                              double cap_radius = 0) {
  std::vector<Complex> ones(ps.points.size(), Complex{1, 0});
  return detail::autocorrelate(ps.points, ones, ps.dim, R, cap_radius,
                               ps.dedup_tol, 0.0);
}

inline Autocorrelation autocorrelation_measure(const DiscreteMeasure& mu, double R,
                                               double cap_radius = 0) {
  return detail::autocorrelate(mu.support, mu.weights, mu.dim, R, cap_radius,
                               mu.dedup_tol, mu.purge_tol);
}

// Structural Hermitian check: support is an exact mirror list with conjugate
// weights. True for autocorrelations built here.
inline bool is_hermitian(const DiscreteMeasure& m) {
  std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = n - 1 - i;
    if (!((-m.support[i]) == m.support[j])) return false;
    if (m.weights[i] != std::conj(m.weights[j])) return false;
  }
  return true;
}

struct DiffractionEstimate {
  DiscreteMeasure peaks;          // frequency atoms; weights are intensities >= 0
  FrequencyGrid grid;
  std::vector<double> trace;      // real part of the transform of the autocorrelation
  std::vector<double> residual;   // trace minus modeled peak bumps, clipped at 0
  double R = 0;
  double threshold = 0;           // relative extraction level
  double k_max = 0;               // sum of per-atom triangle factors; peak height of unit intensity
  double max_trace = 0;
  double min_trace = 0;
  double imag_leak = 0;           // max |imag| / max |real|
  double min_residual_raw = 0;    // before clipping
  bool positive = false;          // min_trace >= -1e-10 * max_trace
};

namespace detail {

// golden-section maximization of f over [lo, hi]
template <typename F>
inline double golden_max(F&& f, double lo, double hi, double tol) {
  const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    } else {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

// Evaluates the transform of the autocorrelation on the grid, extracts local
// maxima above threshold * max, refines each peak location by golden-section
// ascent on the exact exponential sum, converts peak heights to intensities
// by dividing by k_max, and reports the trace with modeled peak bumps
// removed. With every pair kept the trace is exactly the periodogram
// |mu_hat_R|^2 / (2R)^n, so a Bragg atom of intensity I rises to I * (2R)^n
// and k_max = (2R)^n regardless of the point density. When a cap dropped
// long differences that identity is lost and k_max falls back to the
// triangle-factor sum over the kept support, sum_v prod_i (1 - |v_i|/(2R)),
// exact for unit combs. A candidate whose height is mostly (factor
// sidelobe_rejection) explained by the modeled sinc^2 sidelobes of stronger
// accepted peaks is discarded as a truncation artifact rather than reported
// as a peak.
inline DiffractionEstimate diffraction_estimate(const Autocorrelation& ac,
                                                const FrequencyGrid& grid,
                                                double threshold = 1e-3,
                                                int threads = 1,
                                                double sidelobe_rejection = 0.5) {
  grid.validate();
  guard(grid.dim == ac.measure.dim, "diffraction_estimate: grid dim mismatch");
  guard(is_hermitian(ac.measure), "diffraction_estimate: autocorrelation not Hermitian");
  for (int i = 0; i < grid.dim; ++i)
    guard(grid.step(i) <= 1.0 / (4.0 * ac.R) + 1e-15,
          "diffraction_estimate: grid pitch exceeds 1/(4R), aliasing risk");
  guard(threshold > 0, "diffraction_estimate: threshold must be positive");

  DiffractionEstimate est;
  est.grid = grid;
  est.R = ac.R;
  est.threshold = threshold;

  TransformTrace tt = ft_grid(ac.measure, grid, threads);
  std::size_t total = tt.values.size();
  est.trace.resize(total);
  double max_re = 0, max_im = 0, min_re = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < total; ++i) {
    est.trace[i] = tt.values[i].real();
    max_re = std::max(max_re, std::abs(est.trace[i]));
    max_im = std::max(max_im, std::abs(tt.values[i].imag()));
    min_re = std::min(min_re, est.trace[i]);
  }
  est.max_trace = max_re;
  est.min_trace = min_re;
  est.imag_leak = max_im / std::max(max_re, 1e-300);
  guard(est.imag_leak <= 1e-10,
        "diffraction_estimate: imaginary leak above 1e-10 of max");
  est.positive = min_re >= -1e-10 * max_re;

  double kmax = 0;
  if (ac.complete) {
    kmax = 1;
    for (int d = 0; d < ac.measure.dim; ++d) kmax *= 2.0 * ac.R;
  } else {
    for (std::size_t i = 0; i < ac.measure.size(); ++i) {
      double f = 1;
      for (int d = 0; d < ac.measure.dim; ++d)
        f *= 1.0 - std::abs(ac.measure.support[i][d]) / (2.0 * ac.R);
      kmax += f;
    }
  }
  est.k_max = kmax;
  guard(kmax > 0, "diffraction_estimate: degenerate triangle normalization");

  // local maxima above the relative threshold
  double level = threshold * max_re;
  std::vector<std::size_t> cand;
  std::array<std::size_t, kMaxDim> res{}, stride{};
  for (int d = 0; d < grid.dim; ++d) res[d] = static_cast<std::size_t>(grid.resolution[d]);
  stride[grid.dim - 1] = 1;
  for (int d = grid.dim - 2; d >= 0; --d) stride[d] = stride[d + 1] * res[d + 1];
  for (std::size_t i = 0; i < total; ++i) {
    if (est.trace[i] < level) continue;
    bool peak = true;
    std::size_t rem = i;
    for (int d = 0; d < grid.dim && peak; ++d) {
      std::size_t idx = (rem / stride[d]) % res[d];
      if (idx > 0 && est.trace[i - stride[d]] > est.trace[i]) peak = false;
      if (idx + 1 < res[d] && est.trace[i + stride[d]] > est.trace[i]) peak = false;
      rem = i;
    }
    if (peak) cand.push_back(i);
  }

  auto value_at = [&](const Vec& t) { return ft_at(ac.measure, t).real(); };

  std::vector<Atom> atoms;
  for (std::size_t i : cand) {
    Vec t = grid.point(i);
    for (int pass = 0; pass < (grid.dim == 1 ? 1 : 3); ++pass)
      for (int d = 0; d < grid.dim; ++d) {
        double step = grid.step(d);
        Vec probe = t;
        double best = detail::golden_max(
            [&](double x) {
              probe[d] = x;
              return value_at(probe);
            },
            t[d] - step, t[d] + step, 1e-12);
        t[d] = best;
      }
    double h = value_at(t);
    if (h >= level) atoms.push_back({t, Complex(std::max(h, 0.0) / kmax, 0.0)});
  }
  // merge refined locations that collapsed onto the same peak
  est.peaks = DiscreteMeasure(std::move(atoms), Box(grid.dim), 0.0, 0.0);
  {
    // rebuild with half-grid-step dedup keeping the strongest in each cluster
    std::vector<Atom> merged;
    double tol = 0.5 * grid.step(grid.dim - 1);
    std::size_t i = 0;
    const auto& sup = est.peaks.support;
    const auto& wts = est.peaks.weights;
    while (i < sup.size()) {
      std::size_t j = i, best = i;
      while (j < sup.size() && dist(sup[j], sup[i]) <= tol) {
        if (wts[j].real() > wts[best].real()) best = j;
        ++j;
      }
      merged.push_back({sup[best], wts[best]});
      i = j;
    }
    est.peaks = DiscreteMeasure(std::move(merged), Box(grid.dim), 0.0, 0.0);
  }
  if (sidelobe_rejection > 0 && est.peaks.size() > 1) {
    std::size_t np = est.peaks.size();
    std::vector<std::size_t> order(np);
    for (std::size_t i = 0; i < np; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return est.peaks.weights[a].real() > est.peaks.weights[b].real();
    });
    std::vector<std::size_t> accepted;
    std::vector<Atom> filtered;
    for (std::size_t c : order) {
      double explained = 0;
      for (std::size_t a : accepted) {
        double b = 1;
        for (int d = 0; d < grid.dim; ++d) {
          double s = sinc(2.0 * ac.R *
                          (est.peaks.support[c][d] - est.peaks.support[a][d]));
          b *= s * s;
        }
        explained += est.peaks.weights[a].real() * b;
      }
      if (explained <= sidelobe_rejection * est.peaks.weights[c].real()) {
        accepted.push_back(c);
        filtered.push_back({est.peaks.support[c], est.peaks.weights[c]});
      }
    }
    est.peaks = DiscreteMeasure(std::move(filtered), Box(grid.dim), 0.0, 0.0);
  }
  for (int d = 0; d < grid.dim; ++d) {
    est.peaks.box.lo[d] = grid.center[d] - grid.half_width[d];
    est.peaks.box.hi[d] = grid.center[d] + grid.half_width[d];
  }

  // residual: modeled bump of a unit-intensity peak is k_max * prod sinc^2(2R u)
  est.residual.resize(total);
  double min_raw = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < total; ++i) {
    Vec t = grid.point(i);
    double bump = 0;
    for (std::size_t p = 0; p < est.peaks.size(); ++p) {
      double b = 1;
      for (int d = 0; d < grid.dim; ++d) {
        double s = sinc(2.0 * ac.R * (t[d] - est.peaks.support[p][d]));
        b *= s * s;
      }
      bump += est.peaks.weights[p].real() * kmax * b;
    }
    double r = est.trace[i] - bump;
    min_raw = std::min(min_raw, r);
    est.residual[i] = std::max(r, 0.0);
  }
  est.min_residual_raw = min_raw;
  return est;
}

// Threshold-parameterized split of a diffraction estimate into its pure-point
// part and a sampled continuous remainder. Raising the threshold moves peaks
// (and their modeled bumps) from the discrete side into the remainder trace.
struct SpectralSplit {
  DiscreteMeasure discrete;
  FrequencyGrid grid;
  std::vector<double> continuous;
  double discrete_mass = 0;
  double continuous_mass = 0;  // grid quadrature of the remainder
  double threshold = 0;
};

inline SpectralSplit split_pure_point(const DiffractionEstimate& est,
                                      double threshold) {
  guard(threshold >= 0, "split_pure_point: threshold must be >= 0");
  SpectralSplit sp;
  sp.grid = est.grid;
  sp.threshold = threshold;
  double level = threshold * est.max_trace / std::max(est.k_max, 1e-300);

  std::vector<Atom> kept;
  std::vector<std::size_t> returned;
  for (std::size_t p = 0; p < est.peaks.size(); ++p) {
    if (est.peaks.weights[p].real() >= level)
      kept.push_back({est.peaks.support[p], est.peaks.weights[p]});
    else
      returned.push_back(p);
  }
  sp.discrete = DiscreteMeasure(std::move(kept), est.peaks.box, 0.0, 0.0);
  CompensatedSum dm;
  for (const Complex& w : sp.discrete.weights) dm.add(w.real());
  sp.discrete_mass = dm.value();

  sp.continuous = est.residual;
  std::size_t total = sp.continuous.size();
  for (std::size_t i = 0; i < total && !returned.empty(); ++i) {
    Vec t = est.grid.point(i);
    double bump = 0;
    for (std::size_t p : returned) {
      double b = 1;
      for (int d = 0; d < est.grid.dim; ++d) {
        double s = sinc(2.0 * est.R * (t[d] - est.peaks.support[p][d]));
        b *= s * s;
      }
      bump += est.peaks.weights[p].real() * est.k_max * b;
    }
    sp.continuous[i] += bump;
  }
  double cell = 1;
  for (int d = 0; d < est.grid.dim; ++d) cell *= est.grid.step(d);
  CompensatedSum cm;
  for (double v : sp.continuous) cm.add(v);
  sp.continuous_mass = cm.value() * cell;
  return sp;
}

// Finite measure with atoms plus optional Gaussian density components; its
// transform is the atomic exponential sum plus analytic Gaussian terms.
struct GaussianComponent {
  Vec center;
  double sigma = 1;
  double mass = 1;
};

struct FiniteMeasure {
  DiscreteMeasure atoms;
  std::vector<GaussianComponent> parts;

  int dim() const { return atoms.dim; }

  Complex ft(const Vec& t) const {
    Complex v = ft_at(atoms, t);
    for (const GaussianComponent& g : parts) {
      double q = norm2(t);
      double amp = g.mass * std::exp(-2.0 * kPi * kPi * g.sigma * g.sigma * q);
      double phase = -kTwoPi * dot(g.center, t);
      v += amp * Complex(std::cos(phase), std::sin(phase));
    }
    return v;
  }

  double support_diameter() const {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const Vec& p : atoms.support)
      for (int d = 0; d < atoms.dim; ++d) {
        lo = std::min(lo, p[d]);
        hi = std::max(hi, p[d]);
      }
    for (const GaussianComponent& g : parts)
      for (int d = 0; d < atoms.dim; ++d) {
        lo = std::min(lo, g.center[d] - 6.0 * g.sigma);
        hi = std::max(hi, g.center[d] + 6.0 * g.sigma);
      }
    if (!(hi > lo)) return 1.0;
    return hi - lo;
  }
};

namespace detail {

// composite Simpson over [-R, R]^n of a complex integrand, chunked with
// in-order combination so results do not depend on the thread count
template <typename F>
inline Complex simpson_box(int dim, double R, double pitch, int threads, F&& f) {
  int m = static_cast<int>(std::ceil(2.0 * R / pitch));
  if (m % 2 == 1) ++m;
  m = std::max(m, 2);
  double h = 2.0 * R / m;
  std::size_t per_axis = static_cast<std::size_t>(m) + 1;
  std::size_t total = 1;
  for (int d = 0; d < dim; ++d) {
    total *= per_axis;
    guard(total <= 40000000ull, "simpson_box: too many quadrature points");
  }
  auto weight1 = [m](std::size_t i) -> double {
    if (i == 0 || i == static_cast<std::size_t>(m)) return 1.0;
    return (i % 2 == 1) ? 4.0 : 2.0;
  };
  constexpr std::size_t kChunk = 8192;
  std::size_t nchunks = (total + kChunk - 1) / kChunk;
  std::vector<Complex> partial(nchunks);
  run_chunks(nchunks, threads, [&](std::size_t c) {
    CompensatedComplex acc;
    std::size_t end = std::min(total, (c + 1) * kChunk);
    for (std::size_t flat = c * kChunk; flat < end; ++flat) {
      Vec t = Vec::zero(dim);
      double w = 1;
      std::size_t rem = flat;
      for (int d = dim - 1; d >= 0; --d) {
        std::size_t idx = rem % per_axis;
        rem /= per_axis;
        t[d] = -R + h * static_cast<double>(idx);
        w *= weight1(idx);
      }
      acc.add(w * f(t));
    }
    partial[c] = acc.value();
  });
  CompensatedComplex sum;
  for (const Complex& z : partial) sum.add(z);
  double scale = 1;
  for (int d = 0; d < dim; ++d) scale *= h / 3.0;
  return sum.value() * scale;
}

}  // namespace detail

// Box average (2R)^{-n} Int nu_hat(t) exp(+2 pi i <a,t>) dt for each R; tends
// to the atom mass of nu at a. Quadrature pitch is 1/(16 * support diameter).
inline std::vector<Complex> wiener_atom(const FiniteMeasure& nu, const Vec& a,
                                        const std::vector<double>& R_list,
                                        int threads = 1) {
  int n = nu.dim();
  double pitch = 1.0 / (16.0 * std::max(1.0, nu.support_diameter()));
  std::vector<Complex> out;
  for (double R : R_list) {
    guard(R > 0, "wiener_atom: R must be positive");
    Complex integral = detail::simpson_box(n, R, pitch, threads, [&](const Vec& t) {
      double phase = kTwoPi * dot(a, t);
      return nu.ft(t) * Complex(std::cos(phase), std::sin(phase));
    });
    double vol = 1;
    for (int d = 0; d < n; ++d) vol *= 2.0 * R;
    out.push_back(integral / vol);
  }
  return out;
}

// Box averages (2R)^{-n} Int |nu_hat|^2; tends to the sum of squared atom
// masses.
inline std::vector<double> wiener_energy(const FiniteMeasure& nu,
                                         const std::vector<double>& R_list,
                                         int threads = 1) {
  int n = nu.dim();
  double pitch = 1.0 / (16.0 * std::max(1.0, nu.support_diameter()));
  std::vector<double> out;
  for (double R : R_list) {
    guard(R > 0, "wiener_energy: R must be positive");
    Complex integral = detail::simpson_box(n, R, pitch, threads, [&](const Vec& t) {
      return Complex(std::norm(nu.ft(t)), 0.0);
    });
    double vol = 1;
    for (int d = 0; d < n; ++d) vol *= 2.0 * R;
    out.push_back(integral.real() / vol);
  }
  return out;
}

// For a transform measure with atoms nu_hat({a}), the diffraction of the
// underlying measure is sum |nu_hat({a})|^2 delta_a: squares the magnitudes
// in place.
inline DiscreteMeasure fl_predicted_diffraction(const DiscreteMeasure& nu) {
  DiscreteMeasure r = nu;
  for (Complex& w : r.weights) w = Complex(std::norm(w), 0.0);
  return r;
}

// Annihilating-frequency search: Phi(t) = sum_j |Int phi_j(x) e^{-2 pi i t x}
// dnu(x)|^2 for test profiles phi_j, with nu the sampled continuous trace.
// Returns the argmin over the search grid, plus the min over the 2x-coarser
// subgrid so callers can report the refinement trend.
struct AnnihilationResult {
  Vec frequency;
  double score = 0;
  double coarse_score = 0;
  double max_score = 0;
  double relative = 0;  // score / max_score
};

inline std::vector<std::function<double(double)>> gaussian_test_profiles(
    int k, double base_width) {
  guard(k >= 1 && k <= 16, "gaussian_test_profiles: k in 1..16");
  guard(base_width > 0, "gaussian_test_profiles: width must be positive");
  std::vector<std::function<double(double)>> fs;
  for (int j = 0; j < k; ++j) {
    double s = base_width / static_cast<double>(1 << j);
    fs.push_back([s](double x) { return std::exp(-x * x / (2.0 * s * s)); });
  }
  return fs;
}

inline AnnihilationResult find_annihilating_frequency(
    const FrequencyGrid& trace_grid, const std::vector<double>& density,
    const std::vector<std::function<double(double)>>& tests,
    const FrequencyGrid& search_grid, int threads = 1) {
  trace_grid.validate();
  search_grid.validate();
  guard(trace_grid.dim == 1 && search_grid.dim == 1,
        "find_annihilating_frequency: one-dimensional traces only");
  guard(density.size() == trace_grid.total(),
        "find_annihilating_frequency: density length mismatch");
  guard(!tests.empty(), "find_annihilating_frequency: need test profiles");

  double cell = trace_grid.step(0);
  double dmax = 0;
  for (double v : density) dmax = std::max(dmax, std::abs(v));

  AnnihilationResult res;
  std::size_t m = search_grid.total();
  std::vector<double> phi(m, 0.0);
  for (const auto& test : tests) {
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < density.size(); ++i) {
      if (std::abs(density[i]) <= 1e-12 * dmax) continue;
      Vec x = trace_grid.point(i);
      atoms.push_back({x, Complex(test(x[0]) * density[i] * cell, 0.0)});
    }
    DiscreteMeasure weighted(std::move(atoms), Box(1), 0.0, 0.0);
    weighted.box.lo[0] = trace_grid.center[0] - trace_grid.half_width[0];
    weighted.box.hi[0] = trace_grid.center[0] + trace_grid.half_width[0];
    if (weighted.size() == 0) continue;
    TransformTrace tr = ft_grid(weighted, search_grid, threads);
    for (std::size_t i = 0; i < m; ++i) phi[i] += std::norm(tr.values[i]);
  }
  std::size_t best = 0, best_coarse = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (phi[i] < phi[best]) best = i;
    if (i % 2 == 0 && phi[i] < phi[best_coarse]) best_coarse = i;
    res.max_score = std::max(res.max_score, phi[i]);
  }
  res.frequency = search_grid.point(best);
  res.score = phi[best];
  res.coarse_score = phi[best_coarse];
  res.relative = res.score / std::max(res.max_score, 1e-300);
  return res;
}

}  // namespace fqc
