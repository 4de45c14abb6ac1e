#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fqc/pointset.hpp"

namespace fqc {

struct Atom {
  Vec point;
  Complex weight;
};

// Finite complex measure mu = sum_i w_i delta_{x_i}. Support is sorted
// lexicographically; atoms within dedup_tol merge (weights summed) and
// weights below purge_tol are dropped, so "no zero weights" holds by
// construction.
struct DiscreteMeasure {
  int dim = 1;
  std::vector<Vec> support;
  std::vector<Complex> weights;
  Box box;
  double dedup_tol = 1e-9;
  double purge_tol = 1e-14;

  DiscreteMeasure() = default;
  DiscreteMeasure(std::vector<Atom> atoms, Box b, double tol = 1e-9,
                  double purge = 1e-14)
      : dim(b.dim), box(b), dedup_tol(tol), purge_tol(purge) {
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return lex_less(a.point, b.point); });
    std::size_t i = 0;
    while (i < atoms.size()) {
      guard(atoms[i].point.dim == dim, "DiscreteMeasure: atom dim mismatch");
      Vec head = atoms[i].point;
      CompensatedSum pos[kMaxDim];
      CompensatedComplex w;
      std::size_t j = i, count = 0;
      while (j < atoms.size() && dist(atoms[j].point, head) <= dedup_tol) {
        for (int d = 0; d < dim; ++d) pos[d].add(atoms[j].point[d]);
        w.add(atoms[j].weight);
        ++count;
        ++j;
      }
      Complex wv = w.value();
      if (std::abs(wv) >= purge_tol) {
        Vec mean = Vec::zero(dim);
        for (int d = 0; d < dim; ++d)
          mean[d] = pos[d].value() / static_cast<double>(count);
        support.push_back(mean);
        weights.push_back(wv);
      }
      i = j;
    }
  }

  std::size_t size() const { return support.size(); }

  double total_variation() const {
    CompensatedSum s;
    for (const Complex& w : weights) s.add(std::abs(w));
    return s.value();
  }

  double max_weight() const {
    double m = 0;
    for (const Complex& w : weights) m = std::max(m, std::abs(w));
    return m;
  }

  PointSet support_set() const {
    PointSet ps;
    ps.dim = dim;
    ps.points = support;  // already sorted and deduplicated
    ps.box = box;
    ps.dedup_tol = dedup_tol;
    return ps;
  }
};

// mu_hat(t) = sum_i w_i exp(-2 pi i <x_i, t>), compensated accumulation.
// Atoms are summed in fixed 4096-atom chunks whose partial sums combine in
// chunk order, so the value does not depend on the thread count.
inline Complex ft_at(const DiscreteMeasure& mu, const Vec& t, int threads = 1) {
  constexpr std::size_t kChunk = 4096;
  std::size_t n = mu.size();
  if (n == 0) return {0, 0};
  std::size_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<Complex> partial(nchunks);
  run_chunks(nchunks, threads, [&](std::size_t k) {
    CompensatedComplex acc;
    std::size_t end = std::min(n, (k + 1) * kChunk);
    for (std::size_t i = k * kChunk; i < end; ++i) {
      double phase = -kTwoPi * dot(mu.support[i], t);
      acc.add(mu.weights[i] * Complex(std::cos(phase), std::sin(phase)));
    }
    partial[k] = acc.value();
  });
  CompensatedComplex total;
  for (const Complex& z : partial) total.add(z);
  return total.value();
}

inline Complex ft_at(const DiscreteMeasure& mu, double t, int threads = 1) {
  return ft_at(mu, Vec(t), threads);
}

inline std::vector<Complex> ft_at(const DiscreteMeasure& mu,
                                  const std::vector<Vec>& freqs, int threads = 1) {
  std::vector<Complex> out(freqs.size());
  for (std::size_t i = 0; i < freqs.size(); ++i) out[i] = ft_at(mu, freqs[i], threads);
  return out;
}

// Uniform tensor evaluation grid (frequency side or space side), inclusive
// endpoints, row-major flattening with the last axis fastest.
struct FrequencyGrid {
  int dim = 1;
  Vec center;
  Vec half_width;
  std::array<int, kMaxDim> resolution{};

  static FrequencyGrid line(double center, double half_width, int res) {
    FrequencyGrid g;
    g.dim = 1;
    g.center = Vec(center);
    g.half_width = Vec(half_width);
    g.resolution[0] = res;
    g.validate();
    return g;
  }

  void validate() const {
    guard(dim >= 1 && dim <= kMaxDim, "FrequencyGrid: dim must be 1..4");
    double total_pts = 1;
    for (int i = 0; i < dim; ++i) {
      guard(resolution[i] >= 2, "FrequencyGrid: resolution must be >= 2 per axis");
      guard(half_width[i] > 0, "FrequencyGrid: half width must be positive");
      total_pts *= resolution[i];
    }
    guard(total_pts <= 1.7e7, "FrequencyGrid: too many grid points");
  }

  std::size_t total() const {
    std::size_t t = 1;
    for (int i = 0; i < dim; ++i) t *= static_cast<std::size_t>(resolution[i]);
    return t;
  }

  double step(int axis) const {
    return resolution[axis] > 1
               ? 2 * half_width[axis] / static_cast<double>(resolution[axis] - 1)
               : 0.0;
  }

  double coordinate(int axis, int idx) const {
    if (resolution[axis] == 1) return center[axis];
    return center[axis] - half_width[axis] + step(axis) * static_cast<double>(idx);
  }

  Vec point(std::size_t flat) const {
    Vec p = Vec::zero(dim);
    for (int axis = dim - 1; axis >= 0; --axis) {
      std::size_t r = static_cast<std::size_t>(resolution[axis]);
      p[axis] = coordinate(axis, static_cast<int>(flat % r));
      flat /= r;
    }
    return p;
  }
};

enum class TraceNorm { none, per_volume };

struct TransformTrace {
  FrequencyGrid grid;
  std::vector<Complex> values;
  TraceNorm normalization = TraceNorm::none;
  double volume = 1.0;  // divisor (2R)^n applied under per_volume
};

// Evaluates mu_hat on the grid. Along the fastest axis the per-atom phase
// factor advances by one complex multiply, re-anchored with an exact exp at
// fixed 64-point segment boundaries; each segment is computed independently,
// so values are identical for every thread count and match ft_at to
// ~1e-12 * total variation.
inline TransformTrace ft_grid(const DiscreteMeasure& mu, const FrequencyGrid& grid,
                              int threads = 1,
                              TraceNorm norm = TraceNorm::none) {
  grid.validate();
  guard(grid.dim == mu.dim, "ft_grid: grid dim mismatch");
  constexpr std::size_t kSegment = 64;

  TransformTrace trace;
  trace.grid = grid;
  trace.values.assign(grid.total(), Complex{0, 0});

  int last = grid.dim - 1;
  std::size_t L = static_cast<std::size_t>(grid.resolution[last]);
  std::size_t rows = grid.total() / L;
  std::size_t segs_per_row = (L + kSegment - 1) / kSegment;
  std::size_t nseg = rows * segs_per_row;
  double dstep = grid.step(last);

  std::size_t natoms = mu.size();
  std::vector<Complex> steps(natoms);
  for (std::size_t a = 0; a < natoms; ++a) {
    double ph = -kTwoPi * mu.support[a][last] * dstep;
    steps[a] = Complex(std::cos(ph), std::sin(ph));
  }

  run_chunks(nseg, threads, [&](std::size_t seg) {
    std::size_t row = seg / segs_per_row;
    std::size_t l0 = (seg % segs_per_row) * kSegment;
    std::size_t len = std::min(kSegment, L - l0);
    Vec t0 = grid.point(row * L + l0);

    CompensatedComplex acc[kSegment];
    for (std::size_t a = 0; a < natoms; ++a) {
      double phase = -kTwoPi * dot(mu.support[a], t0);
      Complex e(std::cos(phase), std::sin(phase));
      const Complex w = mu.weights[a];
      const Complex s = steps[a];
      for (std::size_t l = 0; l < len; ++l) {
        acc[l].add(w * e);
        e *= s;
      }
    }
    for (std::size_t l = 0; l < len; ++l)
      trace.values[row * L + l0 + l] = acc[l].value();
  });

  if (norm == TraceNorm::per_volume) {
    double vol = 1.0;
    for (int i = 0; i < mu.dim; ++i) vol *= mu.box.extent(i);
    guard(vol > 0, "ft_grid: per-volume normalization needs a nonempty box");
    trace.normalization = TraceNorm::per_volume;
    trace.volume = vol;
    for (Complex& v : trace.values) v /= vol;
  }
  return trace;
}

inline DiscreteMeasure translate(const DiscreteMeasure& mu, const Vec& v) {
  DiscreteMeasure r = mu;
  for (Vec& p : r.support) p = p + v;
  r.box = mu.box.translated(v);
  return r;
}

// Pointwise phase twist exp(-2 pi i <omega, x>); shifts the transform by omega.
inline DiscreteMeasure modulate(const DiscreteMeasure& mu, const Vec& omega) {
  DiscreteMeasure r = mu;
  for (std::size_t i = 0; i < r.size(); ++i) {
    double phase = -kTwoPi * dot(omega, r.support[i]);
    r.weights[i] *= Complex(std::cos(phase), std::sin(phase));
  }
  return r;
}

// c = 0 collapses to the empty measure (callers detect via size() == 0).
inline DiscreteMeasure scale_weights(const DiscreteMeasure& mu, const Complex& c) {
  if (c == Complex{0, 0}) {
    DiscreteMeasure r;
    r.dim = mu.dim;
    r.box = mu.box;
    r.dedup_tol = mu.dedup_tol;
    r.purge_tol = mu.purge_tol;
    return r;
  }
  DiscreteMeasure r = mu;
  for (Complex& w : r.weights) w *= c;
  return r;
}

namespace detail {

// Nearest atom of mu within tol of target, or npos. Ties break to the lowest
// index for determinism.
inline std::size_t find_atom_near(const DiscreteMeasure& mu, const CellGrid& grid,
                                  const Vec& target, double tol) {
  std::size_t best = static_cast<std::size_t>(-1);
  double best_d = tol;
  grid.for_neighborhood(target, 1, [&](std::size_t j) {
    double d = dist(target, mu.support[j]);
    if (d < best_d || (d == best_d && j < best)) {
      best = j;
      best_d = d;
    }
  });
  return best;
}

}  // namespace detail

// S_h = {s in S : s + h in S at tolerance tol}.
inline PointSet s_h(const DiscreteMeasure& spec, const Vec& h, double tol = 1e-6) {
  detail::CellGrid grid(spec.support, std::max(tol, spec.dedup_tol));
  std::vector<Vec> pts;
  for (const Vec& s : spec.support)
    if (detail::find_atom_near(spec, grid, s + h, tol) != static_cast<std::size_t>(-1))
      pts.push_back(s);
  return PointSet(std::move(pts), spec.box, spec.dedup_tol);
}

// nu_h = sum_{s in S_h} mu_hat(s) conj(mu_hat(s+h)) delta_s.
// For h = 0 the weights are |mu_hat(s)|^2, real and nonnegative exactly.
inline DiscreteMeasure nu_h(const DiscreteMeasure& spec, const Vec& h,
                            double tol = 1e-6) {
  detail::CellGrid grid(spec.support, std::max(tol, spec.dedup_tol));
  std::vector<Atom> atoms;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    std::size_t j = detail::find_atom_near(spec, grid, spec.support[i] + h, tol);
    if (j != static_cast<std::size_t>(-1))
      atoms.push_back({spec.support[i], spec.weights[i] * std::conj(spec.weights[j])});
  }
  return DiscreteMeasure(std::move(atoms), spec.box, spec.dedup_tol, spec.purge_tol);
}

struct NuhSupportReport {
  double leak = 1.0;            // outside_energy / total_energy
  double total_energy = 0;
  double outside_energy = 0;
  std::size_t nu_atoms = 0;
  double neighborhood = 0;
  bool degenerate = false;      // fewer than 2 nu_h atoms: nothing to localize
};

// Evaluates the transform of nu_h on a space-side grid and reports the energy
// fraction falling outside a neighborhood of the expected support set.
inline NuhSupportReport nu_h_support_check(const DiscreteMeasure& spec, const Vec& h,
                                           const PointSet& support,
                                           const FrequencyGrid& grid,
                                           double neighborhood = 1e-2,
                                           double match_tol = 1e-6, int threads = 1) {
  NuhSupportReport rep;
  rep.neighborhood = neighborhood;
  DiscreteMeasure nu = nu_h(spec, h, match_tol);
  rep.nu_atoms = nu.size();
  if (nu.size() < 2) {
    rep.degenerate = true;
    return rep;
  }
  TransformTrace trace = ft_grid(nu, grid, threads);
  detail::CellGrid sgrid(support.points, neighborhood);
  CompensatedSum total, outside;
  for (std::size_t i = 0; i < trace.values.size(); ++i) {
    double e = std::norm(trace.values[i]);
    total.add(e);
    Vec x = grid.point(i);
    bool near = false;
    sgrid.for_neighborhood(x, 1, [&](std::size_t j) {
      if (dist(x, support.points[j]) <= neighborhood) near = true;
    });
    if (!near) outside.add(e);
  }
  rep.total_energy = total.value();
  rep.outside_energy = outside.value();
  guard(rep.total_energy > 0, "nu_h_support_check: zero total energy");
  rep.leak = rep.outside_energy / rep.total_energy;
  return rep;
}

struct TranslationBound {
  double value = 0;
  Vec anchor;
};

// sup_x |mu|(closed ball of given radius at x). In 1D the sup is attained with
// the window's left edge at an atom, so the scan is exact; in higher
// dimensions atom-centered balls give a lower bound.
inline TranslationBound translation_bounded_norm(const DiscreteMeasure& mu,
                                                 double radius = 1.0) {
  TranslationBound tb;
  if (mu.size() == 0) return tb;
  if (mu.dim == 1) {
    std::vector<double> prefix(mu.size() + 1, 0.0);
    for (std::size_t i = 0; i < mu.size(); ++i)
      prefix[i + 1] = prefix[i] + std::abs(mu.weights[i]);
    for (std::size_t i = 0; i < mu.size(); ++i) {
      double left = mu.support[i][0];
      std::size_t j = i;
      while (j + 1 < mu.size() && mu.support[j + 1][0] <= left + 2 * radius) ++j;
      double mass = prefix[j + 1] - prefix[i];
      if (mass > tb.value) {
        tb.value = mass;
        tb.anchor = Vec(left + radius);
      }
    }
    return tb;
  }
  detail::CellGrid grid(mu.support, radius);
  for (std::size_t i = 0; i < mu.size(); ++i) {
    CompensatedSum mass;
    grid.for_neighborhood(mu.support[i], 1, [&](std::size_t j) {
      if (dist(mu.support[i], mu.support[j]) <= radius)
        mass.add(std::abs(mu.weights[j]));
    });
    if (mass.value() > tb.value) {
      tb.value = mass.value();
      tb.anchor = mu.support[i];
    }
  }
  return tb;
}

// (mu + reflected conjugate)/2; its transform is real-valued.
inline DiscreteMeasure conjugate_symmetrize(const DiscreteMeasure& mu) {
  std::vector<Atom> atoms;
  atoms.reserve(2 * mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    atoms.push_back({mu.support[i], 0.5 * mu.weights[i]});
    atoms.push_back({-mu.support[i], 0.5 * std::conj(mu.weights[i])});
  }
  Box b = mu.box;
  for (int i = 0; i < mu.dim; ++i) {
    double m = std::max(std::abs(mu.box.lo[i]), std::abs(mu.box.hi[i]));
    b.lo[i] = -m;
    b.hi[i] = m;
  }
  return DiscreteMeasure(std::move(atoms), b, mu.dedup_tol, mu.purge_tol);
}

// G_{jk} = mu_hat(t_j - t_k), built from the upper triangle and mirrored, so
// it is Hermitian by construction; for conjugate-symmetrized measures the
// mirrored entries agree with direct evaluation to rounding.
inline Eigen::MatrixXcd gram_matrix(const DiscreteMeasure& mu,
                                    const std::vector<Vec>& freqs, int threads = 1) {
  int m = static_cast<int>(freqs.size());
  Eigen::MatrixXcd G(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = j; k < m; ++k) {
      Complex v = ft_at(mu, freqs[j] - freqs[k], threads);
      G(j, k) = v;
      G(k, j) = std::conj(v);
    }
  return G;
}

}  // namespace fqc
