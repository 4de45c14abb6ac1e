#pragma once

#include <vector>

#include "fqc/lattice.hpp"
#include "fqc/measure.hpp"
#include "fqc/pointset.hpp"
#include "fqc/window.hpp"

namespace fqc {

// Finite union of closed interval boxes in internal space. Boxes must have
// pairwise disjoint interiors so that the total measure is the sum of
// volumes.
struct WindowRegion {
  int dim = 1;
  std::vector<Box> boxes;

  WindowRegion() = default;
  explicit WindowRegion(Box b) : dim(b.dim) { boxes.push_back(b); }
  WindowRegion(int d, std::vector<Box> bs) : dim(d), boxes(std::move(bs)) {
    for (const Box& b : boxes) guard(b.dim == dim, "WindowRegion: dim mismatch");
    for (std::size_t i = 0; i < boxes.size(); ++i)
      for (std::size_t j = i + 1; j < boxes.size(); ++j) {
        bool overlap = true;
        for (int k = 0; k < dim; ++k)
          if (boxes[i].hi[k] <= boxes[j].lo[k] || boxes[j].hi[k] <= boxes[i].lo[k])
            overlap = false;
        guard(!overlap, "WindowRegion: boxes must have disjoint interiors");
      }
  }

  static WindowRegion interval(double lo, double hi) {
    Box b(1);
    b.lo[0] = lo;
    b.hi[0] = hi;
    guard(hi >= lo, "WindowRegion: interval endpoints out of order");
    return WindowRegion(b);
  }

  bool empty() const { return boxes.empty(); }

  double measure() const {
    double m = 0;
    for (const Box& b : boxes) m += b.volume();
    return m;
  }

  bool contains(const Vec& y) const {
    for (const Box& b : boxes)
      if (b.contains(y)) return true;
    return false;
  }

  Box hull() const {
    guard(!boxes.empty(), "WindowRegion: hull of empty region");
    Box h = boxes[0];
    for (const Box& b : boxes)
      for (int k = 0; k < dim; ++k) {
        h.lo[k] = std::min(h.lo[k], b.lo[k]);
        h.hi[k] = std::max(h.hi[k], b.hi[k]);
      }
    return h;
  }
};

namespace detail {

// Visits every lattice point B*k whose image lies in `region` expanded by 10%
// per axis. Outer coefficients range over the bounding box of the expanded
// region's corners under B^{-1}; the innermost coefficient interval is solved
// exactly from the row constraints for each outer assignment, so long thin
// regions (slabs) do not blow up the iteration count. Emits points in a fixed
// odometer order; callers filter against the exact region/window.
template <typename F>
std::size_t enumerate_lattice_region(const Lattice& L, const Box& region,
                                     std::size_t cap, F&& emit) {
  int d = L.dim;
  guard(region.dim == d, "enumerate_lattice_region: dim mismatch");
  Box exp = region;
  for (int i = 0; i < d; ++i) {
    double pad = 0.1 * region.extent(i) + 1e-9;
    exp.lo[i] -= pad;
    exp.hi[i] += pad;
  }

  // outer coefficient ranges from the corners of the expanded region
  std::array<int64_t, kMaxDim> klo{}, khi{};
  for (int i = 0; i < d; ++i) {
    klo[i] = std::numeric_limits<int64_t>::max();
    khi[i] = std::numeric_limits<int64_t>::min();
  }
  for (int corner = 0; corner < (1 << d); ++corner) {
    Eigen::VectorXd x(d);
    for (int i = 0; i < d; ++i)
      x(i) = (corner >> i & 1) ? exp.hi[i] : exp.lo[i];
    Eigen::VectorXd k = L.inv * x;
    for (int i = 0; i < d; ++i) {
      klo[i] = std::min(klo[i], static_cast<int64_t>(std::floor(k(i))) - 1);
      khi[i] = std::max(khi[i], static_cast<int64_t>(std::ceil(k(i))) + 1);
    }
  }

  double row_scale = 0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) row_scale = std::max(row_scale, std::abs(L.basis(i, j)));

  std::size_t count = 0;
  std::array<int64_t, kMaxDim> k{};
  for (int i = 0; i < d; ++i) k[i] = klo[i];

  // odometer over coefficients 0..d-2; exact interval for coefficient d-1
  while (true) {
    // partial image from the outer coefficients
    std::array<double, kMaxDim> part{};
    for (int i = 0; i < d; ++i) {
      double s = 0;
      for (int j = 0; j + 1 < d; ++j) s += L.basis(i, j) * static_cast<double>(k[j]);
      part[i] = s;
    }
    double tlo = -std::numeric_limits<double>::infinity();
    double thi = std::numeric_limits<double>::infinity();
    bool feasible = true;
    for (int i = 0; i < d && feasible; ++i) {
      double c = (d >= 1) ? L.basis(i, d - 1) : 0.0;
      double lo = exp.lo[i] - part[i], hi = exp.hi[i] - part[i];
      if (std::abs(c) < 1e-12 * std::max(1.0, row_scale)) {
        if (lo > 0 || hi < 0) feasible = false;
      } else {
        double a = lo / c, b = hi / c;
        if (a > b) std::swap(a, b);
        tlo = std::max(tlo, a);
        thi = std::min(thi, b);
      }
    }
    if (feasible && tlo <= thi) {
      int64_t flo = static_cast<int64_t>(std::floor(tlo));
      int64_t fhi = static_cast<int64_t>(std::ceil(thi));
      for (int64_t kn = flo; kn <= fhi; ++kn) {
        Vec p = Vec::zero(d);
        for (int i = 0; i < d; ++i)
          p[i] = part[i] + L.basis(i, d - 1) * static_cast<double>(kn);
        bool inside = true;
        for (int i = 0; i < d; ++i)
          if (p[i] < exp.lo[i] || p[i] > exp.hi[i]) inside = false;
        if (!inside) continue;
        guard(++count <= cap,
              "lattice enumeration exceeded the point cap; shrink the region "
              "or raise the cap");
        emit(p);
      }
    }
    if (d == 1) break;
    int axis = d - 2;
    while (axis >= 0) {
      if (++k[axis] <= khi[axis]) break;
      k[axis] = klo[axis];
      --axis;
    }
    if (axis < 0) break;
  }
  return count;
}

}  // namespace detail

// Cut-and-project scheme: a full-rank lattice in R^(n+m) with coordinate
// projections p1 (first n coordinates, physical) and p2 (last m, internal).
// Construction certifies injectivity of both projections on a finite
// coefficient ball and estimates whether the internal image looks dense.
struct CutProjectScheme {
  Lattice total;
  int physical_dim = 1;
  int internal_dim = 1;

  double cert_coeff_radius = 0;  // coefficient ball used for the certificates
  double min_p1_image = 0;       // min |p1(gamma)| over nonzero ball points
  double min_p2_image = 0;
  bool p1_injective = false;     // at 1e-9 over the certified ball
  bool p2_injective = false;
  double p2_max_gap = 0;         // max gap of p2 values inside [-1, 1] (m = 1)
  bool p2_dense = false;         // heuristic: p2_max_gap below 0.2

  Vec p1(const Vec& x) const {
    Vec v = Vec::zero(physical_dim);
    for (int i = 0; i < physical_dim; ++i) v[i] = x[i];
    return v;
  }
  Vec p2(const Vec& x) const {
    Vec v = Vec::zero(internal_dim);
    for (int i = 0; i < internal_dim; ++i) v[i] = x[physical_dim + i];
    return v;
  }
};

inline CutProjectScheme make_scheme(const Lattice& total, int n, int m,
                                    int cert_radius = 0) {
  guard(n >= 1 && m >= 1, "make_scheme: need n >= 1 and m >= 1");
  guard(total.dim == n + m, "make_scheme: lattice dim must equal n + m");
  CutProjectScheme s;
  s.total = total;
  s.physical_dim = n;
  s.internal_dim = m;

  int d = n + m;
  if (cert_radius <= 0) cert_radius = d == 2 ? 100 : (d == 3 ? 25 : 10);
  s.cert_coeff_radius = cert_radius;

  // p1 injective on the lattice iff p1(gamma) != 0 for gamma != 0; certify
  // over the coefficient ball. Same for p2.
  double min1 = std::numeric_limits<double>::infinity();
  double min2 = min1;
  std::vector<double> p2vals;
  std::array<int64_t, kMaxDim> k{};
  for (int i = 0; i < d; ++i) k[i] = -cert_radius;
  while (true) {
    bool zero = true;
    for (int i = 0; i < d; ++i)
      if (k[i] != 0) zero = false;
    if (!zero) {
      Vec g = total.point(k);
      min1 = std::min(min1, norm(s.p1(g)));
      min2 = std::min(min2, norm(s.p2(g)));
    }
    {
      Vec g = total.point(k);
      if (m == 1 && std::abs(g[n]) <= 1.0) p2vals.push_back(g[n]);
    }
    int axis = 0;
    while (axis < d) {
      if (++k[axis] <= cert_radius) break;
      k[axis] = -cert_radius;
      ++axis;
    }
    if (axis >= d) break;
  }
  s.min_p1_image = min1;
  s.min_p2_image = min2;
  s.p1_injective = min1 > 1e-9;
  s.p2_injective = min2 > 1e-9;
  if (m == 1 && p2vals.size() >= 2) {
    std::sort(p2vals.begin(), p2vals.end());
    double mg = std::max(p2vals.front() + 1.0, 1.0 - p2vals.back());
    for (std::size_t i = 0; i + 1 < p2vals.size(); ++i)
      mg = std::max(mg, p2vals[i + 1] - p2vals[i]);
    s.p2_max_gap = mg;
    s.p2_dense = mg < 0.2;
  }
  return s;
}

// Golden-ratio scheme in R^2: generators (1, 1) and (phi, -1/phi), with
// determinant phi + 1/phi = sqrt(5). Its model sets are the classical
// golden-mean chains.
inline CutProjectScheme fibonacci_scheme() {
  double phi = 0.5 * (1.0 + std::sqrt(5.0));
  Vec g1(1.0, 1.0), g2(phi, -1.0 / phi);
  return make_scheme(Lattice::from_generators({g1, g2}), 1, 1);
}

// Lambda(Gamma, Omega) = {p1(gamma) : gamma in Gamma, p2(gamma) in Omega},
// restricted to p1 in box. Window boxes are closed.
inline PointSet model_set(const CutProjectScheme& s, const WindowRegion& window,
                          const Box& box, std::size_t cap = 20000000) {
  guard(window.dim == s.internal_dim, "model_set: window dim mismatch");
  guard(box.dim == s.physical_dim, "model_set: box dim mismatch");
  std::vector<Vec> pts;
  if (!window.empty()) {
    Box hull = window.hull();
    Box region(s.total.dim);
    for (int i = 0; i < s.physical_dim; ++i) {
      region.lo[i] = box.lo[i];
      region.hi[i] = box.hi[i];
    }
    for (int i = 0; i < s.internal_dim; ++i) {
      region.lo[s.physical_dim + i] = hull.lo[i];
      region.hi[s.physical_dim + i] = hull.hi[i];
    }
    detail::enumerate_lattice_region(s.total, region, cap, [&](const Vec& g) {
      Vec a = s.p1(g), b = s.p2(g);
      if (box.contains(a) && window.contains(b)) pts.push_back(a);
    });
  }
  return PointSet(std::move(pts), box);
}

// Weighted model measure: atom at p1(gamma) with weight wf.transform(p2(gamma)).
// The enumeration window is exactly the transform support, so support
// containment in the corresponding model set holds by construction.
inline DiscreteMeasure model_measure(const CutProjectScheme& s, const Window& wf,
                                     const Box& box, std::size_t cap = 20000000,
                                     double purge_tol = 1e-14) {
  guard(s.internal_dim == 1, "model_measure: internal dimension must be 1");
  guard(box.dim == s.physical_dim, "model_measure: box dim mismatch");
  guard(wf.transform_radius > 0, "model_measure: window transform must have support");
  Box region(s.total.dim);
  for (int i = 0; i < s.physical_dim; ++i) {
    region.lo[i] = box.lo[i];
    region.hi[i] = box.hi[i];
  }
  region.lo[s.physical_dim] = -wf.transform_radius;
  region.hi[s.physical_dim] = wf.transform_radius;
  std::vector<Atom> atoms;
  detail::enumerate_lattice_region(s.total, region, cap, [&](const Vec& g) {
    Vec a = s.p1(g);
    double y = g[s.physical_dim];
    if (!box.contains(a) || std::abs(y) > wf.transform_radius) return;
    double w = wf.transform(y);
    if (w != 0.0) atoms.push_back({a, Complex(w, 0.0)});
  });
  return DiscreteMeasure(std::move(atoms), box, 1e-9, purge_tol);
}

// Dual-side spectrum prediction: atoms at p1(gamma*) for dual lattice points,
// weight wf.profile(p2(gamma*)) / det(Gamma). The profile decays polynomially,
// so enumeration cuts the internal coordinate where |profile| falls below
// weight_floor relative to the profile peak.
inline DiscreteMeasure predicted_spectrum(const CutProjectScheme& s, const Window& wf,
                                          const Box& freq_box,
                                          double weight_floor = 1e-9,
                                          std::size_t cap = 20000000) {
  guard(s.internal_dim == 1, "predicted_spectrum: internal dimension must be 1");
  guard(freq_box.dim == s.physical_dim, "predicted_spectrum: box dim mismatch");
  guard(wf.sinc_order >= 1, "predicted_spectrum: window profile must decay");
  guard(weight_floor > 0 && weight_floor < 1, "predicted_spectrum: floor in (0,1)");

  // |sinc(a y)^k| <= (pi a y)^-k: cut where the envelope reaches the floor
  double y_cut = std::pow(weight_floor, -1.0 / wf.sinc_order) / (kPi * wf.scale);
  Lattice dual = s.total.dual();
  Box region(s.total.dim);
  for (int i = 0; i < s.physical_dim; ++i) {
    region.lo[i] = freq_box.lo[i];
    region.hi[i] = freq_box.hi[i];
  }
  region.lo[s.physical_dim] = -y_cut;
  region.hi[s.physical_dim] = y_cut;
  double scale = 1.0 / s.total.det_abs;
  double floor_abs = weight_floor * std::abs(wf.amplitude) * scale;
  std::vector<Atom> atoms;
  detail::enumerate_lattice_region(dual, region, cap, [&](const Vec& g) {
    Vec a = s.p1(g);
    double y = g[s.physical_dim];
    if (!freq_box.contains(a) || std::abs(y) > y_cut) return;
    double w = wf.profile(y) * scale;
    if (std::abs(w) >= floor_abs) atoms.push_back({a, Complex(w, 0.0)});
  });
  return DiscreteMeasure(std::move(atoms), freq_box, 1e-9, 0.0);
}

}  // namespace fqc
