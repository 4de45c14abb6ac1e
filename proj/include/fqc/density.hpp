#pragma once

#include <cstdint>
#include <vector>

#include "fqc/pointset.hpp"

namespace fqc {

// sup_x #(Lambda ∩ [x, x+1]) for 1D sets; the sup is attained with the
// interval's left end at a set point.
inline std::int64_t rho_density(const PointSet& ps) {
  guard(ps.dim == 1, "rho_density: 1D only");
  std::int64_t best = ps.points.empty() ? 0 : 1;
  const auto& pts = ps.points;
  std::size_t j = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (j < i) j = i;
    while (j + 1 < pts.size() && pts[j + 1][0] <= pts[i][0] + 1.0) ++j;
    best = std::max(best, static_cast<std::int64_t>(j - i + 1));
  }
  return best;
}

struct RadiusDensity {
  double radius = 0;
  std::size_t count = 0;
  double value = 0;  // count / (2R)^n
};

struct LowerDensityResult {
  std::vector<RadiusDensity> sequence;  // R, R/2, R/4
  double value = 0;                     // at the largest radius
};

// liminf surrogate: #(Lambda ∩ (-R,R)^n) / (2R)^n at the box scale and two
// halved radii. Requires a box symmetric about the origin.
inline LowerDensityResult lower_density(const PointSet& ps) {
  double half = ps.box.hi[0];
  for (int i = 0; i < ps.dim; ++i) {
    guard(std::abs(ps.box.lo[i] + ps.box.hi[i]) <= 1e-9 * ps.box.extent(i),
          "lower_density: box must be symmetric about 0");
    half = std::min(half, ps.box.hi[i]);
  }
  guard(half > 0, "lower_density: degenerate box");
  LowerDensityResult res;
  for (double R : {half, half / 2, half / 4}) {
    RadiusDensity rd;
    rd.radius = R;
    for (const Vec& p : ps.points) {
      bool in = true;
      for (int i = 0; i < ps.dim; ++i)
        if (!(std::abs(p[i]) < R)) in = false;
      if (in) ++rd.count;
    }
    double vol = 1;
    for (int i = 0; i < ps.dim; ++i) vol *= 2 * R;
    rd.value = static_cast<double>(rd.count) / vol;
    res.sequence.push_back(rd);
  }
  res.value = res.sequence.front().value;
  return res;
}

inline double ball_volume(int dim, double r) {
  switch (dim) {
    case 1: return 2 * r;
    case 2: return kPi * r * r;
    case 3: return 4.0 / 3.0 * kPi * r * r * r;
    case 4: return kPi * kPi * r * r * r * r / 2.0;
    default: guard(false, "ball_volume: dim must be 1..4"); return 0;
  }
}

struct UniformDensityResult {
  double mean = 0;
  double max_rel_dev = 0;
  bool converged = false;  // max_rel_dev < 5%
  double ball_radius = 0;
  std::size_t centers = 0;
  std::vector<double> per_center;
};

// Ball-count densities at deterministically gridded centers; centers stay a
// full ball radius away from the truncation boundary.
inline UniformDensityResult uniform_density(const PointSet& ps, double ball_radius,
                                            int num_centers) {
  guard(ball_radius > 0, "uniform_density: ball_radius must be positive");
  guard(num_centers >= 1, "uniform_density: need at least one center");
  Box inner = ps.box.shrunk(ball_radius);

  int per_axis = static_cast<int>(std::ceil(
      std::pow(static_cast<double>(num_centers), 1.0 / ps.dim)));
  per_axis = std::max(per_axis, 1);

  UniformDensityResult res;
  res.ball_radius = ball_radius;
  double vol = ball_volume(ps.dim, ball_radius);

  detail::CellGrid grid(ps.points, ball_radius);
  std::array<int, kMaxDim> idx{};
  for (;;) {
    Vec c = Vec::zero(ps.dim);
    for (int i = 0; i < ps.dim; ++i)
      c[i] = per_axis == 1 ? 0.5 * (inner.lo[i] + inner.hi[i])
                           : inner.lo[i] + inner.extent(i) * idx[i] / (per_axis - 1);
    std::size_t count = 0;
    grid.for_neighborhood(c, 1, [&](std::size_t j) {
      if (dist(c, ps.points[j]) <= ball_radius) ++count;
    });
    res.per_center.push_back(static_cast<double>(count) / vol);
    int axis = 0;
    while (axis < ps.dim) {
      if (++idx[axis] < per_axis) break;
      idx[axis] = 0;
      ++axis;
    }
    if (axis == ps.dim) break;
  }

  res.centers = res.per_center.size();
  CompensatedSum acc;
  for (double d : res.per_center) acc.add(d);
  res.mean = acc.value() / static_cast<double>(res.centers);
  for (double d : res.per_center)
    res.max_rel_dev = std::max(res.max_rel_dev,
                               std::abs(d - res.mean) / std::max(res.mean, 1e-300));
  res.converged = res.max_rel_dev < 0.05;
  return res;
}

struct BmFamily {
  int first_exponent = 0;  // intervals [2^j, 2^{j+1}), j = first..last
  int last_exponent = 0;
  int sign = +1;
};

struct BmDensityResult {
  double value = 0;  // best min-ratio over scanned families (lower bound)
  BmFamily family;
  bool substantial = false;  // divergence surrogate held for the best family
  double divergence_sum = 0; // sum of (|I|/(1+dist(0,I)))^2 over the family
};

// One-sided lower bound for the Beurling-Malliavin effective density: scans
// dyadic interval families [2^j, 2^{j+1}) on either side of the origin. Each
// family needs >= 4 intervals (truncated substantiality surrogate: every term
// (|I|/(1+dist))^2 is ~1 for adjacent dyadic intervals). 1D only.
inline BmDensityResult bm_upper_density(const PointSet& ps) {
  guard(ps.dim == 1, "bm_upper_density: 1D only");
  std::vector<double> xs;
  xs.reserve(ps.size());
  for (const Vec& p : ps.points) xs.push_back(p[0]);

  auto count_in = [&](double a, double b) {  // half-open [a, b)
    auto lo = std::lower_bound(xs.begin(), xs.end(), a);
    auto hi = std::lower_bound(xs.begin(), xs.end(), b);
    return static_cast<double>(hi - lo);
  };

  BmDensityResult best;
  const int min_intervals = 4;
  for (int sign : {+1, -1}) {
    double side = sign > 0 ? ps.box.hi[0] : -ps.box.lo[0];
    double usable = 0.95 * side;  // margin guard at the truncation boundary
    if (usable < 16) continue;
    int max_exp = static_cast<int>(std::floor(std::log2(usable))) - 1;
    for (int first = 2; first + min_intervals - 1 <= max_exp; ++first) {
      double dmin = std::numeric_limits<double>::infinity();
      double div_sum = 0;
      for (int j = first; j <= max_exp; ++j) {
        double len = std::pow(2.0, j);
        double a = sign > 0 ? len : -2 * len;
        double b = sign > 0 ? 2 * len : -len;
        dmin = std::min(dmin, count_in(a, b) / len);
        double ratio = len / (1.0 + len);
        div_sum += ratio * ratio;
        int intervals = j - first + 1;
        if (intervals >= min_intervals && dmin > best.value) {
          best.value = dmin;
          best.family = {first, j, sign};
          best.substantial = true;
          best.divergence_sum = div_sum;
        }
      }
    }
  }
  return best;
}

}  // namespace fqc
