#pragma once

#include <cstdint>
#include <vector>

#include "fqc/cutproject.hpp"

namespace fqc {

// Configuration for the spectrum-gap construction: frequency balls B_j
// around a chosen sequence of centers, with total measure under the window
// bandwidth budget.
struct NowhereDenseConfig {
  std::vector<double> centers;   // frequency-space ball centers
  std::vector<double> radii;     // half-widths of the balls B_j
  double epsilon = 0.5;          // bandwidth budget for the squared surrogate
  double truncation = 0;         // max |p2| enumerated; 0 = automatic
  double gamma_factor = 1.1;     // sparsity level gamma_j = factor * D(Q_j)
  std::int64_t max_window_length = 2000000;  // search guard for M_j
};

// Band-limited surrogate vanishing on a finite zero set: product of sine
// factors sin(pi b (y - q)). The magnitude of the product underflows double
// range for large zero sets, so evaluation returns log10 magnitude and sign.
struct WindowSurrogate {
  std::vector<double> zeros;
  double factor_band = 0;    // b: each factor occupies [-b/2, b/2]
  double bandwidth = 0;      // total for the product, zeros.size() * b / 2
  double bandwidth_squared = 0;  // after squaring for nonnegativity
  double budget = 0;             // must strictly exceed bandwidth_squared
  double max_log10 = 0;      // scan maximum, normalization for relative values

  struct Value {
    double log10_mag = -std::numeric_limits<double>::infinity();
    int sign = 0;  // 0 exactly on a zero
  };

  Value eval(double y) const {
    Value v;
    double acc = 0;
    int sgn = 1;
    for (double q : zeros) {
      double x = factor_band * (y - q);
      double r = std::remainder(x, 1.0);
      if (r == 0.0) return Value{};  // exact zero of some factor
      double s = std::sin(kPi * r);
      // parity of the period index flips the sign of sin(pi x)
      auto k = static_cast<std::int64_t>(std::llround(x - r));
      if (k % 2 != 0) sgn = -sgn;
      if (s < 0) {
        sgn = -sgn;
        s = -s;
      }
      acc += std::log10(s);
    }
    v.log10_mag = acc;
    v.sign = sgn;
    return v;
  }

  // magnitude relative to the scan maximum, squared surrogate (nonnegative)
  double relative_squared(double y) const {
    Value v = eval(y);
    if (v.sign == 0) return 0.0;
    double e = 2.0 * (v.log10_mag - max_log10);
    if (e < -290.0) return 0.0;
    return std::pow(10.0, e);
  }
};

struct QSetReport {
  double ball_lo = 0, ball_hi = 0;   // B_j in frequency space
  double density_bound = 0;          // D(Q_j) = det(Gamma) * mes(B_j)
  double gamma = 0;                  // chosen sparsity level
  std::int64_t M = 0;                // smallest admissible window length
  std::int64_t T = 0;                // M^3 + M
  std::size_t q_count = 0;           // |Q_j| within the truncation
  std::vector<double> q_points;      // internal-space positions, sorted
  double omega_lo = 0, omega_hi = 0; // widest sub-interval of B_j clear of
                                     // dual points with |p2| < T
  double omega_width = 0;
};

struct NowhereDenseReport {
  std::vector<QSetReport> sets;
  WindowSurrogate surrogate;
  double epsilon = 0;
  double truncation_used = 0;
  double budget_lhs = 0;   // sum of ball measures
  double budget_rhs = 0;   // epsilon / det(Gamma)
  int extend_rounds = 0;   // automatic truncation growth iterations
};

namespace detail {

// Internal-space positions of dual-lattice points whose frequency lies in
// [flo, fhi] and |internal| <= t_max. Returns sorted values.
inline std::vector<double> dual_strip(const CutProjectScheme& s, double flo,
                                      double fhi, double t_max) {
  Lattice dual = s.total.dual();
  Box region(s.total.dim);
  region.lo[0] = flo;
  region.hi[0] = fhi;
  region.lo[1] = -t_max;
  region.hi[1] = t_max;
  std::vector<double> out;
  enumerate_lattice_region(dual, region, 30000000, [&](const Vec& g) {
    double f = s.p1(g)[0];
    double y = s.p2(g)[0];
    if (f >= flo && f <= fhi && std::abs(y) <= t_max) out.push_back(y);
  });
  std::sort(out.begin(), out.end());
  return out;
}

// Smallest integer M such that every interval I with |I| >= M satisfies
// #(Q cap I) <= gamma |I|. Verified for real lengths in [M, 2M] via the
// critical pair lengths; longer intervals follow by splitting in half.
inline std::int64_t smallest_sparse_window(const std::vector<double>& q,
                                           double gamma, std::int64_t max_len) {
  auto admissible = [&](std::int64_t M) {
    double Md = static_cast<double>(M);
    std::size_t i = 0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      while (q[j] - q[i] > 2.0 * Md) ++i;
      for (std::size_t a = i; a <= j; ++a) {
        double d = q[j] - q[a];
        double len = std::max(d, Md);
        if (static_cast<double>(j - a + 1) > gamma * len) return false;
      }
    }
    return true;
  };
  for (std::int64_t M = 1; M <= max_len; ++M)
    if (admissible(M)) return M;
  guard(false, "smallest_sparse_window: no admissible length under the guard");
  return -1;
}

}  // namespace detail

// Builds the internal-space sparse sets Q_j over the frequency balls B_j,
// their sparsity scales M_j and cutoffs T_j = M_j^3 + M_j, a band-limited
// surrogate window vanishing on the truncated union of the Q_j tails, and
// the frequency gaps Omega_j inside each ball that are clear of dual points
// with |internal| < T_j.
inline NowhereDenseReport nowhere_dense_construction(const CutProjectScheme& s,
                                                     const NowhereDenseConfig& cfg) {
  guard(s.physical_dim == 1 && s.internal_dim == 1,
        "nowhere_dense_construction: needs a 1+1 dimensional scheme");
  guard(!cfg.centers.empty(), "nowhere_dense_construction: no frequency balls");
  guard(cfg.centers.size() == cfg.radii.size(),
        "nowhere_dense_construction: centers/radii length mismatch");
  guard(cfg.epsilon > 0, "nowhere_dense_construction: epsilon must be positive");
  guard(cfg.gamma_factor > 1, "nowhere_dense_construction: gamma factor must exceed 1");

  NowhereDenseReport rep;
  rep.epsilon = cfg.epsilon;
  double det = s.total.det_abs;
  for (double r : cfg.radii) {
    guard(r > 0, "nowhere_dense_construction: ball radius must be positive");
    rep.budget_lhs += 2.0 * r;
  }
  rep.budget_rhs = cfg.epsilon / det;
  guard(rep.budget_lhs < rep.budget_rhs,
        "nowhere_dense_construction: ball measure budget exceeded, "
        "shrink the balls or raise epsilon");

  double trunc = cfg.truncation > 0 ? cfg.truncation : 1000.0;
  std::int64_t max_T = 0;
  for (int round = 0;; ++round) {
    guard(round < 8, "nowhere_dense_construction: truncation failed to stabilize");
    rep.sets.clear();
    max_T = 0;
    for (std::size_t j = 0; j < cfg.centers.size(); ++j) {
      QSetReport qr;
      qr.ball_lo = cfg.centers[j] - cfg.radii[j];
      qr.ball_hi = cfg.centers[j] + cfg.radii[j];
      qr.density_bound = det * 2.0 * cfg.radii[j];
      qr.gamma = cfg.gamma_factor * qr.density_bound;
      qr.q_points = detail::dual_strip(s, qr.ball_lo, qr.ball_hi, trunc);
      qr.q_count = qr.q_points.size();
      guard(qr.q_count >= 2,
            "nowhere_dense_construction: ball captures too few dual points, "
            "raise the truncation");
      qr.M = detail::smallest_sparse_window(qr.q_points, qr.gamma,
                                            cfg.max_window_length);
      qr.T = qr.M * qr.M * qr.M + qr.M;
      max_T = std::max(max_T, qr.T);
      rep.sets.push_back(std::move(qr));
    }
    // accept once the truncation comfortably clears every cutoff, so the
    // zero-set tails are nonempty; otherwise extend and recompute
    if (trunc >= 2.0 * static_cast<double>(max_T)) break;
    trunc = 2.2 * static_cast<double>(max_T);
    rep.extend_rounds = round + 1;
  }
  rep.truncation_used = trunc;

  // frequency gaps: widest opening in B_j between dual points with |p2| < T_j
  for (QSetReport& qr : rep.sets) {
    std::vector<double> blockers;
    Lattice dual = s.total.dual();
    Box region(s.total.dim);
    region.lo[0] = qr.ball_lo;
    region.hi[0] = qr.ball_hi;
    region.lo[1] = -static_cast<double>(qr.T);
    region.hi[1] = static_cast<double>(qr.T);
    detail::enumerate_lattice_region(dual, region, 30000000, [&](const Vec& g) {
      double f = s.p1(g)[0];
      double y = s.p2(g)[0];
      if (f >= qr.ball_lo && f <= qr.ball_hi &&
          std::abs(y) < static_cast<double>(qr.T))
        blockers.push_back(f);
    });
    std::sort(blockers.begin(), blockers.end());
    double best_lo = qr.ball_lo, best_hi = qr.ball_hi;
    if (!blockers.empty()) {
      double lo = qr.ball_lo, best = -1;
      for (std::size_t i = 0; i <= blockers.size(); ++i) {
        double hi = i < blockers.size() ? blockers[i] : qr.ball_hi;
        if (hi - lo > best) {
          best = hi - lo;
          best_lo = lo;
          best_hi = hi;
        }
        if (i < blockers.size()) lo = blockers[i];
      }
    }
    qr.omega_lo = best_lo;
    qr.omega_hi = best_hi;
    qr.omega_width = best_hi - best_lo;
  }

  // assemble the truncated zero set: the Q_j tails beyond their own T_j
  std::vector<double> zeros;
  for (const QSetReport& qr : rep.sets)
    for (double y : qr.q_points)
      if (std::abs(y) >= static_cast<double>(qr.T)) zeros.push_back(y);
  std::sort(zeros.begin(), zeros.end());
  zeros.erase(std::unique(zeros.begin(), zeros.end()), zeros.end());
  guard(!zeros.empty(),
        "nowhere_dense_construction: empty zero set, truncation below every T_j");

  WindowSurrogate& w = rep.surrogate;
  w.zeros = std::move(zeros);
  w.budget = cfg.epsilon;
  w.factor_band = cfg.epsilon / (2.0 * static_cast<double>(w.zeros.size()));
  w.bandwidth = static_cast<double>(w.zeros.size()) * w.factor_band / 2.0;
  w.bandwidth_squared = 2.0 * w.bandwidth;
  guard(w.bandwidth_squared < w.budget,
        "nowhere_dense_construction: surrogate bandwidth exceeds the budget");

  // normalization scan over the truncated line
  double best = -std::numeric_limits<double>::infinity();
  const int samples = 2001;
  for (int i = 0; i < samples; ++i) {
    double y = -trunc + 2.0 * trunc * static_cast<double>(i) / (samples - 1);
    WindowSurrogate::Value v = w.eval(y);
    if (v.sign != 0) best = std::max(best, v.log10_mag);
  }
  w.max_log10 = best;
  return rep;
}

}  // namespace fqc
