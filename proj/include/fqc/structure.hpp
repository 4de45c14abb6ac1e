#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "fqc/lattice.hpp"
#include "fqc/measure.hpp"
#include "fqc/pointset.hpp"

namespace fqc {

// Finite exponential sum P(x) = sum_k c_k exp(+2 pi i <w_k, x>).
struct TrigPolynomial {
  int dim = 1;
  std::vector<Vec> frequencies;
  std::vector<Complex> coefficients;

  Complex eval(const Vec& x) const {
    CompensatedComplex acc;
    for (std::size_t k = 0; k < frequencies.size(); ++k) {
      double phase = kTwoPi * dot(frequencies[k], x);
      acc.add(coefficients[k] * Complex(std::cos(phase), std::sin(phase)));
    }
    return acc.value();
  }
};

struct FitLatticeOptions {
  double tol = 1e-3;            // distance for "point lies on a coset"
  int max_cosets = 8;
  double coverage_floor = 0.99;
  double gcd_rel_tol = 1e-6;    // times the median successive gap
  double min_basis_rel = 0.2;   // reject candidates below this times median gap
  double diff_mult_frac = 0.7;  // keep differences with count >= frac * max
};

struct LatticeFit {
  bool found = false;           // coverage >= floor with a non-degenerate basis
  Lattice lattice;
  double coverage = 0;
  std::vector<Vec> translates;  // coset representatives, reduced to the base cell
  double tol = 0;
  int max_cosets = 0;
  std::string failure;          // empty when found
};

namespace detail {

// tolerant Euclid: fold of |a mod b| with near-zero remainders dropped
inline double approx_gcd(std::vector<double> vals, double tol) {
  std::sort(vals.begin(), vals.end());
  double g = 0;
  for (double v : vals) {
    v = std::abs(v);
    if (v <= tol) continue;
    if (g == 0) {
      g = v;
      continue;
    }
    double a = std::max(v, g), b = std::min(v, g);
    while (b > tol) {
      double r = std::abs(a - std::round(a / b) * b);
      a = b;
      b = r;
    }
    g = a;
  }
  return g;
}

struct CosetAssignment {
  double g = 0;                  // refined basis length
  double origin = 0;             // reference point
  std::vector<double> translates;
  std::vector<int> label;        // coset index per point, -1 if uncovered
  double coverage = 0;
  double occupancy = 0;          // covered points / available coset positions
  int used_cosets = 0;
};

// Assigns 1D points to cosets of g*Z: residues are clustered circularly,
// the largest max_cosets clusters kept, then g and the translates are
// re-estimated by alternating least squares.
inline CosetAssignment assign_cosets_1d(const std::vector<Vec>& pts, double g,
                                        const FitLatticeOptions& opt) {
  CosetAssignment ca;
  ca.g = g;
  ca.origin = pts.front()[0];
  std::size_t n = pts.size();

  for (int round = 0; round < 3; ++round) {
    g = ca.g;
    std::vector<std::pair<double, std::size_t>> res(n);
    for (std::size_t i = 0; i < n; ++i) {
      double r = std::fmod(pts[i][0] - ca.origin, g);
      if (r < 0) r += g;
      res[i] = {r, i};
    }
    std::sort(res.begin(), res.end());
    // rotate so no cluster straddles the wrap point: start after the widest gap
    std::size_t start = 0;
    double widest = res.front().first + g - res.back().first;
    for (std::size_t i = 1; i < n; ++i) {
      double gap = res[i].first - res[i - 1].first;
      if (gap > widest) {
        widest = gap;
        start = i;
      }
    }
    std::rotate(res.begin(), res.begin() + static_cast<std::ptrdiff_t>(start),
                res.end());
    // single-linkage clusters at tol along the rotated circle
    struct Cluster {
      std::vector<std::size_t> members;
      double sum = 0;
    };
    std::vector<Cluster> clusters;
    double prev = 0;
    for (std::size_t k = 0; k < n; ++k) {
      double r = res[k].first;
      double unwrapped = r;
      if (k > 0 && r < prev) unwrapped = r + g;  // wrapped past the cut
      if (clusters.empty() || unwrapped - prev > opt.tol) {
        clusters.push_back({});
        prev = unwrapped;
      } else {
        prev = unwrapped;
      }
      clusters.back().members.push_back(res[k].second);
      clusters.back().sum += unwrapped;
    }
    std::stable_sort(clusters.begin(), clusters.end(),
                     [](const Cluster& a, const Cluster& b) {
                       return a.members.size() > b.members.size();
                     });
    if (clusters.size() > static_cast<std::size_t>(opt.max_cosets))
      clusters.resize(static_cast<std::size_t>(opt.max_cosets));

    ca.label.assign(n, -1);
    ca.translates.clear();
    std::size_t covered = 0;
    for (std::size_t c = 0; c < clusters.size(); ++c) {
      double mean = clusters[c].sum / static_cast<double>(clusters[c].members.size());
      ca.translates.push_back(mean);
      for (std::size_t i : clusters[c].members) ca.label[i] = static_cast<int>(c);
      covered += clusters[c].members.size();
    }
    ca.coverage = static_cast<double>(covered) / static_cast<double>(n);
    ca.used_cosets = static_cast<int>(clusters.size());

    // alternating least squares for g and translates given the assignment
    for (int inner = 0; inner < 3; ++inner) {
      std::vector<double> tau(ca.translates.size(), 0);
      std::vector<std::size_t> cnt(ca.translates.size(), 0);
      std::vector<double> nn(n, 0);
      for (std::size_t i = 0; i < n; ++i) {
        if (ca.label[i] < 0) continue;
        double t = ca.origin + ca.translates[static_cast<std::size_t>(ca.label[i])];
        nn[i] = std::round((pts[i][0] - t) / ca.g);
      }
      double num = 0, den = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (ca.label[i] < 0) continue;
        std::size_t c = static_cast<std::size_t>(ca.label[i]);
        tau[c] += pts[i][0] - nn[i] * ca.g;
        cnt[c] += 1;
      }
      for (std::size_t c = 0; c < tau.size(); ++c)
        if (cnt[c] > 0) tau[c] = tau[c] / static_cast<double>(cnt[c]) - ca.origin;
      for (std::size_t i = 0; i < n; ++i) {
        if (ca.label[i] < 0) continue;
        std::size_t c = static_cast<std::size_t>(ca.label[i]);
        num += nn[i] * (pts[i][0] - ca.origin - tau[c]);
        den += nn[i] * nn[i];
      }
      ca.translates = tau;
      if (den > 0) ca.g = num / den;
    }
  }

  // final coverage at the refined parameters
  std::size_t covered = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (ca.label[i] < 0) continue;
    double t = ca.origin + ca.translates[static_cast<std::size_t>(ca.label[i])];
    double r = pts[i][0] - t - std::round((pts[i][0] - t) / ca.g) * ca.g;
    if (std::abs(r) <= opt.tol)
      ++covered;
    else
      ca.label[i] = -1;
  }
  ca.coverage = static_cast<double>(covered) / static_cast<double>(n);
  // occupancy distinguishes the true period from its refinements: a
  // refinement lattice offers more positions than the set fills
  double span = pts.back()[0] - pts.front()[0];
  double slots = static_cast<double>(ca.used_cosets) * (std::floor(span / ca.g) + 1.0);
  ca.occupancy = slots > 0 ? std::min(1.0, static_cast<double>(covered) / slots) : 0.0;
  return ca;
}

}  // namespace detail

// Fits a lattice L and coset representatives covering the point set.
// 1D: approximate GCD over high-multiplicity difference values, candidates
// refined by alternating least squares over (basis, translates); among
// candidates meeting the coverage floor the one with the fewest cosets wins,
// ties broken toward the coarser basis. nD (n <= 3): greedy shortest
// independent difference vectors with size reduction, translates from
// residue clustering.
inline LatticeFit fit_lattice(const PointSet& ps,
                              const FitLatticeOptions& opt = {}) {
  int n = ps.dim;
  guard(ps.size() >= static_cast<std::size_t>(2 * (n + 1)),
        "fit_lattice: need at least 2(n+1) points");
  guard(n <= 3, "fit_lattice: supported for dimension 1..3");

  LatticeFit fit;
  fit.tol = opt.tol;
  fit.max_cosets = opt.max_cosets;

  double cap = ps.box.min_extent() / 2;
  DifferenceSet ds = difference_set(ps, cap);
  std::int64_t max_count = 0;
  for (std::size_t i = 0; i < ds.points.size(); ++i)
    if (norm(ds.points[i]) > ps.dedup_tol) max_count = std::max(max_count, ds.counts[i]);
  std::vector<Vec> frequent;
  for (std::size_t i = 0; i < ds.points.size(); ++i) {
    if (norm(ds.points[i]) <= ps.dedup_tol) continue;
    if (static_cast<double>(ds.counts[i]) >=
        opt.diff_mult_frac * static_cast<double>(max_count))
      frequent.push_back(ds.points[i]);
  }
  guard(!frequent.empty(), "fit_lattice: degenerate difference set");

  if (n == 1) {
    std::vector<double> gaps;
    for (std::size_t i = 1; i < ps.size(); ++i)
      gaps.push_back(ps.points[i][0] - ps.points[i - 1][0]);
    std::vector<double> sorted_gaps = gaps;
    std::sort(sorted_gaps.begin(), sorted_gaps.end());
    double median_gap = sorted_gaps[sorted_gaps.size() / 2];
    guard(median_gap > 0, "fit_lattice: coincident points");

    std::vector<double> diff_vals;
    for (const Vec& v : frequent)
      if (v[0] > 0) diff_vals.push_back(v[0]);
    double g0 = detail::approx_gcd(diff_vals, opt.gcd_rel_tol * median_gap);

    std::vector<double> candidates;
    auto push_candidate = [&](double g) {
      if (!(g >= opt.min_basis_rel * median_gap)) return;
      for (double c : candidates)
        if (std::abs(c - g) <= 1e-9 * median_gap) return;
      candidates.push_back(g);
    };
    push_candidate(g0);
    // distinct successive-gap values as fallbacks
    for (std::size_t i = 0; i < sorted_gaps.size();) {
      std::size_t j = i;
      double sum = 0;
      while (j < sorted_gaps.size() && sorted_gaps[j] - sorted_gaps[i] <= opt.tol) {
        sum += sorted_gaps[j];
        ++j;
      }
      push_candidate(sum / static_cast<double>(j - i));
      i = j;
    }

    detail::CosetAssignment best;
    bool have = false;
    for (double g : candidates) {
      detail::CosetAssignment ca = detail::assign_cosets_1d(ps.points, g, opt);
      if (!(ca.g >= opt.min_basis_rel * median_gap)) continue;
      bool better = false;
      if (!have)
        better = true;
      else if (ca.coverage > best.coverage + 1e-9)
        better = true;
      else if (std::abs(ca.coverage - best.coverage) <= 1e-9) {
        if (ca.occupancy > best.occupancy + 1e-6)
          better = true;
        else if (std::abs(ca.occupancy - best.occupancy) <= 1e-6) {
          if (ca.used_cosets < best.used_cosets)
            better = true;
          else if (ca.used_cosets == best.used_cosets && ca.g > best.g + 1e-12)
            better = true;
        }
      }
      if (better) {
        best = ca;
        have = true;
      }
    }
    guard(have, "fit_lattice: no admissible basis candidate");
    fit.coverage = best.coverage;
    fit.lattice = Lattice::scaled_int(1, best.g);
    for (double t : best.translates) {
      double r = std::fmod(best.origin + t, best.g);
      if (r < 0) r += best.g;
      fit.translates.push_back(Vec(r));
    }
    std::sort(fit.translates.begin(), fit.translates.end(), lex_less);
    fit.found = fit.coverage >= opt.coverage_floor;
    if (!fit.found) fit.failure = "coverage below floor";
    return fit;
  }

  // nD: greedy shortest independent high-multiplicity difference vectors
  std::sort(frequent.begin(), frequent.end(),
            [](const Vec& a, const Vec& b) { return norm2(a) < norm2(b); });
  std::vector<Vec> basis;
  for (const Vec& v : frequent) {
    if (static_cast<int>(basis.size()) == n) break;
    Vec w = v;
    // size-reduce against chosen vectors
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& b : basis) {
        double c = std::round(dot(w, b) / norm2(b));
        if (c != 0) w = w - c * b;
      }
    if (norm(w) > 10 * opt.tol) basis.push_back(w);
  }
  if (static_cast<int>(basis.size()) < n) {
    fit.failure = "difference set does not span the space";
    return fit;
  }
  Lattice L = Lattice::from_generators(basis);

  // residue clustering in the fundamental domain
  Vec origin = ps.points.front();
  std::vector<Vec> residues(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) {
    auto c = L.coefficients(ps.points[i] - origin);
    Vec r = ps.points[i] - origin;
    for (int j = 0; j < n; ++j) r = r - std::round(c[j]) * L.generator(j);
    residues[i] = r;
  }
  std::vector<int> label(ps.size(), -1);
  std::vector<Vec> centers;
  std::vector<std::size_t> sizes;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    int bestc = -1;
    for (std::size_t c = 0; c < centers.size(); ++c) {
      double d = dist(residues[i], centers[c]);
      // compare modulo the lattice as well
      auto cc = L.coefficients(residues[i] - centers[c]);
      Vec r = residues[i] - centers[c];
      for (int j = 0; j < n; ++j) r = r - std::round(cc[j]) * L.generator(j);
      d = std::min(d, norm(r));
      if (d <= opt.tol) {
        bestc = static_cast<int>(c);
        break;
      }
    }
    if (bestc < 0 && static_cast<int>(centers.size()) < opt.max_cosets) {
      centers.push_back(residues[i]);
      sizes.push_back(0);
      bestc = static_cast<int>(centers.size()) - 1;
    }
    if (bestc >= 0) {
      label[i] = bestc;
      sizes[static_cast<std::size_t>(bestc)] += 1;
    }
  }
  std::size_t covered = 0;
  for (int l : label)
    if (l >= 0) ++covered;
  fit.coverage = static_cast<double>(covered) / static_cast<double>(ps.size());
  fit.lattice = L;
  for (std::size_t c = 0; c < centers.size(); ++c) fit.translates.push_back(origin + centers[c]);
  std::sort(fit.translates.begin(), fit.translates.end(), lex_less);
  fit.found = fit.coverage >= opt.coverage_floor;
  if (!fit.found) fit.failure = "coverage below floor";
  return fit;
}

struct RecoverOptions {
  FitLatticeOptions fit;
  double fit_residual_stop = 1e-10;  // OMP stop when max residual below this
  int max_terms = 25;
  double representable_tol = 1e-8;   // residual above this flags the result
  std::size_t max_candidates = 4096;
};

// Periodic Dirac-comb representation: weights on each coset of L follow a
// finite exponential sum.
struct CombRepresentation {
  Lattice lattice;
  std::vector<Vec> translates;
  std::vector<TrigPolynomial> polys;
  double residual = 0;        // max |weight - P_j(atom)| over all atoms
  bool representable = false; // residual <= tolerance
  double coverage = 0;
  std::string failure;        // set when the lattice fit failed
};

// Frequency reduced into the fundamental cell of the dual lattice.
inline Vec reduce_mod_dual(const Lattice& dual, const Vec& w) {
  auto c = dual.coefficients(w);
  Vec r = w;
  for (int j = 0; j < dual.dim; ++j)
    r = r - std::floor(c[j]) * dual.generator(j);
  return r;
}

// Recovers the comb representation of a discrete measure: fits the lattice
// and cosets, reduces the spectrum locations modulo the dual lattice to get
// candidate frequencies, and fits each coset's weights by greedy matching
// pursuit with a final least-squares solve.
inline CombRepresentation recover_comb(const DiscreteMeasure& mu,
                                       const DiscreteMeasure& spectrum,
                                       const RecoverOptions& opt = {}) {
  guard(mu.size() > 0, "recover_comb: empty measure");
  guard(spectrum.size() > 0, "recover_comb: empty spectrum");
  guard(mu.dim == spectrum.dim, "recover_comb: dimension mismatch");

  CombRepresentation rep;
  LatticeFit fit = fit_lattice(mu.support_set(), opt.fit);
  rep.lattice = fit.lattice;
  rep.coverage = fit.coverage;
  if (!fit.found) {
    rep.failure = "lattice fit failed: " + fit.failure;
    rep.representable = false;
    rep.residual = std::numeric_limits<double>::infinity();
    return rep;
  }
  rep.translates = fit.translates;
  int n = mu.dim;
  Lattice dual = fit.lattice.dual();

  // candidate frequencies: spectrum locations reduced mod the dual lattice
  std::vector<Vec> cand;
  for (const Vec& s : spectrum.support) {
    Vec r = reduce_mod_dual(dual, s);
    bool dup = false;
    for (const Vec& c : cand) {
      Vec d = r - c;
      auto cc = dual.coefficients(d);
      Vec rd = d;
      for (int j = 0; j < n; ++j)
        rd = rd - std::round(cc[j]) * dual.generator(j);
      if (norm(rd) <= 1e-9) {
        dup = true;
        break;
      }
    }
    if (!dup) cand.push_back(r);
    guard(cand.size() <= opt.max_candidates, "recover_comb: too many candidate frequencies");
  }

  // assign atoms to cosets (nearest translate modulo L)
  std::size_t N = rep.translates.size();
  std::vector<std::vector<std::size_t>> coset(N);
  double assign_err = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    double bestd = std::numeric_limits<double>::infinity();
    std::size_t bestj = 0;
    for (std::size_t j = 0; j < N; ++j) {
      Vec d = mu.support[i] - rep.translates[j];
      auto c = fit.lattice.coefficients(d);
      Vec r = d;
      for (int k = 0; k < n; ++k)
        r = r - std::round(c[k]) * fit.lattice.generator(k);
      double dd = norm(r);
      if (dd < bestd) {
        bestd = dd;
        bestj = j;
      }
    }
    assign_err = std::max(assign_err, bestd);
    coset[bestj].push_back(i);
  }

  // per-coset sparse exponential fit
  double residual = assign_err > opt.fit.tol ? std::numeric_limits<double>::infinity() : 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    const auto& idx = coset[j];
    TrigPolynomial poly;
    poly.dim = n;
    if (idx.empty()) {
      rep.polys.push_back(poly);
      continue;
    }
    std::size_t m = idx.size();
    Eigen::VectorXcd w(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < m; ++i) {
      const Complex& c = mu.weights[idx[i]];
      w(static_cast<Eigen::Index>(i)) = std::complex<double>(c.real(), c.imag());
    }
    auto column = [&](const Vec& f) {
      Eigen::VectorXcd col(static_cast<Eigen::Index>(m));
      for (std::size_t i = 0; i < m; ++i) {
        double phase = kTwoPi * dot(f, mu.support[idx[i]]);
        col(static_cast<Eigen::Index>(i)) = std::complex<double>(std::cos(phase), std::sin(phase));
      }
      return col;
    };

    std::vector<std::size_t> active;
    std::vector<bool> used(cand.size(), false);
    Eigen::VectorXcd resid = w;
    Eigen::MatrixXcd A(static_cast<Eigen::Index>(m), 0);
    Eigen::VectorXcd coef;
    double max_resid = 0;
    for (std::size_t i = 0; i < m; ++i)
      max_resid = std::max(max_resid, std::abs(resid(static_cast<Eigen::Index>(i))));
    int terms_cap = std::min<int>(opt.max_terms, static_cast<int>(m));
    while (max_resid > opt.fit_residual_stop &&
           static_cast<int>(active.size()) < terms_cap) {
      double best_corr = -1;
      std::size_t best_k = cand.size();
      for (std::size_t k = 0; k < cand.size(); ++k) {
        if (used[k]) continue;
        std::complex<double> ip = column(cand[k]).dot(resid);
        double corr = std::abs(ip);
        if (corr > best_corr + 1e-15) {
          best_corr = corr;
          best_k = k;
        }
      }
      if (best_k == cand.size() || best_corr <= 1e-13 * static_cast<double>(m)) break;
      used[best_k] = true;
      active.push_back(best_k);
      A.conservativeResize(Eigen::NoChange, static_cast<Eigen::Index>(active.size()));
      A.col(static_cast<Eigen::Index>(active.size()) - 1) = column(cand[best_k]);
      coef = A.colPivHouseholderQr().solve(w);
      resid = w - A * coef;
      max_resid = 0;
      for (std::size_t i = 0; i < m; ++i)
        max_resid = std::max(max_resid, std::abs(resid(static_cast<Eigen::Index>(i))));
    }
    // drop numerically zero coefficients, then refit once if any were dropped
    if (!active.empty()) {
      double cmax = 0;
      for (Eigen::Index k = 0; k < coef.size(); ++k) cmax = std::max(cmax, std::abs(coef(k)));
      std::vector<std::size_t> kept;
      for (std::size_t t = 0; t < active.size(); ++t)
        if (std::abs(coef(static_cast<Eigen::Index>(t))) > 1e-12 * cmax)
          kept.push_back(active[t]);
      if (kept.size() != active.size() && !kept.empty()) {
        Eigen::MatrixXcd B(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(kept.size()));
        for (std::size_t t = 0; t < kept.size(); ++t)
          B.col(static_cast<Eigen::Index>(t)) = column(cand[kept[t]]);
        coef = B.colPivHouseholderQr().solve(w);
        resid = w - B * coef;
        active = kept;
        max_resid = 0;
        for (std::size_t i = 0; i < m; ++i)
          max_resid = std::max(max_resid, std::abs(resid(static_cast<Eigen::Index>(i))));
      }
      for (std::size_t t = 0; t < active.size(); ++t) {
        poly.frequencies.push_back(cand[active[t]]);
        std::complex<double> c = coef(static_cast<Eigen::Index>(t));
        poly.coefficients.push_back(Complex(c.real(), c.imag()));
      }
    }
    residual = std::max(residual, max_resid);
    rep.polys.push_back(poly);
  }
  rep.residual = residual;
  rep.representable = residual <= opt.representable_tol;
  if (!rep.representable && rep.failure.empty())
    rep.failure = "residual above tolerance, not representable at this scale";
  return rep;
}

// Evaluates a comb representation inside a box: atoms at every lattice-coset
// point with the coset's exponential-sum weight.
inline DiscreteMeasure evaluate_comb(const CombRepresentation& rep, const Box& box,
                                     double purge_tol = 1e-14) {
  guard(rep.lattice.dim == box.dim, "evaluate_comb: dimension mismatch");
  guard(!rep.translates.empty(), "evaluate_comb: no cosets");
  std::vector<Atom> atoms;
  int n = box.dim;
  // enumerate integer coefficients whose lattice point can fall in the box
  for (std::size_t j = 0; j < rep.translates.size(); ++j) {
    // coefficient bounds from box corners
    double lo[kMaxDim], hi[kMaxDim];
    for (int d = 0; d < n; ++d) {
      lo[d] = std::numeric_limits<double>::infinity();
      hi[d] = -lo[d];
    }
    std::size_t corners = std::size_t{1} << n;
    for (std::size_t mask = 0; mask < corners; ++mask) {
      Vec corner = Vec::zero(n);
      for (int d = 0; d < n; ++d)
        corner[d] = (mask >> d) & 1 ? box.hi[d] : box.lo[d];
      auto c = rep.lattice.coefficients(corner - rep.translates[j]);
      for (int d = 0; d < n; ++d) {
        lo[d] = std::min(lo[d], c[d]);
        hi[d] = std::max(hi[d], c[d]);
      }
    }
    std::array<std::int64_t, kMaxDim> klo{}, khi{}, k{};
    double count = 1;
    for (int d = 0; d < n; ++d) {
      klo[d] = static_cast<std::int64_t>(std::floor(lo[d])) - 1;
      khi[d] = static_cast<std::int64_t>(std::ceil(hi[d])) + 1;
      count *= static_cast<double>(khi[d] - klo[d] + 1);
      guard(count <= 2e7, "evaluate_comb: box too large for lattice enumeration");
    }
    k = klo;
    while (true) {
      Vec p = rep.translates[j];
      for (int d = 0; d < n; ++d) p = p + static_cast<double>(k[d]) * rep.lattice.generator(d);
      if (box.contains(p)) {
        Complex wgt = rep.polys[j].eval(p);
        atoms.push_back({p, wgt});
      }
      int d = n - 1;
      while (d >= 0) {
        if (++k[d] <= khi[d]) break;
        k[d] = klo[d];
        --d;
      }
      if (d < 0) break;
    }
  }
  return DiscreteMeasure(std::move(atoms), box, 1e-9, purge_tol);
}

// Fraction of points lying within tol of the union of lattice cosets.
inline double coset_cover_check(const PointSet& ps, const CombRepresentation& rep,
                                double tol = 1e-6) {
  guard(ps.dim == rep.lattice.dim, "coset_cover_check: dimension mismatch");
  if (ps.points.empty()) return 1.0;
  std::size_t covered = 0;
  for (const Vec& x : ps.points) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec& t : rep.translates) {
      Vec d = x - t;
      auto c = rep.lattice.coefficients(d);
      Vec r = d;
      for (int kdim = 0; kdim < ps.dim; ++kdim)
        r = r - std::round(c[kdim]) * rep.lattice.generator(kdim);
      best = std::min(best, norm(r));
    }
    if (best <= tol) ++covered;
  }
  return static_cast<double>(covered) / static_cast<double>(ps.points.size());
}

enum class DichotomyVerdict { uniformly_discrete, accumulating, inconclusive };

inline const char* to_string(DichotomyVerdict v) {
  switch (v) {
    case DichotomyVerdict::uniformly_discrete: return "uniformly_discrete";
    case DichotomyVerdict::accumulating: return "accumulating";
    default: return "inconclusive";
  }
}

struct DichotomyOptions {
  double shrink_ratio = 10;    // accumulating when gap shrinks by this factor
  double flat_ratio = 1.1;     // uniformly discrete when within this factor
  double cluster_scale = 10;   // linkage distance = scale * smallest gap
};

struct DichotomyReport {
  int dim = 1;
  DichotomyVerdict verdict = DichotomyVerdict::inconclusive;
  std::vector<std::pair<double, double>> gap_curve;  // (eps, min gap)
  std::vector<std::size_t> level_counts;
  std::vector<Vec> cluster_centers;
  double cluster_cover_radius = std::numeric_limits<double>::infinity();
  double shrink_factor = 1;
};

// Tracks the minimal gap of the eps-level spectra (atoms with |weight| >=
// eps * max) across decreasing eps. A flat curve certifies uniform
// discreteness at this truncation; a strong shrink indicates gaps closing,
// with single-linkage clusters of the finest level locating the accumulation
// sites.
inline DichotomyReport dichotomy_report(const DiscreteMeasure& spectrum,
                                        const std::vector<double>& eps_levels,
                                        const DichotomyOptions& opt = {}) {
  guard(eps_levels.size() >= 3, "dichotomy_report: need at least 3 levels");
  for (std::size_t i = 1; i < eps_levels.size(); ++i)
    guard(eps_levels[i] < eps_levels[i - 1],
          "dichotomy_report: eps levels must be strictly decreasing");
  guard(eps_levels.back() > 0, "dichotomy_report: eps levels must be positive");

  DichotomyReport rep;
  rep.dim = spectrum.dim;
  double wmax = spectrum.max_weight();

  std::vector<Vec> finest;
  for (double eps : eps_levels) {
    std::vector<Vec> pts;
    for (std::size_t i = 0; i < spectrum.size(); ++i)
      if (std::abs(spectrum.weights[i]) >= eps * wmax) pts.push_back(spectrum.support[i]);
    rep.level_counts.push_back(pts.size());
    double gap = std::numeric_limits<double>::infinity();
    if (pts.size() >= 2) {
      PointSet level(std::vector<Vec>(pts), spectrum.box, spectrum.dedup_tol);
      gap = min_separation(level);
    }
    rep.gap_curve.push_back({eps, gap});
    finest = std::move(pts);
  }

  if (rep.level_counts.front() < 2) {
    rep.verdict = DichotomyVerdict::inconclusive;
    return rep;
  }
  double g0 = rep.gap_curve.front().second;
  double g1 = rep.gap_curve.back().second;
  rep.shrink_factor = g0 / g1;

  // single-linkage clusters of the finest level at 10x its smallest gap
  if (finest.size() >= 1 && std::isfinite(g1)) {
    double linkage = opt.cluster_scale * g1;
    std::sort(finest.begin(), finest.end(), lex_less);
    // 1D: linear sweep; nD: grid-based agglomeration via union of close pairs
    std::vector<int> comp(finest.size(), -1);
    if (spectrum.dim == 1) {
      int c = -1;
      for (std::size_t i = 0; i < finest.size(); ++i) {
        if (i == 0 || finest[i][0] - finest[i - 1][0] > linkage) ++c;
        comp[i] = c;
      }
    } else {
      // union-find over pairs within linkage distance
      std::vector<std::size_t> parent(finest.size());
      for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
      std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
      };
      detail::CellGrid grid(finest, linkage);
      for (std::size_t i = 0; i < finest.size(); ++i)
        grid.for_neighborhood(finest[i], 1, [&](std::size_t j) {
          if (j > i && dist(finest[i], finest[j]) <= linkage)
            parent[find(i)] = find(j);
        });
      std::vector<int> remap(finest.size(), -1);
      int next = 0;
      for (std::size_t i = 0; i < finest.size(); ++i) {
        std::size_t r = find(i);
        if (remap[r] < 0) remap[r] = next++;
        comp[i] = remap[r];
      }
    }
    int nc = 0;
    for (int c : comp) nc = std::max(nc, c + 1);
    std::vector<Vec> centers(static_cast<std::size_t>(nc), Vec());
    std::vector<std::size_t> cnt(static_cast<std::size_t>(nc), 0);
    for (std::size_t i = 0; i < finest.size(); ++i) {
      std::size_t c = static_cast<std::size_t>(comp[i]);
      if (cnt[c] == 0) centers[c] = Vec::zero(spectrum.dim);
      centers[c] = centers[c] + finest[i];
      cnt[c] += 1;
    }
    for (std::size_t c = 0; c < centers.size(); ++c)
      centers[c] = (1.0 / static_cast<double>(cnt[c])) * centers[c];
    std::sort(centers.begin(), centers.end(), lex_less);
    rep.cluster_centers = centers;
    // Accumulation witnesses: atoms in clusters with at least two members.
    // Their covering radius over the box measures whether accumulation
    // happens everywhere (small) or only in isolated spots (large).
    std::vector<Vec> witnesses;
    for (std::size_t i = 0; i < finest.size(); ++i)
      if (cnt[static_cast<std::size_t>(comp[i])] >= 2) witnesses.push_back(finest[i]);
    if (!witnesses.empty()) {
      PointSet wps(std::move(witnesses), spectrum.box, spectrum.dedup_tol);
      rep.cluster_cover_radius = covering_radius(wps, spectrum.box).radius;
    } else {
      rep.cluster_cover_radius = std::numeric_limits<double>::max();
    }
  }

  if (!std::isfinite(g1) || rep.level_counts.back() < 2) {
    rep.verdict = DichotomyVerdict::inconclusive;
  } else if (rep.shrink_factor >= opt.shrink_ratio) {
    rep.verdict = DichotomyVerdict::accumulating;
  } else if (rep.shrink_factor <= opt.flat_ratio) {
    rep.verdict = DichotomyVerdict::uniformly_discrete;
  } else {
    rep.verdict = DichotomyVerdict::inconclusive;
  }
  return rep;
}

}  // namespace fqc
