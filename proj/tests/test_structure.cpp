// Structural recovery: trigonometric weight polynomials, lattice and coset
// fitting, periodic comb representations, the spectrum gap dichotomy, and the
// sparse-support window construction. Oracles are synthetic combs whose
// representation is known by construction.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include <fqc/cutproject.hpp>
#include <fqc/nowhere_dense.hpp>
#include <fqc/structure.hpp>
#include <fqc/window.hpp>

using namespace fqc;
using Catch::Approx;

namespace {

// comb over g*Z + t in [-hw, hw] with weights given by eval
template <typename F>
DiscreteMeasure make_comb(double g, double t, double hw, F&& weight) {
  std::vector<Atom> atoms;
  long k0 = std::lround(std::floor((-hw - t) / g));
  long k1 = std::lround(std::ceil((hw - t) / g));
  for (long k = k0; k <= k1; ++k) {
    double x = g * static_cast<double>(k) + t;
    if (std::abs(x) <= hw) atoms.push_back({Vec{x}, weight(x)});
  }
  return DiscreteMeasure(std::move(atoms), Box::symmetric(1, hw));
}

DiscreteMeasure freq_atoms(std::initializer_list<double> fs, double hw) {
  std::vector<Atom> atoms;
  for (double f : fs) atoms.push_back({Vec{f}, Complex(1.0, 0.0)});
  return DiscreteMeasure(std::move(atoms), Box::symmetric(1, hw));
}

}  // namespace

TEST_CASE("trigonometric polynomial evaluates its closed form", "[structure][trig]") {
  TrigPolynomial p;
  p.frequencies = {Vec{0.0}, Vec{0.5}};
  p.coefficients = {Complex(2.0, 0.0), Complex(0.0, 1.0)};
  // at x = 1: 2 + i e^{i pi} = 2 - i
  Complex v = p.eval(Vec{1.0});
  REQUIRE(std::abs(v - Complex(2.0, -1.0)) < 1e-12);
  REQUIRE(std::abs(p.eval(Vec{0.0}) - Complex(2.0, 1.0)) < 1e-12);
}

TEST_CASE("tolerant gcd folds near-multiples", "[structure][gcd]") {
  REQUIRE(detail::approx_gcd({2.1, 3.5, 0.7000001}, 1e-4) == Approx(0.7).margin(1e-4));
  REQUIRE(detail::approx_gcd({4.0, 6.0}, 1e-9) == Approx(2.0).margin(1e-9));
  // values below tol are ignored
  REQUIRE(detail::approx_gcd({1e-7, 5.0}, 1e-4) == Approx(5.0));
}

TEST_CASE("frequency reduction into the dual fundamental cell", "[structure]") {
  Lattice Z = Lattice::scaled_int(1, 1.0);
  Lattice dual = Z.dual();
  REQUIRE(reduce_mod_dual(dual, Vec{2.7})[0] == Approx(0.7).margin(1e-12));
  REQUIRE(reduce_mod_dual(dual, Vec{-0.3})[0] == Approx(0.7).margin(1e-12));
  REQUIRE(reduce_mod_dual(dual, Vec{0.4})[0] == Approx(0.4).margin(1e-12));
}

TEST_CASE("lattice fit on the integers", "[structure][fit]") {
  DiscreteMeasure comb = make_comb(1.0, 0.0, 50.0, [](double) { return Complex(1, 0); });
  PointSet ps(comb.support, comb.box);
  LatticeFit fit = fit_lattice(ps);
  REQUIRE(fit.found);
  REQUIRE(fit.lattice.det_abs == Approx(1.0).epsilon(1e-6));
  REQUIRE(fit.translates.size() == 1);
  REQUIRE(fit.coverage == Approx(1.0));
}

TEST_CASE("lattice fit resolves two cosets", "[structure][fit]") {
  std::vector<Atom> atoms;
  for (int k = -40; k <= 40; ++k) {
    atoms.push_back({Vec{double(k)}, Complex(1, 0)});
    if (k < 40) atoms.push_back({Vec{k + 1.0 / 3.0}, Complex(1, 0)});
  }
  DiscreteMeasure mu(std::move(atoms), Box::symmetric(1, 40.0));
  PointSet ps(mu.support, mu.box);
  LatticeFit fit = fit_lattice(ps);
  REQUIRE(fit.found);
  REQUIRE(fit.lattice.det_abs == Approx(1.0).epsilon(1e-6));
  REQUIRE(fit.translates.size() == 2);
  REQUIRE(fit.coverage == Approx(1.0));
}

TEST_CASE("lattice fit is scale equivariant", "[structure][fit]") {
  double s = 0.37;
  DiscreteMeasure a = make_comb(1.0, 0.0, 50.0, [](double) { return Complex(1, 0); });
  DiscreteMeasure b = make_comb(s, 0.0, 50.0 * s, [](double) { return Complex(1, 0); });
  LatticeFit fa = fit_lattice(PointSet(a.support, a.box));
  LatticeFit fb = fit_lattice(PointSet(b.support, b.box));
  REQUIRE(fa.found);
  REQUIRE(fb.found);
  REQUIRE(fb.lattice.det_abs == Approx(s * fa.lattice.det_abs).epsilon(1e-6));
}

TEST_CASE("aperiodic golden chain defeats the lattice fit", "[structure][fit]") {
  CutProjectScheme s = fibonacci_scheme();
  WindowRegion w = WindowRegion::interval(-1.0 / (0.5 * (1 + std::sqrt(5.0))), 1.0);
  PointSet ps = model_set(s, w, Box::symmetric(1, 50.0));
  LatticeFit fit = fit_lattice(ps);
  REQUIRE_FALSE(fit.found);
  REQUIRE_FALSE(fit.failure.empty());
}

TEST_CASE("constant weights recover as a single-frequency comb",
          "[structure][recover]") {
  DiscreteMeasure mu = make_comb(1.0, 0.0, 50.0, [](double) { return Complex(1, 0); });
  DiscreteMeasure spec = freq_atoms({0.0}, 5.0);
  CombRepresentation rep = recover_comb(mu, spec);
  REQUIRE(rep.representable);
  REQUIRE(rep.residual < 1e-10);
  REQUIRE(rep.coverage == Approx(1.0));
  REQUIRE(rep.lattice.det_abs == Approx(1.0).epsilon(1e-6));

  DiscreteMeasure back = evaluate_comb(rep, mu.box);
  REQUIRE(back.size() == mu.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    REQUIRE(std::abs(back.support[i][0] - mu.support[i][0]) < 1e-9);
    REQUIRE(std::abs(back.weights[i] - mu.weights[i]) < 1e-8);
  }
  REQUIRE(coset_cover_check(PointSet(mu.support, mu.box), rep) == Approx(1.0));
}

TEST_CASE("irrational modulation frequencies fold into the dual cell",
          "[structure][recover]") {
  double theta = std::sqrt(2.0) - 1.0;  // 0.414214
  DiscreteMeasure mu = make_comb(1.0, 0.0, 60.0, [theta](double x) {
    return Complex(1.0 + std::cos(kTwoPi * theta * x), 0.0);
  });
  // candidate frequencies offered un-reduced: integer shifts must not matter
  DiscreteMeasure spec = freq_atoms({1.0, 1.0 + theta, -theta}, 3.0);
  CombRepresentation rep = recover_comb(mu, spec);
  REQUIRE(rep.representable);
  REQUIRE(rep.residual < 1e-8);

  REQUIRE(rep.polys.size() == 1);
  for (const Vec& f : rep.polys[0].frequencies) {
    double r = f[0] - std::floor(f[0]);
    bool known = std::abs(r) < 1e-6 || std::abs(r - theta) < 1e-6 ||
                 std::abs(r - (1.0 - theta)) < 1e-6;
    REQUIRE(known);
  }
}

TEST_CASE("two cosets with distinct weight laws", "[structure][recover]") {
  std::vector<Atom> atoms;
  for (int k = -40; k <= 40; ++k) {
    atoms.push_back({Vec{double(k)}, Complex(2.0, 0.0)});
    if (k < 40) atoms.push_back({Vec{k + 1.0 / 3.0}, Complex(-1.0, 0.5)});
  }
  DiscreteMeasure mu(std::move(atoms), Box::symmetric(1, 40.0));
  DiscreteMeasure spec = freq_atoms({0.0}, 3.0);
  CombRepresentation rep = recover_comb(mu, spec);
  REQUIRE(rep.representable);
  REQUIRE(rep.translates.size() == 2);

  DiscreteMeasure back = evaluate_comb(rep, mu.box);
  REQUIRE(back.size() == mu.size());
  for (std::size_t i = 0; i < back.size(); ++i)
    REQUIRE(std::abs(back.weights[i] - mu.weights[i]) < 1e-8);
}

TEST_CASE("seeded round trips through recovery", "[structure][recover]") {
  std::mt19937_64 rng(4242);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  int failures = 0;
  for (int trial = 0; trial < 10; ++trial) {
    double g = 0.5 + 1.0 * unit();
    int nfreq = 1 + static_cast<int>(unit() * 3);
    std::vector<double> freqs;
    std::vector<Complex> coeffs;
    freqs.push_back(0.0);
    coeffs.push_back(Complex(1.0 + unit(), 0.0));
    for (int j = 1; j < nfreq; ++j) {
      freqs.push_back(unit() / g);
      coeffs.push_back(Complex(2.0 * unit() - 1.0, 2.0 * unit() - 1.0));
    }
    auto weight = [&](double x) {
      Complex s{0, 0};
      for (std::size_t j = 0; j < freqs.size(); ++j) {
        double ph = kTwoPi * freqs[j] * x;
        s += coeffs[j] * Complex(std::cos(ph), std::sin(ph));
      }
      return s;
    };
    double hw = 60.0 * g;
    DiscreteMeasure mu = make_comb(g, 0.0, hw, weight);

    std::vector<Atom> satoms;
    for (double f : freqs) satoms.push_back({Vec{f}, Complex(1, 0)});
    DiscreteMeasure spec(std::move(satoms), Box::symmetric(1, 2.0 / g));

    CombRepresentation rep = recover_comb(mu, spec);
    if (!rep.representable) {
      ++failures;
      continue;
    }
    // reconstructed atoms must follow the analytic weight law; count can
    // drift by boundary atoms when the fitted basis differs by ~1e-10
    DiscreteMeasure back = evaluate_comb(rep, mu.box);
    REQUIRE(back.size() >= mu.size() - 2);
    double worst = 0;
    for (std::size_t i = 0; i < back.size(); ++i)
      worst = std::max(worst, std::abs(back.weights[i] - weight(back.support[i][0])));
    REQUIRE(worst < 1e-8);
  }
  REQUIRE(failures == 0);
}

TEST_CASE("coset coverage check separates on and off lattice points",
          "[structure][recover]") {
  CombRepresentation rep;
  rep.lattice = Lattice::scaled_int(1, 1.0);
  rep.translates = {Vec{0.0}};
  rep.polys.resize(1);

  std::vector<Vec> on, off;
  for (int k = -5; k <= 5; ++k) {
    on.push_back(Vec{double(k)});
    off.push_back(Vec{k + 0.5});
  }
  REQUIRE(coset_cover_check(PointSet(on, Box::symmetric(1, 5.0)), rep) == 1.0);
  REQUIRE(coset_cover_check(PointSet(off, Box::symmetric(1, 6.0)), rep) == 0.0);
}

TEST_CASE("flat weight spectrum certifies uniform discreteness",
          "[structure][dichotomy]") {
  DiscreteMeasure spec = make_comb(1.0, 0.0, 20.0, [](double) { return Complex(1, 0); });
  DichotomyReport rep = dichotomy_report(spec, {1e-1, 1e-2, 1e-3});
  REQUIRE(rep.verdict == DichotomyVerdict::uniformly_discrete);
  REQUIRE(rep.shrink_factor <= 1.1);
  REQUIRE(rep.gap_curve.size() == 3);
  // identical level sets at every threshold
  REQUIRE(rep.level_counts[0] == rep.level_counts[2]);
}

TEST_CASE("dichotomy is invariant under weight rescaling", "[structure][dichotomy]") {
  CutProjectScheme s = fibonacci_scheme();
  Window wf = bspline_window(2, 1.0);
  DiscreteMeasure spec = predicted_spectrum(s, wf, Box::symmetric(1, 20.0), 1e-6);
  DiscreteMeasure scaled = scale_weights(spec, Complex(7.3, 0.0));

  DichotomyReport a = dichotomy_report(spec, {1e-1, 1e-2, 1e-3});
  DichotomyReport b = dichotomy_report(scaled, {1e-1, 1e-2, 1e-3});
  REQUIRE(a.verdict == b.verdict);
  REQUIRE(a.shrink_factor == Approx(b.shrink_factor).margin(1e-12));
  REQUIRE(a.level_counts == b.level_counts);
}

TEST_CASE("dense spectrum of the golden chain accumulates", "[structure][dichotomy]") {
  CutProjectScheme s = fibonacci_scheme();
  Window wf = bspline_window(2, 1.0);
  DiscreteMeasure spec = predicted_spectrum(s, wf, Box::symmetric(1, 20.0), 1e-6);

  DichotomyReport rep = dichotomy_report(spec, {1e-1, 1e-2, 1e-3});
  REQUIRE(rep.verdict == DichotomyVerdict::accumulating);
  REQUIRE(rep.shrink_factor >= 10.0);
  // gap curve decreases as weaker atoms enter
  REQUIRE(rep.gap_curve.front().second > rep.gap_curve.back().second);
  // accumulation happens everywhere: witness cover radius is small
  REQUIRE(rep.cluster_cover_radius <= 5.0);
  REQUIRE_FALSE(rep.cluster_centers.empty());
}

TEST_CASE("dichotomy needs data: single atom is inconclusive",
          "[structure][dichotomy]") {
  DiscreteMeasure spec({{Vec{0.0}, Complex(1, 0)}}, Box::symmetric(1, 1.0));
  DichotomyReport rep = dichotomy_report(spec, {1e-1, 1e-2, 1e-3});
  REQUIRE(rep.verdict == DichotomyVerdict::inconclusive);
}

TEST_CASE("sparsity scale search on synthetic sets", "[structure][sparse]") {
  // ten consecutive integers, gamma 1/2: a window of length M holds all ten,
  // so admissibility needs 10 <= M/2
  std::vector<double> dense;
  for (int i = 0; i < 10; ++i) dense.push_back(double(i));
  REQUIRE(detail::smallest_sparse_window(dense, 0.5, 1000) == 20);

  // far-separated points: only the singleton condition 1 <= gamma * M binds
  std::vector<double> sparse = {0.0, 100.0, 200.0};
  REQUIRE(detail::smallest_sparse_window(sparse, 0.5, 1000) == 2);
}

TEST_CASE("dual strip enumeration matches brute force", "[structure][sparse]") {
  CutProjectScheme s = fibonacci_scheme();
  std::vector<double> got = detail::dual_strip(s, 0.3, 0.5, 50.0);

  Lattice dual = s.total.dual();
  std::vector<double> expect;
  for (int a = -200; a <= 200; ++a)
    for (int b = -200; b <= 200; ++b) {
      Vec g = double(a) * dual.generator(0) + double(b) * dual.generator(1);
      if (g[0] >= 0.3 && g[0] <= 0.5 && std::abs(g[1]) <= 50.0)
        expect.push_back(g[1]);
    }
  std::sort(expect.begin(), expect.end());
  REQUIRE(got.size() == expect.size());
  for (std::size_t i = 0; i < got.size(); ++i)
    REQUIRE(got[i] == Approx(expect[i]).margin(1e-9));
}

TEST_CASE("sine-product surrogate: values, signs, zeros", "[structure][sparse]") {
  WindowSurrogate w;
  w.zeros = {0.0, 1.0};
  w.factor_band = 0.5;
  w.max_log10 = 0.0;

  auto mid = w.eval(0.5);
  REQUIRE(mid.sign == -1);
  REQUIRE(mid.log10_mag ==
          Approx(2.0 * std::log10(std::sin(kPi * 0.25))).margin(1e-12));
  REQUIRE(w.relative_squared(0.5) ==
          Approx(std::pow(std::sin(kPi * 0.25), 4.0)).margin(1e-12));

  REQUIRE(w.eval(0.0).sign == 0);
  REQUIRE(w.relative_squared(1.0) == 0.0);

  // sign flips across a simple zero
  REQUIRE(w.eval(1.0 - 0.01).sign != w.eval(1.0 + 0.01).sign);
}

TEST_CASE("ball budget above the bandwidth allowance is rejected",
          "[structure][sparse]") {
  NowhereDenseConfig cfg;
  cfg.centers = {0.4};
  cfg.radii = {0.15};  // 2r = 0.3 >= epsilon / sqrt(5) = 0.2236
  cfg.epsilon = 0.5;
  REQUIRE_THROWS_AS(nowhere_dense_construction(fibonacci_scheme(), cfg), GuardError);
}

TEST_CASE("sparse-support construction produces a certified gap",
          "[structure][sparse][heavy]") {
  NowhereDenseConfig cfg;
  cfg.centers = {0.4};
  cfg.radii = {0.1};
  cfg.epsilon = 0.5;
  NowhereDenseReport rep = nowhere_dense_construction(fibonacci_scheme(), cfg);

  REQUIRE(rep.sets.size() == 1);
  const QSetReport& q = rep.sets[0];
  REQUIRE(q.T == q.M * q.M * q.M + q.M);
  REQUIRE(q.q_count > 0);
  REQUIRE(rep.truncation_used >= static_cast<double>(q.T));
  REQUIRE(rep.budget_lhs < rep.budget_rhs);

  // the frequency gap sits strictly inside the ball and has positive width
  REQUIRE(q.omega_width > 0.0);
  REQUIRE(q.omega_lo >= q.ball_lo);
  REQUIRE(q.omega_hi <= q.ball_hi);

  // no enumerated dual point with small internal part lands inside the gap
  CutProjectScheme s = fibonacci_scheme();
  Lattice dual = s.total.dual();
  std::size_t inside = 0;
  {
    Box region(2);
    region.lo[0] = q.omega_lo;
    region.hi[0] = q.omega_hi;
    region.lo[1] = -static_cast<double>(q.T);
    region.hi[1] = static_cast<double>(q.T);
    detail::enumerate_lattice_region(dual, region, 30000000, [&](const Vec& g) {
      if (g[0] > q.omega_lo && g[0] < q.omega_hi &&
          std::abs(g[1]) < static_cast<double>(q.T))
        ++inside;
    });
  }
  REQUIRE(inside == 0);

  // surrogate: squared bandwidth stays under the budget and the window does
  // not vanish inside the gap
  REQUIRE(rep.surrogate.bandwidth_squared < rep.surrogate.budget);
  REQUIRE(rep.surrogate.eval(0.5 * (q.omega_lo + q.omega_hi)).sign != 0);
  for (std::size_t i = 0; i < std::min<std::size_t>(5, rep.surrogate.zeros.size()); ++i)
    REQUIRE(rep.surrogate.relative_squared(rep.surrogate.zeros[i]) == 0.0);
}
