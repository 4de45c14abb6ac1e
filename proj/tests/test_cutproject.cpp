// Cut-and-project machinery: projection schemes, model sets, weighted model
// measures, and dual-side spectrum prediction. The golden-ratio chain gives
// exact closed-form oracles (point counts, gap values, densities).
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include <fqc/cutproject.hpp>
#include <fqc/measure.hpp>
#include <fqc/window.hpp>

using namespace fqc;
using Catch::Approx;

namespace {
const double kPhi = 0.5 * (1.0 + std::sqrt(5.0));
}

TEST_CASE("window region: intervals, measure, disjointness guard", "[cutproject]") {
  WindowRegion w = WindowRegion::interval(-0.5, 1.5);
  REQUIRE(w.measure() == Approx(2.0));
  REQUIRE(w.contains(Vec{0.0}));
  REQUIRE_FALSE(w.contains(Vec{1.6}));

  Box a(0.0, 1.0), b(0.5, 2.0);
  REQUIRE_THROWS_AS(WindowRegion(1, {a, b}), GuardError);

  Box c(1.0, 2.0);
  WindowRegion two(1, {a, c});
  REQUIRE(two.measure() == Approx(2.0));
  REQUIRE(two.hull().lo[0] == Approx(0.0));
  REQUIRE(two.hull().hi[0] == Approx(2.0));
}

TEST_CASE("lattice region enumeration is complete for the integer grid",
          "[cutproject]") {
  Lattice Z2 = Lattice::from_generators({Vec(1.0, 0.0), Vec(0.0, 1.0)});
  Box region = Box::symmetric(2, 3.0);
  std::set<std::pair<long, long>> seen;
  detail::enumerate_lattice_region(Z2, region, 1000000, [&](const Vec& g) {
    if (region.contains(g))
      seen.insert({std::lround(g[0]), std::lround(g[1])});
  });
  REQUIRE(seen.size() == 49);  // 7 x 7 integer points in [-3, 3]^2
}

TEST_CASE("enumeration cap triggers a guard error", "[cutproject]") {
  Lattice Z2 = Lattice::from_generators({Vec(1.0, 0.0), Vec(0.0, 1.0)});
  Box region = Box::symmetric(2, 50.0);
  REQUIRE_THROWS_AS(
      detail::enumerate_lattice_region(Z2, region, 10, [](const Vec&) {}),
      GuardError);
}

TEST_CASE("golden-ratio scheme certificates", "[cutproject][golden]") {
  CutProjectScheme s = fibonacci_scheme();
  REQUIRE(s.physical_dim == 1);
  REQUIRE(s.internal_dim == 1);
  REQUIRE(s.total.det_abs == Approx(std::sqrt(5.0)).margin(1e-12));
  REQUIRE(s.p1_injective);
  REQUIRE(s.p2_injective);
  REQUIRE(s.p2_dense);
  REQUIRE(s.min_p1_image > 0);
  REQUIRE(s.min_p2_image > 0);
}

TEST_CASE("axis-aligned product lattice has non-injective projections",
          "[cutproject]") {
  Lattice Z2 = Lattice::from_generators({Vec(1.0, 0.0), Vec(0.0, 1.0)});
  CutProjectScheme s = make_scheme(Z2, 1, 1, 5);
  REQUIRE_FALSE(s.p1_injective);  // (0, 1) projects to 0
  REQUIRE_FALSE(s.p2_injective);
}

TEST_CASE("golden chain in a half-width 50 box: count, gaps, density",
          "[cutproject][golden]") {
  CutProjectScheme s = fibonacci_scheme();
  WindowRegion w = WindowRegion::interval(-1.0 / kPhi, 1.0);
  PointSet ps = model_set(s, w, Box::symmetric(1, 50.0));

  REQUIRE(ps.size() == 74);

  // gaps take exactly three values: phi - 1, 1, phi
  std::set<long long> gaps;
  for (std::size_t i = 1; i < ps.size(); ++i)
    gaps.insert(std::llround((ps.points[i][0] - ps.points[i - 1][0]) * 1e9));
  REQUIRE(gaps.size() == 3);
  REQUIRE(gaps.count(std::llround((kPhi - 1.0) * 1e9)) == 1);
  REQUIRE(gaps.count(1000000000LL) == 1);
  REQUIRE(gaps.count(std::llround(kPhi * 1e9)) == 1);

  // density = window length / lattice determinant = phi / sqrt(5)
  double density = static_cast<double>(ps.size()) / 100.0;
  REQUIRE(density == Approx(kPhi / std::sqrt(5.0)).epsilon(0.03));
}

TEST_CASE("golden chain is a Meyer set", "[cutproject][golden]") {
  CutProjectScheme s = fibonacci_scheme();
  WindowRegion w = WindowRegion::interval(-1.0 / kPhi, 1.0);
  PointSet ps = model_set(s, w, Box::symmetric(1, 50.0));
  DiscretenessReport rep = classify(ps);
  REQUIRE(rep.delone);
  REQUIRE(rep.flc);
  REQUIRE(rep.meyer);
  REQUIRE(rep.min_sep == Approx(kPhi - 1.0).margin(1e-9));
}

TEST_CASE("empty window gives the empty model set", "[cutproject]") {
  CutProjectScheme s = fibonacci_scheme();
  PointSet ps = model_set(s, WindowRegion(), Box::symmetric(1, 50.0));
  REQUIRE(ps.size() == 0);
}

TEST_CASE("model set window monotonicity", "[cutproject][golden]") {
  CutProjectScheme s = fibonacci_scheme();
  Box box = Box::symmetric(1, 40.0);
  PointSet small = model_set(s, WindowRegion::interval(-0.3, 0.3), box);
  PointSet large = model_set(s, WindowRegion::interval(-0.6, 0.8), box);
  REQUIRE(small.size() < large.size());
  // every point of the smaller set appears in the larger one
  for (const Vec& p : small.points) {
    bool found = false;
    for (const Vec& q : large.points)
      if (std::abs(p[0] - q[0]) < 1e-9) found = true;
    REQUIRE(found);
  }
}

TEST_CASE("weighted model measure: support containment and mass", "[cutproject]") {
  CutProjectScheme s = fibonacci_scheme();
  Window wf = bspline_window(2, 1.0);
  Box box = Box::symmetric(1, 50.0);
  DiscreteMeasure mu = model_measure(s, wf, box);

  // support sits inside the model set cut by the transform support [-1, 1]
  PointSet covering = model_set(s, WindowRegion::interval(-1.0, 1.0), box);
  for (const Vec& p : mu.support) {
    bool found = false;
    for (const Vec& q : covering.points)
      if (std::abs(p[0] - q[0]) < 1e-9) found = true;
    REQUIRE(found);
  }

  // weights are transform samples: positive and bounded by the peak value
  double peak = wf.transform(0.0);
  for (const Complex& w : mu.weights) {
    REQUIRE(w.imag() == 0.0);
    REQUIRE(w.real() > 0.0);
    REQUIRE(w.real() <= peak + 1e-12);
  }

  // total mass approximates box volume * profile(0) / det
  double mass = 0;
  for (const Complex& w : mu.weights) mass += w.real();
  REQUIRE(mass == Approx(100.0 * 1.0 / std::sqrt(5.0)).epsilon(0.05));
}

TEST_CASE("predicted spectrum carries weight one over root five at zero",
          "[cutproject][spectrum]") {
  CutProjectScheme s = fibonacci_scheme();
  Window wf = bspline_window(2, 1.0);
  DiscreteMeasure spec = predicted_spectrum(s, wf, Box::symmetric(1, 5.0), 1e-6);

  bool found_zero = false;
  double inv_root5 = 1.0 / std::sqrt(5.0);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (std::abs(spec.support[i][0]) < 1e-12) {
      found_zero = true;
      REQUIRE(spec.weights[i].real() == Approx(inv_root5).margin(1e-12));
    }
    REQUIRE(spec.weights[i].real() <= inv_root5 + 1e-12);
    REQUIRE(spec.weights[i].imag() == 0.0);
  }
  REQUIRE(found_zero);
}

TEST_CASE("lowering the weight floor only adds atoms", "[cutproject][spectrum]") {
  CutProjectScheme s = fibonacci_scheme();
  Window wf = bspline_window(2, 1.0);
  Box fbox = Box::symmetric(1, 5.0);
  DiscreteMeasure coarse = predicted_spectrum(s, wf, fbox, 1e-3);
  DiscreteMeasure fine = predicted_spectrum(s, wf, fbox, 1e-6);
  REQUIRE(coarse.size() < fine.size());
  for (std::size_t i = 0; i < coarse.size(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < fine.size(); ++j)
      if (std::abs(coarse.support[i][0] - fine.support[j][0]) < 1e-9 &&
          std::abs(coarse.weights[i] - fine.weights[j]) < 1e-12)
        found = true;
    REQUIRE(found);
  }
}

TEST_CASE("averaged transform of the model measure approaches the prediction",
          "[cutproject][spectrum]") {
  // Duality law: transforms of the weighted chain, averaged over the box,
  // converge to the predicted atom weights as the box grows. Compare the
  // relative error at half-width 250 against half-width 500 on the five
  // strongest predicted frequencies.
  CutProjectScheme s = fibonacci_scheme();
  Window wf = bspline_window(2, 1.0);
  DiscreteMeasure spec = predicted_spectrum(s, wf, Box::symmetric(1, 3.0), 1e-4);

  std::vector<std::size_t> order(spec.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(spec.weights[a]) > std::abs(spec.weights[b]);
  });
  order.resize(5);

  auto max_rel_err = [&](double hw) {
    DiscreteMeasure mu = model_measure(s, wf, Box::symmetric(1, hw));
    double worst = 0;
    for (std::size_t idx : order) {
      Complex avg = ft_at(mu, spec.support[idx]) / (2.0 * hw);
      double rel = std::abs(avg - spec.weights[idx]) / std::abs(spec.weights[idx]);
      worst = std::max(worst, rel);
    }
    return worst;
  };

  double e250 = max_rel_err(250.0);
  double e500 = max_rel_err(500.0);
  REQUIRE(e500 < e250);
  REQUIRE(e500 < 5e-3);
}

TEST_CASE("model set scales with the box: windowed chain in a small box is a "
          "restriction of the large-box chain",
          "[cutproject][golden]") {
  CutProjectScheme s = fibonacci_scheme();
  WindowRegion w = WindowRegion::interval(-1.0 / kPhi, 1.0);
  PointSet big = model_set(s, w, Box::symmetric(1, 50.0));
  PointSet small = model_set(s, w, Box::symmetric(1, 20.0));
  for (const Vec& p : small.points) {
    bool found = false;
    for (const Vec& q : big.points)
      if (std::abs(p[0] - q[0]) < 1e-9) found = true;
    REQUIRE(found);
  }
  REQUIRE(small.size() < big.size());
}
