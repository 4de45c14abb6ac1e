// Discrete measures, Fourier transforms, grid evaluation, positivity
// functionals, and the analytic window family. Reference values are computed
// in closed form or by direct summation inside the test.
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Eigenvalues>

#include <fqc/measure.hpp>
#include <fqc/window.hpp>

using namespace fqc;
using Catch::Approx;

namespace {

DiscreteMeasure random_measure(unsigned long long seed, int n, double hw) {
  std::mt19937_64 rng(seed);
  auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Atom> atoms;
  for (int i = 0; i < n; ++i)
    atoms.push_back({Vec{(2.0 * unit() - 1.0) * hw},
                     Complex(2.0 * unit() - 1.0, 2.0 * unit() - 1.0)});
  return DiscreteMeasure(std::move(atoms), Box::symmetric(1, hw));
}

Complex direct_ft(const DiscreteMeasure& mu, double t) {
  Complex s{0, 0};
  for (std::size_t i = 0; i < mu.size(); ++i) {
    double ph = -kTwoPi * mu.support[i][0] * t;
    s += mu.weights[i] * Complex(std::cos(ph), std::sin(ph));
  }
  return s;
}

}  // namespace

TEST_CASE("measure construction merges nearby atoms and purges zeros", "[measure]") {
  std::vector<Atom> atoms = {
      {Vec{1.0}, Complex(2.0, 0.0)},
      {Vec{1.0 + 1e-12}, Complex(3.0, 0.0)},
      {Vec{2.0}, Complex(1.0, 0.0)},
      {Vec{2.0 + 1e-12}, Complex(-1.0, 0.0)},  // cancels below purge_tol
      {Vec{-4.0}, Complex(0.0, 0.5)},
  };
  DiscreteMeasure mu(std::move(atoms), Box::symmetric(1, 5.0));
  REQUIRE(mu.size() == 2);
  REQUIRE(mu.support[0][0] == Approx(-4.0));
  REQUIRE(mu.support[1][0] == Approx(1.0).margin(1e-9));
  REQUIRE(mu.weights[1] == Complex(5.0, 0.0));
  REQUIRE(mu.total_variation() == Approx(5.5));
}

TEST_CASE("transform of a single atom matches the closed form", "[measure][ft]") {
  Complex w(0.7, -0.4);
  double x = 1.75, t = 0.3125;
  DiscreteMeasure mu({{Vec{x}, w}}, Box::symmetric(1, 2.0));
  Complex expect = w * std::polar(1.0, -kTwoPi * x * t);
  Complex got = ft_at(mu, t);
  REQUIRE(std::abs(got - expect) < 1e-15);
  REQUIRE(std::abs(ft_at(mu, 0.0) - w) < 1e-15);
}

TEST_CASE("transform is linear and matches direct summation", "[measure][ft]") {
  DiscreteMeasure mu = random_measure(11, 60, 8.0);
  for (double t : {-1.25, -0.1, 0.0, 0.37, 2.0}) {
    Complex got = ft_at(mu, t);
    Complex ref = direct_ft(mu, t);
    REQUIRE(std::abs(got - ref) < 1e-12 * mu.total_variation());
  }
}

TEST_CASE("translating a measure multiplies its transform by a phase", "[measure][ft]") {
  DiscreteMeasure mu = random_measure(12, 40, 6.0);
  Vec v{0.625};
  DiscreteMeasure shifted = translate(mu, v);
  for (double t : {-0.8, 0.15, 1.9}) {
    Complex lhs = ft_at(shifted, t);
    Complex rhs = std::polar(1.0, -kTwoPi * v[0] * t) * ft_at(mu, t);
    REQUIRE(std::abs(lhs - rhs) < 1e-12 * mu.total_variation());
  }
}

TEST_CASE("modulating a measure shifts its transform", "[measure][ft]") {
  DiscreteMeasure mu = random_measure(13, 40, 6.0);
  Vec omega{0.375};
  DiscreteMeasure mod = modulate(mu, omega);
  for (double t : {-0.6, 0.0, 1.3}) {
    Complex lhs = ft_at(mod, t);
    Complex rhs = ft_at(mu, Vec{t + omega[0]});
    REQUIRE(std::abs(lhs - rhs) < 1e-12 * mu.total_variation());
  }
}

TEST_CASE("frequency grid coordinates and step", "[measure][grid]") {
  FrequencyGrid g = FrequencyGrid::line(0.0, 5.0, 11);
  REQUIRE(g.total() == 11);
  REQUIRE(g.step(0) == Approx(1.0));
  REQUIRE(g.coordinate(0, 0) == Approx(-5.0));
  REQUIRE(g.coordinate(0, 10) == Approx(5.0));
  REQUIRE(g.point(5)[0] == Approx(0.0).margin(1e-15));
  REQUIRE_THROWS_AS(FrequencyGrid::line(0.0, 1.0, 1).validate(), GuardError);
}

TEST_CASE("grid transform agrees with pointwise transform", "[measure][ft]") {
  DiscreteMeasure mu = random_measure(14, 80, 10.0);
  FrequencyGrid g = FrequencyGrid::line(0.3, 4.0, 257);
  TransformTrace tr = ft_grid(mu, g);
  double tv = mu.total_variation();
  for (std::size_t i = 0; i < tr.values.size(); i += 16) {
    Complex ref = ft_at(mu, g.point(i));
    REQUIRE(std::abs(tr.values[i] - ref) < 1e-11 * tv);
  }
}

TEST_CASE("grid transform is bit-identical across thread counts", "[measure][ft][threads]") {
  DiscreteMeasure mu = random_measure(15, 200, 12.0);
  FrequencyGrid g = FrequencyGrid::line(0.0, 6.0, 1001);
  TransformTrace t1 = ft_grid(mu, g, 1);
  TransformTrace t2 = ft_grid(mu, g, 2);
  TransformTrace t8 = ft_grid(mu, g, 8);
  for (std::size_t i = 0; i < t1.values.size(); ++i) {
    REQUIRE(t1.values[i].real() == t2.values[i].real());
    REQUIRE(t1.values[i].imag() == t2.values[i].imag());
    REQUIRE(t1.values[i].real() == t8.values[i].real());
    REQUIRE(t1.values[i].imag() == t8.values[i].imag());
  }
}

TEST_CASE("gram matrix of a positive measure is Hermitian positive semidefinite",
          "[measure][gram]") {
  std::vector<Atom> atoms;
  for (int k = -5; k <= 5; ++k) atoms.push_back({Vec{double(k)}, Complex(1.0, 0.0)});
  DiscreteMeasure mu(std::move(atoms), Box::symmetric(1, 5.0));

  std::vector<Vec> freqs = {Vec{0.0}, Vec{0.1}, Vec{0.25}, Vec{0.4}, Vec{0.77}};
  Eigen::MatrixXcd G = gram_matrix(mu, freqs);
  REQUIRE((G - G.adjoint()).norm() == 0.0);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G);
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    REQUIRE(es.eigenvalues()[i] >= -1e-9 * mu.total_variation());
}

TEST_CASE("shift-overlap set of a finite spectrum", "[measure][nuh]") {
  std::vector<Atom> atoms;
  for (int k = -2; k <= 2; ++k) atoms.push_back({Vec{double(k)}, Complex(1.0, 0.0)});
  DiscreteMeasure spec(std::move(atoms), Box::symmetric(1, 2.0));

  PointSet s0 = s_h(spec, Vec{0.0});
  REQUIRE(s0.size() == spec.size());

  PointSet s1 = s_h(spec, Vec{1.0});
  REQUIRE(s1.size() == 4);  // {-2,-1,0,1}: points whose +1 shift stays inside
  REQUIRE(s1.points.front()[0] == Approx(-2.0));
  REQUIRE(s1.points.back()[0] == Approx(1.0));

  PointSet s9 = s_h(spec, Vec{9.0});
  REQUIRE(s9.size() == 0);
}

TEST_CASE("zero-shift correlation measure has exactly real nonnegative weights",
          "[measure][nuh]") {
  DiscreteMeasure spec = random_measure(16, 50, 5.0);
  DiscreteMeasure nu0 = nu_h(spec, Vec{0.0});
  REQUIRE(nu0.size() == spec.size());
  for (std::size_t i = 0; i < nu0.size(); ++i) {
    REQUIRE(nu0.weights[i].imag() == 0.0);
    REQUIRE(nu0.weights[i].real() >= 0.0);
  }
}

TEST_CASE("shift correlation pairs weights with the shifted atom", "[measure][nuh]") {
  std::vector<Atom> atoms = {{Vec{0.0}, Complex(2.0, 1.0)},
                             {Vec{1.0}, Complex(0.5, -0.5)},
                             {Vec{3.0}, Complex(1.0, 0.0)}};
  DiscreteMeasure spec(std::move(atoms), Box(0.0, 3.0));
  DiscreteMeasure nu1 = nu_h(spec, Vec{1.0});
  REQUIRE(nu1.size() == 1);  // only 0 has a partner at +1
  REQUIRE(nu1.support[0][0] == Approx(0.0).margin(1e-12));
  Complex expect = Complex(2.0, 1.0) * std::conj(Complex(0.5, -0.5));
  REQUIRE(std::abs(nu1.weights[0] - expect) < 1e-15);
}

TEST_CASE("sliding window mass bound is exact in one dimension", "[measure]") {
  std::vector<Atom> atoms;
  for (int k = -10; k <= 10; ++k) atoms.push_back({Vec{double(k)}, Complex(1.0, 0.0)});
  DiscreteMeasure comb(std::move(atoms), Box::symmetric(1, 10.0));
  REQUIRE(translation_bounded_norm(comb, 1.0).value == Approx(3.0));
  REQUIRE(translation_bounded_norm(comb, 0.25).value == Approx(1.0));

  std::vector<Atom> mixed = {{Vec{0.0}, Complex(2.0, 0.0)},
                             {Vec{0.5}, Complex(0.0, 1.5)},
                             {Vec{2.0}, Complex(3.0, 0.0)}};
  DiscreteMeasure mu(std::move(mixed), Box::symmetric(1, 3.0));
  REQUIRE(translation_bounded_norm(mu, 0.3).value == Approx(3.5));
}

TEST_CASE("conjugate symmetrization gives a real transform", "[measure]") {
  DiscreteMeasure mu = random_measure(17, 30, 4.0);
  DiscreteMeasure sym = conjugate_symmetrize(mu);
  for (double t : {-0.7, 0.2, 1.1})
    REQUIRE(std::abs(ft_at(sym, t).imag()) < 1e-12 * sym.total_variation());
}

TEST_CASE("central piecewise-polynomial bump values", "[window]") {
  // order 2: triangle on [-1, 1]
  REQUIRE(central_bspline(2, 0.0) == Approx(1.0));
  REQUIRE(central_bspline(2, 0.5) == Approx(0.5));
  REQUIRE(central_bspline(2, -0.25) == Approx(0.75));
  REQUIRE(central_bspline(2, 1.0) == 0.0);
  // order 4: cubic, value 2/3 at center, 1/6 at +-1
  REQUIRE(central_bspline(4, 0.0) == Approx(2.0 / 3.0));
  REQUIRE(central_bspline(4, 1.0) == Approx(1.0 / 6.0));
  REQUIRE(central_bspline(4, 2.0) == 0.0);
}

TEST_CASE("sinc-power window pairs profile with compactly supported transform",
          "[window]") {
  Window w = bspline_window(2, 1.0);
  REQUIRE(w.transform_radius == Approx(1.0));
  REQUIRE(w.integral == Approx(1.0));
  REQUIRE(w.nonnegative);
  REQUIRE(w.profile(0.0) == Approx(1.0));
  // sinc(1/2)^2 = (2/pi)^2
  REQUIRE(w.profile(0.5) == Approx(4.0 / (kPi * kPi)));
  REQUIRE(w.transform(0.0) == Approx(w.integral));
  REQUIRE(w.transform(1.5) == 0.0);

  Window q = squared(w);
  REQUIRE(q.sinc_order == 4);
  REQUIRE(q.transform_radius == Approx(2.0));
  REQUIRE(q.nonnegative);
  REQUIRE(q.profile(0.3) == Approx(w.profile(0.3) * w.profile(0.3)));
}

TEST_CASE("triangle-transform window has unit mass", "[window]") {
  Window f = fejer_window(2.0);
  REQUIRE(f.integral == Approx(1.0));
  REQUIRE(f.transform(0.0) == Approx(1.0));
  REQUIRE(f.transform(1.0) == Approx(0.5));
  REQUIRE(f.transform(2.0) == 0.0);
  REQUIRE(f.transform_radius == Approx(2.0));
  REQUIRE(f.profile(0.0) == Approx(2.0));
}

TEST_CASE("window transform matches quadrature of the profile", "[window]") {
  // Simpson quadrature of profile(x) e^{-2 pi i x t} over a wide range should
  // approach the stated transform; sinc^4 decays fast enough for 1e-4 accuracy.
  Window w = bspline_window(4, 1.0);
  double L = 400.0;
  int n = 1 << 18;
  double h = 2.0 * L / n;
  for (double t : {0.0, 0.3, 0.9, 1.7}) {
    CompensatedSum acc;
    for (int i = 0; i <= n; ++i) {
      double x = -L + i * h;
      double coeff = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      acc.add(coeff * w.profile(x) * std::cos(kTwoPi * x * t));
    }
    double integral = acc.value() * h / 3.0;
    REQUIRE(integral == Approx(w.transform(t)).margin(1e-4));
  }
}

TEST_CASE("mean-zero window: zero integral, band limit, eventual positivity",
          "[window][meanzero]") {
  MeanZeroWindow mz = mean_zero_window();
  REQUIRE(mz.integral_deviation <= 1e-10);
  REQUIRE(std::abs(mz.window.integral) <= 1e-10);

  // band limit: transform vanishes outside [-2/3, 2/3] by construction
  REQUIRE(mz.window.transform_radius < 1.0);
  REQUIRE(mz.window.transform(0.7) == 0.0);
  REQUIRE(mz.window.transform(-0.99) == 0.0);
  REQUIRE(std::abs(mz.window.transform(0.0)) <= 1e-10);

  // the window takes both signs: positive far out, negative near the origin
  REQUIRE(mz.window.profile(0.0) < 0.0);
  REQUIRE(mz.scan_min_value > 0.0);
  REQUIRE(mz.certified_radius > 0.0);
  REQUIRE(mz.reported_radius >= mz.certified_radius);

  // spot-check positivity on a dyadic sweep beyond the certified radius
  for (int i = 0; i <= 200; ++i) {
    double x = mz.reported_radius + i * (9.0 * mz.reported_radius / 200.0);
    REQUIRE(mz.window.profile(x) > 0.0);
  }
}

TEST_CASE("mean-zero window profile is even", "[window][meanzero]") {
  MeanZeroWindow mz = mean_zero_window();
  for (double x : {0.3, 1.7, 4.4, 9.9})
    REQUIRE(mz.window.profile(x) == Approx(mz.window.profile(-x)).margin(1e-14));
}
