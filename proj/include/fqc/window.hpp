#pragma once

#include <functional>
#include <string>

#include "fqc/core.hpp"

namespace fqc {

namespace detail {

inline double factorial(int n) {
  double f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline double binomial(int n, int k) {
  double b = 1;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

}  // namespace detail

// Central B-spline of order k: k-fold convolution of the unit indicator,
// supported exactly on [-k/2, k/2], nonnegative, integral 1. Evaluated via
// the one-sided truncated-power expansion at -|t|, where few terms overlap
// and the alternating sum stays well conditioned.
inline double central_bspline(int k, double t) {
  guard(k >= 1, "central_bspline: order must be >= 1");
  double u = -std::abs(t);
  double half = 0.5 * k;
  if (u < -half) return 0.0;
  if (k == 1) return 1.0;  // indicator; value at the jump +-1/2 taken as 1
  double s = 0;
  for (int j = 0; j <= k; ++j) {
    double base = u + half - j;
    if (base <= 0) break;  // later terms only shrink the shifted argument
    double term = detail::binomial(k, j) * std::pow(base, k - 1);
    s += (j % 2 == 0) ? term : -term;
  }
  return s / detail::factorial(k - 1);
}

// A window pairs a profile on the line with its transform, whose support is
// the exactly known closed interval [-transform_radius, transform_radius].
// Model-set weighting samples the transform; spectrum prediction samples the
// profile.
struct Window {
  std::string name;
  int sinc_order = 0;   // k when profile = amplitude * sinc(scale*x)^k, else 0
  double scale = 1.0;
  double amplitude = 1.0;
  std::function<double(double)> profile;
  std::function<double(double)> transform;
  double transform_radius = 0;
  double integral = 0;         // integral of profile = transform at 0
  bool nonnegative = false;    // profile >= 0 everywhere, exactly known
};

// profile sinc(a x)^k, transform (1/a) B_k(t/a) supported on [-ka/2, ka/2].
inline Window bspline_window(int k, double a) {
  guard(k >= 1 && k <= 16, "bspline_window: order must be in 1..16");
  guard(a > 0, "bspline_window: scale must be positive");
  Window w;
  w.name = "bspline" + std::to_string(k);
  w.sinc_order = k;
  w.scale = a;
  w.amplitude = 1.0;
  w.profile = [k, a](double x) { return std::pow(sinc(a * x), k); };
  w.transform = [k, a](double t) { return central_bspline(k, t / a) / a; };
  w.transform_radius = 0.5 * k * a;
  w.integral = central_bspline(k, 0.0) / a;
  w.nonnegative = (k % 2 == 0);
  return w;
}

// profile a*sinc(a x)^2, transform max(0, 1-|t|/a) supported on [-a, a];
// integral 1.
inline Window fejer_window(double a) {
  guard(a > 0, "fejer_window: scale must be positive");
  Window w;
  w.name = "fejer";
  w.sinc_order = 2;
  w.scale = a;
  w.amplitude = a;
  w.profile = [a](double x) { return a * sinc(a * x) * sinc(a * x); };
  w.transform = [a](double t) { return std::max(0.0, 1.0 - std::abs(t) / a); };
  w.transform_radius = a;
  w.integral = 1.0;
  w.nonnegative = true;
  return w;
}

// Pointwise square of a sinc-power window. Squaring doubles the sinc order,
// so the result is again a closed-form member of the family: transform
// support doubles and the profile becomes everywhere nonnegative.
inline Window squared(const Window& w) {
  guard(w.sinc_order >= 1, "squared: requires a sinc-power window");
  Window r = bspline_window(2 * w.sinc_order, w.scale);
  double c = w.amplitude * w.amplitude;
  if (c != 1.0) {
    auto p = r.profile;
    auto t = r.transform;
    r.profile = [p, c](double x) { return c * p(x); };
    r.transform = [t, c](double u) { return c * t(u); };
    r.integral *= c;
  }
  r.amplitude = c;
  r.name = "squared(" + w.name + ")";
  r.nonnegative = true;
  return r;
}

// Mean-zero band-limited window: phi = alpha*psi - beta*psi^2 with
//   psi(x) = sinc(x/3)^2 + (sinc((x-3/2)/3)^2 + sinc((x+3/2)/3)^2)/2,
//   alpha = 1/integral(psi), beta = 1/integral(psi^2),
// so integral(phi) = 0 by construction. psi is strictly positive (the zero
// sets of its two parts are disjoint), its transform 3*tri(3t)*(1+cos(3 pi t))
// is supported on [-1/3, 1/3], hence phi has transform support in
// [-2/3, 2/3]. phi(x) > 0 exactly where psi(x) < alpha/beta, which holds for
// all |x| >= certified_radius (scan plus decay envelope).
struct MeanZeroWindow {
  Window window;
  double alpha = 0;
  double beta = 0;
  double psi_integral = 0;         // closed form: 6
  double psi_square_integral = 0;  // closed form: 3 + 51/(2 pi^2)
  double quadrature_psi_square = 0;
  double integral_deviation = 0;   // |alpha*psi_integral - beta*quadrature|
  double certified_radius = 0;
  double reported_radius = 0;
  double scan_min_value = 0;       // min of phi over [reported, 10*reported]
  double scan_pitch = 0;
};

namespace detail {

inline double mz_psi(double x) {
  double a = sinc(x / 3.0);
  double b = sinc((x - 1.5) / 3.0);
  double c = sinc((x + 1.5) / 3.0);
  return a * a + 0.5 * (b * b + c * c);
}

inline double mz_psi_hat(double t) {
  double tri = std::max(0.0, 1.0 - 3.0 * std::abs(t));
  return 3.0 * tri * (1.0 + std::cos(3.0 * kPi * t));
}

// For |x| >= 3 the three sinc^2 parts obey sinc(u)^2 <= 1/(pi u)^2, giving a
// decreasing envelope; used to certify positivity beyond the scan range.
inline double mz_psi_envelope(double x) {
  double ax = std::abs(x);
  double e1 = 9.0 / (kPi * kPi * ax * ax);
  double e2 = 9.0 / (kPi * kPi * (ax - 1.5) * (ax - 1.5));
  double e3 = 9.0 / (kPi * kPi * (ax + 1.5) * (ax + 1.5));
  return e1 + 0.5 * (e2 + e3);
}

}  // namespace detail

inline MeanZeroWindow mean_zero_window(double positive_beyond = 0.0) {
  MeanZeroWindow mz;
  mz.psi_integral = 6.0;
  mz.psi_square_integral = 3.0 + 51.0 / (2.0 * kPi * kPi);
  mz.alpha = 1.0 / mz.psi_integral;
  mz.beta = 1.0 / mz.psi_square_integral;

  // integral(psi^2) = integral |psi_hat|^2 over [-1/3, 1/3]; Simpson
  // quadrature of the smooth closed form cross-checks the constant.
  {
    int n = 6000;  // even
    double lo = -1.0 / 3.0, hi = 1.0 / 3.0;
    double h = (hi - lo) / n;
    CompensatedSum s;
    for (int i = 0; i <= n; ++i) {
      double t = lo + h * i;
      double v = detail::mz_psi_hat(t);
      double coef = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      s.add(coef * v * v);
    }
    mz.quadrature_psi_square = s.value() * h / 3.0;
  }
  mz.integral_deviation =
      std::abs(mz.alpha * mz.psi_integral - mz.beta * mz.quadrature_psi_square);

  double alpha = mz.alpha, beta = mz.beta;
  auto phi = [alpha, beta](double x) {
    double p = detail::mz_psi(x);
    return p * (alpha - beta * p);
  };

  // certified radius: largest |x| with phi(x) <= 0. phi is even; scan the
  // positive axis finely, then rely on the decay envelope beyond.
  double threshold = alpha / beta;
  double scan_hi = 6.0;
  guard(detail::mz_psi_envelope(scan_hi) < threshold,
        "mean_zero_window: envelope certificate failed");
  double pitch = 1e-4;
  double last_nonpos = 0.0;
  for (double x = 0.0; x <= scan_hi; x += pitch)
    if (phi(x) <= 0) last_nonpos = x;
  mz.certified_radius = last_nonpos + 2 * pitch;
  mz.reported_radius = std::max(positive_beyond, mz.certified_radius);

  // positivity scan over [reported, 10*reported]
  {
    double lo = mz.reported_radius, hi = 10.0 * mz.reported_radius;
    int n = 20000;
    mz.scan_pitch = (hi - lo) / n;
    double mn = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) mn = std::min(mn, phi(lo + mz.scan_pitch * i));
    mz.scan_min_value = mn;
  }

  Window w;
  w.name = "mean_zero";
  w.sinc_order = 0;
  w.profile = phi;
  w.transform_radius = 2.0 / 3.0;
  w.integral = 0.0;
  w.nonnegative = false;
  // transform: alpha*psi_hat(t) - beta*(psi_hat conv psi_hat)(t), the
  // convolution evaluated by Simpson quadrature over the exact overlap.
  w.transform = [alpha, beta](double t) {
    if (std::abs(t) >= 2.0 / 3.0) return 0.0;
    double lo = std::max(-1.0 / 3.0, t - 1.0 / 3.0);
    double hi = std::min(1.0 / 3.0, t + 1.0 / 3.0);
    int n = 2000;  // even
    double h = (hi - lo) / n;
    CompensatedSum s;
    for (int i = 0; i <= n; ++i) {
      double u = lo + h * i;
      double coef = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
      s.add(coef * detail::mz_psi_hat(u) * detail::mz_psi_hat(t - u));
    }
    double conv = s.value() * h / 3.0;
    return alpha * detail::mz_psi_hat(t) - beta * conv;
  };
  mz.window = std::move(w);
  return mz;
}

}  // namespace fqc
