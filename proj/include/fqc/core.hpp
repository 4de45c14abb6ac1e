#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fqc {

inline constexpr int kMaxDim = 4;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

using Complex = std::complex<double>;

// Thrown on malformed input or violated preconditions (CLI maps this to exit 2).
// Negative analysis verdicts are ordinary return values, never exceptions.
struct GuardError : std::runtime_error {
  explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

inline void guard(bool ok, const std::string& what) {
  if (!ok) throw GuardError(what);
}

// Point in R^n with n <= 4, inline storage.
struct Vec {
  std::array<double, kMaxDim> x{};
  int dim = 1;

  Vec() = default;
  explicit Vec(double x0) : dim(1) { x[0] = x0; }
  Vec(double x0, double x1) : dim(2) {
    x[0] = x0;
    x[1] = x1;
  }
  Vec(std::initializer_list<double> vals) {
    guard(vals.size() >= 1 && vals.size() <= kMaxDim, "Vec: dim must be 1..4");
    dim = static_cast<int>(vals.size());
    int i = 0;
    for (double v : vals) x[i++] = v;
  }
  static Vec zero(int dim) {
    Vec v;
    v.dim = dim;
    return v;
  }

  double& operator[](int i) { return x[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return x[static_cast<std::size_t>(i)]; }

  friend Vec operator+(const Vec& a, const Vec& b) {
    Vec r = a;
    for (int i = 0; i < a.dim; ++i) r.x[i] += b.x[i];
    return r;
  }
  friend Vec operator-(const Vec& a, const Vec& b) {
    Vec r = a;
    for (int i = 0; i < a.dim; ++i) r.x[i] -= b.x[i];
    return r;
  }
  friend Vec operator-(const Vec& a) {
    Vec r = a;
    for (int i = 0; i < a.dim; ++i) r.x[i] = -r.x[i];
    return r;
  }
  friend Vec operator*(double c, const Vec& a) {
    Vec r = a;
    for (int i = 0; i < a.dim; ++i) r.x[i] *= c;
    return r;
  }
  friend bool operator==(const Vec& a, const Vec& b) {
    if (a.dim != b.dim) return false;
    for (int i = 0; i < a.dim; ++i)
      if (a.x[i] != b.x[i]) return false;
    return true;
  }
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0;
  for (int i = 0; i < a.dim; ++i) s += a.x[i] * b.x[i];
  return s;
}

inline double norm2(const Vec& a) { return dot(a, a); }
inline double norm(const Vec& a) { return std::sqrt(norm2(a)); }
inline double dist(const Vec& a, const Vec& b) { return norm(a - b); }

inline bool lex_less(const Vec& a, const Vec& b) {
  for (int i = 0; i < a.dim; ++i) {
    if (a.x[i] < b.x[i]) return true;
    if (a.x[i] > b.x[i]) return false;
  }
  return false;
}

// True if a > 0 in lexicographic order (first nonzero coordinate positive).
inline bool lex_positive(const Vec& a) {
  for (int i = 0; i < a.dim; ++i) {
    if (a.x[i] > 0) return true;
    if (a.x[i] < 0) return false;
  }
  return false;
}

// Axis-aligned box, closed on both ends per axis.
struct Box {
  std::array<double, kMaxDim> lo{};
  std::array<double, kMaxDim> hi{};
  int dim = 1;

  Box() = default;
  explicit Box(int d) : dim(d) { guard(d >= 1 && d <= kMaxDim, "Box: dim must be 1..4"); }
  Box(double l, double h) : dim(1) {
    lo[0] = l;
    hi[0] = h;
  }
  static Box symmetric(int dim, double half_width) {
    Box b;
    b.dim = dim;
    for (int i = 0; i < dim; ++i) {
      b.lo[i] = -half_width;
      b.hi[i] = half_width;
    }
    return b;
  }

  bool contains(const Vec& p) const {
    for (int i = 0; i < dim; ++i)
      if (p.x[i] < lo[i] || p.x[i] > hi[i]) return false;
    return true;
  }
  double extent(int i) const { return hi[i] - lo[i]; }
  double min_extent() const {
    double m = extent(0);
    for (int i = 1; i < dim; ++i) m = std::min(m, extent(i));
    return m;
  }
  double volume() const {
    double v = 1;
    for (int i = 0; i < dim; ++i) v *= extent(i);
    return v;
  }
  Box shrunk(double margin) const {
    Box b = *this;
    for (int i = 0; i < dim; ++i) {
      b.lo[i] += margin;
      b.hi[i] -= margin;
      guard(b.lo[i] <= b.hi[i], "Box::shrunk: margin exceeds half extent");
    }
    return b;
  }
  Box translated(const Vec& v) const {
    Box b = *this;
    for (int i = 0; i < dim; ++i) {
      b.lo[i] += v.x[i];
      b.hi[i] += v.x[i];
    }
    return b;
  }
};

// Neumaier compensated accumulation; value() applies the correction term.
struct CompensatedSum {
  double s = 0.0;
  double c = 0.0;

  void add(double v) {
    double t = s + v;
    if (std::abs(s) >= std::abs(v))
      c += (s - t) + v;
    else
      c += (v - t) + s;
    s = t;
  }
  double value() const { return s + c; }
};

struct CompensatedComplex {
  CompensatedSum re, im;

  void add(const Complex& z) {
    re.add(z.real());
    im.add(z.imag());
  }
  Complex value() const { return {re.value(), im.value()}; }
};

// Runs fn(chunk) for chunk in [0, num_chunks) on up to `threads` workers.
// fn must write results to per-chunk storage; callers combine in chunk order,
// so results are identical for every thread count.
inline void run_chunks(std::size_t num_chunks, int threads,
                       const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || num_chunks <= 1) {
    for (std::size_t k = 0; k < num_chunks; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      std::size_t k = next.fetch_add(1);
      if (k >= num_chunks) return;
      fn(k);
    }
  };
  std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(threads), num_chunks);
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

// sin(pi x)/(pi x), removable singularity at 0.
inline double sinc(double x) {
  double px = kPi * x;
  if (std::abs(px) < 1e-8) return 1.0 - px * px / 6.0;
  return std::sin(px) / px;
}

}  // namespace fqc
