#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fqc/core.hpp"

namespace fqc {

// Full-rank lattice in R^n, n <= 4. Generators are stored as matrix columns;
// the JSON/file convention lists generators as rows.
struct Lattice {
  int dim = 1;
  Eigen::MatrixXd basis;  // columns are generators
  Eigen::MatrixXd inv;    // basis^{-1}
  double det_abs = 1.0;

  static Lattice from_generators(const std::vector<Vec>& gens) {
    guard(!gens.empty() && static_cast<int>(gens.size()) == gens[0].dim,
          "Lattice: need n generators in R^n");
    int n = gens[0].dim;
    guard(n >= 1 && n <= kMaxDim, "Lattice: dim must be 1..4");
    Lattice lat;
    lat.dim = n;
    lat.basis.resize(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) lat.basis(i, j) = gens[j][i];
    double d = lat.basis.determinant();
    guard(std::abs(d) > 1e-300, "Lattice: basis is singular");
    lat.inv = lat.basis.inverse();
    lat.det_abs = std::abs(d);
    return lat;
  }

  static Lattice scaled_int(int n, double g) {
    std::vector<Vec> gens;
    for (int j = 0; j < n; ++j) {
      Vec v = Vec::zero(n);
      v[j] = g;
      gens.push_back(v);
    }
    return from_generators(gens);
  }

  Vec generator(int j) const {
    Vec v = Vec::zero(dim);
    for (int i = 0; i < dim; ++i) v[i] = basis(i, j);
    return v;
  }

  // Lattice point for integer coefficients k.
  Vec point(const std::array<std::int64_t, kMaxDim>& k) const {
    Vec v = Vec::zero(dim);
    for (int i = 0; i < dim; ++i) {
      double s = 0;
      for (int j = 0; j < dim; ++j) s += basis(i, j) * static_cast<double>(k[j]);
      v[i] = s;
    }
    return v;
  }

  // Real coefficients of x in this basis (basis^{-1} x).
  Vec coefficients(const Vec& x) const {
    Vec v = Vec::zero(dim);
    for (int i = 0; i < dim; ++i) {
      double s = 0;
      for (int j = 0; j < dim; ++j) s += inv(i, j) * x[j];
      v[i] = s;
    }
    return v;
  }

  // Dual lattice: generators are the columns of basis^{-T};
  // satisfies <b_i, d_j> = delta_ij and dual(dual) == original.
  Lattice dual() const {
    Lattice d;
    d.dim = dim;
    d.basis = inv.transpose();
    d.inv = basis.transpose();
    d.det_abs = 1.0 / det_abs;
    return d;
  }
};

}  // namespace fqc
