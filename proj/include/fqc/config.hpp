// Run configuration shared by the command-line tools: truncation radii,
// grid resolutions, tolerances, enumeration caps, thread count, and the
// seed for randomized checks. Round-trips losslessly through JSON.
#pragma once

#include <string>

#include "core.hpp"
#include "io.hpp"

namespace fqc {

struct RunConfig {
  // truncation radii
  double truncation_radius = 1000.0;  // averaging radius for autocorrelation and energy
  double box_half_width = 100.0;      // half width of the generation box

  // grid resolutions
  int grid_resolution = 4001;     // samples per axis in transform traces
  double grid_half_width = 10.0;  // frequency box half width per axis

  // tolerances
  double dedup_tol = 1e-9;       // point and atom coincidence radius
  double peak_threshold = 1e-3;  // relative level for peak extraction
  double match_tol = 1e-6;       // frequency and lattice matching tolerance

  // enumeration caps
  long long enumeration_cap = 30000000;  // lattice points visited per region scan
  long long pair_cap = 100000000;        // atom pairs visited per autocorrelation

  // parallelism and reproducibility
  int threads = 1;
  unsigned long long seed = 12345;

  void validate() const {
    guard(truncation_radius > 0, "RunConfig: truncation_radius must be positive");
    guard(box_half_width > 0, "RunConfig: box_half_width must be positive");
    guard(grid_resolution >= 2, "RunConfig: grid_resolution must be at least 2");
    guard(grid_half_width > 0, "RunConfig: grid_half_width must be positive");
    guard(dedup_tol > 0, "RunConfig: dedup_tol must be positive");
    guard(peak_threshold > 0, "RunConfig: peak_threshold must be positive");
    guard(match_tol > 0, "RunConfig: match_tol must be positive");
    guard(enumeration_cap >= 1000, "RunConfig: enumeration_cap below viable minimum");
    guard(pair_cap >= 1000, "RunConfig: pair_cap below viable minimum");
    guard(threads >= 1 && threads <= 256, "RunConfig: threads must be 1..256");
  }
};

inline json to_json(const RunConfig& c) {
  json j;
  j["truncation_radius"] = c.truncation_radius;
  j["box_half_width"] = c.box_half_width;
  j["grid_resolution"] = c.grid_resolution;
  j["grid_half_width"] = c.grid_half_width;
  j["dedup_tol"] = c.dedup_tol;
  j["peak_threshold"] = c.peak_threshold;
  j["match_tol"] = c.match_tol;
  j["enumeration_cap"] = c.enumeration_cap;
  j["pair_cap"] = c.pair_cap;
  j["threads"] = c.threads;
  j["seed"] = c.seed;
  return j;
}

inline RunConfig config_from_json(const json& j) {
  RunConfig c;
  c.truncation_radius = j.value("truncation_radius", c.truncation_radius);
  c.box_half_width = j.value("box_half_width", c.box_half_width);
  c.grid_resolution = j.value("grid_resolution", c.grid_resolution);
  c.grid_half_width = j.value("grid_half_width", c.grid_half_width);
  c.dedup_tol = j.value("dedup_tol", c.dedup_tol);
  c.peak_threshold = j.value("peak_threshold", c.peak_threshold);
  c.match_tol = j.value("match_tol", c.match_tol);
  c.enumeration_cap = j.value("enumeration_cap", c.enumeration_cap);
  c.pair_cap = j.value("pair_cap", c.pair_cap);
  c.threads = j.value("threads", c.threads);
  c.seed = j.value("seed", c.seed);
  c.validate();
  return c;
}

inline RunConfig load_config(const std::string& path) {
  return config_from_json(read_json(path));
}

}  // namespace fqc
