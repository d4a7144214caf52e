// include/jgrscan/bench.hpp
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jgrscan/simulator.hpp"

namespace jgrscan {

/// Request counts of the creation-overhead table.
inline const std::vector<int64_t> kRequestGrid{1, 10, 100, 1000, 6000, 10000, 48000};

/// Seconds taken by one run of `n` retaining calls through the simulator
/// under `policy`. Calls are spread over 16 apps so a per-app quota of 6000
/// is never reached at the grid sizes.
double time_creation(int64_t n, const DefensePolicy& policy);

/// Median of `trials` runs of time_creation.
double bench_creation(int64_t n, const DefensePolicy& policy, int trials = 5);

struct BenchPoint {
  int64_t n = 0;
  double baseline_seconds = 0;
  double purger_seconds = 0;
  /// (purger - baseline) / baseline.
  double overhead() const;
};

/// Baseline (no defense) against Purger(6000), with trials of the two
/// policies interleaved.
std::vector<BenchPoint> bench_grid(const std::vector<int64_t>& grid = kRequestGrid,
                                   int trials = 5);

/// `Defense,1,10,...` header, then the Purger and baseline rows.
std::string bench_csv(const std::vector<BenchPoint>& points);

}  // namespace jgrscan
