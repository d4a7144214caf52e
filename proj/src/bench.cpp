// src/bench.cpp
#include "jgrscan/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

namespace jgrscan {

namespace {

constexpr int kBenchApps = 16;
constexpr int kFirstUid = 20000;
const std::string kBenchIface = "bench.createJgr";

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  size_t mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : (v[mid - 1] + v[mid]) / 2;
}

std::string seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", s);
  return buf;
}

}  // namespace

double time_creation(int64_t n, const DefensePolicy& policy) {
  const InterfaceCatalog catalog{{kBenchIface, true}};
  SimConfig config;
  config.jgr_capacity = std::max<int64_t>(config.jgr_capacity, n + 1);
  config.policy = policy;
  SimState state;
  std::vector<SimEvent> events;
  events.reserve(static_cast<size_t>(n) * 3);
  Action call{Action::Kind::Call, kFirstUid, kBenchIface, false, 1};

  auto start = std::chrono::steady_clock::now();
  for (int64_t i = 0; i < n; ++i) {
    call.uid = kFirstUid + static_cast<int>(i % kBenchApps);
    apply(state, config, catalog, call, events);
  }
  auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count();
}

double bench_creation(int64_t n, const DefensePolicy& policy, int trials) {
  std::vector<double> times;
  time_creation(n, policy);  // warm-up
  for (int t = 0; t < trials; ++t) times.push_back(time_creation(n, policy));
  return median(times);
}

double BenchPoint::overhead() const {
  return baseline_seconds > 0 ? (purger_seconds - baseline_seconds) / baseline_seconds : 0.0;
}

std::vector<BenchPoint> bench_grid(const std::vector<int64_t>& grid, int trials) {
  const DefensePolicy baseline = NoDefense{};
  const DefensePolicy purger = Purger{6000};
  std::vector<BenchPoint> out;
  for (int64_t n : grid) {
    time_creation(n, baseline);
    time_creation(n, purger);
    std::vector<double> base_times, purger_times;
    for (int t = 0; t < trials; ++t) {
      if (t % 2 == 0) {
        base_times.push_back(time_creation(n, baseline));
        purger_times.push_back(time_creation(n, purger));
      } else {
        purger_times.push_back(time_creation(n, purger));
        base_times.push_back(time_creation(n, baseline));
      }
    }
    out.push_back({n, median(base_times), median(purger_times)});
  }
  return out;
}

std::string bench_csv(const std::vector<BenchPoint>& points) {
  std::ostringstream out;
  out << "Defense";
  for (const auto& p : points) out << ',' << p.n;
  out << "\nJGRE Purger";
  for (const auto& p : points) out << ',' << seconds(p.purger_seconds);
  out << "\nAOSP";
  for (const auto& p : points) out << ',' << seconds(p.baseline_seconds);
  out << '\n';
  return out.str();
}

}  // namespace jgrscan
