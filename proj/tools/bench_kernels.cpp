// Timing comparison of the serial reference kernels against the OpenMP
// paths: GP kernel-matrix assembly, batch posterior prediction, and a batch
// of independent mission simulations. The two paths must agree exactly;
// any deviation is reported and fails the run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include <omp.h>

#include "leeway/coverage.hpp"
#include "leeway/forcefield.hpp"
#include "leeway/vessel.hpp"

using namespace leeway;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<ForceSample> random_samples(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(-500.0, 500.0);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<ForceSample> samples;
  samples.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    ForceSample s;
    s.position = {pos(rng), pos(rng)};
    s.vector = {0.01 * s.position.y + noise(rng), 0.5 + noise(rng)};
    s.source = SourceKind::current;
    samples.push_back(s);
  }
  return samples;
}

}  // namespace

int main() {
  std::mt19937_64 rng(42);
  std::printf("threads: %d\n\n", omp_get_max_threads());
  std::printf("%-34s %10s %10s %8s\n", "kernel", "serial(s)", "omp(s)", "speedup");

  bool all_exact = true;

  for (int n : {400, 1000, 2000}) {
    const auto samples = random_samples(n, rng);
    const GpHyperparams h{0.5, 150.0, 0.05};

    Eigen::MatrixXd k_serial, k_parallel;
    std::vector<LocalPoint> points;
    for (const auto& s : samples) points.push_back(s.position);

    auto t0 = Clock::now();
    gp_detail::build_kernel_matrix(points, h, k_serial, Exec::serial);
    const double ts = seconds_since(t0);
    t0 = Clock::now();
    gp_detail::build_kernel_matrix(points, h, k_parallel, Exec::parallel);
    const double tp = seconds_since(t0);
    const double kdiff = (k_serial - k_parallel).cwiseAbs().maxCoeff();
    if (kdiff != 0.0) all_exact = false;

    char label[64];
    std::snprintf(label, sizeof(label), "kernel matrix assembly n=%d", n);
    std::printf("%-34s %10.4f %10.4f %7.2fx\n", label, ts, tp, ts / tp);
  }

  {
    const int n = 1000, m = 20000;
    const auto samples = random_samples(n, rng);
    const GpForceMap map = GpForceMap::fit(samples, {0.5, 150.0, 0.05});
    std::uniform_real_distribution<double> pos(-500.0, 500.0);
    std::vector<LocalPoint> query;
    query.reserve(m);
    for (int i = 0; i < m; ++i) query.push_back({pos(rng), pos(rng)});

    auto t0 = Clock::now();
    const auto serial = map.predict_batch(query, Exec::serial);
    const double ts = seconds_since(t0);
    t0 = Clock::now();
    const auto parallel = map.predict_batch(query, Exec::parallel);
    const double tp = seconds_since(t0);
    double diff = 0.0;
    for (int i = 0; i < m; ++i)
      diff = std::max(diff, (serial[static_cast<std::size_t>(i)].mean -
                             parallel[static_cast<std::size_t>(i)].mean)
                                .norm());
    if (diff != 0.0) all_exact = false;

    char label[64];
    std::snprintf(label, sizeof(label), "batch predict n=%d m=%d", n, m);
    std::printf("%-34s %10.4f %10.4f %7.2fx\n", label, ts, tp, ts / tp);
  }

  {
    // batch of independent mission runs (the compare / star-scenario shape)
    const auto missions = star_pattern({0.0, 0.0}, 300.0, 3.0);
    const UniformField current({0.0, 1.0});
    const ZeroField wind;
    const PidGains gains;
    const VesselParams params;
    const Pose start{{0.0, 0.0}, 0.0};

    std::vector<TrajectoryLog> logs_serial(missions.size());
    auto t0 = Clock::now();
    for (std::size_t i = 0; i < missions.size(); ++i)
      logs_serial[i] =
          run_mission(missions[i], start, gains, params, wind, current, 0.1);
    const double ts = seconds_since(t0);

    std::vector<TrajectoryLog> logs_parallel(missions.size());
    t0 = Clock::now();
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(missions.size()); ++i)
      logs_parallel[static_cast<std::size_t>(i)] =
          run_mission(missions[static_cast<std::size_t>(i)], start, gains,
                      params, wind, current, 0.1);
    const double tp = seconds_since(t0);

    for (std::size_t i = 0; i < missions.size(); ++i) {
      if (logs_serial[i].samples.size() != logs_parallel[i].samples.size())
        all_exact = false;
      else
        for (std::size_t r = 0; r < logs_serial[i].samples.size(); ++r)
          if (!(logs_serial[i].samples[r].state.pose.position ==
                logs_parallel[i].samples[r].state.pose.position))
            all_exact = false;
    }
    std::printf("%-34s %10.4f %10.4f %7.2fx\n", "mission batch (8 star runs)",
                ts, tp, ts / tp);
  }

  std::printf("\nserial/parallel agreement: %s\n",
              all_exact ? "exact" : "MISMATCH");
  return all_exact ? 0 : 1;
}
