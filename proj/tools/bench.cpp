// Serial vs OpenMP comparison for the three hot kernels: substitution,
// patch verification, and transition sampling.  The parallel run must
// reproduce the serial result bit for bit; timings are informational.

#include <chrono>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "qk/delzant.hpp"
#include "qk/parallel.hpp"
#include "qk/tiling.hpp"

using Clock = std::chrono::steady_clock;

static double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

int main(int argc, char** argv) {
  CLI::App app{"quasikite kernel benchmark"};
  int steps = 10;
  int samples = 200000;
  app.add_option("--steps", steps, "inflation steps from the sun seed")
      ->check(CLI::Range(1, 16));
  app.add_option("--samples", samples, "transition sample count")
      ->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  std::printf("threads available: %d\n\n", qk::max_threads());
  int failures = 0;

  {
    auto seed = qk::tiling::seed_patch("sun");
    auto t0 = Clock::now();
    auto serial = qk::tiling::inflate(seed, steps, qk::Exec::Serial);
    double ts = ms_since(t0);
    t0 = Clock::now();
    auto parallel = qk::tiling::inflate(seed, steps, qk::Exec::Parallel);
    double tp = ms_since(t0);
    bool same = serial.tiles == parallel.tiles;
    failures += !same;
    std::printf("inflate  sun x%-2d  %9zu tiles   serial %8.1f ms   omp %8.1f ms   x%.2f  %s\n",
                steps, serial.tiles.size(), ts, tp, ts / tp, same ? "match" : "MISMATCH");

    t0 = Clock::now();
    auto vs = qk::tiling::verify_patch(serial, qk::Exec::Serial);
    ts = ms_since(t0);
    t0 = Clock::now();
    auto vp = qk::tiling::verify_patch(parallel, qk::Exec::Parallel);
    tp = ms_since(t0);
    same = vs.violations.size() == vp.violations.size() &&
           vs.interior_vertices == vp.interior_vertices &&
           vs.vertices == vp.vertices && vs.ok() && vp.ok();
    failures += !same;
    std::printf("verify   sun x%-2d  %9zu tiles   serial %8.1f ms   omp %8.1f ms   x%.2f  %s\n",
                steps, serial.tiles.size(), ts, tp, ts / tp, same ? "match" : "MISMATCH");
  }

  {
    auto lift = qk::delzant::transition_lift(qk::delzant::chart(1, 2),
                                             qk::delzant::chart(3, 4));
    auto t0 = Clock::now();
    auto rs = qk::delzant::verify_transition(lift, samples, 1e-9, 2026, qk::Exec::Serial);
    double ts = ms_since(t0);
    t0 = Clock::now();
    auto rp = qk::delzant::verify_transition(lift, samples, 1e-9, 2026, qk::Exec::Parallel);
    double tp = ms_since(t0);
    bool same = rs.to_json() == rp.to_json() && rs.pass() && rp.pass();
    failures += !same;
    std::printf("transit  12->34   %9d samples serial %8.1f ms   omp %8.1f ms   x%.2f  %s\n",
                samples, ts, tp, ts / tp, same ? "match" : "MISMATCH");
  }

  return failures == 0 ? 0 : 1;
}
