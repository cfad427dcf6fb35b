#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "runge/analytic.hpp"

namespace runge {

struct SweepOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 42;
  unsigned jobs = 1;
  VerifyOptions verify;
};

struct SweepSummary {
  std::string name;
  std::size_t checked = 0;
  std::size_t holds = 0;
  std::size_t fails = 0;
  std::size_t indeterminate = 0;  // includes evaluations that threw
  double worst_margin = 0;        // smallest margin among holding samples
};

// Seeded uniform sampling in [0, 1) that is identical on every platform.
class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed);
  double uniform();
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);  // inclusive

 private:
  std::mt19937_64 gen_;  // output sequence fixed by the standard
};

std::uint64_t splitmix64(std::uint64_t x);

// The five analytic inequality sweeps, each over `samples` seeded points:
// j expansion bound, j/q dichotomy, Siegel q-power approximation, Siegel vs
// j, nearest-cusp 1/q vs j. Output does not depend on `jobs`.
std::vector<SweepSummary> run_analytic_sweeps(const SweepOptions& opt);

}  // namespace runge
