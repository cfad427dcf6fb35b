#include "runge/sweeps.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "runge/error.hpp"

namespace runge {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SampleRng::SampleRng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

double SampleRng::uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

std::int64_t SampleRng::uniform_int(std::int64_t lo, std::int64_t hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  // rejection keeps the draw unbiased and platform independent
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t v;
  do v = gen_();
  while (v >= limit);
  return lo + static_cast<std::int64_t>(v % span);
}

namespace {

constexpr double kTwoPi = 6.283185307179586;

using Task = std::function<CheckReport()>;

SweepSummary run_tasks(std::string name, const std::vector<Task>& tasks, unsigned jobs) {
  std::vector<CheckReport> results(tasks.size());
  std::vector<char> threw(tasks.size(), 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < tasks.size();) {
      try {
        results[i] = tasks[i]();
      } catch (const Error&) {
        threw[i] = 1;
      }
    }
  };
  const unsigned n = std::max(1u, jobs);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  SweepSummary s;
  s.name = std::move(name);
  s.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    ++s.checked;
    if (threw[i] || results[i].verdict == Verdict::Indeterminate) {
      ++s.indeterminate;
    } else if (results[i].verdict == Verdict::Fails) {
      ++s.fails;
    } else {
      ++s.holds;
      s.worst_margin = std::min(s.worst_margin, results[i].margin);
    }
  }
  if (s.holds == 0) s.worst_margin = 0;
  return s;
}

TorsionIndex random_index(SampleRng& rng, Modulus n, bool a1_zero) {
  while (true) {
    const auto a1 = a1_zero ? 0 : rng.uniform_int(1, n - 1);
    const auto a2 = rng.uniform_int(0, n - 1);
    if (a1 == 0 && a2 == 0) continue;
    return TorsionIndex::make(n, a1, a2);
  }
}

}  // namespace

std::vector<SweepSummary> run_analytic_sweeps(const SweepOptions& opt) {
  const VerifyOptions vo = opt.verify;
  std::vector<SweepSummary> out;
  auto sub_seed = [&](std::uint64_t k) { return splitmix64(opt.seed ^ (0x517cc1b727220a95ULL * (k + 1))); };

  {  // |q| <= 0.005
    SampleRng rng(sub_seed(0));
    std::vector<Task> tasks;
    const double y0 = std::log(200.0) / kTwoPi + 1e-12;
    for (std::size_t i = 0; i < opt.samples; ++i) {
      const double x = rng.uniform() - 0.5, y = y0 + 3 * rng.uniform();
      tasks.push_back([=] { return verify_pqj(tau_exact(x, y), vo); });
    }
    out.push_back(run_tasks("j_q_expansion_bound", tasks, opt.jobs));
  }
  {  // fundamental domain
    SampleRng rng(sub_seed(1));
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < opt.samples; ++i) {
      const double x = rng.uniform() - 0.5;
      const double y0 = std::sqrt(1 - x * x) + 1e-12;
      const double y = y0 + (3 - y0) * rng.uniform();
      tasks.push_back([=] { return verify_cdplus(tau_exact(x, y), vo); });
    }
    out.push_back(run_tasks("j_or_q_dichotomy", tasks, opt.jobs));
  }
  {  // q-power approximation inside |q| <= 10^-N (or 1/10 when a1 = 0)
    SampleRng rng(sub_seed(2));
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < opt.samples; ++i) {
      const auto n = static_cast<Modulus>(rng.uniform_int(2, 7));
      const bool zero = rng.uniform() < 0.25;
      const TorsionIndex a = random_index(rng, n, zero);
      const double y0 = (zero ? 1 : n) * std::log(10.0) / kTwoPi + 1e-9;
      const double x = rng.uniform() - 0.5, y = y0 + 2 * rng.uniform();
      tasks.push_back([=] { return verify_siegel_q_power(a, tau_exact(x, y), vo); });
    }
    out.push_back(run_tasks("siegel_q_power", tasks, opt.jobs));
  }
  {  // Siegel vs j anywhere in the upper half plane
    SampleRng rng(sub_seed(3));
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < opt.samples; ++i) {
      const auto n = static_cast<Modulus>(rng.uniform_int(2, 12));
      const TorsionIndex a = random_index(rng, n, false);
      const TorsionIndex b = rng.uniform() < 0.2 ? TorsionIndex::make(n, 0, a.a2 ? a.a2 : 1) : a;
      const double x = 4 * rng.uniform() - 2;
      const double y = std::exp(std::log(0.05) + (std::log(3.0) - std::log(0.05)) * rng.uniform());
      tasks.push_back([=] { return verify_siegel_vs_j(b, tau_exact(x, y), vo); });
    }
    out.push_back(run_tasks("siegel_vs_j", tasks, opt.jobs));
  }
  {  // nearest cusp of X_split(5): a point of D moved by a random SL2(Z) word
    SampleRng rng(sub_seed(4));
    const CuspTable table(preset_subgroup(PresetKind::SplitNormalizer, 5, 1));
    std::vector<Task> tasks;
    for (std::size_t i = 0; i < opt.samples; ++i) {
      double x = rng.uniform() - 0.5, y = 1.35 + 3.65 * rng.uniform();
      const auto len = rng.uniform_int(0, 4);
      for (std::int64_t k = 0; k < len; ++k) {
        x += static_cast<double>(rng.uniform_int(-2, 2));
        const double r2 = x * x + y * y;  // S: tau -> -1/tau
        x = -x / r2;
        y = y / r2;
      }
      tasks.push_back([=, &table] { return verify_everysimple(table, tau_exact(x, y), vo); });
    }
    out.push_back(run_tasks("q_inverse_vs_j", tasks, opt.jobs));
  }
  return out;
}

}  // namespace runge
