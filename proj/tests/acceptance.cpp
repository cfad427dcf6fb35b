// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--expect-red 2,...]
//
// Exit status is 0 when every criterion passes, except those listed after
// --expect-red, which must fail (a known-red criterion turning green is
// reported too, so the list cannot go stale silently).

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "runge/analytic.hpp"
#include "runge/bounds.hpp"
#include "runge/cusps.hpp"
#include "runge/error.hpp"
#include "runge/linalg.hpp"
#include "runge/sweeps.hpp"
#include "runge/units.hpp"

using namespace runge;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;  // 0: none
  std::function<Outcome()> run;
};

SubgroupG split(std::uint32_t p) { return preset_subgroup(PresetKind::SplitNormalizer, p, 1); }

SubgroupG trivial_group(Modulus n) {
  const std::vector<ResidueMatrix> gens{ResidueMatrix::identity(n)};
  return generate_subgroup(n, gens);
}

std::vector<SubgroupG> preset_list() {
  std::vector<SubgroupG> gs;
  for (std::uint32_t p : {3u, 5u, 7u, 11u, 13u}) gs.push_back(split(p));
  for (std::uint32_t p : {5u, 7u}) gs.push_back(preset_subgroup(PresetKind::Borel, p, 1));
  for (std::uint32_t p : {3u, 5u}) gs.push_back(preset_subgroup(PresetKind::Full, p, 1));
  return gs;
}

// 1
Outcome cusp_combinatorics() {
  int primes = 0;
  for (std::uint32_t p = 3; p <= 101; p += 2) {
    if (!is_prime(p)) continue;
    ++primes;
    const CuspTable t(split(p));
    std::multiset<std::size_t> degrees;
    for (const auto& o : t.orbits()) degrees.insert(o.degree());
    if (t.cusps().size() != (p + 1) / 2 || t.orbit_count() != 2 ||
        degrees != std::multiset<std::size_t>{1, (p - 1) / 2}) {
      std::ostringstream os;
      os << "p=" << p << ": " << t.cusps().size() << " cusps, " << t.orbit_count() << " orbits";
      return {false, os.str()};
    }
  }
  return {true, std::to_string(primes) + " primes: (p+1)/2 cusps, orbit degrees {1,(p-1)/2}"};
}

// 2
Outcome exact_cusp_orders() {
  std::size_t checked = 0, mismatches = 0, below = 0, inf_mismatches = 0;
  std::string first;
  for (std::uint32_t p : {3u, 5u, 7u, 11u, 13u}) {
    const SubgroupG g = split(p);
    const CuspTable t(g);
    const long both = -2L * p * (p - 1) * (p - 1), one = static_cast<long>(p) * (p - 1) * (p - 1) * (p - 1);
    for (std::size_t ci = 0; ci < t.cusps().size(); ++ci) {
      const CuspClass& c = t.cusps()[ci];
      for (std::uint32_t a1 = 0; a1 < p; ++a1)
        for (std::uint32_t a2 = 0; a2 < p; ++a2) {
          if (a1 == 0 && a2 == 0) continue;
          const auto a = TorsionIndex::make(p, a1, a2);
          const auto moved = a.times(c.lift);
          const long expect = moved.a1 != 0 && moved.a2 != 0 ? both : one;
          const long ord = ord_w(g, a, c);
          ++checked;
          if (ord != expect) {
            ++mismatches;
            if (ci == 0) ++inf_mismatches;
            if (first.empty()) {
              std::ostringstream os;
              os << "p=" << p << " a=(" << a1 << "," << a2 << ") cusp (" << c.x << "," << c.y << "): ord " << ord
                 << ", expected " << expect;
              first = os.str();
            }
          }
          if (std::labs(ord) < static_cast<long>(p * g.order())) ++below;
        }
    }
  }
  std::ostringstream os;
  os << checked << " (a, cusp) pairs, " << mismatches << " mismatches (" << inf_mismatches << " at the rational cusp), "
     << below << " below p|G|";
  if (!first.empty())
    os << "; first: " << first
       << ". The exact values hold at the rational cusp only: Galois-conjugate cusps share one order and the "
          "weighted degree-zero relation then forces -ord_inf/((p-1)/2) there";
  return {mismatches == 0 && below == 0, os.str()};
}

// 3
Outcome divisor_rank_theorem() {
  std::vector<std::pair<std::string, SubgroupG>> cases;
  for (std::uint32_t p : {3u, 5u, 7u, 11u}) cases.emplace_back("split:" + std::to_string(p), split(p));
  for (std::uint32_t p : {5u, 7u})
    cases.emplace_back("borel:" + std::to_string(p), preset_subgroup(PresetKind::Borel, p, 1));
  for (std::uint32_t p : {3u, 5u, 7u})
    cases.emplace_back("full:" + std::to_string(p), preset_subgroup(PresetKind::Full, p, 1));
  std::ostringstream os;
  for (const auto& [name, g] : cases) {
    const CuspTable t(g);
    const auto rank = divisor_rank(divisor_matrix(g, t));
    os << name << " rank " << rank << "; ";
    if (rank != t.orbit_count() - 1) return {false, os.str() + "expected " + std::to_string(t.orbit_count() - 1)};
  }
  return {true, os.str() + "all equal to (rational cusp orbits) - 1"};
}

// 4
Outcome degree_zero_relations() {
  std::size_t checks = 0;
  for (Modulus n : {3u, 4u, 5u, 7u}) {
    const auto cusps = enumerate_cusps(trivial_group(n));
    for (std::uint32_t a1 = 0; a1 < n; ++a1)
      for (std::uint32_t a2 = 0; a2 < n; ++a2) {
        if (a1 == 0 && a2 == 0) continue;
        long sum = 0;
        for (const auto& c : cusps) sum += ord_u(n, TorsionIndex::make(n, a1, a2), c);
        ++checks;
        if (sum != 0)
          return {false, "X(" + std::to_string(n) + "): degree " + std::to_string(sum) + " for a=(" +
                             std::to_string(a1) + "," + std::to_string(a2) + ")"};
      }
  }
  for (const SubgroupG& g : preset_list()) {
    const CuspTable t(g);
    const auto m = divisor_matrix(g, t);
    for (std::uint32_t a1 = 0; a1 < g.modulus(); ++a1)
      for (std::uint32_t a2 = 0; a2 < g.modulus(); ++a2) {
        if (a1 == 0 && a2 == 0) continue;
        const auto a = TorsionIndex::make(g.modulus(), a1, a2);
        long weighted = 0;
        for (std::size_t r = 0; r < m.row_cusps.size(); ++r)
          weighted += static_cast<long>(m.degrees[r]) * ord_w(g, a, t.cusps()[m.row_cusps[r]]);
        ++checks;
        if (weighted != 0) return {false, "weighted relation fails at N=" + std::to_string(g.modulus())};
      }
  }
  return {true, std::to_string(checks) + " exact identities"};
}

// 5
Outcome runge_unit_contract() {
  std::size_t units = 0;
  for (std::uint32_t p : {5u, 7u, 11u}) {
    const SubgroupG g = split(p);
    const CuspTable t(g);
    const mpz_class gn2 = mpz_class(static_cast<unsigned long>(g.order())) * p * p;
    for (std::size_t o = 0; o < t.orbit_count(); ++o) {
      const std::size_t s = 1;
      const RungeUnit u = runge_unit(g, {o}, s);
      ++units;
      for (std::size_t c = 0; c < u.divisor.size(); ++c) {
        if (t.orbit_of(c) == o && u.divisor[c] <= 0)
          return {false, "p=" + std::to_string(p) + ": order not positive on sigma"};
        if (u.divisor[c] * u.divisor[c] > u.bound_B_squared * gn2 * gn2)
          return {false, "p=" + std::to_string(p) + ": |ord| exceeds B|G|N^2"};
      }
      // ||b||_1 <= s^(s/2+1) (|G|N^2)^(s-1), squared
      mpz_class rhs, gp;
      mpz_ui_pow_ui(rhs.get_mpz_t(), s, s + 2);
      mpz_pow_ui(gp.get_mpz_t(), gn2.get_mpz_t(), 2 * (s - 1));
      if (u.l1_norm * u.l1_norm > rhs * gp) return {false, "p=" + std::to_string(p) + ": ||b||_1 too large"};
    }
  }
  return {true, std::to_string(units) + " units checked"};
}

// 6
Outcome positive_combination() {
  std::mt19937_64 rng(20240601);
  int done = 0;
  while (done < 1000) {
    const std::size_t s = 1 + rng() % 4, t = s + rng() % (9 - s);
    const long a = 1 + static_cast<long>(rng() % 10);
    std::uniform_int_distribution<long> d(-a, a);
    IntMatrix m(s, t);
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < t; ++j) m(i, j) = d(rng);
    if (bareiss_rank(m) < s) continue;
    ++done;
    const auto b = runge_vector(m, a);
    for (const auto& v : m.apply(b))
      if (v <= 0) return {false, "M*b not positive"};
    mpz_class l1 = 0;
    for (const auto& v : b) l1 += abs(v);
    mpz_class rhs, ap;
    mpz_ui_pow_ui(rhs.get_mpz_t(), s, s + 2);
    mpz_ui_pow_ui(ap.get_mpz_t(), a, 2 * s - 2);
    if (l1 * l1 > rhs * ap) return {false, "Hadamard bound exceeded"};
  }
  return {true, "1000 full-rank matrices"};
}

// 7
Outcome analytic_sweeps() {
  SweepOptions opt;
  opt.samples = 1000;
  opt.seed = 42;
  opt.jobs = std::max(1u, std::thread::hardware_concurrency());
  opt.verify.max_precision = kMaxPrecision;
  bool ok = true;
  std::ostringstream os;
  for (const auto& s : run_analytic_sweeps(opt)) {
    os << s.name << " " << s.holds << "/" << s.checked;
    if (s.fails) os << " FAILS=" << s.fails;
    if (s.indeterminate) os << " indeterminate=" << s.indeterminate;
    os << " (worst margin " << s.worst_margin << "); ";
    ok = ok && s.fails == 0 && s.indeterminate == 0 && s.holds == s.checked;
  }
  return {ok, os.str()};
}

// 8
Outcome bound_values() {
  const auto tbo = bound_tbo(1, 72, 7, RealBall::exact(0L, kBoundPrecision), true, false);
  const auto t7 = bound_tspto(7);
  const auto pel = pellarin_degree(1, RealBall::exact(0L, kBoundPrecision), true);
  mpz_class e82;
  mpz_ui_pow_ui(e82.get_mpz_t(), 10, 82);
  const bool a = tbo.exact && *tbo.exact == 740880;
  const bool b = t7.below_general && less(t7.bound.value, t7.general_bound) == Tri::True;
  const bool c = pel.exact && *pel.exact == e82;
  std::ostringstream os;
  os << "740880 exact: " << (a ? "yes" : "no") << "; 161 log 7 < 60*49*36 log 7: " << (b ? "yes" : "no")
     << "; 10^82 exact: " << (c ? "yes" : "no");
  return {a && b && c, os.str()};
}

// 9
Outcome twist_identities() {
  std::mt19937_64 rng(1729);
  std::uniform_int_distribution<long> num(-10'000'000, 10'000'000), den(1, 100'000);
  int done = 0;
  while (done < 100) {
    mpq_class j(num(rng), den(rng));
    j.canonicalize();
    if (j == 0 || j == 1728) continue;
    ++done;
    const auto e = twist_equation(j);
    // independent route through c4, c6 and 1728 Delta = c4^3 - c6^2
    const mpq_class b2 = e.a1 * e.a1 + 4 * e.a2, b4 = e.a1 * e.a3 + 2 * e.a4, b6 = e.a3 * e.a3 + 4 * e.a6;
    const mpq_class c4 = b2 * b2 - 24 * b4, c6 = -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6;
    mpq_class disc = (c4 * c4 * c4 - c6 * c6) / 1728;
    disc.canonicalize();
    mpq_class jj = c4 * c4 * c4 / disc;
    jj.canonicalize();
    const mpq_class t = j - 1728;
    mpq_class expect = j * j / (t * t * t);
    expect.canonicalize();
    if (disc != expect || e.discriminant != expect || jj != j) return {false, "mismatch at j = " + j.get_str()};
  }
  return {true, "100 random rational j"};
}

// 10
Outcome level_cap_chain() {
  std::ostringstream os;
  for (const char* js : {"0", "1", "1729", "-884736", "123456789012345678901234567890"}) {
    const mpz_class j(js);
    std::uint64_t prev = ~std::uint64_t{0};
    for (std::uint64_t p = 3; p < 2000; p += 2) {
      if (!is_prime(p)) continue;
      const auto n = serre_check(p, j).max_n;
      if (n > prev) return {false, "max n increases at p=" + std::to_string(p) + ", j=" + js};
      prev = n;
    }
  }
  os << "max n nonincreasing for 5 values of j over odd p < 2000; ";
  const mpz_class t = three_prime_threshold();
  // threshold certified: x^3 > cap at t, not at t - 1
  auto cap = [](const mpz_class& x) {
    const RealBall xb = RealBall::exact(x, 1024);
    return RealBall::exact(level_kappa(), 1024) * (xb * 23 * xb.log() + 1).sqr();
  };
  const mpz_class u = t - 1;
  if (less(cap(t), RealBall::exact(mpz_class(t * t * t), 1024)) != Tri::True ||
      less(cap(u), RealBall::exact(mpz_class(u * u * u), 1024)) != Tri::False)
    return {false, "threshold not certified"};
  std::mt19937_64 rng(3);
  int triples = 0;
  for (int k = 0; k < 200; ++k) {
    mpz_class start = t;
    if (k > 0) start += mpz_class(std::to_string(rng())) * mpz_class(std::to_string(rng() % 1000 + 1)) * t / 1000;
    mpz_class p, q, r;
    mpz_nextprime(p.get_mpz_t(), mpz_class(start - 1).get_mpz_t());
    mpz_nextprime(q.get_mpz_t(), p.get_mpz_t());
    mpz_class gap = mpz_class(std::to_string(rng() % 1000));
    mpz_nextprime(r.get_mpz_t(), mpz_class(q + gap).get_mpz_t());
    ++triples;
    if (!three_prime_check(p, q, r).rejected) return {false, "triple not rejected at p = " + p.get_str()};
  }
  if (three_prime_check(11, 13, 17).rejected) return {false, "small triple rejected"};
  os << "threshold " << t.get_str().substr(0, 6) << "...e" << t.get_str().size() - 1 << " certified; " << triples
     << " triples beyond it rejected";
  return {true, os.str()};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expect_red;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--expect-red") == 0 && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string tok; std::getline(ss, tok, ',');) expect_red.insert(std::stoi(tok));
    } else {
      std::cerr << "usage: acceptance [--expect-red i,j,...]\n";
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "split_cartan_cusp_combinatorics", 10, cusp_combinatorics},
      {2, "exact_cusp_orders_all_cusps", 30, exact_cusp_orders},
      {3, "divisor_rank", 30, divisor_rank_theorem},
      {4, "degree_zero_relations", 0, degree_zero_relations},
      {5, "runge_unit_contract", 0, runge_unit_contract},
      {6, "integer_positive_combination", 10, positive_combination},
      {7, "analytic_inequality_sweeps", 120, analytic_sweeps},
      {8, "exact_bound_values", 0, bound_values},
      {9, "twist_equation_identities", 0, twist_identities},
      {10, "level_cap_chain", 10, level_cap_chain},
  };

  bool ok = true;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.time_limit_s > 0 && secs > c.time_limit_s) {
      o.pass = false;
      o.detail += "; over the time limit";
    }
    const bool red_expected = expect_red.count(c.id) != 0;
    std::cout << "[" << c.id << "] " << (o.pass ? "PASS" : "FAIL") << " " << c.name << " (" << std::fixed
              << std::setprecision(2) << secs << " s";
    if (c.time_limit_s > 0) std::cout << ", limit " << std::setprecision(0) << c.time_limit_s << " s";
    std::cout << std::defaultfloat << ")" << (red_expected ? " [known red]" : "") << ": " << o.detail << "\n";
    if (red_expected ? o.pass : !o.pass) ok = false;
    if (red_expected && o.pass) std::cout << "    criterion " << c.id << " is listed as known red but passed\n";
  }
  return ok ? 0 : 1;
}
