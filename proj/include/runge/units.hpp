#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "runge/cusps.hpp"
#include "runge/linalg.hpp"
#include "runge/modnt.hpp"

namespace runge {

// a = (a1/N, a2/N) in (N^-1 Z / Z)^2, nonzero.
struct TorsionIndex {
  Modulus n = 0;
  std::uint32_t a1 = 0;
  std::uint32_t a2 = 0;

  static TorsionIndex make(Modulus n, std::int64_t a1, std::int64_t a2);
  // Exact order N / gcd(a1, a2, N).
  std::uint32_t order() const;
  // Row vector times matrix.
  TorsionIndex times(const ResidueMatrix& m) const;
  TorsionIndex negated() const;

  friend auto operator<=>(const TorsionIndex&, const TorsionIndex&) = default;
};

mpq_class bernoulli2(const mpq_class& t);
// (1/2) B2({a1}).
mpq_class ell(const TorsionIndex& a);

// Order of u_a at the cusp of X(N) whose SL2 lift is `lift`.
std::int64_t ord_u(const TorsionIndex& a, const ResidueMatrix& lift);
std::int64_t ord_u(Modulus n, const TorsionIndex& a, const CuspClass& c);

// Order of w_a = prod_{sigma in G} u_{a sigma} at a cusp of X_G.
std::int64_t ord_w(const SubgroupG& g, const TorsionIndex& a, const CuspClass& c);

struct DivisorMatrix {
  std::vector<std::size_t> row_cusps;  // cusp index (in CuspTable order) representing each orbit
  std::vector<std::size_t> degrees;    // orbit degrees
  std::vector<TorsionIndex> columns;   // lex-smallest element of each (G, +-1)-orbit on A
  IntMatrix entries;
};

// Orbits of A = (N^-1 Z/Z)^2 \ {0} under a -> +-a sigma, as lex-smallest members.
std::vector<TorsionIndex> torsion_orbit_reps(const SubgroupG& g);

DivisorMatrix divisor_matrix(const SubgroupG& g);
DivisorMatrix divisor_matrix(const SubgroupG& g, const CuspTable& table);
std::size_t divisor_rank(const DivisorMatrix& m);

struct RungeExponent {
  TorsionIndex a;
  mpz_class b;
};

struct RungeUnit {
  std::vector<RungeExponent> exponents;   // nonzero b only
  std::vector<mpz_class> divisor;         // ord at every cusp, CuspTable order
  std::vector<std::size_t> sigma;         // orbit ids
  std::size_t s = 0;
  mpz_class l1_norm;
  mpz_class bound_B_squared;              // B^2 = s^(s+2) (|G| N^2)^(2s-2), exact
  double bound_B = 0;                     // rounded up
  double lambda_budget_log2 = 0;          // 12 B |G| N log 2, rounded up
  double lambda_budget_relaxed = 0;       // 9 B |G| N, rounded up
};

// `spec` is "infinity", "rational", "nonrational" or a comma-separated list of
// orbit ids.
std::vector<std::size_t> resolve_sigma(const CuspTable& table, std::string_view spec);

RungeUnit runge_unit(const SubgroupG& g, const std::vector<std::size_t>& sigma, std::size_t s);

}  // namespace runge
