#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "runge/ball.hpp"
#include "runge/modnt.hpp"

namespace runge {

inline constexpr mpfr_prec_t kBoundPrecision = 128;

struct BoundReport {
  std::string name;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::string value_exact_form;     // generic formula
  std::string value_instantiated;   // formula with the inputs substituted
  RealBall value{kBoundPrecision};  // certified enclosure; upper() is the bound
  std::optional<mpz_class> exact;   // set when the value is an integer
  bool applicable = true;
  std::string reason;

  double value_upper() const { return value.upper_d(); }
};

// log max(|num|, |den|) of the reduced fraction.
RealBall height_rational(const mpq_class& j, mpfr_prec_t prec = kBoundPrecision);

struct CalR {
  RealBall value{kBoundPrecision};       // sum of log p / (p - 1) over p | N in the list
  RealBall log_n_cap{kBoundPrecision};   // log N
  std::vector<std::uint64_t> primes_used;
  bool exact_zero = true;
  bool within_cap = false;               // value <= log N, certified
};

CalR calR(std::uint64_t n, const std::vector<std::uint64_t>& finite_primes, mpfr_prec_t prec = kBoundPrecision);

// 30 |G| N^2 log N; needs at least two Galois orbits of cusps.
BoundReport bound_th1(const SubgroupG& g, mpfr_prec_t prec = kBoundPrecision);
// s^(s/2+1) (g N^2)^s N (R + 30). via_g labels whether g is |G| or |G'|.
BoundReport bound_tbo(std::size_t s, std::uint64_t g, std::uint64_t n, const RealBall& r, bool r_is_zero,
                      bool via_g, mpfr_prec_t prec = kBoundPrecision);
BoundReport bound_tbo(std::size_t s, std::uint64_t g, std::uint64_t n, const CalR& r, bool via_g,
                      mpfr_prec_t prec = kBoundPrecision);

struct TsptoReport {
  BoundReport bound;                    // 23 p log p
  RealBall general_bound{kBoundPrecision};  // 60 p^2 (p-1)^2 log p
  bool below_general = false;           // certified strict inequality
};
TsptoReport bound_tspto(std::uint64_t p, mpfr_prec_t prec = kBoundPrecision);

// 10^82 d^4 max(1, log d)^2 (1 + h)^2.
BoundReport pellarin_degree(std::uint64_t d, const RealBall& h, bool h_is_zero, mpfr_prec_t prec = kBoundPrecision);

// kappa = 16 * 10^82: the isogeny-degree bound at field degree 2.
mpz_class level_kappa();

struct LevelCap {
  RealBall cap{kBoundPrecision};  // kappa (1 + h)^2
  mpz_class kappa;
  std::string kappa_origin;
};
LevelCap split_cartan_level_cap(const RealBall& h);
// Largest n with p^n <= cap (exact integer powers against a certified cap).
std::uint64_t max_level_exponent(const LevelCap& cap, const mpz_class& p);

// 2^8 3^5 j^2 (j - 1728)^2.
mpz_class conductor_cap(const mpz_class& j);

struct TwistEquation {
  mpq_class a1{1}, a2{0}, a3{0}, a4, a6;
  mpq_class discriminant;  // from the b-invariants
  mpq_class j_invariant;   // c4^3 / discriminant
};
TwistEquation twist_equation(const mpq_class& j);

// log N (log log 2N)^6 with the unknown constant set to 1.
RealBall grh_level_value(const mpz_class& conductor, mpfr_prec_t prec = kBoundPrecision);

struct SerreReport {
  std::uint64_t p = 0;
  mpz_class j;
  RealBall height{kBoundPrecision};        // log max(|j|, 1)
  RealBall integral_bound{kBoundPrecision};  // 23 p log p
  bool consistent = false;                  // height <= 23 p log p, certified
  LevelCap cap;
  std::uint64_t max_n = 0;
  std::optional<mpz_class> conductor_cap;
  std::optional<RealBall> grh_value;        // kappa = 1
  bool grh_constant_unknown = true;
};
SerreReport serre_check(std::uint64_t p, const mpz_class& j);

struct ThreePrimeCheck {
  mpz_class product;
  RealBall cap{kBoundPrecision};  // kappa (1 + 23 p log p)^2
  bool rejected = false;          // pqr > cap, certified
};
// p < q < r primes, p >= 11.
ThreePrimeCheck three_prime_check(const mpz_class& p, const mpz_class& q, const mpz_class& r);
// Smallest integer x >= 11 with x^3 > kappa (1 + 23 x log x)^2; every triple
// with p at or beyond it is rejected.
mpz_class three_prime_threshold();

}  // namespace runge
