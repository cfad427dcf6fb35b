#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "runge/ball.hpp"
#include "runge/cusps.hpp"
#include "runge/units.hpp"

namespace runge {

inline constexpr mpfr_prec_t kDefaultPrecision = 128;
inline constexpr mpfr_prec_t kMaxPrecision = 1024;

// Exact element of SL2(Z); entries guarded against int64 overflow.
struct SL2Z {
  std::int64_t a = 1, b = 0, c = 0, d = 1;

  static SL2Z identity() { return {}; }
  static SL2Z S() { return {0, -1, 1, 0}; }
  static SL2Z T(std::int64_t k = 1) { return {1, k, 0, 1}; }

  SL2Z operator*(const SL2Z& o) const;  // throws PrecisionExhausted on overflow
  SL2Z inverse() const { return {d, -b, -c, a}; }
  ComplexBall apply(const ComplexBall& tau) const;  // (a tau + b)/(c tau + d)
  ResidueMatrix mod(Modulus n) const;

  friend bool operator==(const SL2Z&, const SL2Z&) = default;
};

// A point of the upper half plane: Im tau > 0 is certified on construction.
class UpperHalfPoint {
 public:
  explicit UpperHalfPoint(ComplexBall tau);
  static UpperHalfPoint from_doubles(double re, double im, mpfr_prec_t prec);

  const ComplexBall& tau() const noexcept { return tau_; }
  mpfr_prec_t prec() const noexcept { return tau_.prec(); }
  ComplexBall q() const { return exp_2pi_i(tau_); }
  // log|q| = -2 pi Im tau.
  RealBall log_abs_q() const;

 private:
  ComplexBall tau_;
};

// Builds tau at a requested precision; lets verifications escalate.
using TauSource = std::function<ComplexBall(mpfr_prec_t)>;
TauSource tau_exact(double re, double im);
TauSource tau_exact(const mpq_class& re, const mpq_class& im);

struct Reduction {
  UpperHalfPoint tau;  // gamma * input
  SL2Z gamma;
};

// Standard fundamental domain: -1/2 <= Re < 1/2, |tau| >= 1, with points of
// the unit circle mapped to Re <= 0. Decisions use the midpoint; tau' is
// computed by applying the exact gamma to the input ball.
Reduction reduce_fundamental(const UpperHalfPoint& tau);

// j(tau) = E4^3 / (q prod (1-q^n)^24), evaluated after reduction.
ComplexBall eval_j(const UpperHalfPoint& tau, mpfr_prec_t prec);
// Coefficients of q^-1, q^0, q^1, ... of j, exact.
std::vector<mpz_class> j_q_expansion(std::size_t terms);

// Siegel function g_a at tau for the representative with 0 <= a1 < 1,
// including its phase; evaluated directly from the product (no reduction).
ComplexBall eval_siegel(const TorsionIndex& a, const UpperHalfPoint& tau, mpfr_prec_t prec);
// log|g_a(tau)|, evaluated at the reduced point with a replaced by a gamma^-1.
RealBall log_abs_siegel(const TorsionIndex& a, const UpperHalfPoint& tau, mpfr_prec_t prec);

enum class Verdict { Holds, Fails, Indeterminate };
std::string_view to_string(Verdict v) noexcept;

struct CheckReport {
  std::string name;
  Verdict verdict = Verdict::Indeterminate;
  double margin = 0;     // certified lower bound of (rhs - lhs); negative when failing
  mpfr_prec_t precision = 0;  // precision of the deciding evaluation
};

struct VerifyOptions {
  mpfr_prec_t start_precision = kDefaultPrecision;
  mpfr_prec_t max_precision = kMaxPrecision;
};

// |j - 1/q - 744| <= 330000 |q| for |q| <= 0.005.
CheckReport verify_pqj(const TauSource& tau, const VerifyOptions& opt = {});
// For tau in the fundamental domain: |j| <= 2500 or |q| < 0.001.
CheckReport verify_cdplus(const TauSource& tau, const VerifyOptions& opt = {});
// Siegel estimates: the q-power approximation (two regimes, depending on
// whether a1 is 0 mod 1) when its |q| hypothesis is not certainly violated,
// and the bound in terms of |j|, which always applies.
std::vector<CheckReport> verify_siegel_bounds(const TorsionIndex& a, const TauSource& tau,
                                              const VerifyOptions& opt = {});
CheckReport verify_siegel_q_power(const TorsionIndex& a, const TauSource& tau, const VerifyOptions& opt = {});
CheckReport verify_siegel_vs_j(const TorsionIndex& a, const TauSource& tau, const VerifyOptions& opt = {});

struct NearestCusp {
  std::size_t cusp_index = 0;  // CuspTable order
  CuspClass cusp;
  SL2Z gamma;                  // reduction matrix
  double abs_j_lower = 0;
  double abs_q_upper = 0;      // |q| at the reduced point
};

// Archimedean nearest cusp for a point with certified |j| > 2500.
NearestCusp nearest_cusp(const SubgroupG& g, const TauSource& tau, const VerifyOptions& opt = {});
NearestCusp nearest_cusp(const CuspTable& table, const TauSource& tau, const VerifyOptions& opt = {});
// (3/2)|j| >= |1/q_c| >= (1/2)|j| at the nearest cusp; margin is relative to |j|.
CheckReport verify_everysimple(const SubgroupG& g, const TauSource& tau, const VerifyOptions& opt = {});
CheckReport verify_everysimple(const CuspTable& table, const TauSource& tau, const VerifyOptions& opt = {});

struct PadicOrder {
  mpq_class value;   // v(g_a) with v(p) = 1
  mpq_class bound;   // (1/12) vq + (v | N ? 1/(p-1) : 0)
  bool bound_holds = false;
};

// Exact valuation of g_a(q) at a finite place with v(q) = vq > 0.
PadicOrder padic_siegel_order(const TorsionIndex& a, const mpq_class& vq, std::uint64_t p, bool v_divides_n);

}  // namespace runge
