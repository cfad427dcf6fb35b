#include "runge/bounds.hpp"

#include <algorithm>
#include <sstream>

#include "runge/cusps.hpp"
#include "runge/error.hpp"

namespace runge {

namespace {

constexpr mpfr_prec_t kComparePrecision = 512;

bool exact_zero(const RealBall& b) { return mpfr_zero_p(b.mid().get()) && mpfr_zero_p(b.rad().get()); }

RealBall log_of(const mpz_class& v, mpfr_prec_t prec) { return RealBall::exact(v, prec).log(); }
RealBall log_of(std::uint64_t v, mpfr_prec_t prec) { return log_of(mpz_class(std::to_string(v)), prec); }

std::string str(std::uint64_t v) { return std::to_string(v); }

mpz_class pow_z(const mpz_class& b, unsigned long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

bool certainly(Tri t) { return t == Tri::True; }

// Decides a < b, escalating precision via the supplied builder.
template <class F>
bool decide_less(F&& build, const char* what) {
  for (mpfr_prec_t prec = kBoundPrecision; prec <= 4 * kComparePrecision; prec *= 2) {
    auto [a, b] = build(prec);
    Tri t = less(a, b);
    if (t != Tri::Unknown) return t == Tri::True;
  }
  throw Error(Errc::Indeterminate, std::string("cannot decide ") + what);
}

}  // namespace

RealBall height_rational(const mpq_class& j, mpfr_prec_t prec) {
  mpq_class r = j;
  r.canonicalize();
  mpz_class num = abs(r.get_num()), den = r.get_den();
  mpz_class m = std::max(num, den);
  if (m <= 1) return RealBall::exact(0L, prec);
  return log_of(m, prec);
}

CalR calR(std::uint64_t n, const std::vector<std::uint64_t>& finite_primes, mpfr_prec_t prec) {
  if (n < 1) throw Error(Errc::InvalidArgument, "level must be positive");
  CalR out;
  out.value = RealBall::exact(0L, prec);
  std::vector<std::uint64_t> ps = finite_primes;
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  for (std::uint64_t p : ps) {
    if (!is_prime(p)) throw Error(Errc::InvalidArgument, "not a prime: " + str(p));
    if (n % p != 0) continue;
    out.primes_used.push_back(p);
    out.value = out.value + log_of(p, prec) / RealBall::exact(static_cast<long>(p - 1), prec);
    out.exact_zero = false;
  }
  out.log_n_cap = n == 1 ? RealBall::exact(0L, prec) : log_of(n, prec);
  out.within_cap = out.exact_zero || certainly(less_equal(out.value, out.log_n_cap));
  return out;
}

BoundReport bound_th1(const SubgroupG& g, mpfr_prec_t prec) {
  Modulus n = g.modulus();
  if (n < 2) throw Error(Errc::InvalidArgument, "level must be at least 2");
  CuspTable table(g);
  if (!table.defined_over_q()) throw Error(Errc::NotDefinedOverQ, "det G is not all of (Z/NZ)^x");
  if (table.orbit_count() < 2)
    throw Error(Errc::HypothesisFailed, "Galois action on the cusps is transitive");
  BoundReport r;
  r.name = "th1";
  r.inputs = {{"G_order", str(g.order())}, {"N", str(n)}};
  mpz_class coef = mpz_class(30) * mpz_class(str(g.order())) * mpz_class(str(n)) * mpz_class(str(n));
  r.value_exact_form = "30*|G|*N^2*log(N)";
  r.value_instantiated = coef.get_str() + "*log(" + str(n) + ")";
  r.value = RealBall::exact(coef, prec) * log_of(n, prec);
  return r;
}

BoundReport bound_tbo(std::size_t s, std::uint64_t g, std::uint64_t n, const RealBall& rv, bool r_is_zero,
                      bool via_g, mpfr_prec_t prec) {
  if (s < 1 || g < 1 || n < 1) throw Error(Errc::InvalidArgument, "s, g and N must be positive");
  if (rv.certain_sign() < 0) throw Error(Errc::InvalidArgument, "R must be nonnegative");
  r_is_zero = r_is_zero || exact_zero(rv);
  BoundReport r;
  r.name = "tbo";
  r.inputs = {{"s", str(s)}, {via_g ? "G_order" : "G_prime_order", str(g)}, {"N", str(n)},
              {"R", r_is_zero ? "0" : rv.to_string(12)}};
  r.value_exact_form = via_g ? "s^(s/2+1)*(|G|*N^2)^s*N*(R+30)" : "s^(s/2+1)*(|G'|*N^2)^s*N*(R+30)";

  mpz_class gn2 = mpz_class(str(g)) * mpz_class(str(n)) * mpz_class(str(n));
  mpz_class integral = pow_z(gn2, s) * mpz_class(str(n));
  // s^(s/2+1) = sqrt(s^(s+2)); an integer when s is even or a square.
  mpz_class s_pow = pow_z(mpz_class(str(s)), s + 2);
  mpz_class s_root;
  bool s_exact = mpz_perfect_square_p(s_pow.get_mpz_t()) != 0;
  RealBall s_factor(prec);
  if (s_exact) {
    mpz_sqrt(s_root.get_mpz_t(), s_pow.get_mpz_t());
    s_factor = RealBall::exact(s_root, prec);
  } else {
    s_factor = RealBall::exact(s_pow, prec).sqrt();
  }
  RealBall r_plus = rv + 30;
  r.value = s_factor * RealBall::exact(integral, prec) * r_plus;
  std::string s_str = s_exact ? s_root.get_str() : "sqrt(" + s_pow.get_str() + ")";
  if (r_is_zero) {
    r.value = s_factor * RealBall::exact(mpz_class(integral * 30), prec);
    if (s_exact) {
      r.exact = s_root * integral * 30;
      r.value = RealBall::exact(*r.exact, prec);
      r.value_instantiated = r.exact->get_str();
    } else {
      r.value_instantiated = s_str + "*" + mpz_class(integral * 30).get_str();
    }
  } else {
    mpz_class coef = s_exact ? s_root * integral : integral;
    r.value_instantiated = (s_exact ? coef.get_str() : s_str + "*" + integral.get_str()) + "*(R+30)";
  }
  return r;
}

BoundReport bound_tbo(std::size_t s, std::uint64_t g, std::uint64_t n, const CalR& rv, bool via_g,
                      mpfr_prec_t prec) {
  BoundReport r = bound_tbo(s, g, n, rv.value, rv.exact_zero, via_g, prec);
  if (!rv.exact_zero) {
    std::string terms;
    for (std::uint64_t p : rv.primes_used) {
      if (!terms.empty()) terms += "+";
      terms += "log(" + str(p) + ")/" + str(p - 1);
    }
    auto pos = r.value_instantiated.rfind("(R+30)");
    r.value_instantiated.replace(pos, 6, "(" + terms + "+30)");
    r.inputs.back().second = terms;
  }
  return r;
}

TsptoReport bound_tspto(std::uint64_t p, mpfr_prec_t prec) {
  if (p < 3 || !is_prime(p)) throw Error(Errc::InvalidArgument, "p must be an odd prime");
  TsptoReport out;
  BoundReport& r = out.bound;
  r.name = "tspto";
  r.inputs = {{"p", str(p)}};
  r.value_exact_form = "23*p*log(p)";
  r.value_instantiated = str(23 * p) + "*log(" + str(p) + ")";
  RealBall lp = log_of(p, prec);
  r.value = RealBall::exact(mpz_class(str(23 * p)), prec) * lp;
  mpz_class pz(str(p));
  mpz_class gen = 60 * pz * pz * (pz - 1) * (pz - 1);
  out.general_bound = RealBall::exact(gen, prec) * lp;
  // 23 p < 60 p^2 (p-1)^2 for p >= 3, and log p > 0: decided exactly.
  out.below_general = mpz_class(str(23 * p)) < gen;
  return out;
}

BoundReport pellarin_degree(std::uint64_t d, const RealBall& h, bool h_is_zero, mpfr_prec_t prec) {
  if (d < 1) throw Error(Errc::InvalidArgument, "degree must be positive");
  if (h.certain_sign() < 0) throw Error(Errc::InvalidArgument, "height must be nonnegative");
  h_is_zero = h_is_zero || exact_zero(h);
  BoundReport r;
  r.name = "pellarin_degree";
  r.inputs = {{"d", str(d)}, {"h", h_is_zero ? "0" : h.to_string(12)}};
  r.value_exact_form = "10^82*d^4*max(1,log(d))^2*(1+h)^2";
  mpz_class base = pow_z(10, 82) * pow_z(mpz_class(str(d)), 4);
  // log d <= 1 exactly when d <= 2 (e lies between 2 and 3).
  RealBall logfac = d <= 2 ? RealBall::exact(1L, prec) : log_of(d, prec).sqr();
  RealBall hfac = (h + 1).sqr();
  if (d <= 2 && h_is_zero) {
    r.exact = base;
    r.value = RealBall::exact(base, prec);
    r.value_instantiated = base.get_str();
  } else {
    r.value = RealBall::exact(base, prec) * logfac * hfac;
    r.value_instantiated = "10^82*" + pow_z(mpz_class(str(d)), 4).get_str() +
                           (d <= 2 ? "" : "*log(" + str(d) + ")^2") + "*(1+h)^2";
  }
  return r;
}

mpz_class level_kappa() { return 16 * pow_z(10, 82); }

LevelCap split_cartan_level_cap(const RealBall& h) {
  if (h.certain_sign() < 0) throw Error(Errc::InvalidArgument, "height must be nonnegative");
  LevelCap c;
  c.kappa = level_kappa();
  c.kappa_origin = "cyclic isogeny degree bound at field degree 2 (d^4 = 16, max(1, log 2) = 1)";
  c.cap = RealBall::exact(c.kappa, h.prec()) * (h + 1).sqr();
  return c;
}

std::uint64_t max_level_exponent(const LevelCap& cap, const mpz_class& p) {
  if (p < 2) throw Error(Errc::InvalidArgument, "p must be at least 2");
  std::uint64_t n = 0;
  mpz_class pw = p;
  mpfr_prec_t prec = std::max<mpfr_prec_t>(cap.cap.prec(), kComparePrecision);
  while (true) {
    Tri t = less_equal(RealBall::exact(pw, prec), cap.cap);
    if (t == Tri::Unknown) throw Error(Errc::Indeterminate, "p^n is within the cap's radius");
    if (t == Tri::False) return n;
    ++n;
    pw *= p;
  }
}

mpz_class conductor_cap(const mpz_class& j) {
  if (j == 0 || j == 1728) throw Error(Errc::DegenerateJ, "j = " + j.get_str());
  mpz_class t = j - 1728;
  return mpz_class(256 * 243) * j * j * t * t;
}

TwistEquation twist_equation(const mpq_class& j_in) {
  mpq_class j = j_in;
  j.canonicalize();
  if (j == 0 || j == 1728) throw Error(Errc::DegenerateJ, "j = " + j.get_str());
  TwistEquation e;
  mpq_class t = j - 1728;
  e.a4 = mpq_class(-36) / t;
  e.a6 = mpq_class(-1) / t;
  const mpq_class &a1 = e.a1, &a2 = e.a2, &a3 = e.a3, &a4 = e.a4, &a6 = e.a6;
  mpq_class b2 = a1 * a1 + 4 * a2;
  mpq_class b4 = 2 * a4 + a1 * a3;
  mpq_class b6 = a3 * a3 + 4 * a6;
  mpq_class b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
  e.discriminant = -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6;
  e.discriminant.canonicalize();
  if (e.discriminant != j * j / (t * t * t))
    throw Error(Errc::BoundViolated, "twist discriminant mismatch for j = " + j.get_str());
  mpq_class c4 = b2 * b2 - 24 * b4;
  e.j_invariant = c4 * c4 * c4 / e.discriminant;
  e.j_invariant.canonicalize();
  if (e.j_invariant != j) throw Error(Errc::BoundViolated, "twist j-invariant mismatch for j = " + j.get_str());
  return e;
}

RealBall grh_level_value(const mpz_class& conductor, mpfr_prec_t prec) {
  if (conductor < 2) throw Error(Errc::InvalidArgument, "conductor must be at least 2");
  RealBall ln = log_of(conductor, prec);
  RealBall lln = log_of(mpz_class(2 * conductor), prec).log();
  return ln * lln.pow_ui(6);
}

SerreReport serre_check(std::uint64_t p, const mpz_class& j) {
  if (p < 3 || !is_prime(p)) throw Error(Errc::InvalidArgument, "p must be an odd prime");
  SerreReport r;
  r.p = p;
  r.j = j;
  mpz_class aj = abs(j);
  r.height = aj <= 1 ? RealBall::exact(0L, kBoundPrecision) : log_of(aj, kBoundPrecision);
  r.integral_bound = bound_tspto(p).bound.value;
  if (aj <= 1) {
    r.consistent = true;
  } else {
    // log|j| <= 23 p log p  <=>  |j| <= p^(23p), decided exactly.
    r.consistent = aj <= pow_z(mpz_class(str(p)), 23 * p);
  }
  r.cap = split_cartan_level_cap(r.height);
  r.max_n = max_level_exponent(r.cap, mpz_class(str(p)));
  if (j != 0 && j != 1728) {
    r.conductor_cap = conductor_cap(j);
    r.grh_value = grh_level_value(*r.conductor_cap);
  }
  return r;
}

ThreePrimeCheck three_prime_check(const mpz_class& p, const mpz_class& q, const mpz_class& r) {
  if (p < 11 || !(p < q && q < r)) throw Error(Errc::InvalidArgument, "need 11 <= p < q < r");
  for (const mpz_class* x : {&p, &q, &r})
    if (mpz_probab_prime_p(x->get_mpz_t(), 30) == 0) throw Error(Errc::InvalidArgument, "not a prime: " + x->get_str());
  ThreePrimeCheck c;
  c.product = p * q * r;
  auto build = [&](mpfr_prec_t prec) {
    RealBall pb = RealBall::exact(p, prec);
    RealBall cap = RealBall::exact(level_kappa(), prec) * (pb * 23 * pb.log() + 1).sqr();
    return std::pair{cap, RealBall::exact(c.product, prec)};
  };
  c.cap = build(kBoundPrecision).first;
  c.rejected = decide_less(build, "p*q*r against the three-prime cap");
  return c;
}

mpz_class three_prime_threshold() {
  // x^3 / (1 + 23 x log x)^2 is increasing for x >= 11, so bisect.
  auto above = [](const mpz_class& x) {
    return decide_less(
        [&](mpfr_prec_t prec) {
          RealBall xb = RealBall::exact(x, prec);
          RealBall cap = RealBall::exact(level_kappa(), prec) * (xb * 23 * xb.log() + 1).sqr();
          return std::pair{cap, RealBall::exact(mpz_class(x * x * x), prec)};
        },
        "the three-prime threshold");
  };
  mpz_class lo = 11, hi = pow_z(10, 100);
  if (above(lo) || !above(hi)) throw Error(Errc::BoundViolated, "threshold bracket is wrong");
  while (hi - lo > 1) {
    mpz_class mid = (lo + hi) / 2;
    if (above(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace runge
