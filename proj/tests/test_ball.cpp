#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "runge/ball.hpp"
#include "runge/error.hpp"

using namespace runge;

namespace {

mpq_class random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-100000, 100000), den(1, 1000);
  mpq_class q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

// f(x) for increasing f, bracketed at 600 bits by directed rounding.
bool encloses(const RealBall& b, int (*f)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t), const mpq_class& x) {
  Mpfr lo(600), hi(600);
  Mpfr a_lo(600), a_hi(600);
  mpfr_set_q(a_lo.get(), x.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(a_hi.get(), x.get_mpq_t(), MPFR_RNDU);
  f(lo.get(), a_lo.get(), MPFR_RNDD);
  f(hi.get(), a_hi.get(), MPFR_RNDU);
  const Mpfr bl = b.lower(), bu = b.upper();
  return mpfr_lessequal_p(bl.get(), lo.get()) && mpfr_lessequal_p(hi.get(), bu.get());
}

}  // namespace

TEST_CASE("exact constructions") {
  const auto b = RealBall::exact(mpq_class(1, 3), 128);
  CHECK(b.contains(mpq_class(1, 3)));
  CHECK_FALSE(b.contains(mpq_class(1, 3) + mpq_class(1, 1000000)));
  CHECK(RealBall::exact(7L, 64).certain_sign() == 1);
  CHECK(RealBall::exact(0L, 64).contains_zero());
  CHECK(RealBall::from_double(0.5, 64).contains(mpq_class(1, 2)));
}

TEST_CASE("field operations contain the exact rational result") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const mpq_class x = random_rational(rng), y = random_rational(rng);
    const mpfr_prec_t prec = 53 + rng() % 200;
    const auto bx = RealBall::exact(x, prec), by = RealBall::exact(y, prec);
    CHECK((bx + by).contains(x + y));
    CHECK((bx - by).contains(x - y));
    CHECK((bx * by).contains(x * y));
    if (y != 0) CHECK((bx / by).contains(x / y));
    CHECK(bx.sqr().contains(x * x));
    CHECK((-bx).contains(-x));
    CHECK(bx.abs().contains(abs(x)));
    CHECK((bx * 37).contains(x * 37));
    CHECK((bx + 5).contains(x + 5));
    CHECK(bx.pow_ui(3).contains(x * x * x));
  }
}

TEST_CASE("wide inputs propagate their radius") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const mpq_class x = random_rational(rng), y = random_rational(rng);
    RealBall bx = RealBall::exact(x, 128), by = RealBall::exact(y, 128);
    bx.add_error(0.25);
    by.add_error(0.5);
    const mpq_class xs = x + mpq_class(1, 4), ys = y - mpq_class(1, 2);  // endpoints of the inputs
    CHECK((bx * by).contains(xs * ys));
    CHECK((bx + by).contains(xs + ys));
    CHECK((bx - by).contains(xs - ys));
  }
}

TEST_CASE("transcendental functions enclose MPFR reference values") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 500; ++i) {
    const mpq_class x(static_cast<long>(rng() % 20000) - 10000, 997);
    const auto b = RealBall::exact(x, 160);
    CHECK(encloses(b.exp(), mpfr_exp, x));
    const mpq_class pos = abs(x) + mpq_class(1, 7);
    const auto bp = RealBall::exact(pos, 160);
    CHECK(encloses(bp.log(), mpfr_log, pos));
    CHECK(encloses(bp.sqrt(), mpfr_sqrt, pos));
    // cos/sin: compare with a high-precision midpoint and the ball's radius
    Mpfr ref(600), arg(600);
    mpfr_set_q(arg.get(), x.get_mpq_t(), MPFR_RNDN);
    mpfr_cos(ref.get(), arg.get(), MPFR_RNDN);
    const auto c = b.cos();
    CHECK(mpfr_lessequal_p(c.lower().get(), ref.get()));
    CHECK(mpfr_lessequal_p(ref.get(), c.upper().get()));
    mpfr_sin(ref.get(), arg.get(), MPFR_RNDN);
    const auto s = b.sin();
    CHECK(mpfr_lessequal_p(s.lower().get(), ref.get()));
    CHECK(mpfr_lessequal_p(ref.get(), s.upper().get()));
  }
}

TEST_CASE("domain errors are indeterminate rather than wrong") {
  RealBall z = RealBall::exact(0L, 128);
  z.add_error(1e-3);
  try {
    (void)z.inverse();
    FAIL("expected Indeterminate");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Indeterminate);
  }
  CHECK_THROWS_AS((void)z.log(), Error);
}

TEST_CASE("tri-state comparisons") {
  const auto a = RealBall::exact(1L, 128), b = RealBall::exact(2L, 128);
  CHECK(less(a, b) == Tri::True);
  CHECK(less(b, a) == Tri::False);
  CHECK(less_equal(a, 1.0) == Tri::True);
  RealBall w = RealBall::exact(1L, 128);
  w.add_error(0.5);
  CHECK(less(w, 1.2) == Tri::Unknown);
  CHECK(less_equal(w, 1.5) == Tri::True);
}

TEST_CASE("constants") {
  const auto pi = RealBall::pi(256);
  CHECK(pi.lower_d() <= 3.141592653589793);
  CHECK(pi.upper_d() >= 3.141592653589793);
  CHECK(pi.rad_d() < 1e-70);
  CHECK(RealBall::log2(128).contains(mpq_class(0)) == false);
}

TEST_CASE("complex operations") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 500; ++i) {
    const mpq_class a = random_rational(rng), b = random_rational(rng), c = random_rational(rng),
                    d = random_rational(rng);
    const ComplexBall z{RealBall::exact(a, 128), RealBall::exact(b, 128)};
    const ComplexBall w{RealBall::exact(c, 128), RealBall::exact(d, 128)};
    const ComplexBall p = z * w;
    CHECK(p.re.contains(a * c - b * d));
    CHECK(p.im.contains(a * d + b * c));
    CHECK(z.norm().contains(a * a + b * b));
    if (c != 0 || d != 0) {
      const mpq_class n = c * c + d * d;
      const ComplexBall q = z / w;
      CHECK(q.re.contains((a * c + b * d) / n));
      CHECK(q.im.contains((b * c - a * d) / n));
    }
  }
  // exp(2 pi i * i) = e^{-2 pi}
  const ComplexBall q = exp_2pi_i(ComplexBall::from_doubles(0, 1, 128));
  CHECK(q.re.lower_d() <= 0.0018674427317079893);
  CHECK(q.re.upper_d() >= 0.0018674427317079887);
  CHECK(q.im.contains(mpq_class(0)));
}
