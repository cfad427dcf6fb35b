#include "runge/ball.hpp"

#include <algorithm>
#include <sstream>

#include "runge/error.hpp"

namespace runge {

// ---- Mpfr -------------------------------------------------------------------

Mpfr::Mpfr(mpfr_prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_zero(v_, 1);
}

Mpfr::Mpfr(const Mpfr& o) {
  mpfr_init2(v_, o.prec());
  mpfr_set(v_, o.v_, MPFR_RNDN);
}

Mpfr::Mpfr(Mpfr&& o) noexcept {
  mpfr_init2(v_, MPFR_PREC_MIN);
  mpfr_swap(v_, o.v_);
}

Mpfr& Mpfr::operator=(const Mpfr& o) {
  if (this != &o) {
    mpfr_set_prec(v_, o.prec());
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

Mpfr& Mpfr::operator=(Mpfr&& o) noexcept {
  mpfr_swap(v_, o.v_);
  return *this;
}

Mpfr::~Mpfr() { mpfr_clear(v_); }

// ---- RealBall ----------------------------------------------------------------

namespace {

constexpr mpfr_prec_t kRadPrec = 64;

mpfr_prec_t join(const RealBall& a, const RealBall& b) { return std::max(a.prec(), b.prec()); }

Mpfr abs_up(const Mpfr& x) {
  Mpfr r(kRadPrec);
  mpfr_abs(r.get(), x.get(), MPFR_RNDU);
  return r;
}

}  // namespace

RealBall::RealBall(mpfr_prec_t prec) : mid_(prec), rad_(kRadPrec) {}

void RealBall::round_error() {
  Mpfr e = abs_up(mid_);
  mpfr_mul_2si(e.get(), e.get(), -static_cast<long>(prec()), MPFR_RNDU);
  mpfr_add(rad_.get(), rad_.get(), e.get(), MPFR_RNDU);
}

RealBall RealBall::exact(long v, mpfr_prec_t prec) {
  RealBall r(prec);
  if (mpfr_set_si(r.mid_.get(), v, MPFR_RNDN)) r.round_error();
  return r;
}

RealBall RealBall::exact(const mpz_class& v, mpfr_prec_t prec) {
  RealBall r(prec);
  if (mpfr_set_z(r.mid_.get(), v.get_mpz_t(), MPFR_RNDN)) r.round_error();
  return r;
}

RealBall RealBall::exact(const mpq_class& v, mpfr_prec_t prec) {
  RealBall r(prec);
  if (mpfr_set_q(r.mid_.get(), v.get_mpq_t(), MPFR_RNDN)) r.round_error();
  return r;
}

RealBall RealBall::from_double(double v, mpfr_prec_t prec) {
  RealBall r(prec);
  if (mpfr_set_d(r.mid_.get(), v, MPFR_RNDN)) r.round_error();
  return r;
}

RealBall RealBall::from_interval(const Mpfr& lo, const Mpfr& hi, mpfr_prec_t prec) {
  if (!mpfr_number_p(lo.get()) || !mpfr_number_p(hi.get()))
    throw Error(Errc::Indeterminate, "interval endpoint is not finite");
  RealBall r(prec);
  mpfr_add(r.mid_.get(), lo.get(), hi.get(), MPFR_RNDN);
  mpfr_div_2ui(r.mid_.get(), r.mid_.get(), 1, MPFR_RNDN);
  Mpfr up(kRadPrec), down(kRadPrec);
  mpfr_sub(up.get(), hi.get(), r.mid_.get(), MPFR_RNDU);
  mpfr_sub(down.get(), r.mid_.get(), lo.get(), MPFR_RNDU);
  mpfr_max(r.rad_.get(), up.get(), down.get(), MPFR_RNDU);
  if (mpfr_sgn(r.rad_.get()) < 0) mpfr_set_zero(r.rad_.get(), 1);
  return r;
}

RealBall RealBall::pi(mpfr_prec_t prec) {
  RealBall r(prec);
  if (mpfr_const_pi(r.mid_.get(), MPFR_RNDN)) r.round_error();
  return r;
}

RealBall RealBall::log2(mpfr_prec_t prec) {
  RealBall r(prec);
  if (mpfr_const_log2(r.mid_.get(), MPFR_RNDN)) r.round_error();
  return r;
}

Mpfr RealBall::upper() const {
  Mpfr r(prec());
  mpfr_add(r.get(), mid_.get(), rad_.get(), MPFR_RNDU);
  return r;
}

Mpfr RealBall::lower() const {
  Mpfr r(prec());
  mpfr_sub(r.get(), mid_.get(), rad_.get(), MPFR_RNDD);
  return r;
}

double RealBall::upper_d() const { return upper().to_double(MPFR_RNDU); }
double RealBall::lower_d() const { return lower().to_double(MPFR_RNDD); }

bool RealBall::contains(const mpq_class& v) const {
  return mpfr_cmp_q(lower().get(), v.get_mpq_t()) <= 0 && mpfr_cmp_q(upper().get(), v.get_mpq_t()) >= 0;
}

bool RealBall::contains_zero() const { return certain_sign() == 0; }

bool RealBall::is_finite() const { return mpfr_number_p(mid_.get()) && mpfr_number_p(rad_.get()); }

int RealBall::certain_sign() const {
  if (mpfr_sgn(lower().get()) > 0) return 1;
  if (mpfr_sgn(upper().get()) < 0) return -1;
  return 0;
}

void RealBall::add_error(const Mpfr& e) {
  Mpfr a = abs_up(e);
  mpfr_add(rad_.get(), rad_.get(), a.get(), MPFR_RNDU);
}

void RealBall::add_error(double e) {
  Mpfr a(kRadPrec);
  mpfr_set_d(a.get(), e, MPFR_RNDU);
  add_error(a);
}

RealBall RealBall::operator-() const {
  RealBall r = *this;
  mpfr_neg(r.mid_.get(), r.mid_.get(), MPFR_RNDN);
  return r;
}

RealBall operator+(const RealBall& a, const RealBall& b) {
  RealBall r(join(a, b));
  const int inexact = mpfr_add(r.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
  mpfr_add(r.rad_.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
  if (inexact) r.round_error();
  return r;
}

RealBall operator-(const RealBall& a, const RealBall& b) { return a + (-b); }

RealBall operator*(const RealBall& a, const RealBall& b) {
  RealBall r(join(a, b));
  const int inexact = mpfr_mul(r.mid_.get(), a.mid_.get(), b.mid_.get(), MPFR_RNDN);
  Mpfr t(kRadPrec);
  // |ma| rb + |mb| ra + ra rb
  Mpfr ma = abs_up(a.mid_), mb = abs_up(b.mid_);
  mpfr_mul(r.rad_.get(), ma.get(), b.rad_.get(), MPFR_RNDU);
  mpfr_mul(t.get(), mb.get(), a.rad_.get(), MPFR_RNDU);
  mpfr_add(r.rad_.get(), r.rad_.get(), t.get(), MPFR_RNDU);
  mpfr_mul(t.get(), a.rad_.get(), b.rad_.get(), MPFR_RNDU);
  mpfr_add(r.rad_.get(), r.rad_.get(), t.get(), MPFR_RNDU);
  if (inexact) r.round_error();
  return r;
}

RealBall operator/(const RealBall& a, const RealBall& b) { return a * b.inverse(); }

RealBall operator*(const RealBall& a, long k) {
  RealBall r(a.prec());
  const int inexact = mpfr_mul_si(r.mid_.get(), a.mid_.get(), k, MPFR_RNDN);
  mpfr_mul_ui(r.rad_.get(), a.rad_.get(), static_cast<unsigned long>(k < 0 ? -k : k), MPFR_RNDU);
  if (inexact) r.round_error();
  return r;
}

RealBall operator+(const RealBall& a, long k) { return a + RealBall::exact(k, a.prec()); }

RealBall RealBall::inverse() const {
  const Mpfr lo = lower(), hi = upper();
  if (mpfr_sgn(lo.get()) <= 0 && mpfr_sgn(hi.get()) >= 0)
    throw Error(Errc::Indeterminate, "division by a ball containing zero");
  Mpfr l(prec()), h(prec());
  mpfr_ui_div(l.get(), 1, hi.get(), MPFR_RNDD);
  mpfr_ui_div(h.get(), 1, lo.get(), MPFR_RNDU);
  return from_interval(l, h, prec());
}

RealBall RealBall::abs() const {
  if (contains_zero()) {
    const Mpfr lo = lower(), hi = upper();
    Mpfr top(prec());
    mpfr_neg(top.get(), lo.get(), MPFR_RNDU);
    mpfr_max(top.get(), top.get(), hi.get(), MPFR_RNDU);
    return from_interval(Mpfr(prec()), top, prec());
  }
  RealBall r = *this;
  mpfr_abs(r.mid_.get(), r.mid_.get(), MPFR_RNDN);
  return r;
}

RealBall RealBall::sqr() const {
  const RealBall a = abs();
  const Mpfr lo = a.lower(), hi = a.upper();
  Mpfr l(prec()), h(prec());
  if (mpfr_sgn(lo.get()) > 0) mpfr_sqr(l.get(), lo.get(), MPFR_RNDD);
  mpfr_sqr(h.get(), hi.get(), MPFR_RNDU);
  return from_interval(l, h, prec());
}

RealBall RealBall::sqrt() const {
  const Mpfr lo = lower(), hi = upper();
  if (mpfr_sgn(hi.get()) < 0) throw Error(Errc::Indeterminate, "square root of a negative ball");
  Mpfr l(prec()), h(prec());
  if (mpfr_sgn(lo.get()) > 0) mpfr_sqrt(l.get(), lo.get(), MPFR_RNDD);
  mpfr_sqrt(h.get(), hi.get(), MPFR_RNDU);
  return from_interval(l, h, prec());
}

RealBall RealBall::exp() const {
  Mpfr l(prec()), h(prec());
  mpfr_exp(l.get(), lower().get(), MPFR_RNDD);
  mpfr_exp(h.get(), upper().get(), MPFR_RNDU);
  return from_interval(l, h, prec());
}

RealBall RealBall::log() const {
  const Mpfr lo = lower();
  if (mpfr_sgn(lo.get()) <= 0) throw Error(Errc::Indeterminate, "logarithm of a ball not certainly positive");
  Mpfr l(prec()), h(prec());
  mpfr_log(l.get(), lo.get(), MPFR_RNDD);
  mpfr_log(h.get(), upper().get(), MPFR_RNDU);
  return from_interval(l, h, prec());
}

// cos and sin are 1-Lipschitz.
RealBall RealBall::cos() const {
  RealBall r(prec());
  const int inexact = mpfr_cos(r.mid_.get(), mid_.get(), MPFR_RNDN);
  r.rad_ = rad_;
  if (inexact) r.round_error();
  return r;
}

RealBall RealBall::sin() const {
  RealBall r(prec());
  const int inexact = mpfr_sin(r.mid_.get(), mid_.get(), MPFR_RNDN);
  r.rad_ = rad_;
  if (inexact) r.round_error();
  return r;
}

RealBall RealBall::pow_ui(unsigned long e) const {
  RealBall result = exact(1, prec()), base = *this;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base.sqr();
  }
  return result;
}

std::string RealBall::to_string(int digits) const {
  std::ostringstream os;
  char* m = nullptr;
  mpfr_asprintf(&m, "%.*Rg +/- %.3Rg", digits, mid_.get(), rad_.get());
  os << m;
  mpfr_free_str(m);
  return os.str();
}

Tri less(const RealBall& a, const RealBall& b) {
  const RealBall d = a - b;
  if (mpfr_sgn(d.upper().get()) < 0) return Tri::True;
  if (mpfr_sgn(d.lower().get()) >= 0) return Tri::False;
  return Tri::Unknown;
}

Tri less_equal(const RealBall& a, const RealBall& b) {
  const RealBall d = a - b;
  if (mpfr_sgn(d.upper().get()) <= 0) return Tri::True;
  if (mpfr_sgn(d.lower().get()) > 0) return Tri::False;
  return Tri::Unknown;
}

Tri less(const RealBall& a, double b) { return less(a, RealBall::from_double(b, a.prec())); }
Tri less_equal(const RealBall& a, double b) { return less_equal(a, RealBall::from_double(b, a.prec())); }

// ---- ComplexBall -------------------------------------------------------------

ComplexBall ComplexBall::from_doubles(double re, double im, mpfr_prec_t prec) {
  return {RealBall::from_double(re, prec), RealBall::from_double(im, prec)};
}

ComplexBall operator+(const ComplexBall& a, const ComplexBall& b) { return {a.re + b.re, a.im + b.im}; }
ComplexBall operator-(const ComplexBall& a, const ComplexBall& b) { return {a.re - b.re, a.im - b.im}; }

ComplexBall operator*(const ComplexBall& a, const ComplexBall& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

ComplexBall operator*(const ComplexBall& a, const RealBall& b) { return {a.re * b, a.im * b}; }

ComplexBall operator/(const ComplexBall& a, const ComplexBall& b) { return a * b.inverse(); }

ComplexBall operator+(const ComplexBall& a, long k) { return {a.re + k, a.im}; }

RealBall ComplexBall::norm() const { return re.sqr() + im.sqr(); }

RealBall ComplexBall::abs() const { return norm().sqrt(); }

ComplexBall ComplexBall::inverse() const {
  const RealBall inv = norm().inverse();
  return {re * inv, -(im * inv)};
}

ComplexBall ComplexBall::pow_ui(unsigned long e) const {
  ComplexBall result(RealBall::exact(1, prec()), RealBall(prec())), base = *this;
  while (e) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base.sqr();
  }
  return result;
}

ComplexBall ComplexBall::exp() const {
  const RealBall m = re.exp();
  return {m * im.cos(), m * im.sin()};
}

void ComplexBall::add_error(const Mpfr& e) {
  re.add_error(e);
  im.add_error(e);
}

void ComplexBall::add_error(double e) {
  re.add_error(e);
  im.add_error(e);
}

bool ComplexBall::contains(double r, double i) const {
  mpq_class qr(r), qi(i);
  return re.contains(qr) && im.contains(qi);
}

ComplexBall exp_2pi_i(const ComplexBall& z) {
  const RealBall two_pi = RealBall::pi(z.prec()) * 2;
  return ComplexBall(-(z.im * two_pi), z.re * two_pi).exp();
}

}  // namespace runge
