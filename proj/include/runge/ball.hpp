#pragma once

#include <string>
#include <utility>

#include <gmpxx.h>
#include <mpfr.h>

namespace runge {

// Owning mpfr_t.
class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec = 64);
  Mpfr(const Mpfr& o);
  Mpfr(Mpfr&& o) noexcept;
  Mpfr& operator=(const Mpfr& o);
  Mpfr& operator=(Mpfr&& o) noexcept;
  ~Mpfr();

  mpfr_ptr get() noexcept { return v_; }
  mpfr_srcptr get() const noexcept { return v_; }
  mpfr_prec_t prec() const noexcept { return mpfr_get_prec(v_); }
  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(v_, rnd); }

 private:
  mpfr_t v_;
};

enum class Tri { True, False, Unknown };

// Real interval stored as midpoint (P bits) and radius (64 bits, rounded up).
// Every operation returns a ball containing all results of the exact
// operation on members of the inputs.
class RealBall {
 public:
  explicit RealBall(mpfr_prec_t prec = 128);

  static RealBall exact(long v, mpfr_prec_t prec);
  static RealBall exact(const mpz_class& v, mpfr_prec_t prec);
  static RealBall exact(const mpq_class& v, mpfr_prec_t prec);
  // The double is treated as exact.
  static RealBall from_double(double v, mpfr_prec_t prec);
  static RealBall from_interval(const Mpfr& lo, const Mpfr& hi, mpfr_prec_t prec);
  static RealBall pi(mpfr_prec_t prec);
  static RealBall log2(mpfr_prec_t prec);

  mpfr_prec_t prec() const noexcept { return mid_.prec(); }
  const Mpfr& mid() const noexcept { return mid_; }
  const Mpfr& rad() const noexcept { return rad_; }

  Mpfr upper() const;
  Mpfr lower() const;
  double upper_d() const;  // rounded up
  double lower_d() const;  // rounded down
  double mid_d() const { return mid_.to_double(); }
  double rad_d() const { return rad_.to_double(MPFR_RNDU); }

  bool contains(const mpq_class& v) const;
  bool contains_zero() const;
  bool is_finite() const;
  // Certified sign of every member: +1, -1, or 0 when zero is not excluded.
  int certain_sign() const;

  // Widens the radius by e (e >= 0).
  void add_error(const Mpfr& e);
  void add_error(double e);

  RealBall operator-() const;
  friend RealBall operator+(const RealBall& a, const RealBall& b);
  friend RealBall operator-(const RealBall& a, const RealBall& b);
  friend RealBall operator*(const RealBall& a, const RealBall& b);
  friend RealBall operator/(const RealBall& a, const RealBall& b);
  friend RealBall operator*(const RealBall& a, long k);
  friend RealBall operator+(const RealBall& a, long k);

  RealBall inverse() const;  // throws Indeterminate if 0 is in the ball
  RealBall abs() const;
  RealBall sqr() const;
  RealBall sqrt() const;     // lower end clamped at 0
  RealBall exp() const;
  RealBall log() const;      // throws Indeterminate unless certainly positive
  RealBall cos() const;
  RealBall sin() const;
  RealBall pow_ui(unsigned long e) const;

  std::string to_string(int digits = 20) const;

 private:
  Mpfr mid_;
  Mpfr rad_;
  void round_error();  // adds 2^-P |mid| for the rounding of the midpoint
};

Tri less(const RealBall& a, const RealBall& b);
Tri less_equal(const RealBall& a, const RealBall& b);
Tri less(const RealBall& a, double b);
Tri less_equal(const RealBall& a, double b);

// Rectangular complex ball.
struct ComplexBall {
  RealBall re;
  RealBall im;

  explicit ComplexBall(mpfr_prec_t prec = 128) : re(prec), im(prec) {}
  ComplexBall(RealBall r, RealBall i) : re(std::move(r)), im(std::move(i)) {}

  mpfr_prec_t prec() const noexcept { return re.prec(); }
  static ComplexBall from_doubles(double re, double im, mpfr_prec_t prec);

  ComplexBall operator-() const { return {-re, -im}; }
  friend ComplexBall operator+(const ComplexBall& a, const ComplexBall& b);
  friend ComplexBall operator-(const ComplexBall& a, const ComplexBall& b);
  friend ComplexBall operator*(const ComplexBall& a, const ComplexBall& b);
  friend ComplexBall operator*(const ComplexBall& a, const RealBall& b);
  friend ComplexBall operator/(const ComplexBall& a, const ComplexBall& b);
  friend ComplexBall operator+(const ComplexBall& a, long k);

  ComplexBall inverse() const;
  ComplexBall sqr() const { return *this * *this; }
  ComplexBall pow_ui(unsigned long e) const;
  ComplexBall exp() const;
  RealBall abs() const;
  RealBall norm() const;  // |z|^2
  // Widens both components by e, so the ball contains the disc of radius e.
  void add_error(const Mpfr& e);
  void add_error(double e);
  bool contains(double re, double im) const;
};

// exp(2 pi i z).
ComplexBall exp_2pi_i(const ComplexBall& z);

}  // namespace runge
