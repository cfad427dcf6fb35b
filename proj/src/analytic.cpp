#include "runge/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "runge/error.hpp"

namespace runge {

namespace {

std::int64_t checked_mul(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_mul_overflow(x, y, &r)) throw Error(Errc::PrecisionExhausted, "SL2(Z) entry overflow");
  return r;
}

std::int64_t checked_add(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_add_overflow(x, y, &r)) throw Error(Errc::PrecisionExhausted, "SL2(Z) entry overflow");
  return r;
}

ComplexBall scale(const ComplexBall& z, long k) { return {z.re * k, z.im * k}; }

ComplexBall real_ball(const RealBall& r) { return {r, RealBall(r.prec())}; }

RealBall exact_q(const mpq_class& q, mpfr_prec_t prec) { return RealBall::exact(q, prec); }

// 1 + (disc of radius eta), for multiplicative tail factors.
ComplexBall one_plus_disc(const Mpfr& eta, mpfr_prec_t prec) {
  ComplexBall f(RealBall::exact(1, prec), RealBall(prec));
  f.add_error(eta);
  return f;
}

// Number of terms M with |q|^M < 2^(-prec-16), from a certified bound on log|q|.
std::size_t truncation_terms(const RealBall& log_abs_q, mpfr_prec_t prec) {
  const double neg_log2 = -log_abs_q.upper_d() / std::log(2.0) * (1 - 1e-12);
  if (!(neg_log2 > 0)) throw Error(Errc::Indeterminate, "|q| < 1 is not certified");
  const double m = std::ceil((static_cast<double>(prec) + 16) / neg_log2);
  if (m > 2e6) throw Error(Errc::Indeterminate, "q too close to the unit circle for series evaluation");
  return std::max<std::size_t>(1, static_cast<std::size_t>(m));
}

// -log(1 - r)/r is increasing in r, so evaluating at the upper end of r
// bounds it over the whole ball.
RealBall log_factor(const RealBall& r) {
  const RealBall one = RealBall::exact(1, r.prec());
  const Mpfr top = r.upper();
  if (mpfr_sgn(top.get()) <= 0) return one;
  const RealBall rt = RealBall::from_interval(top, top, r.prec());
  return -(one - rt).log() / rt;
}

Mpfr upper_of(const RealBall& b) { return b.upper(); }

}  // namespace

// ---- SL2Z ---------------------------------------------------------------------

SL2Z SL2Z::operator*(const SL2Z& o) const {
  return {checked_add(checked_mul(a, o.a), checked_mul(b, o.c)), checked_add(checked_mul(a, o.b), checked_mul(b, o.d)),
          checked_add(checked_mul(c, o.a), checked_mul(d, o.c)), checked_add(checked_mul(c, o.b), checked_mul(d, o.d))};
}

ComplexBall SL2Z::apply(const ComplexBall& tau) const {
  const ComplexBall num = scale(tau, a) + b;
  const ComplexBall den = scale(tau, c) + d;
  return num / den;
}

ResidueMatrix SL2Z::mod(Modulus n) const { return ResidueMatrix::make(n, a, b, c, d); }

// ---- UpperHalfPoint -----------------------------------------------------------

UpperHalfPoint::UpperHalfPoint(ComplexBall tau) : tau_(std::move(tau)) {
  const int s = tau_.im.certain_sign();
  if (s == 1) return;
  if (mpfr_sgn(tau_.im.upper().get()) <= 0) throw Error(Errc::InvalidArgument, "Im tau must be positive");
  throw Error(Errc::Indeterminate, "Im tau > 0 is not certified");
}

UpperHalfPoint UpperHalfPoint::from_doubles(double re, double im, mpfr_prec_t prec) {
  return UpperHalfPoint(ComplexBall::from_doubles(re, im, prec));
}

RealBall UpperHalfPoint::log_abs_q() const { return -(tau_.im * RealBall::pi(prec()) * 2); }

TauSource tau_exact(double re, double im) {
  return [re, im](mpfr_prec_t prec) { return ComplexBall::from_doubles(re, im, prec); };
}

TauSource tau_exact(const mpq_class& re, const mpq_class& im) {
  return [re, im](mpfr_prec_t prec) { return ComplexBall(exact_q(re, prec), exact_q(im, prec)); };
}

// ---- reduction ----------------------------------------------------------------

Reduction reduce_fundamental(const UpperHalfPoint& in) {
  const mpfr_prec_t prec = in.prec();
  // Decisions follow the midpoint; the ball is mapped once by the exact gamma.
  Mpfr x(prec), y(prec), r2(prec), tmp(prec);
  mpfr_set(x.get(), in.tau().re.mid().get(), MPFR_RNDN);
  mpfr_set(y.get(), in.tau().im.mid().get(), MPFR_RNDN);
  SL2Z g;
  mpz_class n;
  for (int iter = 0; iter < 100000; ++iter) {
    mpfr_add_d(tmp.get(), x.get(), 0.5, MPFR_RNDN);
    mpfr_get_z(n.get_mpz_t(), tmp.get(), MPFR_RNDD);
    if (n != 0) {
      if (!n.fits_slong_p()) throw Error(Errc::PrecisionExhausted, "translation too large");
      mpfr_sub_z(x.get(), x.get(), n.get_mpz_t(), MPFR_RNDN);
      g = SL2Z::T(-n.get_si()) * g;
    }
    mpfr_sqr(r2.get(), x.get(), MPFR_RNDN);
    mpfr_sqr(tmp.get(), y.get(), MPFR_RNDN);
    mpfr_add(r2.get(), r2.get(), tmp.get(), MPFR_RNDN);
    const int cmp = mpfr_cmp_ui(r2.get(), 1);
    if (cmp < 0 || (cmp == 0 && mpfr_sgn(x.get()) > 0)) {
      // -1/(x + iy) = (-x + iy)/|.|^2
      mpfr_div(x.get(), x.get(), r2.get(), MPFR_RNDN);
      mpfr_neg(x.get(), x.get(), MPFR_RNDN);
      mpfr_div(y.get(), y.get(), r2.get(), MPFR_RNDN);
      g = SL2Z::S() * g;
      continue;
    }
    return {UpperHalfPoint(g.apply(in.tau())), g};
  }
  throw Error(Errc::PrecisionExhausted, "fundamental-domain reduction did not terminate");
}

// ---- j ------------------------------------------------------------------------

ComplexBall eval_j(const UpperHalfPoint& tau_in, mpfr_prec_t prec) {
  prec = std::max(prec, tau_in.prec());
  const Reduction red = reduce_fundamental(tau_in);
  const UpperHalfPoint& tau = red.tau;
  const ComplexBall q = tau.q();
  const RealBall qa = q.abs();
  if (less(qa, 0.5) != Tri::True) throw Error(Errc::Indeterminate, "reduced |q| is not certified small");
  const std::size_t m = truncation_terms(tau.log_abs_q(), prec);

  // sigma_3(n), n <= m
  std::vector<long> sigma3(m + 1, 0);
  for (std::size_t d = 1; d <= m; ++d) {
    const long d3 = static_cast<long>(d * d * d);
    for (std::size_t k = d; k <= m; k += d) sigma3[k] += d3;
  }
  ComplexBall series(prec);
  for (std::size_t k = m; k >= 1; --k) series = (series + sigma3[k]) * q;
  ComplexBall e4 = scale(series, 240) + 1;
  {
    // sigma_3(n) <= zeta(3) n^3 < 1.21 n^3; consecutive terms shrink by at most rho.
    const RealBall one = RealBall::exact(1, prec);
    const RealBall m1 = RealBall::exact(static_cast<long>(m + 1), prec);
    const RealBall rho = (RealBall::exact(static_cast<long>(m + 2), prec) / m1).pow_ui(3) * qa;
    if (less(rho, 1) != Tri::True) throw Error(Errc::Indeterminate, "E4 tail ratio not below 1");
    const RealBall tail = exact_q(mpq_class(121, 100), prec) * 240 * m1.pow_ui(3) * qa.pow_ui(m + 1) / (one - rho);
    e4.add_error(upper_of(tail));
  }

  ComplexBall prod = real_ball(RealBall::exact(1, prec));
  ComplexBall qn = q;
  for (std::size_t k = 1; k <= m; ++k) {
    prod = prod * (-qn + 1);
    qn = qn * q;
  }
  ComplexBall p24 = prod.pow_ui(24);
  {
    const RealBall one = RealBall::exact(1, prec);
    const RealBall r = qa.pow_ui(m + 1);
    const RealBall t = log_factor(r) * r / (one - qa);
    const RealBall eta = (t * 24).exp() - one;
    p24 = p24 * one_plus_disc(upper_of(eta), prec);
  }
  return e4.pow_ui(3) / (q * p24);
}

std::vector<mpz_class> j_q_expansion(std::size_t terms) {
  const std::size_t len = terms + 1;
  auto mul = [len](const std::vector<mpz_class>& x, const std::vector<mpz_class>& y) {
    std::vector<mpz_class> r(len);
    for (std::size_t i = 0; i < len; ++i)
      for (std::size_t k = 0; i + k < len; ++k) r[i + k] += x[i] * y[k];
    return r;
  };
  std::vector<mpz_class> e4(len);
  e4[0] = 1;
  for (std::size_t d = 1; d < len; ++d)
    for (std::size_t k = d; k < len; k += d) e4[k] += 240 * mpz_class(static_cast<unsigned long>(d * d * d));
  std::vector<mpz_class> prod(len);
  prod[0] = 1;
  for (std::size_t n = 1; n < len; ++n) {
    // multiply by (1 - q^n), 24 times
    for (int rep = 0; rep < 24; ++rep)
      for (std::size_t k = len - 1; k >= n; --k) prod[k] -= prod[k - n];
  }
  std::vector<mpz_class> inv(len);
  inv[0] = 1;
  for (std::size_t k = 1; k < len; ++k)
    for (std::size_t i = 1; i <= k; ++i) inv[k] -= prod[i] * inv[k - i];
  auto out = mul(mul(mul(e4, e4), e4), inv);  // coefficient k is that of q^(k-1) in j
  out.resize(terms);
  return out;
}

// ---- Siegel functions ---------------------------------------------------------

namespace {

// (1 - q_z) prod_{n>=1} (1 - q^n q_z)(1 - q^(n-1) w), w = q / q_z, for
// a = (x, y) with 0 <= x < 1, including a certified tail factor.
ComplexBall siegel_product(const mpq_class& x, const mpq_class& y, const UpperHalfPoint& tau, mpfr_prec_t prec) {
  const ComplexBall& t = tau.tau();
  const RealBall xb = exact_q(x, prec), yb = exact_q(y, prec);
  const RealBall one = RealBall::exact(1, prec);
  const ComplexBall qz = exp_2pi_i(ComplexBall(t.re * xb + yb, t.im * xb));
  const RealBall omx = one - xb;
  const ComplexBall w = exp_2pi_i(ComplexBall(t.re * omx - yb, t.im * omx));
  const ComplexBall q = tau.q();
  const RealBall qa = q.abs();
  if (less(qa, 0.5) != Tri::True) throw Error(Errc::Indeterminate, "|q| is not certified small");
  const std::size_t m = truncation_terms(tau.log_abs_q(), prec);

  ComplexBall prod = -qz + 1;
  ComplexBall qn = q;                                       // q^n
  ComplexBall qnm1 = real_ball(RealBall::exact(1, prec));  // q^(n-1)
  for (std::size_t n = 1; n <= m; ++n) {
    prod = prod * (-(qn * qz) + 1) * (-(qnm1 * w) + 1);
    qnm1 = qn;
    qn = qn * q;
  }
  // Remaining factors have |term| <= |q|^m; their log-sum is at most
  // c (|q|^(m+1) + |q|^m) / (1 - |q|) with c = -log(1-r)/r, r = |q|^m.
  const RealBall r = qa.pow_ui(m);
  const RealBall s = (r * qa + r) / (one - qa);
  const RealBall tail = log_factor(r) * s;
  const RealBall eta = tail.exp() - one;
  return prod * one_plus_disc(upper_of(eta), prec);
}

mpq_class frac_coord(std::uint32_t k, Modulus n) {
  mpq_class r(k, n);
  r.canonicalize();
  return r;
}

}  // namespace

ComplexBall eval_siegel(const TorsionIndex& a, const UpperHalfPoint& tau, mpfr_prec_t prec) {
  prec = std::max(prec, tau.prec());
  const mpq_class x = frac_coord(a.a1, a.n), y = frac_coord(a.a2, a.n);
  const ComplexBall prod = siegel_product(x, y, tau, prec);
  // -q^(B2(x)/2) e(y(x-1)/2)
  const mpq_class half_b2 = bernoulli2(x) / 2;
  const mpq_class phase = y * (x - 1) / 2;
  const ComplexBall& t = tau.tau();
  const RealBall hb = exact_q(half_b2, prec);
  const ComplexBall pre = exp_2pi_i(ComplexBall(t.re * hb + exact_q(phase, prec), t.im * hb));
  return -(pre * prod);
}

RealBall log_abs_siegel(const TorsionIndex& a, const UpperHalfPoint& tau_in, mpfr_prec_t prec) {
  prec = std::max(prec, tau_in.prec());
  const Reduction red = reduce_fundamental(tau_in);
  const TorsionIndex ar = a.times(red.gamma.inverse().mod(a.n));
  const mpq_class x = frac_coord(ar.a1, ar.n), y = frac_coord(ar.a2, ar.n);
  const ComplexBall prod = siegel_product(x, y, red.tau, prec);
  const RealBall half_b2 = exact_q(bernoulli2(x) / 2, prec);
  return half_b2 * red.tau.log_abs_q() + prod.norm().log() * exact_q(mpq_class(1, 2), prec);
}

// ---- verification -------------------------------------------------------------

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

namespace {

// lhs <= rhs, certified.
CheckReport decide(const RealBall& lhs, const RealBall& rhs) {
  const RealBall diff = rhs - lhs;
  CheckReport r;
  if (mpfr_sgn(diff.lower().get()) >= 0) {
    r.verdict = Verdict::Holds;
    r.margin = diff.lower_d();
  } else if (mpfr_sgn(diff.upper().get()) < 0) {
    r.verdict = Verdict::Fails;
    r.margin = diff.upper_d();
  } else {
    r.verdict = Verdict::Indeterminate;
    r.margin = diff.lower_d();
  }
  return r;
}

template <class F>
CheckReport escalate(std::string name, const VerifyOptions& opt, F&& f) {
  CheckReport last;
  last.name = name;
  for (mpfr_prec_t prec = opt.start_precision; prec <= opt.max_precision; prec *= 2) {
    try {
      CheckReport r = f(prec);
      r.name = name;
      r.precision = prec;
      if (r.verdict != Verdict::Indeterminate) return r;
      last = r;
    } catch (const Error& e) {
      if (e.code() != Errc::Indeterminate) throw;
      last.precision = prec;
    }
  }
  last.verdict = Verdict::Indeterminate;
  return last;
}

RealBall exact_l(long v, mpfr_prec_t prec) { return RealBall::exact(v, prec); }

}  // namespace

CheckReport verify_pqj(const TauSource& src, const VerifyOptions& opt) {
  return escalate("j_q_expansion_bound", opt, [&](mpfr_prec_t prec) {
    const UpperHalfPoint tau(src(prec));
    const ComplexBall q = tau.q();
    const RealBall qa = q.abs();
    // Rejected only when |q| > 0.005 is certain; boundary points are checked.
    if (less_equal(qa, exact_q(mpq_class(1, 200), prec)) == Tri::False)
      throw Error(Errc::HypothesisFailed, "|q| <= 0.005 is violated");
    const ComplexBall j = eval_j(tau, prec);
    const RealBall lhs = (j - q.inverse() + (-744)).abs();
    return decide(lhs, qa * 330000);
  });
}

CheckReport verify_cdplus(const TauSource& src, const VerifyOptions& opt) {
  return escalate("j_or_q_dichotomy", opt, [&](mpfr_prec_t prec) {
    const UpperHalfPoint tau(src(prec));
    const RealBall half = exact_q(mpq_class(1, 2), prec);
    const RealBall& re = tau.tau().re;
    if (less(re, -half) == Tri::True || less(half, re) == Tri::True ||
        less(tau.tau().norm(), 1) == Tri::True)
      throw Error(Errc::HypothesisFailed, "tau is not in the fundamental domain");
    const RealBall aj = eval_j(tau, prec).abs();
    const RealBall qa = tau.q().abs();
    const RealBall jcap = exact_l(2500, prec), qcap = exact_q(mpq_class(1, 1000), prec);
    const Tri small_j = less_equal(aj, jcap);
    const Tri small_q = less(qa, qcap);
    CheckReport r;
    const RealBall mj = (jcap - aj) / jcap, mq = (qcap - qa) / qcap;
    r.margin = std::max(mj.lower_d(), mq.lower_d());
    if (small_j == Tri::True || small_q == Tri::True)
      r.verdict = Verdict::Holds;
    else if (small_j == Tri::False && small_q == Tri::False)
      r.verdict = Verdict::Fails;
    else
      r.verdict = Verdict::Indeterminate;
    return r;
  });
}

CheckReport verify_siegel_q_power(const TorsionIndex& a, const TauSource& src, const VerifyOptions& opt) {
  const bool constant = a.a1 == 0;
  return escalate(constant ? "siegel_q_power_constant" : "siegel_q_power_nonconstant", opt, [&](mpfr_prec_t prec) {
    const UpperHalfPoint tau(src(prec));
    const RealBall lq = tau.log_abs_q();
    const RealBall ln10 = exact_l(10, prec).log();
    const RealBall ell_a = exact_q(ell(a), prec);
    const RealBall lg = log_abs_siegel(a, tau, prec);
    if (!constant) {
      const long n = a.n;
      if (less_equal(lq, -(ln10 * n)) == Tri::False)
        throw Error(Errc::HypothesisFailed, "|q| <= 10^-N is violated");
      const RealBall lhs = (lg - ell_a * lq).abs();
      const RealBall rhs = (lq / exact_l(n, prec)).exp() * 3;
      return decide(lhs, rhs);
    }
    if (less_equal(lq, -ln10) == Tri::False) throw Error(Errc::HypothesisFailed, "|q| <= 0.1 is violated");
    // log|1 - e(y)| = log(2 sin(pi y)), 0 < y < 1
    const RealBall y = exact_q(frac_coord(a.a2, a.n), prec);
    const RealBall chord = (RealBall::pi(prec) * y).sin() * 2;
    const RealBall lhs = (lg - ell_a * lq - chord.log()).abs();
    return decide(lhs, lq.exp() * 3);
  });
}

CheckReport verify_siegel_vs_j(const TorsionIndex& a, const TauSource& src, const VerifyOptions& opt) {
  return escalate("siegel_vs_j", opt, [&](mpfr_prec_t prec) {
    const UpperHalfPoint tau(src(prec));
    const RealBall lhs = log_abs_siegel(a, tau, prec).abs();
    const RealBall aj = eval_j(tau, prec).abs();
    const RealBall rhs = (aj + 2200).log() / exact_l(12, prec) + exact_l(a.order(), prec).log() +
                         exact_q(mpq_class(1, 10), prec);
    return decide(lhs, rhs);
  });
}

std::vector<CheckReport> verify_siegel_bounds(const TorsionIndex& a, const TauSource& src, const VerifyOptions& opt) {
  std::vector<CheckReport> out;
  try {
    out.push_back(verify_siegel_q_power(a, src, opt));
  } catch (const Error& e) {
    if (e.code() != Errc::HypothesisFailed) throw;
  }
  out.push_back(verify_siegel_vs_j(a, src, opt));
  return out;
}

NearestCusp nearest_cusp(const SubgroupG& g, const TauSource& src, const VerifyOptions& opt) {
  return nearest_cusp(CuspTable(g), src, opt);
}

NearestCusp nearest_cusp(const CuspTable& table, const TauSource& src, const VerifyOptions& opt) {
  bool j_undecided = false;
  for (mpfr_prec_t prec = opt.start_precision; prec <= opt.max_precision; prec *= 2) {
    try {
      const UpperHalfPoint tau(src(prec));
      const RealBall aj = eval_j(tau, prec).abs();
      const Tri big = less(exact_l(2500, prec), aj);
      if (big == Tri::False) throw Error(Errc::NotInPlusRegion, "|j| <= 2500");
      if (big == Tri::Unknown) {
        j_undecided = true;
        continue;
      }
      j_undecided = false;
      const Reduction red = reduce_fundamental(tau);
      const RealBall qa = red.tau.q().abs();
      const Tri small = less(qa, exact_q(mpq_class(1, 1000), prec));
      if (small == Tri::Unknown) continue;
      if (small == Tri::False) throw Error(Errc::BoundViolated, "|j| > 2500 but |q| >= 0.001 at the reduced point");
      // gamma^-1 (c_inf) is the first column of gamma^-1, i.e. (d, -c).
      const Modulus n = table.modulus();
      const auto col = red.gamma.inverse().mod(n);
      NearestCusp out;
      out.cusp_index = table.index_of(col.a(), col.c());
      out.cusp = table.cusps()[out.cusp_index];
      out.gamma = red.gamma;
      out.abs_j_lower = aj.lower_d();
      out.abs_q_upper = qa.upper_d();
      return out;
    } catch (const Error& e) {
      if (e.code() != Errc::Indeterminate) throw;
    }
  }
  if (j_undecided) throw Error(Errc::NotInPlusRegion, "|j| <= 2500 cannot be excluded");
  throw Error(Errc::PrecisionExhausted, "nearest cusp not certified at maximum precision");
}

namespace {

CheckReport everysimple_at(const CuspTable& table, const TauSource& src, const VerifyOptions& opt) {
  nearest_cusp(table, src, opt);  // establishes the plus region
  return escalate("q_inverse_vs_j", opt, [&](mpfr_prec_t prec) {
    const UpperHalfPoint tau(src(prec));
    const RealBall aj = eval_j(tau, prec).abs();
    const Reduction red = reduce_fundamental(tau);
    const RealBall inv_q = red.tau.q().abs().inverse();
    const RealBall upper_gap = aj * exact_q(mpq_class(3, 2), prec) - inv_q;
    const RealBall lower_gap = inv_q - aj * exact_q(mpq_class(1, 2), prec);
    const CheckReport hi = decide(RealBall::exact(0, prec), upper_gap / aj);
    const CheckReport lo = decide(RealBall::exact(0, prec), lower_gap / aj);
    CheckReport r;
    r.margin = std::min(hi.margin, lo.margin);
    if (hi.verdict == Verdict::Fails || lo.verdict == Verdict::Fails)
      r.verdict = Verdict::Fails;
    else if (hi.verdict == Verdict::Holds && lo.verdict == Verdict::Holds)
      r.verdict = Verdict::Holds;
    return r;
  });
}

}  // namespace

CheckReport verify_everysimple(const SubgroupG& g, const TauSource& src, const VerifyOptions& opt) {
  return everysimple_at(CuspTable(g), src, opt);
}

CheckReport verify_everysimple(const CuspTable& table, const TauSource& src, const VerifyOptions& opt) {
  return everysimple_at(table, src, opt);
}

// ---- non-archimedean ----------------------------------------------------------

PadicOrder padic_siegel_order(const TorsionIndex& a, const mpq_class& vq, std::uint64_t p, bool v_divides_n) {
  if (vq <= 0) throw Error(Errc::InvalidArgument, "v(q) must be positive");
  if (!is_prime(p)) throw Error(Errc::InvalidArgument, "residue characteristic must be prime");
  PadicOrder out;
  out.value = ell(a) * vq;
  if (a.a1 == 0) {
    // v(1 - zeta_m) = 1/(p^(k-1)(p-1)) if m = p^k, else 0.
    std::uint64_t m = a.n / std::gcd(a.a2, a.n);
    std::uint64_t k = 0;
    while (m % p == 0) {
      m /= p;
      ++k;
    }
    if (m == 1 && k >= 1) {
      mpz_class pk;
      mpz_ui_pow_ui(pk.get_mpz_t(), p, k - 1);
      out.value += mpq_class(1, pk * (p - 1));
    }
  }
  out.value.canonicalize();
  out.bound = vq / 12;
  if (v_divides_n) out.bound += mpq_class(1, p - 1);
  out.bound.canonicalize();
  out.bound_holds = abs(out.value) <= out.bound;
  return out;
}

}  // namespace runge
