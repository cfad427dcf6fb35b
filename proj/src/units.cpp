#include "runge/units.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <string>

#include <mpfr.h>

#include "runge/error.hpp"

namespace runge {

namespace {

std::uint32_t reduce(Modulus n, std::int64_t v) {
  const std::int64_t m = v % static_cast<std::int64_t>(n);
  return static_cast<std::uint32_t>(m < 0 ? m + n : m);
}

// 12 N^2 l_a where a1 = k/N: 6k^2 - 6kN + N^2.
std::int64_t twelve_n2_ell(std::int64_t k, std::int64_t n) { return 6 * k * k - 6 * k * n + n * n; }

// Upward-rounded double of f(x) evaluated in MPFR with every step rounded up.
class UpReal {
 public:
  UpReal() { mpfr_init2(v_, 128); }
  ~UpReal() { mpfr_clear(v_); }
  UpReal(const UpReal&) = delete;
  UpReal& operator=(const UpReal&) = delete;
  mpfr_ptr get() { return v_; }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDU); }

 private:
  mpfr_t v_;
};

}  // namespace

TorsionIndex TorsionIndex::make(Modulus n, std::int64_t a1, std::int64_t a2) {
  if (n < 2) throw Error(Errc::InvalidArgument, "modulus must be at least 2");
  TorsionIndex t{n, reduce(n, a1), reduce(n, a2)};
  if (t.a1 == 0 && t.a2 == 0) throw Error(Errc::InvalidArgument, "torsion index must be nonzero");
  return t;
}

std::uint32_t TorsionIndex::order() const { return n / std::gcd(std::gcd(a1, a2), n); }

TorsionIndex TorsionIndex::times(const ResidueMatrix& m) const {
  if (m.modulus() != n) throw Error(Errc::ModulusMismatch, "torsion index and matrix moduli differ");
  const std::uint64_t x = (std::uint64_t{a1} * m.a() + std::uint64_t{a2} * m.c()) % n;
  const std::uint64_t y = (std::uint64_t{a1} * m.b() + std::uint64_t{a2} * m.d()) % n;
  return TorsionIndex{n, static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y)};
}

TorsionIndex TorsionIndex::negated() const { return TorsionIndex{n, (n - a1) % n, (n - a2) % n}; }

mpq_class bernoulli2(const mpq_class& t) {
  if (t < 0 || t > 1) throw Error(Errc::InvalidArgument, "B2 argument must lie in [0, 1]");
  mpq_class r = t * t - t + mpq_class(1, 6);
  r.canonicalize();
  return r;
}

mpq_class ell(const TorsionIndex& a) {
  mpq_class t(a.a1, a.n);
  t.canonicalize();
  mpq_class r = bernoulli2(t) / 2;
  r.canonicalize();
  return r;
}

std::int64_t ord_u(const TorsionIndex& a, const ResidueMatrix& lift) {
  if (lift.det() != 1 % a.n) throw Error(Errc::InvalidArgument, "cusp lift must have determinant 1");
  return twelve_n2_ell(a.times(lift).a1, a.n);
}

std::int64_t ord_u(Modulus n, const TorsionIndex& a, const CuspClass& c) {
  if (a.n != n || c.n != n) throw Error(Errc::ModulusMismatch, "ord_u inputs have different moduli");
  return ord_u(a, c.lift);
}

std::int64_t ord_w(const SubgroupG& g, const TorsionIndex& a, const CuspClass& c) {
  const Modulus n = g.modulus();
  if (a.n != n || c.n != n) throw Error(Errc::ModulusMismatch, "ord_w inputs have different moduli");
  // (a sigma) lift has first coordinate a . (sigma v), v the cusp vector.
  std::int64_t sum = 0;
  for (const auto& sigma : g.elements()) {
    const auto [u, w] = sigma.apply(c.x, c.y);
    const std::int64_t k = (std::int64_t{a.a1} * u + std::int64_t{a.a2} * w) % n;
    sum += twelve_n2_ell(k, n);
  }
  const std::int64_t scaled = sum * static_cast<std::int64_t>(c.width);
  if (scaled % static_cast<std::int64_t>(n) != 0)
    throw Error(Errc::NotIntegral, "e_c * sum 12N^2 l / N is not an integer");
  return scaled / static_cast<std::int64_t>(n);
}

std::vector<TorsionIndex> torsion_orbit_reps(const SubgroupG& g) {
  const Modulus n = g.modulus();
  const auto& acting = g.generators().empty() ? g.elements() : g.generators();
  std::vector<bool> seen(std::size_t{n} * n, false);
  auto slot = [n](const TorsionIndex& t) { return std::size_t{t.a1} * n + t.a2; };
  std::vector<TorsionIndex> reps;
  for (std::uint32_t a1 = 0; a1 < n; ++a1) {
    for (std::uint32_t a2 = 0; a2 < n; ++a2) {
      if ((a1 == 0 && a2 == 0) || seen[std::size_t{a1} * n + a2]) continue;
      const TorsionIndex start{n, a1, a2};
      reps.push_back(start);  // scanning in lex order, so the first hit is the minimum
      seen[slot(start)] = true;
      std::vector<TorsionIndex> stack{start};
      while (!stack.empty()) {
        const auto t = stack.back();
        stack.pop_back();
        auto push = [&](const TorsionIndex& u) {
          if (!seen[slot(u)]) {
            seen[slot(u)] = true;
            stack.push_back(u);
          }
        };
        push(t.negated());
        for (const auto& sigma : acting) push(t.times(sigma));
      }
    }
  }
  return reps;
}

DivisorMatrix divisor_matrix(const SubgroupG& g) { return divisor_matrix(g, CuspTable(g)); }

DivisorMatrix divisor_matrix(const SubgroupG& g, const CuspTable& table) {
  DivisorMatrix m;
  for (const auto& members : table.orbit_members()) {
    m.row_cusps.push_back(members.front());
    m.degrees.push_back(members.size());
  }
  m.columns = torsion_orbit_reps(g);
  m.entries = IntMatrix(m.row_cusps.size(), m.columns.size());
  for (std::size_t i = 0; i < m.row_cusps.size(); ++i)
    for (std::size_t j = 0; j < m.columns.size(); ++j)
      m.entries(i, j) = static_cast<long>(ord_w(g, m.columns[j], table.cusps()[m.row_cusps[i]]));
  return m;
}

std::size_t divisor_rank(const DivisorMatrix& m) { return bareiss_rank(m.entries); }

std::vector<std::size_t> resolve_sigma(const CuspTable& table, std::string_view spec) {
  const auto members = table.orbit_members();
  std::vector<std::size_t> out;
  if (spec == "infinity") {
    out.push_back(table.orbit_of(0));
  } else if (spec == "rational" || spec == "nonrational") {
    const bool want_rational = spec == "rational";
    for (std::size_t o = 0; o < members.size(); ++o)
      if ((members[o].size() == 1) == want_rational) out.push_back(o);
  } else {
    std::size_t pos = 0;
    while (pos <= spec.size()) {
      const auto comma = std::min(spec.find(',', pos), spec.size());
      const auto token = spec.substr(pos, comma - pos);
      std::size_t id = 0;
      const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), id);
      if (token.empty() || ec != std::errc{} || end != token.data() + token.size())
        throw Error(Errc::ParseError, "sigma must be infinity, rational, nonrational or orbit ids: " +
                                          std::string(spec));
      if (id >= members.size())
        throw Error(Errc::InvalidArgument, "orbit id " + std::to_string(id) + " out of range");
      out.push_back(id);
      pos = comma + 1;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

RungeUnit runge_unit(const SubgroupG& g, const std::vector<std::size_t>& sigma_in, std::size_t s) {
  const CuspTable table(g);
  const std::size_t orbit_count = table.orbit_count();
  auto sigma = sigma_in;
  std::sort(sigma.begin(), sigma.end());
  sigma.erase(std::unique(sigma.begin(), sigma.end()), sigma.end());
  if (sigma.empty() || sigma.size() >= orbit_count)
    throw Error(Errc::SigmaNotProper, "sigma must be a nonempty proper subset of the cusp orbits");
  if (sigma.back() >= orbit_count) throw Error(Errc::InvalidArgument, "orbit id out of range");
  if (s < 1) throw Error(Errc::InvalidArgument, "|S| must be at least 1");
  if (sigma.size() > s) throw Error(Errc::InvalidArgument, "|sigma| may not exceed |S|");
  if (orbit_count <= s) throw Error(Errc::RungeConditionFailed, "number of cusp orbits does not exceed |S|");

  const DivisorMatrix dm = divisor_matrix(g, table);
  const Modulus n = g.modulus();
  const mpz_class group_n2 = mpz_class(static_cast<unsigned long>(g.order())) * n * n;
  const auto& cusps = table.cusps();

  auto full_divisor = [&](const std::vector<mpz_class>& b) {
    std::vector<mpz_class> div(cusps.size());
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j] == 0) continue;
      for (std::size_t c = 0; c < cusps.size(); ++c)
        div[c] += b[j] * static_cast<long>(ord_w(g, dm.columns[j], cusps[c]));
    }
    return div;
  };
  auto max_abs = [](const std::vector<mpz_class>& v) {
    mpz_class m = 0;
    for (const auto& x : v) m = std::max(m, mpz_class(abs(x)));
    return m;
  };

  std::vector<mpz_class> b;
  std::vector<mpz_class> divisor;
  if (sigma.size() == 1) {
    // Single row: any nonzero column with the right sign. Smallest ||b||_1 is
    // always 1; prefer the unit with the smallest orders overall, then lex a.
    const std::size_t row = sigma.front();
    mpz_class best_max;
    for (std::size_t j = 0; j < dm.columns.size(); ++j) {
      const int sign = sgn(dm.entries(row, j));
      if (sign == 0) continue;
      std::vector<mpz_class> trial(dm.columns.size());
      trial[j] = sign;
      auto div = full_divisor(trial);
      const auto m = max_abs(div);
      if (b.empty() || m < best_max) {
        b = std::move(trial);
        divisor = std::move(div);
        best_max = m;
      }
    }
    if (b.empty()) throw Error(Errc::RankDeficient, "divisor matrix row of sigma is zero");
  } else {
    b = runge_vector(dm.entries.select_rows(sigma), group_n2);
    divisor = full_divisor(b);
  }

  RungeUnit u;
  u.sigma = sigma;
  u.s = s;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (b[j] == 0) continue;
    u.exponents.push_back({dm.columns[j], b[j]});
    u.l1_norm += abs(b[j]);
  }
  u.divisor = std::move(divisor);

  mpz_class s_pow, g_pow;
  mpz_ui_pow_ui(s_pow.get_mpz_t(), s, s + 2);
  mpz_pow_ui(g_pow.get_mpz_t(), group_n2.get_mpz_t(), 2 * s - 2);
  u.bound_B_squared = s_pow * g_pow;
  if (u.l1_norm * u.l1_norm > u.bound_B_squared)
    throw Error(Errc::BoundViolated, "||b||_1 exceeds B");

  UpReal bb, t, l2;
  mpfr_set_z(bb.get(), u.bound_B_squared.get_mpz_t(), MPFR_RNDU);
  mpfr_sqrt(bb.get(), bb.get(), MPFR_RNDU);
  u.bound_B = bb.to_double();
  // B |G| N
  mpfr_mul_ui(t.get(), bb.get(), static_cast<unsigned long>(g.order()), MPFR_RNDU);
  mpfr_mul_ui(t.get(), t.get(), n, MPFR_RNDU);
  mpfr_const_log2(l2.get(), MPFR_RNDU);
  mpfr_mul(l2.get(), l2.get(), t.get(), MPFR_RNDU);
  mpfr_mul_ui(l2.get(), l2.get(), 12, MPFR_RNDU);
  u.lambda_budget_log2 = l2.to_double();
  mpfr_mul_ui(t.get(), t.get(), 9, MPFR_RNDU);
  u.lambda_budget_relaxed = t.to_double();

  // |ord_c| <= B |G| N^2 and positivity on sigma.
  const mpz_class ord_cap_sq = u.bound_B_squared * group_n2 * group_n2;
  for (std::size_t c = 0; c < cusps.size(); ++c) {
    if (u.divisor[c] * u.divisor[c] > ord_cap_sq) throw Error(Errc::BoundViolated, "|ord_c w| exceeds B |G| N^2");
    if (std::binary_search(sigma.begin(), sigma.end(), table.orbit_of(c)) && u.divisor[c] <= 0)
      throw Error(Errc::BoundViolated, "unit is not positive on sigma");
  }
  return u;
}

}  // namespace runge
