#include "runge/cusps.hpp"

#include <cmath>
#include <numeric>

#include "runge/error.hpp"

namespace runge {

bool is_primitive(Modulus n, std::uint32_t x, std::uint32_t y) {
  return std::gcd(std::gcd(x, y), n) == 1;
}

std::pair<std::uint32_t, std::uint32_t> canonical_rep(Modulus n, std::uint32_t x, std::uint32_t y) {
  x %= n;
  y %= n;
  const std::pair<std::uint32_t, std::uint32_t> pos{x, y}, neg{(n - x) % n, (n - y) % n};
  return std::min(pos, neg);
}

ResidueMatrix sl2_lift(Modulus n, std::uint32_t x, std::uint32_t y) {
  if (!is_primitive(n, x, y)) throw Error(Errc::InvalidArgument, "vector is not primitive mod N");
  // Solve x*d - y*b = 1: for each b, x*d = 1 + y*b is solvable iff gcd(x, N) divides it.
  const std::uint64_t g = std::gcd(x, n);
  const std::uint64_t m = n / g;
  for (std::uint64_t b = 0; b < n; ++b) {
    const std::uint64_t rhs = (1 + std::uint64_t{y} * b) % n;
    if (rhs % g) continue;
    const std::uint64_t xinv = m == 1 ? 0 : inverse_mod(x / g % m, m);
    const std::uint64_t d = m == 1 ? 0 : (rhs / g % m) * xinv % m;
    return ResidueMatrix::make(n, x, static_cast<std::int64_t>(b), y, static_cast<std::int64_t>(d));
  }
  throw Error(Errc::InvalidArgument, "no SL2 lift found");
}

std::uint32_t cusp_width(const SubgroupG& geometric, const ResidueMatrix& lift) {
  const Modulus n = geometric.modulus();
  const ResidueMatrix inv = lift.inverse();
  for (std::uint32_t e = 1; e <= n; ++e)
    if (geometric.contains(lift * ResidueMatrix::make(n, 1, e, 0, 1) * inv)) return e;
  throw Error(Errc::InvalidArgument, "no width found; lift does not match the group");
}

CuspTable::CuspTable(const SubgroupG& g)
    : n_(g.modulus()), h_(sl2_part_with_minus_one(g)), vec_to_cusp_(std::size_t{n_} * n_, -1) {
  auto visit = [&](std::uint32_t x, std::uint32_t y) {
    if (!is_primitive(n_, x, y) || vec_to_cusp_[std::size_t{x} * n_ + y] >= 0) return;
    const auto idx = static_cast<std::int32_t>(cusps_.size());
    for (const auto& h : h_.elements()) {
      const auto [u, v] = h.apply(x, y);
      vec_to_cusp_[std::size_t{u} * n_ + v] = idx;
    }
    const auto [cx, cy] = canonical_rep(n_, x, y);
    CuspClass c;
    c.n = n_;
    c.x = cx;
    c.y = cy;
    c.lift = sl2_lift(n_, cx, cy);
    c.width = cusp_width(h_, c.lift);
    cusps_.push_back(std::move(c));
  };
  visit(1, 0);
  for (std::uint32_t x = 0; x < n_; ++x)
    for (std::uint32_t y = 0; y < n_; ++y) visit(x, y);

  if (!det_image(g).is_full) return;
  // H is normal in G, so G permutes the cusps; orbits are components of the
  // generator graph.
  const auto& acting = g.generators().empty() ? g.elements() : g.generators();
  std::vector<std::size_t> orbit(cusps_.size(), SIZE_MAX);
  std::size_t next = 0;
  for (std::size_t start = 0; start < cusps_.size(); ++start) {
    if (orbit[start] != SIZE_MAX) continue;
    orbit[start] = next;
    std::vector<std::size_t> stack{start};
    while (!stack.empty()) {
      const auto i = stack.back();
      stack.pop_back();
      for (const auto& s : acting) {
        const auto [u, v] = s.apply(cusps_[i].x, cusps_[i].y);
        const auto j = index_of(u, v);
        if (orbit[j] == SIZE_MAX) {
          orbit[j] = next;
          stack.push_back(j);
        }
      }
    }
    ++next;
  }
  orbit_of_ = std::move(orbit);
}

std::size_t CuspTable::index_of(std::uint32_t x, std::uint32_t y) const {
  x %= n_;
  y %= n_;
  const auto idx = vec_to_cusp_[std::size_t{x} * n_ + y];
  if (idx < 0) throw Error(Errc::InvalidArgument, "vector is not primitive mod N");
  return static_cast<std::size_t>(idx);
}

std::size_t CuspTable::orbit_of(std::size_t cusp_index) const {
  if (!orbit_of_) throw Error(Errc::NotDefinedOverQ, "det G is a proper subgroup of (Z/NZ)^x");
  return orbit_of_->at(cusp_index);
}

std::size_t CuspTable::orbit_count() const {
  if (!orbit_of_) throw Error(Errc::NotDefinedOverQ, "det G is a proper subgroup of (Z/NZ)^x");
  std::size_t count = 0;
  for (auto o : *orbit_of_) count = std::max(count, o + 1);
  return count;
}

std::vector<std::vector<std::size_t>> CuspTable::orbit_members() const {
  std::vector<std::vector<std::size_t>> out(orbit_count());
  for (std::size_t i = 0; i < cusps_.size(); ++i) out[(*orbit_of_)[i]].push_back(i);
  return out;
}

std::vector<CuspOrbit> CuspTable::orbits() const {
  std::vector<CuspOrbit> out;
  for (const auto& members : orbit_members()) {
    CuspOrbit o;
    for (auto i : members) o.members.push_back(cusps_[i]);
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<CuspClass> enumerate_cusps(const SubgroupG& g) { return CuspTable(g).cusps(); }

std::uint32_t cusp_width(const SubgroupG& g, const CuspClass& c) {
  if (c.n != g.modulus()) throw Error(Errc::ModulusMismatch, "cusp and group moduli differ");
  return cusp_width(sl2_part_with_minus_one(g), c.lift);
}

std::vector<CuspOrbit> galois_orbits(const SubgroupG& g) { return CuspTable(g).orbits(); }

bool runge_condition(const SubgroupG& g, std::size_t s) {
  if (s < 1) throw Error(Errc::InvalidArgument, "|S| must be at least 1");
  return CuspTable(g).orbit_count() > s;
}

namespace {

double power_value(const mpq_class& base, const mpq_class& exponent) {
  return std::pow(base.get_d(), exponent.get_d());
}

}  // namespace

double PlaceConstants::R_v() const { return power_value(R_base, R_exponent); }
double PlaceConstants::r_v() const { return power_value(r_base, r_exponent); }
double PlaceConstants::log_R_v() const { return R_exponent.get_d() * std::log(R_base.get_d()); }

PlaceConstants place_constants(PlaceKind kind, std::optional<std::uint64_t> p, Modulus n) {
  PlaceConstants pc;
  pc.kind = kind;
  if (kind == PlaceKind::Archimedean) {
    if (p) throw Error(Errc::InvalidArgument, "an archimedean place has no residue characteristic");
    pc.R_base = 2500;
    pc.r_base = mpq_class(1, 1000);
    return pc;
  }
  if (!p || !is_prime(*p)) throw Error(Errc::InvalidArgument, "a finite place needs a prime residue characteristic");
  pc.p = p;
  pc.v_divides_n = n % *p == 0;
  if (pc.v_divides_n) {
    pc.R_base = pc.r_base = mpq_class(static_cast<unsigned long>(*p));
    pc.R_exponent = mpq_class(n, static_cast<unsigned long>(*p - 1));
    pc.R_exponent.canonicalize();
    pc.r_exponent = -pc.R_exponent;
  }
  return pc;
}

}  // namespace runge
