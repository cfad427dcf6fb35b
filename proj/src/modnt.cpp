#include "runge/modnt.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <deque>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include "runge/error.hpp"

namespace runge {

namespace {

std::uint32_t reduce(std::int64_t v, Modulus n) {
  std::int64_t r = v % static_cast<std::int64_t>(n);
  if (r < 0) r += n;
  return static_cast<std::uint32_t>(r);
}

void check_modulus(Modulus n) {
  if (n < 2 || n > kMaxModulus)
    throw Error(Errc::InvalidArgument, "modulus must lie in [2, " + std::to_string(kMaxModulus) +
                                           "], got " + std::to_string(n));
}

}  // namespace

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t n) {
  std::int64_t old_r = static_cast<std::int64_t>(a % n), r = static_cast<std::int64_t>(n);
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
  }
  if (old_r != 1) return 0;
  std::int64_t res = old_s % static_cast<std::int64_t>(n);
  if (res < 0) res += static_cast<std::int64_t>(n);
  return static_cast<std::uint64_t>(res);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t n) {
  unsigned __int128 result = 1 % n, b = base % n;
  while (exp) {
    if (exp & 1) result = result * b % n;
    b = b * b % n;
    exp >>= 1;
  }
  return static_cast<std::uint64_t>(result);
}

std::vector<std::uint32_t> units_mod(Modulus n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t u = 1; u < n; ++u)
    if (std::gcd(u, n) == 1) out.push_back(u);
  return out;
}

std::vector<std::uint64_t> prime_divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p) continue;
    out.push_back(p);
    while (n % p == 0) n /= p;
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::uint32_t smallest_nonresidue(std::uint32_t p) {
  if (p < 3 || !is_prime(p)) throw Error(Errc::UnsupportedModulus, "need an odd prime");
  for (std::uint32_t e = 2; e < p; ++e)
    if (pow_mod(e, (p - 1) / 2, p) == p - 1) return e;
  throw Error(Errc::UnsupportedModulus, "no non-residue found");
}

std::uint32_t primitive_root_prime_power(std::uint32_t p, std::uint32_t e) {
  if (p < 3 || !is_prime(p)) throw Error(Errc::UnsupportedModulus, "need an odd prime");
  const auto factors = prime_divisors(p - 1);
  std::uint32_t g = 2;
  for (;; ++g) {
    bool ok = std::all_of(factors.begin(), factors.end(),
                          [&](std::uint64_t q) { return pow_mod(g, (p - 1) / q, p) != 1; });
    if (ok) break;
  }
  // A root mod p lifts to every p^e unless g^(p-1) = 1 mod p^2.
  if (e >= 2 && pow_mod(g, p - 1, static_cast<std::uint64_t>(p) * p) == 1) g += p;
  return g;
}

// ResidueMatrix -------------------------------------------------------------

ResidueMatrix ResidueMatrix::make(Modulus n, std::int64_t a, std::int64_t b, std::int64_t c,
                                  std::int64_t d) {
  check_modulus(n);
  ResidueMatrix m;
  m.n_ = n;
  m.e_[0] = reduce(a, n);
  m.e_[1] = reduce(b, n);
  m.e_[2] = reduce(c, n);
  m.e_[3] = reduce(d, n);
  return m;
}

ResidueMatrix ResidueMatrix::identity(Modulus n) { return make(n, 1, 0, 0, 1); }

ResidueMatrix ResidueMatrix::from_key(Modulus n, std::uint64_t key) {
  const std::uint64_t d = key % n;
  key /= n;
  const std::uint64_t c = key % n;
  key /= n;
  const std::uint64_t b = key % n;
  key /= n;
  return make(n, static_cast<std::int64_t>(key), static_cast<std::int64_t>(b),
              static_cast<std::int64_t>(c), static_cast<std::int64_t>(d));
}

std::uint32_t ResidueMatrix::det() const noexcept {
  const std::uint64_t ad = static_cast<std::uint64_t>(e_[0]) * e_[3] % n_;
  const std::uint64_t bc = static_cast<std::uint64_t>(e_[1]) * e_[2] % n_;
  return static_cast<std::uint32_t>((ad + n_ - bc) % n_);
}

bool ResidueMatrix::is_invertible() const noexcept { return n_ != 0 && std::gcd(det(), n_) == 1; }

ResidueMatrix ResidueMatrix::inverse() const {
  const std::uint64_t dinv = inverse_mod(det(), n_);
  if (dinv == 0) throw Error(Errc::NonInvertibleGenerator, "matrix is not invertible mod N");
  const auto s = static_cast<std::int64_t>(dinv);
  return make(n_, s * e_[3], -s * e_[1], -s * e_[2], s * e_[0]);
}

std::uint64_t ResidueMatrix::key() const noexcept {
  const std::uint64_t n = n_;
  return ((static_cast<std::uint64_t>(e_[0]) * n + e_[1]) * n + e_[2]) * n + e_[3];
}

std::pair<std::uint32_t, std::uint32_t> ResidueMatrix::apply(std::uint32_t x,
                                                             std::uint32_t y) const noexcept {
  const std::uint64_t n = n_;
  return {static_cast<std::uint32_t>((std::uint64_t{e_[0]} * x + std::uint64_t{e_[1]} * y) % n),
          static_cast<std::uint32_t>((std::uint64_t{e_[2]} * x + std::uint64_t{e_[3]} * y) % n)};
}

ResidueMatrix ResidueMatrix::operator*(const ResidueMatrix& r) const {
  if (n_ != r.n_) throw Error(Errc::ModulusMismatch, "matrix moduli differ");
  const std::uint64_t n = n_;
  ResidueMatrix m;
  m.n_ = n_;
  m.e_[0] = static_cast<std::uint32_t>((std::uint64_t{e_[0]} * r.e_[0] + std::uint64_t{e_[1]} * r.e_[2]) % n);
  m.e_[1] = static_cast<std::uint32_t>((std::uint64_t{e_[0]} * r.e_[1] + std::uint64_t{e_[1]} * r.e_[3]) % n);
  m.e_[2] = static_cast<std::uint32_t>((std::uint64_t{e_[2]} * r.e_[0] + std::uint64_t{e_[3]} * r.e_[2]) % n);
  m.e_[3] = static_cast<std::uint32_t>((std::uint64_t{e_[2]} * r.e_[1] + std::uint64_t{e_[3]} * r.e_[3]) % n);
  return m;
}

ResidueMatrix ResidueMatrix::operator-() const noexcept {
  ResidueMatrix m = *this;
  for (auto& v : m.e_) v = (n_ - v) % n_;
  return m;
}

std::ostream& operator<<(std::ostream& os, const ResidueMatrix& m) {
  return os << '[' << m.a() << ' ' << m.b() << "; " << m.c() << ' ' << m.d() << "] mod "
            << m.modulus();
}

// SubgroupG -----------------------------------------------------------------

bool SubgroupG::contains(const ResidueMatrix& m) const {
  if (m.modulus() != n_) return false;
  return std::binary_search(keys_.begin(), keys_.end(), m.key());
}

bool SubgroupG::contains_minus_one() const { return contains(-ResidueMatrix::identity(n_)); }

SubgroupG SubgroupG::from_closed_set(Modulus n, std::vector<ResidueMatrix> generators,
                                     std::vector<ResidueMatrix> elements) {
  SubgroupG g;
  g.n_ = n;
  g.gens_ = std::move(generators);
  std::sort(elements.begin(), elements.end(),
            [](const ResidueMatrix& x, const ResidueMatrix& y) { return x.key() < y.key(); });
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  g.elems_ = std::move(elements);
  g.keys_.reserve(g.elems_.size());
  for (const auto& e : g.elems_) g.keys_.push_back(e.key());
  return g;
}

SubgroupG generate_subgroup(Modulus n, std::span<const ResidueMatrix> gens, std::size_t max_order) {
  check_modulus(n);
  for (const auto& g : gens) {
    if (g.modulus() != n) throw Error(Errc::ModulusMismatch, "generator modulus differs from N");
    if (!g.is_invertible()) {
      std::ostringstream os;
      os << "generator " << g << " has det not coprime to N";
      throw Error(Errc::NonInvertibleGenerator, os.str());
    }
  }
  const ResidueMatrix id = ResidueMatrix::identity(n);
  std::unordered_set<std::uint64_t> seen{id.key()};
  std::vector<ResidueMatrix> elems{id};
  std::deque<ResidueMatrix> frontier{id};
  while (!frontier.empty()) {
    const ResidueMatrix x = frontier.front();
    frontier.pop_front();
    for (const auto& g : gens) {
      const ResidueMatrix y = x * g;
      if (!seen.insert(y.key()).second) continue;
      elems.push_back(y);
      frontier.push_back(y);
      if (elems.size() > max_order)
        throw Error(Errc::GroupTooLarge, "closure exceeds " + std::to_string(max_order) + " elements");
    }
  }
  return SubgroupG::from_closed_set(n, {gens.begin(), gens.end()}, std::move(elems));
}

std::string_view to_string(PresetKind kind) noexcept {
  switch (kind) {
    case PresetKind::SplitNormalizer: return "split";
    case PresetKind::NonsplitNormalizer: return "nonsplit";
    case PresetKind::Borel: return "borel";
    case PresetKind::Full: return "full";
  }
  return "?";
}

std::uint64_t gl2_order(Modulus n) {
  std::uint64_t order = static_cast<std::uint64_t>(n) * n * n * n;
  for (auto p : prime_divisors(n)) order = order / p * (p - 1) / (p * p) * (p * p - 1);
  return order;
}

namespace {

std::uint64_t checked_power(std::uint32_t p, std::uint32_t e, std::uint64_t cap) {
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < e; ++i) {
    q *= p;
    if (q > cap) throw Error(Errc::UnsupportedModulus, "p^n exceeds the preset modulus cap " + std::to_string(cap));
  }
  return q;
}

// Add candidates as generators whenever they are not yet in the closure.
SubgroupG greedy_closure(Modulus n, const std::vector<ResidueMatrix>& candidates,
                         std::vector<ResidueMatrix> gens, std::size_t max_order) {
  SubgroupG g = generate_subgroup(n, gens, max_order);
  for (const auto& c : candidates) {
    if (g.contains(c)) continue;
    gens.push_back(c);
    g = generate_subgroup(n, gens, max_order);
  }
  return g;
}

}  // namespace

SubgroupG preset_subgroup(PresetKind kind, std::uint32_t p, std::uint32_t exponent,
                          const PresetLimits& limits) {
  if (p < 3 || !is_prime(p))
    throw Error(Errc::UnsupportedModulus, "presets need an odd prime base, got " + std::to_string(p));
  if (exponent < 1) throw Error(Errc::UnsupportedModulus, "exponent must be >= 1");
  const auto n = static_cast<Modulus>(checked_power(p, exponent, std::min<std::uint64_t>(limits.max_modulus, kMaxModulus)));
  const std::uint32_t g = primitive_root_prime_power(p, exponent);

  switch (kind) {
    case PresetKind::SplitNormalizer: {
      std::vector<ResidueMatrix> gens{ResidueMatrix::make(n, g, 0, 0, 1), ResidueMatrix::make(n, 1, 0, 0, g),
                                      ResidueMatrix::make(n, 0, 1, 1, 0)};
      return generate_subgroup(n, gens, limits.max_order);
    }
    case PresetKind::Borel: {
      std::vector<ResidueMatrix> gens{ResidueMatrix::make(n, g, 0, 0, 1), ResidueMatrix::make(n, 1, 0, 0, g),
                                      ResidueMatrix::make(n, 1, 1, 0, 1)};
      return generate_subgroup(n, gens, limits.max_order);
    }
    case PresetKind::Full: {
      if (gl2_order(n) > limits.max_order)
        throw Error(Errc::GroupTooLarge, "|GL2(Z/" + std::to_string(n) + ")| = " + std::to_string(gl2_order(n)) +
                                             " exceeds the enumeration cap");
      std::vector<ResidueMatrix> gens{ResidueMatrix::make(n, g, 0, 0, 1), ResidueMatrix::make(n, 1, 1, 0, 1),
                                      ResidueMatrix::make(n, 1, 0, 1, 1)};
      return generate_subgroup(n, gens, limits.max_order);
    }
    case PresetKind::NonsplitNormalizer: {
      // Multiplication by a + b*sqrt(eps) on the basis (1, sqrt(eps)).
      const std::uint32_t eps = smallest_nonresidue(p);
      std::vector<ResidueMatrix> cartan;
      for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = 0; b < n; ++b) {
          if (a % p == 0 && b % p == 0) continue;
          cartan.push_back(ResidueMatrix::make(n, a, static_cast<std::int64_t>(eps) * b, b, a));
        }
      return greedy_closure(n, cartan, {ResidueMatrix::make(n, 1, 0, 0, -1)}, limits.max_order);
    }
  }
  throw Error(Errc::InvalidArgument, "unknown preset");
}

DetImage det_image(const SubgroupG& g) {
  DetImage out;
  for (const auto& m : g.elements()) out.values.push_back(m.det());
  std::sort(out.values.begin(), out.values.end());
  out.values.erase(std::unique(out.values.begin(), out.values.end()), out.values.end());
  out.is_full = out.values == units_mod(g.modulus());
  return out;
}

SubgroupG sl2_part_with_minus_one(const SubgroupG& g) {
  std::vector<ResidueMatrix> elems;
  for (const auto& m : g.elements()) {
    if (m.det() != 1 % g.modulus()) continue;
    elems.push_back(m);
    elems.push_back(-m);
  }
  return SubgroupG::from_closed_set(g.modulus(), {}, std::move(elems));
}

SubgroupG conjugate(const SubgroupG& g, const ResidueMatrix& by) {
  const ResidueMatrix inv = by.inverse();
  std::vector<ResidueMatrix> gens;
  for (const auto& x : g.generators()) gens.push_back(by * x * inv);
  std::vector<ResidueMatrix> elems;
  elems.reserve(g.order());
  for (const auto& x : g.elements()) elems.push_back(by * x * inv);
  return SubgroupG::from_closed_set(g.modulus(), std::move(gens), std::move(elems));
}

// Parsing -------------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::uint64_t parse_uint(std::string_view s, std::string_view what) {
  s = trim(s);
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw Error(Errc::ParseError, "bad " + std::string(what) + ": '" + std::string(s) + "'");
  return v;
}

}  // namespace

SubgroupG parse_group_text(std::istream& in) {
  std::string line;
  std::optional<Modulus> n;
  std::vector<ResidueMatrix> gens;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    if (!n) {
      if (s.substr(0, 2) != "N=")
        throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected N=<modulus>");
      const auto v = parse_uint(s.substr(2), "modulus");
      if (v < 2 || v > kMaxModulus) throw Error(Errc::ParseError, "modulus out of range");
      n = static_cast<Modulus>(v);
      continue;
    }
    std::istringstream ls{std::string(s)};
    std::int64_t e[4];
    for (auto& v : e)
      if (!(ls >> v)) throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": expected 'a b c d'");
    std::string extra;
    if (ls >> extra) throw Error(Errc::ParseError, "line " + std::to_string(lineno) + ": trailing input");
    gens.push_back(ResidueMatrix::make(*n, e[0], e[1], e[2], e[3]));
  }
  if (!n) throw Error(Errc::ParseError, "missing N=<modulus> header");
  return generate_subgroup(*n, gens);
}

SubgroupG parse_group_spec(std::string_view spec) {
  static constexpr std::pair<std::string_view, PresetKind> kinds[] = {
      {"split", PresetKind::SplitNormalizer},
      {"nonsplit", PresetKind::NonsplitNormalizer},
      {"borel", PresetKind::Borel},
      {"full", PresetKind::Full},
  };
  const auto colon = spec.find(':');
  if (colon != std::string_view::npos) {
    const auto name = spec.substr(0, colon);
    for (const auto& [label, kind] : kinds) {
      if (name != label) continue;
      const auto rest = spec.substr(colon + 1);
      const auto caret = rest.find('^');
      const auto p = parse_uint(rest.substr(0, caret), "prime");
      const auto e = caret == std::string_view::npos ? 1 : parse_uint(rest.substr(caret + 1), "exponent");
      if (p > kMaxModulus || e > 64) throw Error(Errc::UnsupportedModulus, "preset parameters out of range");
      return preset_subgroup(kind, static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(e));
    }
  }
  std::ifstream file{std::string(spec)};
  if (!file) throw Error(Errc::ParseError, "'" + std::string(spec) + "' is neither a preset nor a readable file");
  return parse_group_text(file);
}

}  // namespace runge
