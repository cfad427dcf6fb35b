#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

#include "runge/modnt.hpp"

namespace runge {

// A cusp of X_G: an orbit of <G cap SL2, -1> on primitive column vectors mod N,
// named by the canonical +-representative of its first-seen vector.
struct CuspClass {
  Modulus n = 0;
  std::uint32_t x = 0;
  std::uint32_t y = 0;
  std::uint32_t width = 0;  // ramification index e_c of X_G -> X(1)
  ResidueMatrix lift;       // determinant 1, first column (x, y)

  friend bool operator==(const CuspClass& l, const CuspClass& r) {
    return l.n == r.n && l.x == r.x && l.y == r.y;
  }
};

struct CuspOrbit {
  std::vector<CuspClass> members;
  std::size_t degree() const noexcept { return members.size(); }
};

// Everything derived from G about its cusps, computed once.
class CuspTable {
 public:
  explicit CuspTable(const SubgroupG& g);

  Modulus modulus() const noexcept { return n_; }
  const std::vector<CuspClass>& cusps() const noexcept { return cusps_; }
  const SubgroupG& geometric_group() const noexcept { return h_; }

  // Index of the cusp containing the primitive vector (x, y).
  std::size_t index_of(std::uint32_t x, std::uint32_t y) const;

  // Galois orbits; only available when det G is all of (Z/NZ)^x.
  bool defined_over_q() const noexcept { return orbit_of_.has_value(); }
  std::size_t orbit_of(std::size_t cusp_index) const;
  std::size_t orbit_count() const;
  std::vector<CuspOrbit> orbits() const;
  // Cusp indices of each orbit, in cusp order.
  std::vector<std::vector<std::size_t>> orbit_members() const;

 private:
  Modulus n_;
  SubgroupG h_;
  std::vector<CuspClass> cusps_;
  std::vector<std::int32_t> vec_to_cusp_;  // indexed by x*N + y, -1 if not primitive
  std::optional<std::vector<std::size_t>> orbit_of_;
};

bool is_primitive(Modulus n, std::uint32_t x, std::uint32_t y);
std::pair<std::uint32_t, std::uint32_t> canonical_rep(Modulus n, std::uint32_t x, std::uint32_t y);
// Determinant-one matrix with first column (x, y); smallest b, then smallest d.
ResidueMatrix sl2_lift(Modulus n, std::uint32_t x, std::uint32_t y);

std::vector<CuspClass> enumerate_cusps(const SubgroupG& g);
std::uint32_t cusp_width(const SubgroupG& g, const CuspClass& c);
// Width computed from an explicit lift (any SL2 matrix whose first column
// represents the cusp).
std::uint32_t cusp_width(const SubgroupG& geometric, const ResidueMatrix& lift);
std::vector<CuspOrbit> galois_orbits(const SubgroupG& g);
bool runge_condition(const SubgroupG& g, std::size_t s);

enum class PlaceKind { Archimedean, Finite };

// R_v = R_base^R_exponent and r_v = r_base^r_exponent, kept exact.
struct PlaceConstants {
  PlaceKind kind = PlaceKind::Archimedean;
  std::optional<std::uint64_t> p;
  bool v_divides_n = false;
  mpq_class R_base{1}, R_exponent{1};
  mpq_class r_base{1}, r_exponent{1};

  double R_v() const;
  double r_v() const;
  double log_R_v() const;
};

PlaceConstants place_constants(PlaceKind kind, std::optional<std::uint64_t> p, Modulus n);

}  // namespace runge
