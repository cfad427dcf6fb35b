#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace runge {

using Modulus = std::uint32_t;

// Matrix keys pack four residues into 64 bits, so N^4 must fit.
inline constexpr Modulus kMaxModulus = 65535;
inline constexpr std::size_t kDefaultMaxOrder = 5'000'000;

std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t n);  // 0 when not invertible
bool is_prime(std::uint64_t n);
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t n);
std::vector<std::uint32_t> units_mod(Modulus n);
std::vector<std::uint64_t> prime_divisors(std::uint64_t n);

// Smallest quadratic non-residue modulo an odd prime.
std::uint32_t smallest_nonresidue(std::uint32_t p);
// Generator of the cyclic group (Z/p^e Z)^x, p odd.
std::uint32_t primitive_root_prime_power(std::uint32_t p, std::uint32_t e);

// 2x2 matrix over Z/NZ, entries kept as least nonnegative residues.
class ResidueMatrix {
 public:
  ResidueMatrix() = default;  // placeholder with modulus 0; not a valid matrix

  static ResidueMatrix make(Modulus n, std::int64_t a, std::int64_t b, std::int64_t c,
                            std::int64_t d);
  static ResidueMatrix identity(Modulus n);
  static ResidueMatrix from_key(Modulus n, std::uint64_t key);

  Modulus modulus() const noexcept { return n_; }
  std::uint32_t a() const noexcept { return e_[0]; }
  std::uint32_t b() const noexcept { return e_[1]; }
  std::uint32_t c() const noexcept { return e_[2]; }
  std::uint32_t d() const noexcept { return e_[3]; }

  std::uint32_t det() const noexcept;
  bool is_invertible() const noexcept;
  ResidueMatrix inverse() const;
  std::uint64_t key() const noexcept;

  // Left action on a column vector.
  std::pair<std::uint32_t, std::uint32_t> apply(std::uint32_t x, std::uint32_t y) const noexcept;

  ResidueMatrix operator*(const ResidueMatrix& rhs) const;
  ResidueMatrix operator-() const noexcept;
  friend bool operator==(const ResidueMatrix&, const ResidueMatrix&) = default;

 private:
  Modulus n_ = 0;
  std::uint32_t e_[4] = {0, 0, 0, 0};
};

std::ostream& operator<<(std::ostream& os, const ResidueMatrix& m);

// A finite subgroup of GL2(Z/NZ) with its full element list (sorted by key).
class SubgroupG {
 public:
  Modulus modulus() const noexcept { return n_; }
  const std::vector<ResidueMatrix>& generators() const noexcept { return gens_; }
  const std::vector<ResidueMatrix>& elements() const noexcept { return elems_; }
  std::size_t order() const noexcept { return elems_.size(); }
  bool contains(const ResidueMatrix& m) const;
  bool contains_minus_one() const;

  // Caller guarantees `elements` is a group; used for groups built from
  // already-enumerated sets.
  static SubgroupG from_closed_set(Modulus n, std::vector<ResidueMatrix> generators,
                                   std::vector<ResidueMatrix> elements);

 private:
  Modulus n_ = 0;
  std::vector<ResidueMatrix> gens_;
  std::vector<ResidueMatrix> elems_;
  std::vector<std::uint64_t> keys_;
};

SubgroupG generate_subgroup(Modulus n, std::span<const ResidueMatrix> gens,
                            std::size_t max_order = kDefaultMaxOrder);

enum class PresetKind { SplitNormalizer, NonsplitNormalizer, Borel, Full };

std::string_view to_string(PresetKind kind) noexcept;

struct PresetLimits {
  std::uint64_t max_modulus = 343;
  std::size_t max_order = kDefaultMaxOrder;
};

// |GL2(Z/NZ)| = N^4 prod_{p|N} (1 - 1/p)(1 - 1/p^2).
std::uint64_t gl2_order(Modulus n);

SubgroupG preset_subgroup(PresetKind kind, std::uint32_t p, std::uint32_t exponent,
                          const PresetLimits& limits = {});

struct DetImage {
  std::vector<std::uint32_t> values;  // sorted
  bool is_full = false;
};

DetImage det_image(const SubgroupG& g);

// <G cap SL2, -1>, the group whose orbits on primitive vectors are the
// geometric cusps.
SubgroupG sl2_part_with_minus_one(const SubgroupG& g);

SubgroupG conjugate(const SubgroupG& g, const ResidueMatrix& by);

// Group text format: `N=<modulus>` then one generator `a b c d` per line.
SubgroupG parse_group_text(std::istream& in);
// `split:p^n`, `nonsplit:p^n`, `borel:p^n`, `full:p^n` (exponent optional) or a
// path to a group text file.
SubgroupG parse_group_spec(std::string_view spec);

}  // namespace runge
