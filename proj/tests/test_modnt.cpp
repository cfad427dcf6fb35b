#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "runge/error.hpp"
#include "runge/modnt.hpp"

using namespace runge;

namespace {

std::size_t brute_gl2(Modulus n) {
  std::size_t count = 0;
  for (Modulus a = 0; a < n; ++a)
    for (Modulus b = 0; b < n; ++b)
      for (Modulus c = 0; c < n; ++c)
        for (Modulus d = 0; d < n; ++d) {
          const long det = ((static_cast<long>(a) * d - static_cast<long>(b) * c) % n + n) % n;
          if (std::gcd(det, static_cast<long>(n)) == 1) ++count;
        }
  return count;
}

bool trial_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace

TEST_CASE("GL2 orders agree with brute-force enumeration") {
  CHECK(brute_gl2(3) == 48);
  for (Modulus n = 2; n <= 7; ++n) CHECK(gl2_order(n) == brute_gl2(n));
  CHECK(preset_subgroup(PresetKind::Full, 3, 1).order() == 48);
  CHECK(preset_subgroup(PresetKind::Full, 5, 1).order() == 480);
}

TEST_CASE("preset orders") {
  for (std::uint32_t p : {3u, 5u, 7u, 11u, 13u}) {
    CHECK(preset_subgroup(PresetKind::SplitNormalizer, p, 1).order() == 2 * (p - 1) * (p - 1));
    CHECK(preset_subgroup(PresetKind::NonsplitNormalizer, p, 1).order() == 2 * (p * p - 1));
    CHECK(preset_subgroup(PresetKind::Borel, p, 1).order() == (p - 1) * (p - 1) * p);
  }
  // split Cartan normalizer of level 9: 2 * phi(9)^2
  CHECK(preset_subgroup(PresetKind::SplitNormalizer, 3, 2).order() == 72);
}

TEST_CASE("preset limits") {
  CHECK_THROWS_AS(preset_subgroup(PresetKind::SplitNormalizer, 2, 1), Error);
  try {
    preset_subgroup(PresetKind::SplitNormalizer, 7, 4);
    FAIL("expected UnsupportedModulus");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnsupportedModulus);
  }
  try {
    preset_subgroup(PresetKind::Full, 7, 3);
    FAIL("expected GroupTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::GroupTooLarge);
  }
}

TEST_CASE("generated subgroups are closed and contain their generators") {
  const auto a = ResidueMatrix::make(7, 1, 1, 0, 1), b = ResidueMatrix::make(7, 3, 0, 0, 1);
  const std::vector<ResidueMatrix> gens{a, b};
  const SubgroupG g = generate_subgroup(7, gens);
  CHECK(g.order() == 42);  // upper triangular with lower-right entry 1
  for (const auto& x : g.elements())
    for (const auto& y : g.elements()) REQUIRE(g.contains(x * y));
  CHECK(g.contains(a));
  CHECK_FALSE(g.contains_minus_one());
  CHECK_FALSE(det_image(g).is_full == false);
}

TEST_CASE("generator errors") {
  const std::vector<ResidueMatrix> bad{ResidueMatrix::make(6, 2, 0, 0, 1)};
  try {
    generate_subgroup(6, bad);
    FAIL("expected NonInvertibleGenerator");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonInvertibleGenerator);
  }
  const std::vector<ResidueMatrix> mixed{ResidueMatrix::make(5, 1, 1, 0, 1)};
  try {
    generate_subgroup(7, mixed);
    FAIL("expected ModulusMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ModulusMismatch);
  }
}

TEST_CASE("determinant image") {
  CHECK(det_image(preset_subgroup(PresetKind::SplitNormalizer, 7, 1)).is_full);
  const std::vector<ResidueMatrix> gens{ResidueMatrix::make(5, 1, 1, 0, 1), ResidueMatrix::make(5, 4, 0, 0, 4)};
  const auto d = det_image(generate_subgroup(5, gens));
  CHECK_FALSE(d.is_full);
  CHECK(d.values == std::vector<std::uint32_t>{1});
}

TEST_CASE("modular helpers") {
  for (std::uint64_t n = 2; n < 60; ++n) {
    for (std::uint64_t a = 1; a < n; ++a) {
      const auto inv = inverse_mod(a, n);
      if (std::gcd(a, n) == 1)
        CHECK(a * inv % n == 1);
      else
        CHECK(inv == 0);
    }
    const auto units = units_mod(static_cast<Modulus>(n));
    std::size_t phi = 0;
    for (std::uint64_t a = 1; a <= n; ++a) phi += std::gcd(a, n) == 1;
    CHECK(units.size() == phi);
    for (auto u : units) CHECK(std::gcd<std::uint64_t>(u, n) == 1);
  }
  for (std::uint64_t n = 0; n < 2000; ++n) CHECK(is_prime(n) == trial_prime(n));
}

TEST_CASE("conjugation preserves order and determinant image") {
  const SubgroupG g = preset_subgroup(PresetKind::SplitNormalizer, 5, 1);
  const SubgroupG h = conjugate(g, ResidueMatrix::make(5, 1, 2, 0, 1));
  CHECK(h.order() == g.order());
  CHECK(det_image(h).values == det_image(g).values);
}

TEST_CASE("group text format") {
  std::istringstream in("N=5\n1 1 0 1\n2 0 0 1\n");
  const SubgroupG g = parse_group_text(in);
  CHECK(g.modulus() == 5);
  CHECK(g.order() == 20);
  std::istringstream bad1("1 1 0 1\n");
  CHECK_THROWS_AS(parse_group_text(bad1), Error);
  std::istringstream bad2("N=5\n1 1 0\n");
  try {
    parse_group_text(bad2);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ParseError);
  }
  CHECK(parse_group_spec("split:7").order() == 72);
  CHECK(parse_group_spec("borel:5").order() == 80);
  CHECK(parse_group_spec("nonsplit:3^1").order() == 16);
  CHECK_THROWS_AS(parse_group_spec("/nonexistent/group.txt"), Error);
}
