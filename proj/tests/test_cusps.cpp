#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "runge/cusps.hpp"
#include "runge/error.hpp"

using namespace runge;

namespace {

SubgroupG trivial_group(Modulus n) {
  const std::vector<ResidueMatrix> gens{ResidueMatrix::identity(n)};
  return generate_subgroup(n, gens);
}

std::size_t sl2_order(Modulus n) { return gl2_order(n) / units_mod(n).size(); }

}  // namespace

TEST_CASE("split Cartan normalizer cusps") {
  for (std::uint32_t p : {3u, 5u, 7u, 11u, 13u, 17u}) {
    const CuspTable t(preset_subgroup(PresetKind::SplitNormalizer, p, 1));
    CHECK(t.cusps().size() == (p + 1) / 2);
    REQUIRE(t.orbit_count() == 2);
    std::multiset<std::size_t> degrees;
    for (const auto& o : t.orbits()) degrees.insert(o.degree());
    CHECK(degrees == std::multiset<std::size_t>{1, (p - 1) / 2});
    CHECK(t.cusps()[0].x == 1);
    CHECK(t.cusps()[0].y == 0);
    CHECK(t.orbit_members()[t.orbit_of(0)].size() == 1);
    for (const auto& c : t.cusps()) CHECK(c.width == p);
  }
}

TEST_CASE("sum of widths equals the index in PSL2") {
  for (const SubgroupG& g :
       {preset_subgroup(PresetKind::SplitNormalizer, 5, 1), preset_subgroup(PresetKind::NonsplitNormalizer, 7, 1),
        preset_subgroup(PresetKind::Borel, 5, 1), preset_subgroup(PresetKind::SplitNormalizer, 3, 2),
        preset_subgroup(PresetKind::Full, 5, 1), trivial_group(6)}) {
    const CuspTable t(g);
    std::size_t widths = 0;
    for (const auto& c : t.cusps()) widths += c.width;
    CHECK(widths * t.geometric_group().order() == sl2_order(g.modulus()));
  }
}

TEST_CASE("X(N) has (p^2 - 1)/2 cusps of width p") {
  for (Modulus p : {3u, 5u, 7u}) {
    const auto cusps = enumerate_cusps(trivial_group(p));
    CHECK(cusps.size() == (p * p - 1) / 2);
    for (const auto& c : cusps) CHECK(c.width == p);
  }
}

TEST_CASE("every primitive vector lies in the orbit of its cusp representative") {
  const SubgroupG g = preset_subgroup(PresetKind::Borel, 7, 1);
  const CuspTable t(g);
  const auto& h = t.geometric_group();
  for (Modulus x = 0; x < 7; ++x)
    for (Modulus y = 0; y < 7; ++y) {
      if (!is_primitive(7, x, y)) continue;
      const CuspClass& c = t.cusps()[t.index_of(x, y)];
      bool found = false;
      for (const auto& m : h.elements()) found = found || m.apply(c.x, c.y) == std::pair{x, y};
      CHECK(found);
    }
}

TEST_CASE("lifts and canonical representatives") {
  for (Modulus n : {5u, 8u, 9u}) {
    for (Modulus x = 0; x < n; ++x)
      for (Modulus y = 0; y < n; ++y) {
        if (!is_primitive(n, x, y)) continue;
        const auto m = sl2_lift(n, x, y);
        CHECK(m.det() == 1 % n);
        CHECK(m.a() == x);
        CHECK(m.c() == y);
        const auto r = canonical_rep(n, x, y);
        CHECK(r == canonical_rep(n, (n - x) % n, (n - y) % n));
      }
  }
}

TEST_CASE("nonsplit and full groups") {
  const CuspTable ns(preset_subgroup(PresetKind::NonsplitNormalizer, 5, 1));
  CHECK(ns.cusps().size() == 2);
  CHECK(ns.orbit_count() == 1);
  const CuspTable full(preset_subgroup(PresetKind::Full, 5, 1));
  REQUIRE(full.cusps().size() == 1);
  CHECK(full.cusps()[0].width == 1);
  CHECK_FALSE(runge_condition(preset_subgroup(PresetKind::Full, 5, 1), 1));
  CHECK(runge_condition(preset_subgroup(PresetKind::SplitNormalizer, 5, 1), 1));
  CHECK_FALSE(runge_condition(preset_subgroup(PresetKind::SplitNormalizer, 5, 1), 2));
}

TEST_CASE("Galois orbits need a full determinant") {
  const CuspTable t(trivial_group(5));
  CHECK_FALSE(t.defined_over_q());
  try {
    (void)t.orbit_count();
    FAIL("expected NotDefinedOverQ");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotDefinedOverQ);
  }
}

TEST_CASE("place constants") {
  const auto arch = place_constants(PlaceKind::Archimedean, std::nullopt, 7);
  CHECK(arch.R_v() > 1);
  const auto fin = place_constants(PlaceKind::Finite, 7, 7);
  CHECK(fin.v_divides_n);
  const auto other = place_constants(PlaceKind::Finite, 3, 7);
  CHECK_FALSE(other.v_divides_n);
}
