#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "woldlab/catalog.hpp"
#include "woldlab/errors.hpp"
#include "woldlab/spectral.hpp"

using namespace woldlab;

namespace {

Angle frac(int p, int q) { return Angle(p) / q; }

// Multiplicity at a point by direct containment count.
int brute_multiplicity(const SpectralUnitary& u, const Angle& x) {
  int m = 0;
  for (const Arc& a : u.continuous_pieces) m += a.contains(x);
  return m;
}

Arc random_arc(std::mt19937_64& rng, int denominator) {
  std::uniform_int_distribution<int> start(0, denominator - 1);
  std::uniform_int_distribution<int> length(1, denominator);
  return Arc::make(frac(start(rng), denominator), frac(length(rng), denominator));
}

SpectralUnitary random_unitary(std::mt19937_64& rng, int denominator) {
  std::uniform_int_distribution<int> pieces(1, 4);
  std::vector<Arc> arcs;
  const int n = pieces(rng);
  for (int k = 0; k < n; ++k) arcs.push_back(random_arc(rng, denominator));
  return SpectralUnitary::make(arcs);
}

}  // namespace

TEST_CASE("angles are exact") {
  CHECK(to_angle(0.6) == frac(3, 5));
  CHECK(to_angle(1.25) == frac(1, 4));
  CHECK(to_angle(-0.25) == frac(3, 4));
  CHECK(to_angle(1.0, false) == 1);
  CHECK(parse_angle("2/7") == frac(2, 7));
  CHECK(parse_angle("0.5") == frac(1, 2));
  CHECK(to_string(frac(3, 5)) == "3/5");
  CHECK(to_string(Angle(0)) == "0");
  CHECK_THROWS_AS(parse_angle("1/0"), MalformedInput);
  CHECK_THROWS_AS(parse_angle("x"), MalformedInput);
  CHECK_THROWS_AS(Arc::make(0, 0), MalformedInput);
  CHECK_THROWS_AS(Arc::make(0, frac(3, 2)), MalformedInput);
}

TEST_CASE("arc containment wraps around") {
  const Arc a = Arc::make(frac(3, 4), frac(1, 2));
  CHECK(a.contains(frac(7, 8)));
  CHECK(a.contains(0));
  CHECK(a.contains(frac(1, 8)));
  CHECK_FALSE(a.contains(frac(1, 4)));
  CHECK_FALSE(a.contains(frac(1, 2)));
  CHECK(Arc::full().contains(frac(999, 1000)));
}

TEST_CASE("arc doubling preserves measure up to saturation") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 500; ++trial) {
    const Arc a = random_arc(rng, 48);
    Angle total = 0;
    for (const Arc& d : arc_double(a)) total += d.length;
    CHECK(total == (a.length * 2 < 1 ? a.length * 2 : Angle(1)));
    for (int k = 0; k < 96; ++k) {
      const Angle x = frac(2 * k + 1, 192);
      Angle doubled = 2 * x;
      while (doubled >= 1) doubled -= 1;
      if (a.contains(x)) {
        bool hit = false;
        for (const Arc& d : arc_double(a)) hit = hit || d.contains(doubled);
        REQUIRE(hit);
      }
    }
  }
}

TEST_CASE("Kerchy example") {
  const SpectralUnitary u = example_kerchy();
  const MultiplicityProfile p = multiplicity_profile(u);
  CHECK(p == make_profile({0, frac(3, 5)}, {3, 1}));
  const SpectralDecision d = is_bilateral_shift(u);
  CHECK_FALSE(d.value);
  CHECK(d.reason == "non-constant multiplicity");
  CHECK(has_wandering_vector(u).value);
  const BilateralCover c = bilateral_cover(u);
  REQUIRE(c.layers.size() == 3);
  CHECK(c.exhausts);
  MultiplicityProfile sum = MultiplicityProfile::constant(0);
  for (const CoverLayer& l : c.layers) {
    CHECK(is_bilateral_shift(l.unitary()).value);
    sum = sum + l.fresh;
  }
  CHECK(sum == p);
  CHECK_THROWS_AS(example_kerchy(Arc::make(0, frac(1, 4))), MalformedInput);
}

TEST_CASE("arc multiplication has no wandering vector") {
  const SpectralUnitary u = arc_multiplication(Arc::make(0, frac(1, 4)));
  const SpectralDecision d = has_wandering_vector(u);
  CHECK_FALSE(d.value);
  REQUIRE(d.obstruction.has_value());
  CHECK(*d.obstruction == Arc::make(frac(1, 4), frac(3, 4)));
  CHECK(is_bilateral_shift(u).reason == "support not full circle");
  CHECK_THROWS_AS(bilateral_cover(u), Refused);
  CHECK(is_bilateral_shift(arc_multiplication(Arc::full())).value);
}

TEST_CASE("atoms block the bilateral shift") {
  const SpectralUnitary u = SpectralUnitary::make({Arc::full()}, {{frac(1, 3), 1}});
  CHECK(is_bilateral_shift(u).reason == "atoms present");
  CHECK(has_wandering_vector(u).value);
  CHECK_THROWS_AS(bilateral_cover(u), Refused);
  CHECK_THROWS_AS(SpectralUnitary::make({}, {{0, 1}, {0, 2}}), MalformedInput);
  CHECK_THROWS_AS(SpectralUnitary::make({}, {{0, 0}}), MalformedInput);
}

TEST_CASE("profiles agree with pointwise counting") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 300; ++trial) {
    const SpectralUnitary u = random_unitary(rng, 24);
    const MultiplicityProfile p = multiplicity_profile(u);
    CHECK(p.breakpoints.front() == 0);
    for (std::size_t i = 1; i < p.values.size(); ++i) CHECK(p.values[i] != p.values[i - 1]);
    for (int k = 0; k < 48; ++k) {
      const Angle x = frac(k, 48);
      REQUIRE(p.at(x) == brute_multiplicity(u, x));
    }
  }
}

TEST_CASE("profiles are additive under direct sums") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 300; ++trial) {
    const SpectralUnitary a = random_unitary(rng, 30);
    const SpectralUnitary b = random_unitary(rng, 20);
    CHECK(multiplicity_profile(a.direct_sum(b)) == multiplicity_profile(a) + multiplicity_profile(b));
  }
}

TEST_CASE("bilateral shift implies wandering vector implies cover") {
  std::mt19937_64 rng(53);
  int covered = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const SpectralUnitary u = random_unitary(rng, 12);
    const bool shift = is_bilateral_shift(u).value;
    const bool wandering = has_wandering_vector(u).value;
    if (shift) CHECK(wandering);
    if (!wandering) {
      CHECK_THROWS_AS(bilateral_cover(u), Refused);
      continue;
    }
    const BilateralCover c = bilateral_cover(u);
    ++covered;
    CHECK(c.exhausts);
    CHECK(static_cast<int>(c.layers.size()) == c.profile.max());
    MultiplicityProfile sum = MultiplicityProfile::constant(0);
    for (const CoverLayer& l : c.layers) sum = sum + l.fresh;
    CHECK(sum == c.profile);
    if (shift) CHECK(c.profile.is_constant());
  }
  CHECK(covered > 20);
}

TEST_CASE("missing wandering vectors are hereditary") {
  std::mt19937_64 rng(59);
  for (int trial = 0; trial < 300; ++trial) {
    const SpectralUnitary u = random_unitary(rng, 16);
    const Arc a = random_arc(rng, 16);
    const SpectralUnitary r = restrict_to_arc(u, a);
    if (!has_wandering_vector(u).value) CHECK_FALSE(has_wandering_vector(r).value);
    if (!a.is_full()) CHECK_FALSE(has_wandering_vector(r).value);
    for (int k = 0; k < 32; ++k) {
      const Angle x = frac(k, 32);
      REQUIRE(multiplicity_profile(r).at(x) == (a.contains(x) ? brute_multiplicity(u, x) : 0));
    }
  }
}

TEST_CASE("spectral model of the minimal unitary extension") {
  const WoldResult w = wold_decompose(shift(2), 64);
  const SpectralUnitary ext = spectral_of_extension(w, arc_multiplication(default_kerchy_arc()));
  CHECK(multiplicity_profile(ext) == make_profile({0, frac(3, 5)}, {3, 2}));
  CHECK_THROWS_AS(spectral_of_extension(wold_decompose(grid_horizontal(), 16), SpectralUnitary{}), Refused);
}
