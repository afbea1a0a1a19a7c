#include "doctest.h"

#include <random>

#include "cyclograph/finitefield.hpp"

using namespace cyclograph;

TEST_CASE("polynomial parsing") {
  CHECK(parse_poly("x^8+x^4+x^3+x^2+1", 2) == PolyFp{1, 0, 1, 1, 1, 0, 0, 0, 1});
  CHECK(parse_poly("1 + T + T^2", 2) == PolyFp{1, 1, 1});
  CHECK(parse_poly("2*x^2 + 4x - 1", 3) == PolyFp{2, 1, 2});
  CHECK_THROWS(parse_poly("x^^2", 2));
  CHECK(poly_to_string(PolyFp{1, 1, 1}) == "x^2+x+1");
}

TEST_CASE("small fields") {
  auto F4 = make_field(2, 2, PolyFp{1, 1, 1});
  CHECK(F4.q == 4);
  CHECK(F4.omega == FieldElement{{0, 1}});
  auto w = F4.omega;
  CHECK(mul(F4, w, w) == add(F4, w, field_one(F4)));
  CHECK(field_dlog(F4, add(F4, w, field_one(F4))) == 2);
  CHECK(field_dlog(F4, field_one(F4)) == 0);
  auto F17 = make_field(17, 1);
  CHECK(F17.omega == FieldElement{{3}});
  CHECK_THROWS(make_field(2, 2, PolyFp{1, 0, 1}));      // x^2+1 = (x+1)^2
  CHECK_THROWS(make_field(2, 4, PolyFp{1, 1, 1, 1, 1})); // irreducible, not primitive
  CHECK_THROWS(make_field(4, 1));
  CHECK_THROWS(field_dlog(F17, field_zero(F17)));
  CHECK_THROWS(inv(F17, field_zero(F17)));
  CHECK(make_field(2, 1).omega == FieldElement{{1}});
}

TEST_CASE("F_256 automatic modulus") {
  auto F = make_field(2, 8);
  CHECK(F.q == 256);
  CHECK(pow(F, F.omega, 255) == field_one(F));
  for (u64 p : {3, 5, 17}) CHECK_FALSE(pow(F, F.omega, 255 / p) == field_one(F));
  // every nonzero element round-trips through the discrete log
  auto x = field_one(F);
  for (u64 k = 0; k < 255; ++k) {
    REQUIRE(field_dlog(F, x) == k);
    x = mul(F, x, F.omega);
  }
  std::mt19937_64 rng(1);
  for (int it = 0; it < 50; ++it) {
    auto y = element_from_code(F, 1 + rng() % 255);
    CHECK(mul(F, y, inv(F, y)) == field_one(F));
    CHECK(add(F, field_zero(F), y) == y);
  }
}

TEST_CASE("discrete log round trip on assorted fields") {
  std::mt19937_64 rng(2);
  for (auto [p, n] : std::vector<std::pair<u64, unsigned>>{{2, 3}, {3, 4}, {5, 3}, {7, 2}, {2, 10}, {13, 2}, {2, 16}, {65521, 1}, {3, 7}}) {
    auto F = make_field(p, n);
    auto x = field_one(F);
    u64 step = std::max<u64>(1, (F.q - 1) / 2000);
    auto ws = pow(F, F.omega, step);
    for (u64 k = 0; k < F.q - 1; k += step) {
      REQUIRE(field_dlog(F, x) == k);
      x = mul(F, x, ws);
    }
    for (int it = 0; it < 100; ++it) {
      auto a = element_from_code(F, 1 + rng() % (F.q - 1)), b = element_from_code(F, 1 + rng() % (F.q - 1));
      REQUIRE(field_dlog(F, mul(F, a, b)) == (field_dlog(F, a) + field_dlog(F, b)) % (F.q - 1));
      REQUIRE(pow(F, F.omega, field_dlog(F, a)) == a);
    }
  }
}

TEST_CASE("element codes") {
  auto F = make_field(3, 3);
  for (u64 c = 0; c < F.q; ++c) CHECK(element_code(F, element_from_code(F, c)) == c);
}
