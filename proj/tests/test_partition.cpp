#include "doctest.h"

#include <random>

#include "cyclograph/partition.hpp"

using namespace cyclograph;

namespace {

ArithmeticPartition random_partition(std::mt19937_64& rng, u64 m, std::size_t K) {
  auto divs = divisors(factorize(m));
  ArithmeticPartition P{m, {}};
  for (std::size_t j = 0; j < K; ++j) {
    u64 a = divs[rng() % divs.size()];
    P.seq.push_back(make_congruence(m, a, rng() % a));
  }
  return P;
}

ArithmeticPartition golden_r0() {
  ArithmeticPartition R{51, {}};
  R.seq = {make_congruence(51, 51, 21), make_congruence(51, 17, 4), make_congruence(51, 51, 11),
           make_congruence(51, 3, 2)};
  return R;
}

}  // namespace

TEST_CASE("system_solve") {
  CHECK(system_solve({make_congruence(12, 4, 1), make_congruence(12, 6, 3)}) == Residue{9, 12});
  CHECK(system_solve({make_congruence(4, 4, 0), make_congruence(4, 2, 1)}) == std::nullopt);
  CHECK(system_solve({}) == Residue{0, 1});
  CHECK_THROWS(make_congruence(12, 5, 1));
}

TEST_CASE("block_of and block_size") {
  ArithmeticPartition P{51, {make_congruence(51, 3, 1)}};
  CHECK(block_of(P, 4) == SignTuple{true});
  CHECK(block_of(P, 5) == SignTuple{false});
  CHECK(block_size(P, {true}) == 17);
  CHECK(block_size(P, {false}) == 34);
  ArithmeticPartition Q{51, {make_congruence(51, 3, 0), make_congruence(51, 17, 0)}};
  CHECK(block_size(Q, {true, true}) == 1);
  auto R = golden_r0();
  CHECK(block_of(R, 21) == SignTuple{true, true, false, false});
  CHECK(block_size(R, {false, true, false, false}) == 1);
  CHECK(block_of(R, 4) == SignTuple{false, true, false, false});
}

TEST_CASE("golden transient partition block census") {
  auto R = golden_r0();
  auto blocks = nonempty_blocks(R);
  std::multiset<u64> sizes;
  u64 total = 0;
  for (auto& b : blocks) {
    sizes.insert(b.size);
    total += b.size;
    u64 cnt = 0;
    for (u64 x = 0; x < 51; ++x) cnt += block_of(R, x) == b.signs;
    CHECK(cnt == b.size);
  }
  CHECK(total == 51);
  CHECK(sizes == std::multiset<u64>{1, 1, 1, 1, 15, 32});
}

TEST_CASE("lift, lambda, wedge") {
  ArithmeticPartition P{51, {make_congruence(51, 3, 0)}};
  auto A = make_affine(51, 34, 21);
  auto L = lift(P, A);
  REQUIRE(L.size() == 2);
  CHECK(L.seq[0] == Congruence{51, 21});
  CHECK(L.seq[1] == Congruence{17, 4});
  ArithmeticPartition T{51, {}};
  auto LT = lift(T, make_affine(51, 3, 5));
  REQUIRE(LT.size() == 1);
  CHECK(LT.seq[0] == Congruence{3, 2});
  CHECK(lift(P, make_affine(51, 2, 5)).seq.back().a == 1);
  CHECK(lambda(T, A).size() == 0);
  ArithmeticPartition Z{7, {make_congruence(7, 7, 0)}};
  CHECK(lambda(Z, make_affine(7, 1, 1)).seq[0] == Congruence{7, 1});
  // golden: R_0 = wedge(lift(P_3, A_3), lift(P_4, A_4))
  ArithmeticPartition P3{51, {make_congruence(51, 3, 0)}}, P4{51, {make_congruence(51, 17, 6)}};
  auto R = wedge(lift(P3, make_affine(51, 34, 21)), lift(P4, make_affine(51, 9, 8)));
  auto G = golden_r0();
  REQUIRE(R.size() == 4);
  for (u64 x = 0; x < 51; ++x) CHECK(block_of(R, x) == block_of(G, x));
  // golden: lambda(R_0, A_0)
  auto S = lambda(G, make_affine(51, 9, 1));
  REQUIRE(S.size() == 4);
  CHECK(S.seq[0] == Congruence{51, 37});
  CHECK(S.seq[1] == Congruence{51, 37});
  CHECK(S.seq[2] == Congruence{51, 49});
  CHECK(S.seq[3] == Congruence{3, 1});
  CHECK(wedge(P, T).size() == 1);
}

TEST_CASE("distribution numbers") {
  ArithmeticPartition P{51, {make_congruence(51, 3, 0)}};
  auto A = make_affine(51, 34, 21);
  CHECK(distribution_number(P, A, {true}, {true, true}) == 17);
  ArithmeticPartition T{51, {}};
  CHECK(distribution_number(T, make_affine(51, 2, 3), {}, {true}) == 1);
  CHECK(distribution_number(P, A, {true}, {true, false}) == 0);
  CHECK_THROWS(distribution_number(P, A, {true}, {true}));
}

TEST_CASE("distribution numbers against brute pre-image counts") {
  std::mt19937_64 rng(23);
  for (int it = 0; it < 300; ++it) {
    u64 m = 1 + rng() % 210;
    auto P = random_partition(rng, m, rng() % 6);
    auto A = make_affine(m, rng(), rng());
    auto L = lift(P, A);
    for (u64 x = 0; x < m; ++x) {
      auto nu2 = block_of(L, x);
      std::map<SignTuple, u64> counts;
      for (u64 y = 0; y < m; ++y)
        if (evaluate(A, y) == x) ++counts[block_of(P, y)];
      for (auto& b : nonempty_blocks(P)) {
        u64 want = counts.count(b.signs) ? counts[b.signs] : 0;
        REQUIRE(distribution_number(P, A, b.signs, nu2) == want);
      }
    }
  }
}

TEST_CASE("block sizes sum to m and agree with the zero map") {
  std::mt19937_64 rng(29);
  for (int it = 0; it < 300; ++it) {
    u64 m = 1 + rng() % 500;
    auto P = random_partition(rng, m, rng() % 7);
    auto A = make_affine(m, rng(), rng());
    auto L = lift(P, A);
    u64 tot = 0, totL = 0;
    std::map<SignTuple, u64> census;
    for (u64 x = 0; x < m; ++x) ++census[block_of(P, x)];
    auto blocks = nonempty_blocks(P);
    REQUIRE(blocks.size() == census.size());
    for (auto& b : blocks) {
      tot += b.size;
      REQUIRE(census[b.signs] == b.size);
      REQUIRE(block_size(P, b.signs) == b.size);
      SignTuple all_pos(P.size() + 1, true);
      REQUIRE(distribution_number(P, make_affine(m, 0, 0), b.signs, all_pos) == b.size);
    }
    for (auto& b : nonempty_blocks(L)) totL += b.size;
    REQUIRE(tot == m);
    REQUIRE(totL == m);
  }
}

TEST_CASE("forced block enumeration") {
  std::mt19937_64 rng(31);
  for (int it = 0; it < 200; ++it) {
    u64 m = 1 + rng() % 300;
    auto P = random_partition(rng, m, 1 + rng() % 6);
    std::vector<Forced> f(P.size());
    for (auto& x : f) x = static_cast<Forced>(static_cast<int>(rng() % 3) - 1);
    auto blocks = nonempty_blocks(P, f);
    std::map<SignTuple, u64> census;
    for (u64 x = 0; x < m; ++x) {
      auto nu = block_of(P, x);
      bool ok = true;
      for (std::size_t j = 0; j < nu.size(); ++j)
        if (f[j] != Forced::Free && (f[j] == Forced::Positive) != nu[j]) ok = false;
      if (ok) ++census[nu];
    }
    REQUIRE(blocks.size() == census.size());
    std::size_t k = 0;
    for (auto& [nu, c] : census) {
      REQUIRE(blocks[k].signs == nu);
      REQUIRE(blocks[k].size == c);
      ++k;
    }
  }
}

TEST_CASE("rendering") {
  ArithmeticPartition P{51, {make_congruence(51, 3, 0), make_congruence(51, 17, 6)}};
  CHECK(render_partition(P) == "P(mod 51): x=0(3) & x=6(17)");
  CHECK(render_partition(ArithmeticPartition{51, {}}) == "P(mod 51): true");
  CHECK(render_signs({true, false}) == "(+,-)");
}
