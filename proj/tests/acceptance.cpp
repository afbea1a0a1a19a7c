// One PASS/FAIL line per acceptance criterion; exit status 1 if any criterion fails.
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "cyclograph/isomorph.hpp"
#include "cyclograph/partition.hpp"
#include "mapping_util.hpp"

using namespace cyclograph;

namespace {

using Census = std::map<std::pair<std::vector<std::string>, u64>, u64>;

struct Failure {
  std::string why;
};

[[noreturn]] void fail(const std::string& why) { throw Failure{why}; }

void expect(bool ok, const std::string& why) {
  if (!ok) fail(why);
}

const std::string kExample = CYCLOGRAPH_DATA_DIR "/f256_d5.map";

// Coefficient uniform over F_q (zero included), exponent uniform over 0..q-2.
CyclotomicMapping uniform_mapping(std::mt19937_64& rng, u64 max_q, u64 max_d) {
  std::vector<u64> qs;
  for (u64 q : oracle::small_prime_powers())
    if (q <= max_q) qs.push_back(q);
  const u64 q = qs[rng() % qs.size()];
  std::vector<u64> ds;
  for (u64 d = 1; d <= max_d && d < q; ++d)
    if ((q - 1) % d == 0) ds.push_back(d);
  const u64 d = ds[rng() % ds.size()];
  std::vector<Branch> bs(d);
  for (auto& b : bs) {
    u64 a = rng() % q;
    b.zero = a == 0;
    b.e = a == 0 ? 0 : a - 1;
    b.r = rng() % (q - 1);
  }
  return make_mapping(oracle::field_for(q), d, bs);
}

std::string describe(const CyclotomicMapping& f) {
  std::string s = format_mapping(f);
  for (auto& c : s)
    if (c == '\n') c = ';';
  return s;
}

bool valid_crl(const AffineMap& A, const CrlList& L) {
  auto succ = oracle::affine_successors(A);
  std::vector<int> cycle_id(A.m, -1);
  std::map<u64, u64> got;
  for (std::size_t idx = 0; idx < L.size(); ++idx) {
    u64 r = L[idx].rep, y = r, len = 0;
    if (r >= A.m) return false;
    do {
      if (cycle_id[y] != -1) return false;
      cycle_id[y] = static_cast<int>(idx);
      y = succ[y];
      if (++len > A.m) return false;
    } while (y != r);
    if (len != L[idx].length) return false;
    ++got[len];
  }
  return got == oracle::cycle_census(succ);
}

using ClassSet = std::multiset<std::pair<std::vector<u64>, u64>>;

// Component classes reported by `analyze`, each as (tree vertex counts along the necklace, cycle length).
ClassSet analyze_classes(const std::string& path, u64& nonzero_total) {
  std::ostringstream out, err;
  int code = cli::run({"cyclograph", "analyze", path}, out, err);
  expect(code == 0, "analyze exited with " + std::to_string(code) + ": " + err.str());
  auto doc = nlohmann::json::parse(out.str());
  std::map<std::string, u64> vertices;
  for (const auto& t : doc["trees"]) vertices[t["tree"]] = t["vertices"];
  ClassSet got;
  nonzero_total = 0;
  for (const auto& c : doc["components"]) {
    std::string nk = c["necklace"];
    std::vector<u64> sizes;
    std::stringstream ss(nk.substr(1, nk.size() - 2));
    for (std::string t; std::getline(ss, t, ',');) sizes.push_back(vertices.at(t));
    u64 len = c["length"], mult = c["multiplicity"];
    expect(mult == 1, "multiplicity " + std::to_string(mult) + " in " + nk);
    got.insert({sizes, len});
    if (sizes != std::vector<u64>{1} || len != 1)
      for (u64 k = 0; k < len; ++k) nonzero_total += sizes[k % sizes.size()];
  }
  return got;
}

ClassSet run_analyze_file(const CyclotomicMapping& f) {
  auto path = std::filesystem::temp_directory_path() / "cyclograph_acceptance.map";
  std::ofstream(path) << format_mapping(f);
  u64 total = 0;
  return analyze_classes(path.string(), total);
}

// 1: golden F_256 components through the analyze verb
void golden_components() {
  u64 nonzero_total = 0;
  ClassSet got = analyze_classes(kExample, nonzero_total);
  // sizes 1, 6, 23, 91, 57 for the zero tree and the four distinct nonzero trees
  ClassSet want{
      {{1}, 1}, {{6}, 1}, {{6}, 8}, {oracle::canonical_necklace(std::vector<u64>{91, 6, 57, 6, 6, 6, 6, 23}), 8}};
  expect(got == want, "component classes differ");
  expect(nonzero_total == 255, "nonzero vertex total " + std::to_string(nonzero_total));
  // the second primitive modulus gives the same classes
  auto f = parse_mapping("q=256\npoly=x^8+x^6+x^4+x^3+x^2+x+1\nd=5\nbranch 0: a=w^5, r=9\nbranch 1: a=w^0, r=3\n"
                         "branch 2: a=w^0, r=17\nbranch 3: a=w^3, r=34\nbranch 4: a=w^4, r=9\n");
  auto rows = run_analyze_file(f);
  expect(rows == got, "component classes depend on the modulus polynomial");
}

// 2: coset 0 of the golden example
void golden_intermediate() {
  auto f = parse_mapping(format_mapping(make_mapping(oracle::field_for(256), 5,
                                                     {{false, 5, 9}, {false, 0, 3}, {false, 0, 17}, {false, 3, 34}, {false, 4, 9}})));
  auto ind = induce(f);
  expect(ind.A[0].has_value() && *ind.A[0] == make_affine(51, 9, 1), "coset map of coset 0 is not 9x+1 mod 51");
  const AffineMap& A0 = *ind.A[0];
  auto crl = crl_affine(A0);
  std::map<u64, u64> census;
  for (const auto& e : crl) ++census[e.length];
  expect(census == std::map<u64, u64>{{1, 1}, {8, 2}}, "cycle census of coset 0 differs");
  std::set<u64> matched;
  for (const auto& e : crl) {
    u64 y = e.rep;
    std::optional<u64> hit;
    for (u64 k = 0; k < e.length; ++k, y = evaluate(A0, y))
      for (u64 target : {37, 22, 19})
        if (y == target) hit = target;
    expect(hit.has_value() && matched.insert(*hit).second,
           "representative " + std::to_string(e.rep) + " not co-cyclic with a distinct one of 37, 22, 19");
  }
  auto reg = build_register(f);
  const auto& c0 = reg.cosets[0];
  expect(c0.H == 1, "layer height of coset 0 is " + std::to_string(c0.H));
  std::multiset<u64> sizes;
  for (const auto& b : nonempty_blocks(c0.pushed[0])) sizes.insert(b.size);
  expect(sizes == std::multiset<u64>{32, 1, 1, 15, 1, 1}, "children partition block sizes of coset 0 differ");
}

// 3: register pipeline against brute force on uniform random mappings
void oracle_suite() {
  std::mt19937_64 rng(20240);
  for (int it = 0; it < 200; ++it) {
    auto f = uniform_mapping(rng, 1024, 8);
    auto reg = build_register(f);
    auto succ = oracle::field_successors(f);
    auto keys = oracle::ahu_keys(succ);
    std::map<std::size_t, std::string> memo;
    for (Vertex v = 0; v < f.q(); ++v)
      if (oracle::expanded_key(reg.trees, tree_of_vertex(reg, f, v), memo) != keys[v])
        fail("tree of " + vertex_name(v) + " in " + describe(f));
    auto crl = crl_list(f);
    std::map<u64, u64> census;
    for (const auto& e : crl) {
      ++census[e.length];
      u64 len = 0;
      Vertex w = e.rep;
      do {
        w = succ[w];
        ++len;
      } while (w != e.rep && len <= f.q());
      if (len != e.length) fail("representative " + vertex_name(e.rep) + " in " + describe(f));
    }
    if (census != oracle::cycle_census(succ)) fail("cycle census of " + describe(f));
    std::vector<ComponentNecklace> items;
    for (const auto& e : crl) items.push_back(component_necklace(reg, f, e.rep, e.length));
    if (oracle::census_of(reg.trees, aggregate(items)) != oracle::component_census(succ))
      fail("component necklaces of " + describe(f));
  }
}

// 4: CRL lists of primary and composite affine maps
void crl_tables() {
  for (u64 q = 2; q <= 256; ++q) {
    auto fq = factorize(q);
    if (fq.factors.size() != 1) continue;
    const u64 p = fq.factors[0].p;
    const unsigned v = fq.factors[0].v;
    for (u64 a = 1; a < q; ++a) {
      if (a % p == 0) continue;
      for (u64 b = 0; b < q; ++b)
        if (!valid_crl(make_affine(q, a, b), crl_affine_primary(p, v, a, b)))
          fail("primary " + std::to_string(q) + ": " + std::to_string(a) + "x+" + std::to_string(b));
    }
  }
  std::mt19937_64 rng(4);
  for (int it = 0; it < 500;) {
    u64 m = 2 + rng() % 4999;
    if (factorize(m).factors.size() < 2) continue;
    ++it;
    auto A = make_affine(m, rng(), rng());
    if (!valid_crl(A, crl_affine(A)))
      fail("composite " + std::to_string(m) + ": " + std::to_string(A.a) + "x+" + std::to_string(A.b));
  }
}

// 5: distribution numbers against brute pre-image counts
void distribution_numbers_exhaustive() {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 300; ++it) {
    u64 m = 1 + rng() % 210;
    auto divs = divisors(factorize(m));
    ArithmeticPartition P{m, {}};
    std::size_t K = rng() % 6;
    for (std::size_t j = 0; j < K; ++j) {
      u64 a = divs[rng() % divs.size()];
      P.seq.push_back(make_congruence(m, a, rng() % a));
    }
    auto A = make_affine(m, rng(), rng());
    auto L = lift(P, A);
    auto blocks = nonempty_blocks(P);
    for (u64 x = 0; x < m; ++x) {
      auto nu2 = block_of(L, x);
      std::map<SignTuple, u64> counts;
      for (u64 y = 0; y < m; ++y)
        if (evaluate(A, y) == x) ++counts[block_of(P, y)];
      for (const auto& b : blocks) {
        u64 want = counts.count(b.signs) ? counts[b.signs] : 0;
        if (distribution_number(P, A, b.signs, nu2) != want)
          fail("m=" + std::to_string(m) + " " + render_partition(P) + " block " + render_signs(b.signs));
      }
    }
  }
}

// 6: trees above periodic vertices of affine maps
void rigid_procreation() {
  std::mt19937_64 rng(6);
  for (int it = 0; it < 200; ++it) {
    u64 m = 1 + rng() % 500;
    auto A = make_affine(m, rng(), rng());
    auto succ = oracle::affine_successors(A);
    auto per = oracle::periodic_flags(succ);
    auto keys = oracle::ahu_keys(succ);
    TreeDescriptionList list;
    auto n = rigid_tree(procreation_numbers(A, 2 * mpe(m) + 2), list);
    std::map<std::size_t, std::string> memo;
    auto want = oracle::expanded_key(list, n, memo);
    for (u64 x = 0; x < m; ++x)
      if (per[x] && keys[x] != want)
        fail(std::to_string(A.a) + "x+" + std::to_string(A.b) + " mod " + std::to_string(m) + " at " + std::to_string(x));
  }
}

// 7: affine graph isomorphism for every pair of maps
void affine_iso_exhaustive() {
  for (u64 m : {6, 8, 9, 12, 16, 20, 24, 36, 40}) {
    std::map<Census, int> ids;
    std::vector<int> cls(m * m);
    for (u64 a = 0; a < m; ++a)
      for (u64 b = 0; b < m; ++b) {
        auto [it, _] = ids.emplace(oracle::component_census(oracle::affine_successors(make_affine(m, a, b))),
                                   static_cast<int>(ids.size()));
        cls[a * m + b] = it->second;
      }
    for (u64 x = 0; x < m * m; ++x)
      for (u64 y = 0; y < m * m; ++y)
        if (iso_affine_graphs(make_affine(m, x / m, x % m), make_affine(m, y / m, y % m)) != (cls[x] == cls[y]))
          fail("m=" + std::to_string(m) + " (" + std::to_string(x / m) + "," + std::to_string(x % m) + ") vs (" +
               std::to_string(y / m) + "," + std::to_string(y % m) + ")");
  }
}

// Same field, index and type; exponents and coefficients moved within their classes mod d.
CyclotomicMapping typed_partner(std::mt19937_64& rng, const CyclotomicMapping& f, bool type_I) {
  auto g = f;
  const u64 d = f.d, s = f.s(), qm1 = f.q() - 1;
  if (type_I && rng() % 2) std::shuffle(g.branches.begin(), g.branches.end(), rng);
  for (auto& b : g.branches) {
    if (b.zero) continue;
    if (rng() % 2) b.e = (b.e + d * (rng() % s)) % qm1;
    if (rng() % 3 == 0) {
      u64 r;
      do r = (b.r % d + d * (rng() % s)) % qm1;
      while (type_I && std::gcd(r % s, s) != 1);
      b.r = r;
    }
  }
  return g;
}

// 8: special types
void special_types() {
  std::mt19937_64 rng(8);
  for (int it = 0; it < 100; ++it) {
    bool type_I = it < 50;
    auto f = type_I ? oracle::random_type_I(rng, 512) : oracle::random_type_II(rng, 512);
    expect(type_I ? is_special_type_I(f) : is_special_type_II(f), "generator produced an untyped mapping");
    auto reg = type_I ? tree_register_type_I(f) : tree_register_type_II(f);
    auto nl = necklace_list_typed(f, reg);
    if (oracle::census_of(nl.trees, nl.entries) != oracle::component_census(oracle::field_successors(f)))
      fail("necklace list of " + describe(f));
  }
  IsoOptions opt;
  opt.allow_oracle = false;
  for (int it = 0; it < 100; ++it) {
    bool type_I = it % 2 == 0;
    auto f = type_I ? oracle::random_type_I(rng, 512) : oracle::random_type_II(rng, 512);
    auto g = typed_partner(rng, f, type_I);
    auto v = iso_decide(f, g, opt);
    bool want = oracle::component_census(oracle::field_successors(f)) == oracle::component_census(oracle::field_successors(g));
    if (v.answer == Answer::Undecided || (v.answer == Answer::Yes) != want)
      fail(render_verdict(v) + " for " + describe(f) + " vs " + describe(g));
  }
}

// 9: bounded cycle lengths
void bounded_lengths() {
  std::mt19937_64 rng(9);
  int done = 0;
  for (int it = 0; it < 5000 && done < 50; ++it) {
    auto f = uniform_mapping(rng, 1024, 8);
    auto succ = oracle::field_successors(f);
    u64 L = max_cycle_length(f);
    if (L != oracle::cycle_census(succ).rbegin()->first) fail("max cycle length of " + describe(f));
    if (L > 8 || bounded_width(f, L) > kDefaultBoundedBits) continue;
    auto nl = necklace_list_bounded(f, L);
    if (oracle::census_of(nl.trees, nl.entries) != oracle::component_census(succ))
      fail("bounded necklace list of " + describe(f));
    ++done;
  }
  expect(done == 50, "only " + std::to_string(done) + " mappings within the bounds");
}

// 10: mpe(2^v - 1) statistics up to v = 100
void mpe_row() {
  auto [mx, avg] = mpe_table(100);
  std::ostringstream os;
  os << "max " << mx << ", average " << avg;
  expect(mx == 4 && std::fabs(avg - 1.28) <= 0.005, os.str());
}

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<void()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all{
      {1, "golden F_256 component classes", 1, golden_components},
      {2, "coset 0 of the F_256 example: cycle list, children partition blocks, layer height", 60, golden_intermediate},
      {3, "200 random mappings against brute force", 120, oracle_suite},
      {4, "CRL lists of affine maps", 120, crl_tables},
      {5, "distribution numbers", 600, distribution_numbers_exhaustive},
      {6, "rigid procreation trees", 600, rigid_procreation},
      {7, "affine graph isomorphism", 60, affine_iso_exhaustive},
      {8, "special type I and II mappings", 600, special_types},
      {9, "bounded cycle length necklace lists", 600, bounded_lengths},
      {10, "mpe table row K=100", 600, mpe_row},
  };
  int failed = 0;
  for (const auto& c : all) {
    auto t0 = std::chrono::steady_clock::now();
    std::string why;
    try {
      c.run();
    } catch (const Failure& e) {
      why = e.why;
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (why.empty() && secs > c.limit_seconds) why = "exceeded the " + std::to_string(int(c.limit_seconds)) + " s limit";
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << (why.empty() ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.name << " (" << secs << " s)";
    if (!why.empty()) line << ": " << why;
    std::cout << line.str() << std::endl;
    failed += !why.empty();
  }
  return failed ? 1 : 0;
}
