#include "cyclograph/isomorph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

namespace cyclograph {

namespace {

u64 ipow(u64 p, unsigned v) {
  u64 r = 1;
  while (v--) r *= p;
  return r;
}

std::set<u64> fixed_point_primes(const AffineMap& A, const Factorization& fm) {
  std::set<u64> out;
  for (auto [p, v] : fm.factors) {
    if (A.a % p == 0) continue;
    u64 pv = ipow(p, v);
    u64 g = std::gcd((A.a + pv - 1) % pv, pv);
    if ((A.b % pv) % g == 0) out.insert(p);
  }
  return out;
}

}  // namespace

bool iso_affine_graphs(const AffineMap& A, const AffineMap& B) {
  if (A.m != B.m) throw std::invalid_argument("iso_affine_graphs: moduli differ");
  const u64 m = A.m;
  if (std::gcd(A.a, m) != std::gcd(B.a, m)) return false;
  const Factorization fm = factorize(m);
  const auto Y = fixed_point_primes(A, fm);
  if (Y != fixed_point_primes(B, fm)) return false;
  const u64 l = min_cycle_length(A);
  if (l != min_cycle_length(B)) return false;
  for (auto [p, v] : fm.factors) {
    if (!Y.count(p)) continue;
    u64 pv = ipow(p, v);
    if (mult_order(pow_mod(A.a, l, pv), pv) != mult_order(pow_mod(B.a, l, pv), pv)) return false;
    if (p == 2 && v > 1 && mult_order(pow_mod(A.a, l, 4), 4) != mult_order(pow_mod(B.a, l, 4), 4)) return false;
  }
  return true;
}

bool iso_monomial(const Monomial& f, const Monomial& g, u64 q) {
  const bool cf = f.zero || f.r == 0, cg = g.zero || g.r == 0;
  if (cf || cg) return cf == cg;
  const u64 m = q - 1;
  return iso_affine_graphs(make_affine(m, f.r % m, f.e % m), make_affine(m, g.r % m, g.e % m));
}

Monomial as_monomial(const CyclotomicMapping& f) {
  if (f.d != 1) throw std::invalid_argument("as_monomial: index must be 1");
  const Branch& b = f.branches[0];
  return Monomial{b.zero, b.e, b.r == 0 ? f.q() - 1 : b.r};
}

bool is_special_type_I(const CyclotomicMapping& f) {
  const u64 s = f.s();
  for (const auto& b : f.branches)
    if (!b.zero && std::gcd(b.r % s, s) != 1) return false;
  return true;
}

bool is_special_type_II(const CyclotomicMapping& f) {
  auto ind = induce(f);
  std::vector<bool> hit(f.d, false);
  for (u64 i = 0; i < f.d; ++i) {
    u64 j = ind.fbar[i];
    if (j == f.d || hit[j]) return false;
    hit[j] = true;
  }
  return true;
}

TypedTreeRegister tree_register_type_I(const CyclotomicMapping& f) {
  if (!is_special_type_I(f)) throw std::invalid_argument("mapping is not of special type I");
  const auto ind = induce(f);
  const u64 d = f.d;
  TypedTreeRegister reg;
  reg.kind = SpecialType::I;
  std::vector<std::vector<u64>> kids(d + 1);
  for (u64 j = 0; j < d; ++j)
    if (!ind.periodic[j]) kids[ind.fbar[j]].push_back(j);
  std::vector<std::optional<std::size_t>> memo(d + 1);
  std::function<std::size_t(u64)> tree = [&](u64 i) -> std::size_t {
    if (memo[i]) return *memo[i];
    std::vector<TreeChild> raw;
    for (u64 j : kids[i]) raw.push_back({tree(j), 1});
    return *(memo[i] = reg.trees.insert(raw));
  };
  reg.periodic_tree.assign(d + 1, 0);
  for (u64 i = 0; i < d; ++i) reg.periodic_tree[i] = tree(i);
  std::vector<TreeChild> zero;
  for (u64 j : kids[d]) zero.push_back({tree(j), f.s()});
  reg.periodic_tree[d] = reg.trees.insert(zero);
  reg.members.assign(reg.trees.size(), {});
  for (u64 i = 0; i <= d; ++i) reg.members[reg.periodic_tree[i]].push_back(i);
  return reg;
}

TypedTreeRegister tree_register_type_II(const CyclotomicMapping& f) {
  if (!is_special_type_II(f)) throw std::invalid_argument("mapping is not of special type II");
  const auto ind = induce(f);
  TypedTreeRegister reg;
  reg.kind = SpecialType::II;
  reg.periodic_tree.assign(f.d + 1, 0);
  struct Mark {
    std::size_t tree;
    u64 coset;
    bool periodic;
  };
  std::vector<Mark> marks;
  for (const auto& cyc : ind.cycles) {
    std::vector<u64> alphas;
    for (u64 i : cyc) alphas.push_back(ind.A[i]->a);
    auto cct = coset_cycle_trees(alphas, ind.s, reg.trees);
    for (std::size_t t = 0; t < cyc.size(); ++t) {
      for (unsigned h = 0; h < cct.H; ++h) marks.push_back({cct.trees[t][h], cyc[t], false});
      marks.push_back({cct.trees[t][cct.H], cyc[t], true});
      reg.periodic_tree[cyc[t]] = cct.trees[t][cct.H];
    }
  }
  reg.sets.assign(reg.trees.size(), {});
  for (std::size_t n = 0; n < reg.trees.size(); ++n) reg.sets[n].height = reg.trees.height(n);
  for (const auto& mk : marks) {
    auto& v = mk.periodic ? reg.sets[mk.tree].periodic : reg.sets[mk.tree].transient;
    if (std::find(v.begin(), v.end(), mk.coset) == v.end()) v.push_back(mk.coset);
  }
  for (auto& st : reg.sets) {
    std::sort(st.transient.begin(), st.transient.end());
    std::sort(st.periodic.begin(), st.periodic.end());
  }
  return reg;
}

std::size_t minperl(const std::vector<std::size_t>& seq) {
  const std::size_t n = seq.size();
  if (n == 0) throw std::invalid_argument("minperl: empty sequence");
  auto is_period = [&](std::size_t p) {
    for (std::size_t i = p; i < n; ++i)
      if (seq[i] != seq[i - p]) return false;
    return true;
  };
  const Factorization fn = factorize(n);
  std::size_t out = 1;
  for (auto [p, v] : fn.factors) {
    const std::size_t rest = n / ipow(p, v);
    // least e with rest * p^e a period; periods among divisors of n are closed under multiples
    unsigned lo = 0, hi = v;
    while (lo < hi) {
      unsigned mid = (lo + hi) / 2;
      if (is_period(rest * ipow(p, mid))) hi = mid;
      else lo = mid + 1;
    }
    out *= ipow(p, lo);
  }
  return out;
}

TreeNecklaceList necklace_list_typed(const CyclotomicMapping& f, const TypedTreeRegister& reg) {
  const auto ind = induce(f);
  TreeNecklaceList out{reg.trees, {}};
  std::vector<ComponentNecklace> items{{{reg.periodic_tree[f.d]}, 1, 1}};
  for (const auto& cyc : ind.cycles) {
    std::vector<std::size_t> seq;
    for (u64 i : cyc) seq.push_back(reg.periodic_tree[i]);
    std::vector<std::size_t> base(seq.begin(), seq.begin() + minperl(seq));
    base = canonical_cyclic(base);
    for (auto [l, e] : cycle_type(cycle_map(ind, cyc))) items.push_back({base, l * cyc.size(), e});
  }
  out.entries = aggregate(std::move(items));
  return out;
}

u64 bounded_width(const CyclotomicMapping& f, u64 L) {
  const auto ind = induce(f);
  unsigned H = 0;
  for (const auto& cyc : ind.cycles) H = std::max(H, compute_H(ind, cyc).H);
  return f.d * (H + L);
}

u64 max_cycle_length(const CyclotomicMapping& f) {
  const auto ind = induce(f);
  u64 out = 1;
  for (const auto& cyc : ind.cycles) out = std::max(out, cyc.size() * max_cycle_length(cycle_map(ind, cyc)));
  return out;
}

namespace {

class BoundedBuilder {
 public:
  BoundedBuilder(const CyclotomicMapping& f, const PartitionTreeRegister& reg, const std::vector<u64>& cyc, u64 L)
      : f_(f), reg_(reg), cyc_(cyc), ell_(cyc.size()), L_(L), H_(reg.cosets[cyc[0]].H) {
    const auto& ind = reg_.induced;
    ext_.assign(ell_, {});
    for (std::size_t t = 0; t < ell_; ++t) ext_[t] = reg_.cosets[cyc_[t]].pushed;
    for (u64 u = H_ + 1; u < H_ + L_; ++u)
      for (std::size_t t = 0; t < ell_; ++t) {
        std::size_t tp = (t + ell_ - 1) % ell_;
        ext_[t].push_back(lambda(ext_[tp][u - 1], *ind.A[cyc_[tp]]));
      }
  }

  // Q_{i_t, H+M-1}
  ArithmeticPartition Q(std::size_t t, u64 M) const {
    ArithmeticPartition P{reg_.induced.s, {}};
    for (u64 u = 0; u < H_ + M; ++u) P = wedge(P, ext_[t][u]);
    return wedge(P, reg_.cosets[cyc_[t]].heights);
  }

  std::size_t width(std::size_t t, u64 M) const {
    std::size_t w = 0;
    for (u64 u = 0; u < H_ + M; ++u) w += ext_[t][u].size();
    return w;
  }

  std::vector<Forced> periodic_constraint(std::size_t t, u64 M) const {
    std::vector<Forced> fc(width(t, M), Forced::Free);
    fc.resize(fc.size() + H_, Forced::Positive);
    return fc;
  }

  const std::vector<Block>& periodic_blocks(std::size_t t, u64 M) {
    auto key = std::make_pair(t, M);
    auto it = blocks_.find(key);
    if (it != blocks_.end()) return it->second;
    return blocks_[key] = nonempty_blocks(Q(t, M), periodic_constraint(t, M));
  }

  // X-signs of the periodic pre-image's block one coset back.
  SignTuple back(std::size_t t, u64 M, const SignTuple& x_signs) {
    auto key = std::make_tuple(t, M, x_signs);
    if (auto it = back_.find(key); it != back_.end()) return it->second;
    const std::size_t tp = (t + ell_ - 1) % ell_;
    const AffineMap& Ap = *reg_.induced.A[cyc_[tp]];
    ArithmeticPartition Qp = Q(tp, M - 1);
    SignTuple nu2(x_signs.begin() + ext_[t][0].size(), x_signs.end());
    nu2.resize(nu2.size() + H_ + 1, true);
    std::optional<SignTuple> found;
    const std::size_t wp = width(tp, M - 1);
    for (const auto& blk : periodic_blocks(tp, M - 1)) {
      u64 sigma = distribution_number(Qp, Ap, blk.signs, nu2);
      if (sigma == 0) continue;
      if (sigma != 1 || found) throw std::logic_error("periodic pre-image is not unique");
      found = SignTuple(blk.signs.begin(), blk.signs.begin() + wp);
    }
    if (!found) throw std::logic_error("periodic pre-image not found");
    return back_[key] = *found;
  }

  std::size_t tree_at(std::size_t t, const SignTuple& x_signs) const {
    const auto& c = reg_.cosets[cyc_[t]];
    SignTuple proj(x_signs.begin(), x_signs.begin() + width(t, 1));
    auto it = c.tree_of_prefix[H_].find(proj);
    if (it == c.tree_of_prefix[H_].end()) throw std::logic_error("bounded path: unknown periodic block");
    return it->second;
  }

  void emit(std::vector<ComponentNecklace>& items) {
    const u64 s = reg_.induced.s;
    const AffineMap M0 = cycle_map(reg_.induced, cyc_, 0);
    // cycle-length congruences eta_l for l in C
    std::vector<u64> lengths;
    ArithmeticPartition V{s, {}};
    for (u64 l = ell_; l <= L_; l += ell_) {
      AffineMap Al = power(M0, l / ell_);
      u64 g = std::gcd((Al.a + s - 1) % s, s);
      if (Al.b % g != 0) continue;
      u64 mod = s / g;
      u64 res = 0;
      if (mod > 1) {
        u64 unit = ((Al.a + s - 1) % s / g) % mod;
        u64 inv = *inv_mod(unit, mod);
        res = mul_mod(sub_mod(0, (Al.b / g) % mod, mod), inv, mod);
      }
      lengths.push_back(l);
      V.seq.push_back(Congruence{mod, res});
    }
    const ArithmeticPartition W = wedge(Q(0, L_), V);
    const std::size_t wx = width(0, L_);
    std::map<std::pair<std::vector<std::size_t>, u64>, u64> points;
    for (u64 l : lengths) {
      auto fc = periodic_constraint(0, L_);
      for (u64 l2 : lengths) fc.push_back(l2 % l == 0 ? Forced::Positive : Forced::Negated);
      for (const auto& blk : nonempty_blocks(W, fc)) {
        SignTuple cur(blk.signs.begin(), blk.signs.begin() + wx);
        std::vector<std::size_t> seq;
        std::size_t t = 0;
        u64 M = L_;
        for (u64 k = 0; k < l; ++k) {
          seq.push_back(tree_at(t, cur));
          if (k + 1 == l) break;
          cur = back(t, M, cur);
          t = (t + ell_ - 1) % ell_;
          --M;
        }
        std::reverse(seq.begin(), seq.end());
        points[{canonical_cyclic(seq), l}] += blk.size;
      }
    }
    for (auto& [key, cnt] : points) {
      const u64 per_component = key.second / ell_;
      if (cnt % per_component != 0) throw std::logic_error("bounded path: point count not divisible by cycle share");
      items.push_back({key.first, key.second, cnt / per_component});
    }
  }

 private:
  const CyclotomicMapping& f_;
  const PartitionTreeRegister& reg_;
  const std::vector<u64>& cyc_;
  std::size_t ell_;
  u64 L_;
  unsigned H_;
  std::vector<std::vector<ArithmeticPartition>> ext_;
  std::map<std::pair<std::size_t, u64>, std::vector<Block>> blocks_;
  std::map<std::tuple<std::size_t, u64, SignTuple>, SignTuple> back_;
};

}  // namespace

TreeNecklaceList necklace_list_bounded(const CyclotomicMapping& f, u64 L, unsigned max_bits, unsigned max_register_bits) {
  if (L == 0 || L < max_cycle_length(f)) throw std::invalid_argument("L is below the maximum cycle length");
  const u64 w = bounded_width(f, L);
  if (w > max_bits)
    throw CapExceeded("bounded method needs " + std::to_string(w) + " sign bits, cap is " + std::to_string(max_bits));
  PartitionTreeRegister reg = build_register(f, max_register_bits);
  std::vector<ComponentNecklace> items{{{reg.zero_tree}, 1, 1}};
  for (const auto& cyc : reg.induced.cycles) BoundedBuilder(f, reg, cyc, L).emit(items);
  return TreeNecklaceList{reg.trees, aggregate(std::move(items))};
}

TreeNecklaceList necklace_list_oracle(const CyclotomicMapping& f, u64 cap) {
  BruteGraph g = brute_graph(f, cap);
  TreeNecklaceList out;
  auto idx = oracle_trees(g, out.trees);
  out.entries = oracle_components(g, idx);
  return out;
}

bool same_necklace_lists(const TreeNecklaceList& a, const TreeNecklaceList& b) {
  Synchronization sync = synchronize(a.trees, b.trees);
  std::vector<ComponentNecklace> moved;
  for (const auto& e : b.entries) {
    std::vector<std::size_t> seq;
    for (auto n : e.seq) seq.push_back(sync.translate[n]);
    moved.push_back({canonical_cyclic(seq), e.length, e.multiplicity});
  }
  return aggregate(std::move(moved)) == aggregate(a.entries);
}

IsoVerdict iso_decide(const CyclotomicMapping& f1, const CyclotomicMapping& f2, const IsoOptions& opt) {
  if (f1.q() != f2.q()) throw std::invalid_argument("iso_decide: mappings live on fields of different order");
  auto yes_no = [](bool b) { return b ? Answer::Yes : Answer::No; };
  if (f1.d == 1 && f2.d == 1) return {yes_no(iso_monomial(as_monomial(f1), as_monomial(f2), f1.q())), "monomial"};
  const bool i1 = is_special_type_I(f1), i2 = is_special_type_I(f2);
  const bool ii1 = !i1 && is_special_type_II(f1), ii2 = !i2 && is_special_type_II(f2);
  if ((i1 || ii1) && (i2 || ii2)) {
    auto reg1 = i1 ? tree_register_type_I(f1) : tree_register_type_II(f1);
    auto reg2 = i2 ? tree_register_type_I(f2) : tree_register_type_II(f2);
    bool same = same_necklace_lists(necklace_list_typed(f1, reg1), necklace_list_typed(f2, reg2));
    return {yes_no(same), i1 && i2 ? "type-I" : "type-II"};
  }
  const u64 L = max_cycle_length(f1);
  if (L != max_cycle_length(f2)) return {Answer::No, "bounded-L"};
  if (bounded_width(f1, L) <= opt.bounded_bits && bounded_width(f2, L) <= opt.bounded_bits) {
    bool same = same_necklace_lists(necklace_list_bounded(f1, L, opt.bounded_bits),
                                    necklace_list_bounded(f2, L, opt.bounded_bits));
    return {yes_no(same), "bounded-L"};
  }
  if (opt.allow_oracle && f1.q() <= opt.oracle_cap)
    return {yes_no(same_necklace_lists(necklace_list_oracle(f1, opt.oracle_cap), necklace_list_oracle(f2, opt.oracle_cap))),
            "oracle"};
  return {Answer::Undecided, "bounded-L"};
}

std::string render_verdict(const IsoVerdict& v) {
  const char* a = v.answer == Answer::Yes ? "yes" : v.answer == Answer::No ? "no" : "undecided";
  return std::string("isomorphic: ") + a + " (method: " + v.method + ")";
}

std::pair<unsigned, double> mpe_table(unsigned K) {
  if (K == 0 || K > 100) throw std::invalid_argument("mpe_table: K must lie in 1..100");
  unsigned mx = 0;
  u64 total = 0;
  for (unsigned v = 1; v <= K; ++v) {
    BigInt n = (BigInt(1) << v) - 1;
    unsigned e = 0;
    for (const auto& pp : factorize(n)) e = std::max(e, pp.v);
    mx = std::max(mx, e);
    total += e;
  }
  return {mx, static_cast<double>(total) / K};
}

}  // namespace cyclograph
