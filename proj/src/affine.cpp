#include "cyclograph/affine.hpp"

#include <algorithm>
#include <numeric>

namespace cyclograph {

namespace {

u64 ipow(u64 b, unsigned e) {
  u64 r = 1;
  for (unsigned i = 0; i < e; ++i) r *= b;
  return r;
}

// nu_p^{(v)} of x taken modulo p^v
unsigned nu_capped_mod(u64 x, u64 p, unsigned v) {
  u64 pv = ipow(p, v);
  return nu_p_capped(x % pv, p, v);
}

}  // namespace

AffineMap make_affine(u64 m, u64 a, u64 b) {
  if (m == 0) throw std::invalid_argument("affine map modulus must be positive");
  return AffineMap{m, a % m, b % m};
}

AffineMap compose(const AffineMap& first, const AffineMap& second) {
  if (first.m != second.m) throw std::invalid_argument("compose: modulus mismatch");
  u64 m = first.m;
  return AffineMap{m, mul_mod(first.a, second.a, m), add_mod(mul_mod(second.a, first.b, m), second.b, m)};
}

AffineMap power(const AffineMap& A, u64 n) {
  AffineMap r{A.m, 1 % A.m, 0};
  AffineMap base = A;
  while (n) {
    if (n & 1) r = compose(r, base);
    base = compose(base, base);
    n >>= 1;
  }
  return r;
}

AffineMap reduce_mod(const AffineMap& A, u64 m2) {
  if (m2 == 0 || A.m % m2 != 0) throw std::invalid_argument("reduce_mod: new modulus must divide the old one");
  return AffineMap{m2, A.a % m2, A.b % m2};
}

std::optional<u64> fixed_point(const AffineMap& A) {
  u64 m = A.m;
  u64 am1 = sub_mod(A.a, 1, m);
  u64 g = std::gcd(am1, m);
  if (A.b % g != 0) return std::nullopt;
  u64 mg = m / g;
  if (mg == 1) return 0;
  u64 nb = (m - A.b) % m / g;  // -b / g
  return mul_mod(nb % mg, *inv_mod(am1 / g % mg, mg), mg);
}

Residue periodic_point_congruence(const AffineMap& A, const Factorization& fm) {
  u64 g = part_dividing(fm, A.a);
  if (g == 1) return {0, 1};
  unsigned L = mpe(fm);
  AffineMap Ag = reduce_mod(A, g);
  // A^L is constant modulo g
  return {power(Ag, L).b, g};
}

Residue periodic_point_congruence(const AffineMap& A) { return periodic_point_congruence(A, factorize(A.m)); }

namespace {

u64 checked_mul(u64 x, u64 y) {
  u128 r = static_cast<u128>(x) * y;
  if (r >> 63) throw std::overflow_error("affine discrete logarithm modulus exceeds 63 bits");
  return static_cast<u64>(r);
}

}  // namespace

namespace {

std::optional<u64> unit_dlog(const AffineMap& A, u64 x, u64 y) {
  u64 m = A.m;
  x %= m;
  y %= m;
  if (m == 1) return 0;
  if (A.a == 1) {
    u64 g = std::gcd(A.b, m);
    u64 diff = sub_mod(y, x, m);
    if (diff % g != 0) return std::nullopt;
    u64 mg = m / g;
    if (mg == 1) return 0;
    return mul_mod(diff / g % mg, *inv_mod(A.b / g % mg, mg), mg);
  }
  // (a-1)A^k(x) + b = a^k((a-1)x + b) modulo (a-1)m
  u64 M = checked_mul(A.a - 1, m);
  u64 X = ((static_cast<u128>(A.a - 1) * x) + A.b) % M;
  u64 Y = ((static_cast<u128>(A.a - 1) * y) + A.b) % M;
  u64 g = std::gcd(X, M);
  if (std::gcd(Y, M) != g) return std::nullopt;
  u64 Mg = M / g;
  if (Mg == 1) return 0;
  u64 target = mul_mod(Y / g % Mg, *inv_mod(X / g % Mg, Mg), Mg);
  return discrete_log_mod(A.a % Mg, target, Mg);
}

u64 unit_cycle_length(const AffineMap& A, u64 x) {
  u64 m = A.m;
  if (m == 1) return 1;
  x %= m;
  if (A.a == 1) return m / std::gcd(A.b, m);
  u64 M = checked_mul(A.a - 1, m);
  u64 X = ((static_cast<u128>(A.a - 1) * x) + A.b) % M;
  u64 g = std::gcd(X, M);
  return mult_order(A.a % (M / g), M / g);
}

// Modulus of the part of Z/mZ on which a acts invertibly.
u64 unit_part(const AffineMap& A, const Factorization& fm) { return A.m / part_dividing(fm, A.a); }

}  // namespace

std::optional<u64> affine_dlog(const AffineMap& A, u64 x, u64 y) {
  if (std::gcd(A.a, A.m) == 1) return unit_dlog(A, x, y);
  // Walk into per(A) first; periodic points are determined by their residue on the unit part.
  auto fm = factorize(A.m);
  unsigned L = mpe(fm);
  x %= A.m;
  y %= A.m;
  for (unsigned k = 0; k < L; ++k, x = evaluate(A, x))
    if (x == y) return k;
  Residue per = periodic_point_congruence(A, fm);
  if (y % per.a != per.b) return std::nullopt;
  u64 m1 = unit_part(A, fm);
  auto k = unit_dlog(reduce_mod(A, m1), x % m1, y % m1);
  if (!k) return std::nullopt;
  return L + *k;
}

u64 affine_cycle_length(const AffineMap& A, u64 x) {
  if (std::gcd(A.a, A.m) == 1) return unit_cycle_length(A, x);
  auto fm = factorize(A.m);
  Residue per = periodic_point_congruence(A, fm);
  if (x % A.m % per.a != per.b) throw std::invalid_argument("affine_cycle_length: point is not periodic");
  u64 m1 = unit_part(A, fm);
  return unit_cycle_length(reduce_mod(A, m1), x % m1);
}

CrlList crl_automorphism_primary(u64 p, unsigned v, u64 a) {
  if (!is_prime(p)) throw std::invalid_argument("crl_automorphism_primary: p must be prime");
  if (v == 0) return {{0, 1}};
  u64 pv = ipow(p, v);
  a %= pv;
  if (a % p == 0) throw std::invalid_argument("crl_automorphism_primary: p divides a");
  CrlList out;
  if (p > 2) {
    u64 r = primitive_root(p, v);
    u64 phi = pv / p * (p - 1);
    u64 idx = phi / mult_order(a, pv);
    for (unsigned t = 0; t <= v; ++t) {
      u64 pt = ipow(p, t);
      u64 phit = t == v ? 1 : pv / pt / p * (p - 1);
      u64 g = std::gcd(idx, phit);
      u64 len = phit / g;
      u64 rj = 1;
      for (u64 j = 0; j < g; ++j) {
        out.push_back({mul_mod(rj, pt % pv, pv), len});
        rj = mul_mod(rj, r, pv);
      }
    }
    return out;
  }
  if (v == 1) return {{0, 1}, {1, 1}};
  out.push_back({0, 1});
  out.push_back({pv / 2, 1});
  if (a % 4 == 1) {
    u64 idx = (pv / 4) / mult_order(a, pv);
    for (unsigned t = 0; t + 2 <= v; ++t) {
      u64 pt = ipow(2, t);
      u64 base_len = ipow(2, v - t - 2);
      u64 g = std::gcd(idx, base_len);
      u64 len = base_len / g;
      u64 fj = 1;
      for (u64 j = 0; j < g; ++j) {
        u64 x = mul_mod(fj, pt, pv);
        out.push_back({x, len});
        out.push_back({(pv - x) % pv, len});
        fj = mul_mod(fj, 5, pv);
      }
    }
    return out;
  }
  u64 o = mult_order(pv - a, pv);
  for (u64 j = 1; j < pv / 2 / o; ++j) out.push_back({j * o, 2});
  unsigned log_o = 0;
  while ((u64(1) << log_o) < o) ++log_o;
  for (unsigned t = 0; t < log_o; ++t) {
    u64 pt = ipow(2, t);
    u64 fj = 1;
    for (u64 j = 0; j < pv / 4 / o; ++j) {
      u64 x = mul_mod(fj, pt, pv);
      out.push_back({x, o / pt});
      out.push_back({(pv - x) % pv, o / pt});
      fj = mul_mod(fj, 5, pv);
    }
  }
  return out;
}

CrlList crl_affine_primary(u64 p, unsigned v, u64 a, u64 b) {
  if (!is_prime(p)) throw std::invalid_argument("crl_affine_primary: p must be prime");
  u64 pv = ipow(p, v);
  a %= pv;
  b %= pv;
  if (a % p == 0 && pv > 1) throw std::invalid_argument("crl_affine_primary: p divides a");
  if (v == 0) return {{0, 1}};
  unsigned nb = nu_capped_mod(b, p, v);
  unsigned na = nu_capped_mod(sub_mod(a, 1, pv), p, v);
  auto shifted = [&](CrlList list) {
    u64 f = *fixed_point(AffineMap{pv, a, b});
    for (auto& e : list) e.rep = add_mod(e.rep, f, pv);
    return list;
  };
  CrlList out;
  if (p > 2) {
    if (nb >= na) return shifted(crl_automorphism_primary(p, v, a));
    u64 len = ipow(p, v - nb);
    for (u64 j = 0; j < ipow(p, nb); ++j) out.push_back({j, len});
    return out;
  }
  if (v <= 2 && a == 1) {
    u64 aord = pv / std::gcd(b, pv);
    for (u64 j = 0; j < pv / aord; ++j) out.push_back({j, aord});
    return out;
  }
  if (v == 2) {  // a = 3
    if (b == 0) return {{0, 1}, {1, 2}, {2, 1}};
    if (b == 2) return {{0, 2}, {1, 1}, {3, 1}};
    return {{0, 2}, {2, 2}};
  }
  if (nb >= na) return shifted(crl_automorphism_primary(p, v, a));
  if (a % 4 == 1) {
    u64 len = ipow(2, v - nb);
    for (u64 j = 0; j < ipow(2, nb); ++j) out.push_back({j, len});
    return out;
  }
  u64 o = mult_order(pv - a, pv);
  out.push_back({0, 2 * o});
  for (u64 j = 2; j <= pv / 2 / o; ++j) out.push_back({mul_mod(b, j, pv), 2 * o});
  return out;
}

namespace {

struct PrimaryPiece {
  u64 p;
  unsigned v;
  u64 pv;
  AffineMap A;
  CrlList list;
};

std::vector<PrimaryPiece> bijective_pieces(const AffineMap& A, const Factorization& fm) {
  std::vector<PrimaryPiece> pieces;
  for (auto [p, v] : fm.factors) {
    if (A.a % p == 0) continue;
    u64 pv = ipow(p, v);
    AffineMap Ap = reduce_mod(A, pv);
    pieces.push_back({p, v, pv, Ap, crl_affine_primary(p, v, Ap.a, Ap.b)});
  }
  return pieces;
}

}  // namespace

CrlList crl_affine(const AffineMap& A, u64 cycle_cap) {
  Factorization fm = factorize(A.m);
  Residue per = periodic_point_congruence(A, fm);  // modulus m'' with the unique periodic point
  auto pieces = bijective_pieces(A, fm);
  CrlList out;
  std::vector<std::size_t> idx(pieces.size(), 0);
  // odometer over tuples of primary representatives
  while (true) {
    std::size_t n = pieces.size();
    std::vector<u64> lens(n);
    u64 l = 1;
    for (std::size_t j = 0; j < n; ++j) {
      lens[j] = pieces[j].list[idx[j]].length;
      l = lcm_u64(l, lens[j]);
    }
    // admissible indexing: for each prime of l, the first piece of maximal valuation
    std::vector<u64> step(n, 1);
    Factorization fl = factorize(l);
    for (auto [r, e] : fl.factors) {
      std::size_t best = 0;
      unsigned bestv = 0;
      for (std::size_t j = 0; j < n; ++j) {
        unsigned vj = 0;
        for (u64 t = lens[j]; t % r == 0; t /= r) ++vj;
        if (vj > bestv) {
          bestv = vj;
          best = j;
        }
      }
      step[best] *= ipow(r, bestv);
    }
    // good tuples: k_j runs over multiples of step[j] below lens[j]
    std::vector<u64> k(n, 0);
    while (true) {
      if (out.size() >= cycle_cap) throw CapExceeded("CRL list exceeds the cycle cap");
      std::vector<Residue> sys;
      sys.reserve(n + 1);
      for (std::size_t j = 0; j < n; ++j) {
        u64 x = evaluate(power(pieces[j].A, k[j]), pieces[j].list[idx[j]].rep);
        sys.push_back({x, pieces[j].pv});
      }
      sys.push_back({per.b, per.a});
      out.push_back({crt_combine(sys)->b, l});
      std::size_t j = 0;
      for (; j < n; ++j) {
        k[j] += step[j];
        if (k[j] < lens[j]) break;
        k[j] = 0;
      }
      if (j == n) break;
    }
    std::size_t j = 0;
    for (; j < n; ++j) {
      if (++idx[j] < pieces[j].list.size()) break;
      idx[j] = 0;
    }
    if (j == n) break;
  }
  return out;
}

CycleType wei_xu(const CycleType& x, const CycleType& y) {
  CycleType r;
  for (auto [n1, e1] : x) {
    for (auto [n2, e2] : y) r[lcm_u64(n1, n2)] += e1 * e2 * std::gcd(n1, n2);
  }
  return r;
}

CycleType blow_up(const CycleType& ct, u64 ell) {
  CycleType r;
  for (auto [l, e] : ct) r[l * ell] += e;
  return r;
}

CycleType cycle_type(const AffineMap& A) {
  Factorization fm = factorize(A.m);
  CycleType ct{{1, 1}};
  for (const auto& piece : bijective_pieces(A, fm)) {
    CycleType local;
    for (const auto& e : piece.list) ++local[e.length];
    ct = wei_xu(ct, local);
  }
  return ct;
}

u64 affine_order_on_per(const AffineMap& A) {
  Factorization fm = factorize(A.m);
  u64 mprime = 1;
  for (auto [p, v] : fm.factors) {
    if (A.a % p != 0) mprime *= ipow(p, v);
  }
  if (mprime == 1) return 1;
  AffineMap Ap = reduce_mod(A, mprime);
  u64 o = mult_order(Ap.a, mprime);
  u64 translation = power(Ap, o).b;  // A'^o = x + translation
  return o * (mprime / std::gcd(translation, mprime));
}

u64 max_cycle_length(const AffineMap& A) { return affine_order_on_per(A); }

u64 min_cycle_length(const AffineMap& A) {
  Factorization fm = factorize(A.m);
  u64 l = 1;
  for (const auto& piece : bijective_pieces(A, fm)) {
    u64 mn = piece.list.front().length;
    for (const auto& e : piece.list) mn = std::min(mn, e.length);
    l = lcm_u64(l, mn);
  }
  return l;
}

std::vector<u64> procreation_numbers(const AffineMap& A, unsigned k_max) {
  std::vector<u64> out;
  u64 prev = 1 % A.m, prev_g = 1;
  for (unsigned k = 1; k <= k_max; ++k) {
    u64 cur = mul_mod(prev, A.a, A.m);
    u64 g = std::gcd(cur, A.m);
    out.push_back(g / prev_g);
    prev = cur;
    prev_g = g;
  }
  return out;
}

}  // namespace cyclograph
