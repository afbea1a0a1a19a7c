#include "cyclograph/numtheory.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <unordered_map>

namespace cyclograph {

namespace mp = boost::multiprecision;

u64 gcd_u64(u64 a, u64 b) { return std::gcd(a, b); }

u64 lcm_u64(u64 a, u64 b) {
  if (a == 0 || b == 0) return 0;
  u128 l = static_cast<u128>(a / std::gcd(a, b)) * b;
  if (l >> 64) throw std::overflow_error("lcm exceeds 64 bits");
  return static_cast<u64>(l);
}

u64 pow_mod(u64 base, u64 e, u64 m) {
  if (m == 1) return 0;
  u64 r = 1;
  base %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, base, m);
    base = mul_mod(base, base, m);
    e >>= 1;
  }
  return r;
}

u64 add_mod(u64 a, u64 b, u64 m) { return static_cast<u64>((static_cast<u128>(a) + b) % m); }

u64 sub_mod(u64 a, u64 b, u64 m) {
  a %= m;
  b %= m;
  return a >= b ? a - b : m - (b - a);
}

std::optional<u64> inv_mod(u64 x, u64 m) {
  if (m == 1) return 0;
  i64 t = 0, nt = 1;
  u64 r = m, nr = x % m;
  // extended Euclid on (m, x); coefficients stay below m in magnitude
  while (nr != 0) {
    u64 q = r / nr;
    i64 tmp = t - static_cast<i64>(q) * nt;
    t = nt;
    nt = tmp;
    u64 rtmp = r - q * nr;
    r = nr;
    nr = rtmp;
  }
  if (r != 1) return std::nullopt;
  return t < 0 ? static_cast<u64>(t + static_cast<i64>(m)) : static_cast<u64>(t);
}

namespace {

bool miller_rabin_u64(u64 n, u64 a) {
  a %= n;
  if (a == 0) return true;
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  u64 x = pow_mod(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned i = 1; i < s; ++i) {
    x = mul_mod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

constexpr std::array<u64, 13> kSmallPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};

template <class T>
T pow_mod_t(T base, T e, const T& n) {
  T r = 1;
  base %= n;
  while (e != 0) {
    if ((e & 1) != 0) r = r * base % n;
    base = base * base % n;
    e >>= 1;
  }
  return r;
}

// The caller guarantees that products of two residues fit into T.
template <class T>
bool miller_rabin_t(const T& n, const T& a) {
  T d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  T x = pow_mod_t<T>(a % n, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned i = 1; i < s; ++i) {
    x = x * x % n;
    if (x == n - 1) return true;
  }
  return false;
}

using Wide = mp::uint256_t;

template <class T>
T gcd_t(T a, T b) {
  while (b != 0) {
    T t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Pollard rho with Brent's cycle detection; returns a nontrivial factor or n on failure.
template <class T>
T brent_rho(const T& n, const T& c, const T& x0) {
  auto f = [&](const T& x) { return (x * x + c) % n; };
  T y = x0, x = x0, ys = x0, q = 1, g = 1;
  const std::size_t batch = 128;
  for (std::size_t r = 1; g == 1; r <<= 1) {
    x = y;
    for (std::size_t i = 0; i < r; ++i) y = f(y);
    for (std::size_t k = 0; k < r && g == 1; k += batch) {
      ys = y;
      for (std::size_t i = 0; i < std::min(batch, r - k); ++i) {
        y = f(y);
        T diff = x > y ? T(x - y) : T(y - x);
        q = q * diff % n;
      }
      g = gcd_t<T>(q, n);
    }
    if (r > (std::size_t(1) << 40)) break;
  }
  if (g == n) {
    do {
      ys = f(ys);
      T diff = x > ys ? T(x - ys) : T(ys - x);
      g = gcd_t<T>(diff, n);
    } while (g == 1);
  }
  return g;
}

u64 find_factor_u64(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 y = c + 1, x = y, ys = y, q = 1, g = 1;
    auto f = [&](u64 v) { return add_mod(mul_mod(v, v, n), c, n); };
    for (u64 r = 1; g == 1; r <<= 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      for (u64 k = 0; k < r && g == 1; k += 128) {
        ys = y;
        for (u64 i = 0; i < std::min<u64>(128, r - k); ++i) {
          y = f(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
      }
    }
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void factor_rec(u64 n, std::map<u64, unsigned>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  u64 d = find_factor_u64(n);
  factor_rec(d, out);
  factor_rec(n / d, out);
}

const std::vector<u64>& small_prime_table() {
  static const std::vector<u64> primes = [] {
    const std::size_t limit = 1000000;
    std::vector<bool> sieve(limit + 1, true);
    std::vector<u64> ps;
    for (std::size_t i = 2; i <= limit; ++i) {
      if (!sieve[i]) continue;
      ps.push_back(i);
      for (std::size_t j = i * i; j <= limit; j += i) sieve[j] = false;
    }
    return ps;
  }();
  return primes;
}

BigInt find_factor_big(const BigInt& n) {
  if ((n & 1) == 0) return 2;
  for (unsigned c = 1;; ++c) {
    BigInt g;
    if (mp::msb(n) < 127) {
      Wide wn = static_cast<Wide>(n);
      g = static_cast<BigInt>(brent_rho<Wide>(wn, Wide(c), Wide(c + 1)));
    } else {
      g = brent_rho<BigInt>(n, BigInt(c), BigInt(c + 1));
    }
    if (g != n && g != 1) return g;
  }
}

void factor_rec_big(const BigInt& n, std::map<BigInt, unsigned>& out) {
  if (n == 1) return;
  if (n <= std::numeric_limits<u64>::max()) {
    std::map<u64, unsigned> small;
    factor_rec(static_cast<u64>(n), small);
    for (auto [p, v] : small) out[BigInt(p)] += v;
    return;
  }
  if (is_prime(n)) {
    ++out[n];
    return;
  }
  BigInt d = find_factor_big(n);
  factor_rec_big(d, out);
  factor_rec_big(n / d, out);
}

// Lucas primality proof from the full factorization of n-1.
bool lucas_prove(const BigInt& n) {
  BigInt nm1 = n - 1;
  auto fs = factorize(nm1);
  for (unsigned a = 2; a < 1000; ++a) {
    BigInt ab = a;
    if (mp::powm(ab, nm1, n) != 1) return false;
    bool ok = true;
    for (const auto& f : fs) {
      if (mp::powm(ab, nm1 / f.p, n) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 p : kSmallPrimes) {
    if (n % p == 0) return n == p;
  }
  if (n < 43 * 43) return true;
  for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    if (!miller_rabin_u64(n, a)) return false;
  }
  return true;
}

bool is_prime(const BigInt& n) {
  if (n <= std::numeric_limits<u64>::max()) return is_prime(static_cast<u64>(n));
  for (u64 p : kSmallPrimes) {
    if (n % p == 0) return false;
  }
  bool pass;
  if (mp::msb(n) < 127) {
    Wide wn = static_cast<Wide>(n);
    pass = std::all_of(kSmallPrimes.begin(), kSmallPrimes.end(),
                       [&](u64 a) { return miller_rabin_t<Wide>(wn, Wide(a)); });
  } else {
    pass = std::all_of(kSmallPrimes.begin(), kSmallPrimes.end(),
                       [&](u64 a) { return miller_rabin_t<BigInt>(n, BigInt(a)); });
  }
  if (!pass) return false;
  // The first thirteen prime bases are a deterministic test below this bound.
  static const BigInt kDeterministicBound("3317044064679887385961981");
  if (n < kDeterministicBound) return true;
  return lucas_prove(n);
}

Factorization factorize(u64 n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be positive");
  Factorization f;
  f.n = n;
  u64 rest = n;
  const auto& primes = small_prime_table();
  for (u64 p : primes) {
    if (p * p > rest) break;
    if (rest % p != 0) continue;
    unsigned v = 0;
    while (rest % p == 0) {
      rest /= p;
      ++v;
    }
    f.factors.push_back({p, v});
  }
  if (rest > 1) {
    std::map<u64, unsigned> big;
    factor_rec(rest, big);
    for (auto [p, v] : big) f.factors.push_back({p, v});
  }
  return f;
}

std::vector<BigPrimePower> factorize(const BigInt& n) {
  if (n <= 0) throw std::invalid_argument("factorize: n must be positive");
  std::map<BigInt, unsigned> out;
  BigInt rest = n;
  for (u64 p : small_prime_table()) {
    if (BigInt(p) * p > rest) break;
    if (rest % p != 0) continue;
    unsigned v = 0;
    while (rest % p == 0) {
      rest /= p;
      ++v;
    }
    out[BigInt(p)] = v;
  }
  factor_rec_big(rest, out);
  std::vector<BigPrimePower> res;
  for (auto& [p, v] : out) res.push_back({p, v});
  return res;
}

u64 euler_phi(const Factorization& f) {
  u64 r = 1;
  for (auto [p, v] : f.factors) {
    r *= p - 1;
    for (unsigned i = 1; i < v; ++i) r *= p;
  }
  return r;
}

u64 euler_phi(u64 n) { return euler_phi(factorize(n)); }

namespace {

u64 carmichael(const Factorization& f) {
  u64 l = 1;
  for (auto [p, v] : f.factors) {
    u64 pv1 = 1;
    for (unsigned i = 1; i < v; ++i) pv1 *= p;
    u64 lam = (p - 1) * pv1;
    if (p == 2 && v >= 3) lam /= 2;
    l = lcm_u64(l, lam);
  }
  return l;
}

u64 order_dividing(u64 x, u64 m, u64 n) {
  Factorization fn = factorize(n);
  u64 ord = n;
  for (auto [q, v] : fn.factors) {
    for (unsigned i = 0; i < v; ++i) {
      if (pow_mod(x, ord / q, m) == 1) {
        ord /= q;
      } else {
        break;
      }
    }
  }
  return ord;
}

// Baby-step giant-step for g^k = h inside a subgroup of order n.
std::optional<u64> bsgs(u64 g, u64 h, u64 n, u64 m) {
  u64 steps = 1;
  while (steps * steps < n) ++steps;
  std::unordered_map<u64, u64> table;
  table.reserve(steps * 2);
  u64 cur = 1 % m;
  for (u64 j = 0; j < steps; ++j) {
    table.emplace(cur, j);
    cur = mul_mod(cur, g, m);
  }
  auto ginv = inv_mod(pow_mod(g, steps, m), m);
  if (!ginv) return std::nullopt;
  u64 gamma = h % m;
  for (u64 i = 0; i <= steps; ++i) {
    auto it = table.find(gamma);
    if (it != table.end()) {
      u64 k = i * steps + it->second;
      if (k < n || n == 0) return k % n;
    }
    gamma = mul_mod(gamma, *ginv, m);
  }
  return std::nullopt;
}

// Pohlig-Hellman inside <x> where ord(x) = n; returns k mod n with x^k = z, if any.
std::optional<u64> pohlig_hellman(u64 x, u64 z, u64 n, u64 m) {
  Factorization fn = factorize(n);
  std::vector<Residue> parts;
  for (auto [q, e] : fn.factors) {
    u64 qe = 1;
    for (unsigned i = 0; i < e; ++i) qe *= q;
    u64 cof = n / qe;
    u64 gq = pow_mod(x, cof, m);
    u64 hq = pow_mod(z, cof, m);
    u64 gamma = pow_mod(gq, qe / q, m);  // order q
    u64 k = 0, qpow = 1;
    for (unsigned i = 0; i < e; ++i) {
      // strip the digits found so far
      auto ginvk = inv_mod(pow_mod(gq, k, m), m);
      u64 hk = pow_mod(mul_mod(*ginvk, hq, m), qe / (qpow * q), m);
      auto dig = bsgs(gamma, hk, q, m);
      if (!dig) return std::nullopt;
      k += *dig * qpow;
      qpow *= q;
    }
    parts.push_back({k % qe, qe});
  }
  auto r = crt_combine(parts);
  if (!r) return std::nullopt;
  if (pow_mod(x, r->b, m) != z % m) return std::nullopt;
  return r->b;
}

}  // namespace

u64 mult_order(u64 x, u64 m, const Factorization& fm) {
  if (m == 0 || std::gcd(x % m, m) != 1) throw std::invalid_argument("mult_order: x must be a unit modulo m");
  if (m == 1) return 1;
  return order_dividing(x % m, m, carmichael(fm));
}

u64 mult_order(u64 x, u64 m) {
  if (m == 0) throw std::invalid_argument("mult_order: modulus must be positive");
  return mult_order(x, m, factorize(m));
}

std::optional<u64> discrete_log_mod(u64 x, u64 z, u64 m) {
  if (m == 0 || std::gcd(x % m, m) != 1 || std::gcd(z % m, m) != 1)
    throw std::invalid_argument("discrete_log_mod: base and target must be units");
  if (m == 1) return 0;
  Factorization fm = factorize(m);
  std::vector<Residue> parts;
  for (auto [p, v] : fm.factors) {
    u64 pv = 1;
    for (unsigned i = 0; i < v; ++i) pv *= p;
    u64 xp = x % pv, zp = z % pv;
    u64 ord = mult_order(xp, pv, Factorization{pv, {{p, v}}});
    auto k = pohlig_hellman(xp, zp, ord, pv);
    if (!k) return std::nullopt;
    parts.push_back({*k, ord});
  }
  auto r = crt_combine(parts);
  if (!r) return std::nullopt;
  return r->b;
}

u64 primitive_root(u64 p, unsigned k) {
  if (p == 2 || !is_prime(p)) throw std::invalid_argument("primitive_root: p must be an odd prime");
  if (k == 0) throw std::invalid_argument("primitive_root: k must be positive");
  Factorization fpm1 = factorize(p - 1);
  u64 pk = 1;
  for (unsigned i = 0; i < k; ++i) pk *= p;
  for (u64 r = 2;; ++r) {
    if (r % p == 0) continue;
    bool ok = true;
    for (auto [q, v] : fpm1.factors) {
      if (pow_mod(r, (p - 1) / q, p) == 1) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    if (k >= 2 && pow_mod(r, p - 1, p * p) == 1) continue;
    return r % pk;
  }
}

std::optional<Residue> crt_pair(Residue x, Residue y) {
  u64 g = std::gcd(x.a, y.a);
  u64 b1 = x.b % x.a, b2 = y.b % y.a;
  u64 diff = sub_mod(b2 % g, b1 % g, g);
  if (diff != 0) return std::nullopt;
  u64 a1g = x.a / g, a2g = y.a / g;
  u64 l = lcm_u64(x.a, y.a);
  if (a2g == 1) return Residue{b1, l};
  u64 t = mul_mod(sub_mod(b2, b1, y.a) / g % a2g, *inv_mod(a1g % a2g, a2g), a2g);
  u64 res = static_cast<u64>((static_cast<u128>(x.a) * t + b1) % l);
  return Residue{res, l};
}

std::optional<Residue> crt_combine(const std::vector<Residue>& system) {
  Residue acc{0, 1};
  for (const auto& r : system) {
    if (r.a == 0) throw std::invalid_argument("crt_combine: moduli must be positive");
    auto next = crt_pair(acc, Residue{r.b % r.a, r.a});
    if (!next) return std::nullopt;
    acc = *next;
  }
  return acc;
}

unsigned nu_p(u64 n, u64 p) {
  if (!is_prime(p)) throw std::invalid_argument("nu_p: p must be prime");
  if (n == 0) throw std::invalid_argument("nu_p: valuation of 0 is unbounded");
  unsigned v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

unsigned nu_p_capped(u64 n, u64 p, unsigned v) {
  if (!is_prime(p)) throw std::invalid_argument("nu_p_capped: p must be prime");
  unsigned r = 0;
  while (r < v && n % p == 0) {
    if (n != 0) n /= p;
    ++r;
  }
  return r;
}

unsigned mpe(const Factorization& f) {
  unsigned m = 0;
  for (auto [p, v] : f.factors) m = std::max(m, v);
  return m;
}

unsigned mpe(u64 n) { return mpe(factorize(n)); }

u64 tau(u64 n) {
  u64 t = 1;
  for (auto [p, v] : factorize(n).factors) t *= v + 1;
  return t;
}

u64 part_dividing(const Factorization& f, u64 x) {
  u64 r = 1;
  for (auto [p, v] : f.factors) {
    if (x % p != 0) continue;
    for (unsigned i = 0; i < v; ++i) r *= p;
  }
  return r;
}

std::vector<u64> divisors(const Factorization& f) {
  std::vector<u64> ds{1};
  for (auto [p, v] : f.factors) {
    std::size_t cur = ds.size();
    u64 pk = 1;
    for (unsigned i = 0; i < v; ++i) {
      pk *= p;
      for (std::size_t j = 0; j < cur; ++j) ds.push_back(ds[j] * pk);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

}  // namespace cyclograph
