#include "cyclograph/finitefield.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace cyclograph {

namespace {

void trim(PolyFp& f) {
  while (f.size() > 1 && f.back() == 0) f.pop_back();
  if (f.empty()) f.push_back(0);
}

PolyFp poly_mulmod(const PolyFp& a, const PolyFp& b, const PolyFp& m, u64 p) {
  std::size_t n = m.size() - 1;
  std::vector<u64> prod(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      prod[i + j] = (prod[i + j] + mul_mod(a[i], b[j], p)) % p;
    }
  }
  // m is monic
  for (std::size_t k = prod.size(); k-- > n;) {
    u64 c = prod[k];
    if (c == 0) continue;
    prod[k] = 0;
    for (std::size_t j = 0; j < n; ++j) {
      prod[k - n + j] = sub_mod(prod[k - n + j], mul_mod(c, m[j], p), p);
    }
  }
  prod.resize(std::max<std::size_t>(n, 1));
  return prod;
}

PolyFp poly_powmod(PolyFp base, u64 e, const PolyFp& m, u64 p) {
  PolyFp r(m.size() - 1, 0);
  r[0] = 1;
  while (e) {
    if (e & 1) r = poly_mulmod(r, base, m, p);
    base = poly_mulmod(base, base, m, p);
    e >>= 1;
  }
  return r;
}

PolyFp poly_mod(PolyFp a, const PolyFp& b, u64 p) {
  trim(a);
  PolyFp bb = b;
  trim(bb);
  if (bb.size() == 1 && bb[0] == 0) throw std::invalid_argument("polynomial division by zero");
  u64 lead_inv = *inv_mod(bb.back(), p);
  std::size_t db = bb.size() - 1;
  while (a.size() >= bb.size() && !(a.size() == 1 && a[0] == 0)) {
    u64 c = mul_mod(a.back(), lead_inv, p);
    std::size_t shift = a.size() - 1 - db;
    for (std::size_t j = 0; j <= db; ++j) a[shift + j] = sub_mod(a[shift + j], mul_mod(c, bb[j], p), p);
    trim(a);
    if (a.size() - 1 < db) break;
  }
  return a;
}

PolyFp poly_gcd(PolyFp a, PolyFp b, u64 p) {
  trim(a);
  trim(b);
  while (!(b.size() == 1 && b[0] == 0)) {
    PolyFp r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

u64 pow_u64(u64 b, unsigned e) {
  u64 r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (b != 0 && r > std::numeric_limits<u64>::max() / b) throw std::overflow_error("field order exceeds 64 bits");
    r *= b;
  }
  return r;
}

bool has_full_order(const FieldContext& F, const FieldElement& g) {
  FieldElement one = field_one(F);
  if (pow(F, g, F.q - 1) != one) return false;
  for (auto [r, v] : F.order_factors.factors) {
    if (pow(F, g, (F.q - 1) / r) == one) return false;
  }
  return true;
}

}  // namespace

PolyFp parse_poly(std::string_view text, u64 p) {
  PolyFp f(1, 0);
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  }
  if (s.empty()) throw std::invalid_argument("empty polynomial");
  std::size_t i = 0;
  while (i < s.size()) {
    bool negative = false;
    if (s[i] == '+' || s[i] == '-') {
      negative = s[i] == '-';
      ++i;
    }
    u64 coef = 1;
    bool have_coef = false;
    if (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      coef = 0;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        coef = (coef * 10 + static_cast<u64>(s[i] - '0')) % p;
        ++i;
      }
      have_coef = true;
      if (i < s.size() && s[i] == '*') ++i;
    }
    u64 deg = 0;
    if (i < s.size() && (s[i] == 'x' || s[i] == 'X' || s[i] == 'T' || s[i] == 't')) {
      ++i;
      deg = 1;
      if (i < s.size() && s[i] == '^') {
        ++i;
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
          throw std::invalid_argument("bad exponent in polynomial '" + std::string(text) + "'");
        deg = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
          deg = deg * 10 + static_cast<u64>(s[i] - '0');
          if (deg > 4096) throw std::invalid_argument("polynomial degree too large");
          ++i;
        }
      }
    } else if (!have_coef) {
      throw std::invalid_argument("malformed polynomial '" + std::string(text) + "'");
    }
    if (i < s.size() && s[i] != '+' && s[i] != '-')
      throw std::invalid_argument("malformed polynomial '" + std::string(text) + "'");
    if (f.size() <= deg) f.resize(deg + 1, 0);
    u64 c = coef % p;
    f[deg] = negative ? sub_mod(f[deg], c, p) : add_mod(f[deg], c, p);
  }
  trim(f);
  return f;
}

std::string poly_to_string(const PolyFp& f) {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = f.size(); k-- > 0;) {
    if (f[k] == 0) continue;
    if (!first) os << '+';
    first = false;
    if (f[k] != 1 || k == 0) os << f[k];
    if (k >= 1) {
      if (f[k] != 1) os << '*';
      os << 'x';
      if (k >= 2) os << '^' << k;
    }
  }
  if (first) os << '0';
  return os.str();
}

bool poly_irreducible(const PolyFp& f0, u64 p) {
  PolyFp f = f0;
  trim(f);
  std::size_t n = f.size() - 1;
  if (n == 0) return false;
  if (n == 1) return true;
  // make monic
  u64 li = *inv_mod(f.back(), p);
  for (auto& c : f) c = mul_mod(c, li, p);
  PolyFp xp(n, 0);
  xp[1] = 1;
  for (std::size_t k = 1; k <= n / 2; ++k) {
    xp = poly_powmod(xp, p, f, p);
    PolyFp diff = xp;
    diff.resize(std::max<std::size_t>(diff.size(), 2), 0);
    diff[1] = sub_mod(diff[1], 1, p);
    PolyFp g = poly_gcd(f, diff, p);
    if (g.size() > 1) return false;
    if (g[0] == 0) return false;
  }
  return true;
}

FieldContext make_field(u64 p, unsigned n, std::optional<PolyFp> modulus) {
  if (!is_prime(p)) throw std::invalid_argument("field characteristic " + std::to_string(p) + " is not prime");
  if (n == 0) throw std::invalid_argument("extension degree must be positive");
  FieldContext F;
  F.p = p;
  F.n = n;
  F.q = pow_u64(p, n);
  F.order_factors = factorize(F.q - 1);
  if (n == 1) {
    if (modulus && !(modulus->size() == 2 && (*modulus)[1] == 1))
      throw std::invalid_argument("prime field modulus must be monic of degree 1");
    F.omega.c = {p == 2 ? 1 : primitive_root(p, 1)};
    return F;
  }
  F.omega.c.assign(n, 0);
  F.omega.c[1] = 1;
  if (modulus) {
    PolyFp m = *modulus;
    trim(m);
    if (m.size() != n + 1 || m.back() != 1)
      throw std::invalid_argument("modulus polynomial must be monic of degree " + std::to_string(n));
    if (!poly_irreducible(m, p)) throw std::invalid_argument("modulus polynomial " + poly_to_string(m) + " is reducible");
    F.modulus = m;
    if (!has_full_order(F, F.omega))
      throw std::invalid_argument("modulus polynomial " + poly_to_string(m) + " is not primitive");
    return F;
  }
  // lexicographic search over (c_{n-1}, ..., c_0), smallest first
  PolyFp m(n + 1, 0);
  m[n] = 1;
  u64 total = F.q;
  for (u64 code = 1; code < total; ++code) {
    u64 t = code;
    for (unsigned j = 0; j < n; ++j) {
      m[j] = t % p;
      t /= p;
    }
    if (m[0] == 0) continue;
    if (!poly_irreducible(m, p)) continue;
    F.modulus = m;
    if (has_full_order(F, F.omega)) return F;
  }
  throw std::logic_error("no primitive polynomial found");
}

FieldElement field_zero(const FieldContext& F) { return FieldElement{std::vector<u64>(F.n, 0)}; }

FieldElement field_one(const FieldContext& F) {
  FieldElement e = field_zero(F);
  e.c[0] = 1 % F.p;
  return e;
}

FieldElement field_from_poly(const FieldContext& F, const PolyFp& f) {
  FieldElement e;
  if (F.n == 1) {
    if (f.size() > 1) throw std::invalid_argument("prime field elements must be constants");
    e.c = {f.empty() ? 0 : f[0] % F.p};
    return e;
  }
  PolyFp r = f;
  for (auto& c : r) c %= F.p;
  if (r.size() > F.n) r = poly_mod(r, F.modulus, F.p);
  r.resize(F.n, 0);
  e.c = r;
  return e;
}

bool is_zero(const FieldElement& x) {
  for (u64 c : x.c) {
    if (c != 0) return false;
  }
  return true;
}

FieldElement add(const FieldContext& F, const FieldElement& x, const FieldElement& y) {
  FieldElement r = x;
  for (unsigned i = 0; i < F.n; ++i) r.c[i] = add_mod(x.c[i], y.c[i], F.p);
  return r;
}

FieldElement neg(const FieldContext& F, const FieldElement& x) {
  FieldElement r = x;
  for (unsigned i = 0; i < F.n; ++i) r.c[i] = x.c[i] == 0 ? 0 : F.p - x.c[i];
  return r;
}

FieldElement sub(const FieldContext& F, const FieldElement& x, const FieldElement& y) { return add(F, x, neg(F, y)); }

FieldElement mul(const FieldContext& F, const FieldElement& x, const FieldElement& y) {
  if (F.n == 1) return FieldElement{{mul_mod(x.c[0], y.c[0], F.p)}};
  return FieldElement{poly_mulmod(x.c, y.c, F.modulus, F.p)};
}

FieldElement pow(const FieldContext& F, const FieldElement& x, u64 e) {
  FieldElement r = field_one(F), b = x;
  while (e) {
    if (e & 1) r = mul(F, r, b);
    b = mul(F, b, b);
    e >>= 1;
  }
  return r;
}

FieldElement inv(const FieldContext& F, const FieldElement& x) {
  if (is_zero(x)) throw std::domain_error("inverse of zero field element");
  return pow(F, x, F.q - 2);
}

FieldElement omega_pow(const FieldContext& F, u64 k) { return pow(F, F.omega, k % (F.q - 1)); }

u64 element_code(const FieldContext& F, const FieldElement& x) {
  u64 code = 0;
  for (unsigned i = F.n; i-- > 0;) code = code * F.p + x.c[i];
  return code;
}

FieldElement element_from_code(const FieldContext& F, u64 code) {
  FieldElement e = field_zero(F);
  for (unsigned i = 0; i < F.n; ++i) {
    e.c[i] = code % F.p;
    code /= F.p;
  }
  return e;
}

u64 field_dlog(const FieldContext& F, const FieldElement& x) {
  if (is_zero(x)) throw std::domain_error("discrete logarithm of zero");
  const u64 N = F.q - 1;
  std::vector<Residue> parts;
  for (auto [r, e] : F.order_factors.factors) {
    u64 re = 1;
    for (unsigned i = 0; i < e; ++i) re *= r;
    u64 cof = N / re;
    FieldElement g = pow(F, F.omega, cof);
    FieldElement h = pow(F, x, cof);
    FieldElement gamma = pow(F, g, re / r);  // order r
    // baby steps for the order-r subgroup
    u64 steps = 1;
    while (steps * steps < r) ++steps;
    std::unordered_map<u64, u64> table;
    FieldElement cur = field_one(F);
    for (u64 j = 0; j < steps; ++j) {
      table.emplace(element_code(F, cur), j);
      cur = mul(F, cur, gamma);
    }
    FieldElement giant = inv(F, pow(F, gamma, steps));
    u64 k = 0, rpow = 1;
    for (unsigned i = 0; i < e; ++i) {
      FieldElement hk = pow(F, mul(F, inv(F, pow(F, g, k)), h), re / (rpow * r));
      u64 digit = r;
      FieldElement y = hk;
      for (u64 t = 0; t <= steps; ++t) {
        auto it = table.find(element_code(F, y));
        if (it != table.end()) {
          digit = (t * steps + it->second) % r;
          break;
        }
        y = mul(F, y, giant);
      }
      if (digit == r) throw std::logic_error("field_dlog: generator assumption violated");
      k += digit * rpow;
      rpow *= r;
    }
    parts.push_back({k, re});
  }
  auto res = crt_combine(parts);
  return res ? res->b : 0;
}

}  // namespace cyclograph
