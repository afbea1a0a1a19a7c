#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace cyclograph {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using BigInt = boost::multiprecision::cpp_int;

struct PrimePower {
  u64 p;
  unsigned v;
  bool operator==(const PrimePower&) const = default;
};

struct Factorization {
  u64 n = 1;
  std::vector<PrimePower> factors;  // primes strictly increasing
};

struct BigPrimePower {
  BigInt p;
  unsigned v;
};

u64 gcd_u64(u64 a, u64 b);
u64 lcm_u64(u64 a, u64 b);  // throws std::overflow_error on overflow

inline u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}
u64 pow_mod(u64 base, u64 e, u64 m);
u64 add_mod(u64 a, u64 b, u64 m);
u64 sub_mod(u64 a, u64 b, u64 m);

// Inverse of x modulo m, or nullopt when gcd(x, m) != 1.
std::optional<u64> inv_mod(u64 x, u64 m);

bool is_prime(u64 n);
bool is_prime(const BigInt& n);

Factorization factorize(u64 n);
std::vector<BigPrimePower> factorize(const BigInt& n);

u64 euler_phi(const Factorization& f);
u64 euler_phi(u64 n);

// Throws std::invalid_argument unless gcd(x, m) == 1.
u64 mult_order(u64 x, u64 m);
u64 mult_order(u64 x, u64 m, const Factorization& fm);

// Least k >= 0 with x^k = z (mod m); nullopt when z is not a power of x.
std::optional<u64> discrete_log_mod(u64 x, u64 z, u64 m);

// Smallest primitive root modulo p^k for an odd prime p.
u64 primitive_root(u64 p, unsigned k);

struct Residue {
  u64 b;  // residue in [0, a)
  u64 a;  // modulus
  bool operator==(const Residue&) const = default;
};

// Solves x = b_j (mod a_j) for all j; nullopt when inconsistent.
std::optional<Residue> crt_combine(const std::vector<Residue>& system);
std::optional<Residue> crt_pair(Residue x, Residue y);

unsigned nu_p(u64 n, u64 p);  // throws for n == 0
unsigned nu_p_capped(u64 n, u64 p, unsigned v);
unsigned mpe(u64 n);
unsigned mpe(const Factorization& f);
u64 tau(u64 n);

// Product of p^v over the primes of f dividing x.
u64 part_dividing(const Factorization& f, u64 x);

std::vector<u64> divisors(const Factorization& f);

}  // namespace cyclograph
