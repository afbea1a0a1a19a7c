#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cyclograph/numtheory.hpp"

namespace cyclograph {

// Raised when an enumeration would exceed a configured size limit.
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// x -> a*x + b on Z/mZ, with a and b reduced mod m.
struct AffineMap {
  u64 m = 1;
  u64 a = 0;
  u64 b = 0;
  bool operator==(const AffineMap&) const = default;
};

struct CrlEntry {
  u64 rep;
  u64 length;
  bool operator==(const CrlEntry&) const = default;
  auto operator<=>(const CrlEntry&) const = default;
};
using CrlList = std::vector<CrlEntry>;

// length -> number of cycles of that length
using CycleType = std::map<u64, u64>;

AffineMap make_affine(u64 m, u64 a, u64 b);

// x -> second(first(x))
AffineMap compose(const AffineMap& first, const AffineMap& second);
AffineMap power(const AffineMap& A, u64 n);
AffineMap reduce_mod(const AffineMap& A, u64 m2);
inline u64 evaluate(const AffineMap& A, u64 x) {
  return add_mod(mul_mod(A.a, x % A.m, A.m), A.b, A.m);
}

std::optional<u64> fixed_point(const AffineMap& A);

// x is periodic under A iff x == result.b (mod result.a).
Residue periodic_point_congruence(const AffineMap& A);
Residue periodic_point_congruence(const AffineMap& A, const Factorization& fm);

// Least k >= 0 with A^k(x) = y. The cycle length requires x periodic.
std::optional<u64> affine_dlog(const AffineMap& A, u64 x, u64 y);
u64 affine_cycle_length(const AffineMap& A, u64 x);

CrlList crl_automorphism_primary(u64 p, unsigned v, u64 a);
CrlList crl_affine_primary(u64 p, unsigned v, u64 a, u64 b);

inline constexpr u64 kDefaultCycleCap = u64(1) << 20;
CrlList crl_affine(const AffineMap& A, u64 cycle_cap = kDefaultCycleCap);

CycleType cycle_type(const AffineMap& A);
CycleType wei_xu(const CycleType& x, const CycleType& y);
CycleType blow_up(const CycleType& ct, u64 ell);

u64 affine_order_on_per(const AffineMap& A);
u64 max_cycle_length(const AffineMap& A);

// Smallest cycle length of A on its periodic points.
u64 min_cycle_length(const AffineMap& A);

// proc_k = gcd(a^k, m) / gcd(a^(k-1), m) for k = 1..k_max.
std::vector<u64> procreation_numbers(const AffineMap& A, unsigned k_max);

}  // namespace cyclograph
