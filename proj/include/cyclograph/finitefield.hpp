#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cyclograph/numtheory.hpp"

namespace cyclograph {

// Coefficients over F_p, least-degree first; always exactly n entries.
struct FieldElement {
  std::vector<u64> c;
  bool operator==(const FieldElement&) const = default;
};

// A polynomial over F_p, least-degree first, no trailing zeros except for the zero polynomial.
using PolyFp = std::vector<u64>;

struct FieldContext {
  u64 p = 2;
  unsigned n = 1;
  PolyFp modulus;  // monic, degree n; empty when n == 1
  u64 q = 2;
  Factorization order_factors;  // of q - 1
  FieldElement omega;
};

FieldContext make_field(u64 p, unsigned n, std::optional<PolyFp> modulus = std::nullopt);

// Parses text such as "x^8+x^4+x^3+x^2+1" or "2*T^2 + T + 3"; coefficients reduced mod p.
PolyFp parse_poly(std::string_view text, u64 p);
std::string poly_to_string(const PolyFp& f);

bool poly_irreducible(const PolyFp& f, u64 p);

FieldElement field_zero(const FieldContext& F);
FieldElement field_one(const FieldContext& F);
FieldElement field_from_poly(const FieldContext& F, const PolyFp& f);
bool is_zero(const FieldElement& x);

FieldElement add(const FieldContext& F, const FieldElement& x, const FieldElement& y);
FieldElement neg(const FieldContext& F, const FieldElement& x);
FieldElement sub(const FieldContext& F, const FieldElement& x, const FieldElement& y);
FieldElement mul(const FieldContext& F, const FieldElement& x, const FieldElement& y);
FieldElement pow(const FieldContext& F, const FieldElement& x, u64 e);
FieldElement inv(const FieldContext& F, const FieldElement& x);  // throws on zero

// omega^k
FieldElement omega_pow(const FieldContext& F, u64 k);

// Least k with omega^k = x; throws on zero.
u64 field_dlog(const FieldContext& F, const FieldElement& x);

// Integer code sum c_i p^i in [0, q), used as a table index.
u64 element_code(const FieldContext& F, const FieldElement& x);
FieldElement element_from_code(const FieldContext& F, u64 code);

}  // namespace cyclograph
