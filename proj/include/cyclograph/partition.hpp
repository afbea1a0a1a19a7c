#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cyclograph/affine.hpp"
#include "cyclograph/numtheory.hpp"

namespace cyclograph {

// x = b (mod a) inside Z/mZ, with a | m and b < a.
struct Congruence {
  u64 a = 1;
  u64 b = 0;
  bool operator==(const Congruence&) const = default;
  bool holds(u64 x) const { return x % a == b; }
};

// Entry j is true when congruence j holds (the positive sign), false when negated.
using SignTuple = std::vector<bool>;

struct ArithmeticPartition {
  u64 m = 1;
  std::vector<Congruence> seq;
  std::size_t size() const { return seq.size(); }
};

Congruence make_congruence(u64 m, u64 a, u64 b);

std::optional<Residue> system_solve(const std::vector<Congruence>& positives);

SignTuple block_of(const ArithmeticPartition& P, u64 x);
u64 block_size(const ArithmeticPartition& P, const SignTuple& nu);

ArithmeticPartition lift(const ArithmeticPartition& P, const AffineMap& A);
ArithmeticPartition lambda(const ArithmeticPartition& P, const AffineMap& A);
ArithmeticPartition wedge(const ArithmeticPartition& P, const ArithmeticPartition& Q);

// Number of pre-images under A inside block nu of P, for any x in block nu2 of lift(P, A).
u64 distribution_number(const ArithmeticPartition& P, const AffineMap& A, const SignTuple& nu, const SignTuple& nu2);

struct Block {
  SignTuple signs;
  u64 size = 0;
};

// Sign constraint per congruence for block enumeration.
enum class Forced : std::int8_t { Free = -1, Negated = 0, Positive = 1 };

// All nonempty blocks whose signs agree with the constraints, in lexicographic order
// (negated before positive).
std::vector<Block> nonempty_blocks(const ArithmeticPartition& P, const std::vector<Forced>& forced = {});

std::string render_partition(const ArithmeticPartition& P);
std::string render_signs(const SignTuple& nu);

SignTuple concat(const SignTuple& x, const SignTuple& y);

}  // namespace cyclograph
