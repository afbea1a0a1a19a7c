#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cyclograph/affine.hpp"
#include "cyclograph/cyclomap.hpp"
#include "cyclograph/trees.hpp"

namespace cyclograph {

// Graph isomorphism of x -> ax+b and x -> a'x+b' on a common Z/mZ.
bool iso_affine_graphs(const AffineMap& A, const AffineMap& B);

// x -> a x^r on F_q with a = omega^e (or zero). Here r = 0 is the constant map x -> a, 0 included.
struct Monomial {
  bool zero = false;
  u64 e = 0;
  u64 r = 1;
};
bool iso_monomial(const Monomial& f, const Monomial& g, u64 q);
// The index-1 mapping as a monomial; exponent 0 becomes q-1 since the mapping fixes 0.
Monomial as_monomial(const CyclotomicMapping& f);

bool is_special_type_I(const CyclotomicMapping& f);
bool is_special_type_II(const CyclotomicMapping& f);

enum class SpecialType { I, II };

struct TypeTwoSets {
  u64 height = 0;
  std::vector<u64> transient;  // cosets whose height-`height` transient vertices carry this tree
  std::vector<u64> periodic;   // cosets whose periodic vertices carry this tree
};

struct TypedTreeRegister {
  SpecialType kind = SpecialType::I;
  TreeDescriptionList trees;
  std::vector<std::vector<u64>> members;  // type I: cosets (d for zero) per tree index
  std::vector<TypeTwoSets> sets;          // type II: per tree index
  std::vector<std::size_t> periodic_tree; // per coset 0..d: tree above its periodic vertices
};

TypedTreeRegister tree_register_type_I(const CyclotomicMapping& f);
TypedTreeRegister tree_register_type_II(const CyclotomicMapping& f);

// Least period length of a nonempty sequence.
std::size_t minperl(const std::vector<std::size_t>& seq);

struct TreeNecklaceList {
  TreeDescriptionList trees;
  std::vector<ComponentNecklace> entries;  // sorted, pairwise distinct in (seq, length)
};

TreeNecklaceList necklace_list_typed(const CyclotomicMapping& f, const TypedTreeRegister& reg);

inline constexpr unsigned kDefaultBoundedBits = 24;
TreeNecklaceList necklace_list_bounded(const CyclotomicMapping& f, u64 L, unsigned max_bits = kDefaultBoundedBits,
                                       unsigned max_register_bits = kDefaultSignBits);
// Sign bits d(H+L) the bounded method needs, with H the largest periodic layer height.
u64 bounded_width(const CyclotomicMapping& f, u64 L);

TreeNecklaceList necklace_list_oracle(const CyclotomicMapping& f, u64 cap = kDefaultOracleCap);

u64 max_cycle_length(const CyclotomicMapping& f);

// Re-indexes the second list onto the first list's trees and compares.
bool same_necklace_lists(const TreeNecklaceList& a, const TreeNecklaceList& b);

enum class Answer { Yes, No, Undecided };

struct IsoVerdict {
  Answer answer = Answer::Undecided;
  std::string method;  // monomial, type-I, type-II, bounded-L or oracle
};

struct IsoOptions {
  unsigned bounded_bits = kDefaultBoundedBits;
  u64 oracle_cap = kDefaultOracleCap;
  bool allow_oracle = true;
};

IsoVerdict iso_decide(const CyclotomicMapping& f1, const CyclotomicMapping& f2, const IsoOptions& opt = {});
std::string render_verdict(const IsoVerdict& v);

// (max, average) of mpe(2^v - 1) over v = 1..K.
std::pair<unsigned, double> mpe_table(unsigned K);

}  // namespace cyclograph
