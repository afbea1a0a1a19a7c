#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cyclograph/affine.hpp"
#include "cyclograph/finitefield.hpp"
#include "cyclograph/partition.hpp"
#include "cyclograph/trees.hpp"

namespace cyclograph {

// Coefficient a_i = omega^e (or zero) and exponent r on coset C_i.
struct Branch {
  bool zero = false;
  u64 e = 0;
  u64 r = 0;
  bool operator==(const Branch&) const = default;
};

struct CyclotomicMapping {
  FieldContext field;
  u64 d = 1;
  std::vector<Branch> branches;  // size d
  u64 q() const { return field.q; }
  u64 s() const { return (field.q - 1) / d; }
};

// Input error with the 1-based line it refers to (0 when not tied to a line).
struct ParseError : std::runtime_error {
  std::size_t line;
  ParseError(std::size_t line_no, const std::string& msg)
      : std::runtime_error(line_no ? "line " + std::to_string(line_no) + ": " + msg : msg), line(line_no) {}
};

CyclotomicMapping make_mapping(const FieldContext& F, u64 d, std::vector<Branch> branches);
CyclotomicMapping parse_mapping(const std::string& text);
std::string format_mapping(const CyclotomicMapping& f);

// Vertices of the functional graph: 0 is the zero element, 1 + k is omega^k.
using Vertex = u64;
inline Vertex vertex_of_exponent(u64 k) { return k + 1; }
std::string vertex_name(Vertex v);                   // "0F" or "w^k"
Vertex parse_vertex(const std::string& text, u64 q);  // throws std::invalid_argument

// Coset index (d for zero) and position z with v = omega^(i + d z).
struct CosetPoint {
  u64 coset;
  u64 z;
};
CosetPoint coset_point(const CyclotomicMapping& f, Vertex v);
Vertex vertex_of(const CyclotomicMapping& f, CosetPoint c);

struct InducedStructure {
  u64 d = 1;
  u64 s = 1;
  std::vector<u64> fbar;                      // size d + 1, fbar[d] = d
  std::vector<std::optional<AffineMap>> A;    // size d, absent on zero branches
  std::vector<bool> periodic;                 // size d + 1, periodic under fbar
  std::vector<std::vector<u64>> cycles;       // fbar cycles, each starting at its least index
  std::vector<u64> zero_branches;
};

InducedStructure induce(const CyclotomicMapping& f);

Vertex evaluate(const CyclotomicMapping& f, Vertex v);
FieldElement evaluate(const CyclotomicMapping& f, const FieldElement& x);

// Composite affine map of a coset cycle starting at cycle[t].
AffineMap cycle_map(const InducedStructure& ind, const std::vector<u64>& cycle, std::size_t t = 0);

struct FieldCrlEntry {
  Vertex rep;
  u64 length;
};
std::vector<FieldCrlEntry> crl_list(const CyclotomicMapping& f, u64 cycle_cap = kDefaultCycleCap);

struct HeightInfo {
  unsigned H = 0;
  std::vector<unsigned> heights;  // per position on the cycle
  std::vector<std::vector<u64>> procs;
};
HeightInfo compute_H(const InducedStructure& ind, const std::vector<u64>& cycle);

struct RegisterBlock {
  SignTuple signs;  // full tuple of the coset partition
  u64 size = 0;
  std::size_t tree = 0;
  unsigned h = 0;   // height class on periodic cosets, 0 on transient ones
};

struct CosetRegister {
  bool periodic = false;
  ArithmeticPartition partition;  // P_i for transient cosets, Q_{i,H} for periodic ones
  // periodic cosets only
  unsigned H = 0;
  std::size_t prev = 0;                        // periodic pre-image coset
  std::vector<u64> transient_children;
  std::vector<ArithmeticPartition> pushed;     // pushed[t]: transient-children partition of the t-th predecessor pushed t steps
  ArithmeticPartition heights;                 // successor-generation congruences, length H
  std::vector<std::vector<RegisterBlock>> by_height;  // blocks of the height-h partition with its height signs fixed
  std::vector<std::map<SignTuple, std::size_t>> tree_of_prefix;  // per h: pushed[0..h] signs -> tree
  // transient cosets only
  std::vector<RegisterBlock> blocks;
  std::map<SignTuple, std::size_t> tree_of;
};

inline constexpr unsigned kDefaultSignBits = 64;

struct PartitionTreeRegister {
  InducedStructure induced;
  TreeDescriptionList trees;
  std::size_t zero_tree = 0;
  std::vector<CosetRegister> cosets;  // size d
  // Partition Q_{i,h} = pushed[0..h] ^ heights.
  ArithmeticPartition height_partition(u64 i, unsigned h) const;
};

PartitionTreeRegister build_register(const CyclotomicMapping& f, unsigned max_sign_bits = kDefaultSignBits);

std::size_t tree_of_vertex(const PartitionTreeRegister& reg, const CyclotomicMapping& f, Vertex v);

struct ComponentNecklace {
  std::vector<std::size_t> seq;  // least rotation of the minimal period
  u64 length = 1;                // full cycle length
  u64 multiplicity = 1;
  auto operator<=>(const ComponentNecklace&) const = default;
};

// Least rotation of the minimal period of a cyclic sequence.
std::vector<std::size_t> canonical_cyclic(const std::vector<std::size_t>& seq);

inline constexpr u64 kDefaultWalkThreshold = u64(1) << 16;
ComponentNecklace component_necklace(const PartitionTreeRegister& reg, const CyclotomicMapping& f, Vertex rep,
                                     u64 length, u64 walk_threshold = kDefaultWalkThreshold);

inline constexpr u64 kDefaultOracleCap = u64(1) << 20;

// Explicit functional graph over all q vertices, evaluated with field arithmetic.
struct BruteGraph {
  std::vector<Vertex> succ;
  std::vector<bool> periodic;
};
BruteGraph brute_graph(const CyclotomicMapping& f, u64 cap = kDefaultOracleCap);

// Tree index per vertex, inserted into `list` so that equal indices mean isomorphic trees.
std::vector<std::size_t> oracle_trees(const BruteGraph& g, TreeDescriptionList& list);
std::map<u64, u64> oracle_crl(const BruteGraph& g);  // cycle length -> number of cycles
std::vector<ComponentNecklace> oracle_components(const BruteGraph& g, const std::vector<std::size_t>& tree_index);

// Aggregates necklaces with equal sequence and length, summing multiplicities; sorted.
std::vector<ComponentNecklace> aggregate(std::vector<ComponentNecklace> items);

std::string dot_export(const CyclotomicMapping& f, u64 cap = 4096);

}  // namespace cyclograph
