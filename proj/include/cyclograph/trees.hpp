#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cyclograph/numtheory.hpp"

namespace cyclograph {

struct TreeChild {
  std::size_t index;
  u64 mult;
  bool operator==(const TreeChild&) const = default;
  auto operator<=>(const TreeChild&) const = default;
};

// Root children of an edge-weighted rooted tree, sorted by index, multiplicities >= 1.
using TreeDescription = std::vector<TreeChild>;

// Append-only list of pairwise non-isomorphic rooted trees. Entry 0 is the trivial tree.
class TreeDescriptionList {
 public:
  TreeDescriptionList();

  std::size_t size() const { return entries_.size(); }
  const TreeDescription& operator[](std::size_t n) const { return entries_.at(n); }

  // Index of the tree with these root children, appended when new.
  std::size_t insert(const std::vector<TreeChild>& raw);
  std::optional<std::size_t> find(const std::vector<TreeChild>& raw) const;

  u64 height(std::size_t n) const { return heights_.at(n); }
  u64 vertex_count(std::size_t n) const { return sizes_.at(n); }  // saturates at UINT64_MAX
  const std::string& key(std::size_t n) const;

 private:
  TreeDescription normalize(const std::vector<TreeChild>& raw) const;

  std::vector<TreeDescription> entries_;
  std::map<TreeDescription, std::size_t> index_;
  std::vector<u64> heights_;
  std::vector<u64> sizes_;
  mutable std::vector<std::string> keys_;
};

std::size_t insert_tree(TreeDescriptionList& list, const std::vector<TreeChild>& raw);
u64 expand_size(const TreeDescriptionList& list, std::size_t n);
u64 expand_height(const TreeDescriptionList& list, std::size_t n);

// Nested encoding with sorted children; equal iff the expanded trees are isomorphic.
std::string canonical_key(const TreeDescriptionList& list, std::size_t n);

// Merges the root children of the given trees, each taken with its multiplicity.
std::size_t tree_sum(TreeDescriptionList& list, const std::vector<TreeChild>& parts);
// New root with the given tree attached by a single edge.
std::size_t tree_graft(TreeDescriptionList& list, std::size_t n);

// Tree above a periodic vertex under rigid procreation. procs = (proc_1, proc_2, ...),
// non-increasing, trailing entries 1 optional.
std::size_t rigid_tree(const std::vector<u64>& procs, TreeDescriptionList& list);

struct CosetCycleTrees {
  std::vector<std::vector<u64>> procs;   // procs[t][k-1] = proc_{i_t,k}, k = 1..H+1
  std::vector<unsigned> heights;         // height of the tree above periodic vertices of coset t
  unsigned H = 0;
  // trees[t][h]: h < H transient vertices of height class h, h = H periodic vertices
  std::vector<std::vector<std::size_t>> trees;
};

// Trees of the induced graph on a cycle of cosets, alphas[t] being the linear coefficient of
// the map from coset t to coset t+1 on Z/sZ.
CosetCycleTrees coset_cycle_trees(const std::vector<u64>& alphas, u64 s, TreeDescriptionList& list);

struct Synchronization {
  TreeDescriptionList merged;
  std::vector<std::size_t> translate;  // index in the second list -> index in merged
};
Synchronization synchronize(const TreeDescriptionList& first, const TreeDescriptionList& second);

std::string render_tree(const TreeDescriptionList& list, std::size_t n);

// Explicit tree as a parent array (vertex 0 is the root and its own parent). Throws CapExceeded.
std::vector<u64> materialize(const TreeDescriptionList& list, std::size_t n, u64 cap = 1000000);

}  // namespace cyclograph
