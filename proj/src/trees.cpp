#include "cyclograph/trees.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "cyclograph/affine.hpp"

namespace cyclograph {

namespace {

constexpr u64 kSat = std::numeric_limits<u64>::max();

u64 sat_add(u64 x, u64 y) { return x > kSat - y ? kSat : x + y; }
u64 sat_mul(u64 x, u64 y) {
  if (x == 0 || y == 0) return 0;
  return x > kSat / y ? kSat : x * y;
}

}  // namespace

TreeDescriptionList::TreeDescriptionList() {
  entries_.push_back({});
  index_[{}] = 0;
  heights_.push_back(0);
  sizes_.push_back(1);
}

TreeDescription TreeDescriptionList::normalize(const std::vector<TreeChild>& raw) const {
  std::map<std::size_t, u64> merged;
  for (const auto& c : raw) {
    if (c.index >= entries_.size()) throw std::out_of_range("tree description references a missing entry");
    if (c.mult == 0) continue;
    merged[c.index] = sat_add(merged[c.index], c.mult);
  }
  TreeDescription d;
  for (auto [i, k] : merged) d.push_back({i, k});
  return d;
}

std::optional<std::size_t> TreeDescriptionList::find(const std::vector<TreeChild>& raw) const {
  auto it = index_.find(normalize(raw));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t TreeDescriptionList::insert(const std::vector<TreeChild>& raw) {
  TreeDescription d = normalize(raw);
  auto it = index_.find(d);
  if (it != index_.end()) return it->second;
  u64 h = 0, sz = 1;
  for (const auto& c : d) {
    h = std::max(h, heights_[c.index] + 1);
    sz = sat_add(sz, sat_mul(c.mult, sizes_[c.index]));
  }
  std::size_t n = entries_.size();
  index_.emplace(d, n);
  entries_.push_back(std::move(d));
  heights_.push_back(h);
  sizes_.push_back(sz);
  return n;
}

const std::string& TreeDescriptionList::key(std::size_t n) const {
  if (n >= entries_.size()) throw std::out_of_range("tree index out of range");
  if (keys_.size() < entries_.size()) keys_.resize(entries_.size());
  if (!keys_[n].empty()) return keys_[n];
  std::vector<std::string> parts;
  for (const auto& c : entries_[n]) parts.push_back(key(c.index) + "*" + std::to_string(c.mult));
  std::sort(parts.begin(), parts.end());
  std::string s = "(";
  for (auto& p : parts) s += p;
  s += ")";
  keys_[n] = std::move(s);
  return keys_[n];
}

std::size_t insert_tree(TreeDescriptionList& list, const std::vector<TreeChild>& raw) { return list.insert(raw); }

u64 expand_size(const TreeDescriptionList& list, std::size_t n) { return list.vertex_count(n); }
u64 expand_height(const TreeDescriptionList& list, std::size_t n) { return list.height(n); }

std::string canonical_key(const TreeDescriptionList& list, std::size_t n) { return list.key(n); }

std::size_t tree_sum(TreeDescriptionList& list, const std::vector<TreeChild>& parts) {
  std::vector<TreeChild> raw;
  for (const auto& p : parts) {
    if (p.index >= list.size()) throw std::out_of_range("tree_sum: index out of range");
    for (const auto& c : list[p.index]) raw.push_back({c.index, sat_mul(c.mult, p.mult)});
  }
  return list.insert(raw);
}

std::size_t tree_graft(TreeDescriptionList& list, std::size_t n) { return list.insert({{n, 1}}); }

std::size_t rigid_tree(const std::vector<u64>& procs, TreeDescriptionList& list) {
  for (std::size_t k = 0; k < procs.size(); ++k) {
    if (procs[k] == 0) throw std::invalid_argument("rigid_tree: procreation numbers must be positive");
    if (k && procs[k] > procs[k - 1]) throw std::invalid_argument("rigid_tree: procreation numbers must not increase");
  }
  std::size_t H = 0;
  while (H < procs.size() && procs[H] > 1) ++H;
  auto proc = [&](std::size_t k) -> u64 { return k >= 1 && k <= H ? procs[k - 1] : 1; };
  auto w = [&](std::size_t k) { return proc(k + 1) - proc(k + 2); };
  std::vector<std::size_t> I{0};
  for (std::size_t h = 1; h < H; ++h) {
    std::vector<TreeChild> raw;
    for (std::size_t k = 0; k + 2 <= h; ++k) raw.push_back({I[k], w(k)});
    raw.push_back({I[h - 1], proc(h)});
    I.push_back(list.insert(raw));
  }
  std::vector<TreeChild> raw;
  for (std::size_t k = 0; k < H; ++k) raw.push_back({I[k], w(k)});
  return list.insert(raw);
}

CosetCycleTrees coset_cycle_trees(const std::vector<u64>& alphas, u64 s, TreeDescriptionList& list) {
  const std::size_t ell = alphas.size();
  if (ell == 0) throw std::invalid_argument("coset_cycle_trees: empty cycle");
  CosetCycleTrees out;
  out.procs.assign(ell, {});
  out.heights.assign(ell, 0);
  std::vector<bool> settled(ell, false);
  // prod_near[t] = alpha_{t-k} ... alpha_{t-1}, prod_far[t] = alpha_{t-k} ... alpha_{t-2}, both mod s
  std::vector<u64> prod_near(ell, 1 % s), prod_far(ell, 1 % s);
  std::size_t open = ell;
  const std::size_t limit = ell * (mpe(s) + 1) + 2;
  for (std::size_t k = 1; open > 0; ++k) {
    if (k > limit) throw std::logic_error("coset_cycle_trees: procreation numbers do not stabilize");
    for (std::size_t t = 0; t < ell; ++t) {
      std::size_t near = (t + ell - 1) % ell, far = (t + ell * k - k) % ell;
      if (k == 1) {
        prod_near[t] = alphas[near] % s;
      } else {
        prod_far[t] = mul_mod(prod_far[t], alphas[far] % s, s);
        prod_near[t] = mul_mod(prod_near[t], alphas[far] % s, s);
      }
      // gcd with s of the two products; product mod s keeps gcd with s
      u64 num = std::gcd(prod_near[t], s), den = std::gcd(prod_far[t], s);
      if (k == 1) den = 1;
      u64 pk = num / den;
      out.procs[t].push_back(pk);
      if (!settled[t] && pk == 1) {
        settled[t] = true;
        out.heights[t] = static_cast<unsigned>(k - 1);
        --open;
      }
    }
  }
  for (auto h : out.heights) out.H = std::max(out.H, h);
  const unsigned H = out.H;
  for (auto& p : out.procs) p.resize(H + 1, 1);  // proc_{H+1} = 1 everywhere
  auto proc = [&](std::size_t t, std::size_t k) -> u64 { return k >= 1 && k <= out.procs[t].size() ? out.procs[t][k - 1] : 1; };
  auto w = [&](std::size_t t, std::size_t k) { return proc(t, k + 1) - proc(t, k + 2); };
  out.trees.assign(ell, std::vector<std::size_t>(H + 1, 0));
  for (unsigned h = 1; h < H; ++h) {
    for (std::size_t t = 0; t < ell; ++t) {
      std::size_t prev = (t + ell - 1) % ell;
      std::vector<TreeChild> raw;
      for (unsigned k = 0; k + 2 <= h; ++k) raw.push_back({out.trees[prev][k], w(t, k)});
      raw.push_back({out.trees[prev][h - 1], proc(t, h)});
      out.trees[t][h] = list.insert(raw);
    }
  }
  for (std::size_t t = 0; t < ell; ++t) {
    std::size_t prev = (t + ell - 1) % ell;
    std::vector<TreeChild> raw;
    for (unsigned k = 0; k < out.heights[t]; ++k) raw.push_back({out.trees[prev][k], w(t, k)});
    out.trees[t][H] = list.insert(raw);
  }
  return out;
}

Synchronization synchronize(const TreeDescriptionList& first, const TreeDescriptionList& second) {
  Synchronization sync{first, {}};
  sync.translate.reserve(second.size());
  for (std::size_t n = 0; n < second.size(); ++n) {
    std::vector<TreeChild> raw;
    for (const auto& c : second[n]) raw.push_back({sync.translate[c.index], c.mult});
    sync.translate.push_back(sync.merged.insert(raw));
  }
  return sync;
}

std::string render_tree(const TreeDescriptionList& list, std::size_t n) {
  std::string s = "T" + std::to_string(n) + " =";
  const auto& d = list[n];
  if (d.empty()) return s + " 0";
  for (std::size_t j = 0; j < d.size(); ++j) {
    s += j ? " + " : " ";
    s += std::to_string(d[j].mult) + "*T" + std::to_string(d[j].index);
  }
  return s;
}

std::vector<u64> materialize(const TreeDescriptionList& list, std::size_t n, u64 cap) {
  if (list.vertex_count(n) > cap) throw CapExceeded("materialize: tree exceeds the vertex cap");
  std::vector<u64> parent{0};
  std::vector<std::pair<u64, std::size_t>> stack{{0, n}};
  while (!stack.empty()) {
    auto [v, idx] = stack.back();
    stack.pop_back();
    for (const auto& c : list[idx]) {
      for (u64 k = 0; k < c.mult; ++k) {
        parent.push_back(v);
        stack.push_back({parent.size() - 1, c.index});
      }
    }
  }
  return parent;
}

}  // namespace cyclograph
