#include "cyclograph/cyclomap.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <regex>
#include <sstream>

namespace cyclograph {

CyclotomicMapping make_mapping(const FieldContext& F, u64 d, std::vector<Branch> branches) {
  if (d == 0 || (F.q - 1) % d != 0) throw std::invalid_argument("index d must divide q - 1");
  if (branches.size() != d) throw std::invalid_argument("expected exactly d branches");
  for (auto& b : branches) {
    if (b.zero) b.e = 0;
    b.e %= (F.q - 1);
  }
  return CyclotomicMapping{F, d, std::move(branches)};
}

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

u64 parse_u64(const std::string& text, std::size_t line, const char* what) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw ParseError(line, std::string("expected a non-negative integer for ") + what + ", got '" + text + "'");
  try {
    return std::stoull(text);
  } catch (const std::out_of_range&) {
    throw ParseError(line, std::string(what) + " out of range");
  }
}

}  // namespace

CyclotomicMapping parse_mapping(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  std::optional<u64> q, p, n, d;
  std::optional<std::string> poly;
  std::size_t poly_line = 0, q_line = 0, d_line = 0;
  std::map<u64, std::pair<Branch, std::size_t>> branches;
  std::map<u64, std::string> poly_coeffs;  // branch -> polynomial text for a=[...]
  static const std::regex branch_re(R"(branch\s+(\d+)\s*:\s*a\s*=\s*(\S+?)\s*,\s*r\s*=\s*(\d+))");
  static const std::regex kv_re(R"((\w+)\s*=\s*(.*))");
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    std::smatch m;
    if (line.rfind("branch", 0) == 0) {
      if (!d) throw ParseError(line_no, "branch line before d=");
      if (!std::regex_match(line, m, branch_re)) throw ParseError(line_no, "malformed branch line, expected 'branch <i>: a=w^<e>|0, r=<int>'");
      u64 idx = parse_u64(m[1], line_no, "branch index");
      if (idx >= *d) throw ParseError(line_no, "branch index " + std::to_string(idx) + " not below d=" + std::to_string(*d));
      if (branches.count(idx)) throw ParseError(line_no, "duplicate branch " + std::to_string(idx));
      Branch b;
      std::string a = m[2];
      if (a == "0" || a == "0F") {
        b.zero = true;
      } else if (a.rfind("w^", 0) == 0) {
        b.e = parse_u64(a.substr(2), line_no, "coefficient exponent");
      } else if (a.size() >= 2 && a.front() == '[' && a.back() == ']') {
        poly_coeffs[idx] = a.substr(1, a.size() - 2);
      } else {
        throw ParseError(line_no, "coefficient must be w^<e>, 0 or [<polynomial>], got '" + a + "'");
      }
      b.r = parse_u64(m[3], line_no, "exponent r");
      branches[idx] = {b, line_no};
      continue;
    }
    // key=value tokens; poly= takes the rest of the line
    std::string rest = line;
    while (!rest.empty()) {
      if (!std::regex_match(rest, m, kv_re)) throw ParseError(line_no, "unrecognized line '" + line + "'");
      std::string key = m[1], tail = m[2];
      std::string value;
      if (key == "poly") {
        value = trim(tail);
        rest.clear();
      } else {
        auto sp = tail.find_first_of(" \t");
        value = tail.substr(0, sp);
        rest = sp == std::string::npos ? "" : trim(tail.substr(sp));
      }
      if (key == "q") {
        q = parse_u64(value, line_no, "q");
        q_line = line_no;
      } else if (key == "p") {
        p = parse_u64(value, line_no, "p");
      } else if (key == "n") {
        n = parse_u64(value, line_no, "n");
      } else if (key == "poly") {
        poly = value;
        poly_line = line_no;
      } else if (key == "d") {
        if (!q) throw ParseError(line_no, "d= before q=");
        d = parse_u64(value, line_no, "d");
        d_line = line_no;
      } else {
        throw ParseError(line_no, "unknown key '" + key + "'");
      }
    }
  }
  if (!q) throw ParseError(0, "missing q=");
  if (!d) throw ParseError(0, "missing d=");
  if (*q < 2) throw ParseError(q_line, "q must be at least 2");
  auto fq = factorize(*q);
  if (fq.factors.size() != 1) throw ParseError(q_line, "q=" + std::to_string(*q) + " is not a prime power");
  u64 pp = fq.factors[0].p;
  unsigned nn = fq.factors[0].v;
  if ((p && *p != pp) || (n && *n != nn))
    throw ParseError(q_line, "p and n do not match q=" + std::to_string(*q));
  std::optional<PolyFp> modulus;
  if (poly) {
    try {
      modulus = parse_poly(*poly, pp);
    } catch (const std::exception& e) {
      throw ParseError(poly_line, std::string("bad polynomial: ") + e.what());
    }
  }
  FieldContext F;
  try {
    F = make_field(pp, nn, modulus);
  } catch (const std::exception& e) {
    throw ParseError(poly ? poly_line : q_line, e.what());
  }
  if (*d == 0 || (*q - 1) % *d != 0) throw ParseError(d_line, "d=" + std::to_string(*d) + " does not divide q-1");
  if (branches.size() != *d) throw ParseError(0, "expected " + std::to_string(*d) + " branch lines, found " + std::to_string(branches.size()));
  std::vector<Branch> bs;
  for (auto& [idx, entry] : branches) {
    Branch b = entry.first;
    if (auto it = poly_coeffs.find(idx); it != poly_coeffs.end()) {
      try {
        FieldElement x = field_from_poly(F, parse_poly(it->second, pp));
        if (is_zero(x)) b.zero = true;
        else b.e = field_dlog(F, x);
      } catch (const std::exception& e) {
        throw ParseError(entry.second, std::string("bad coefficient: ") + e.what());
      }
    }
    bs.push_back(b);
  }
  return make_mapping(F, *d, std::move(bs));
}

std::string format_mapping(const CyclotomicMapping& f) {
  std::ostringstream os;
  os << "q=" << f.q() << '\n';
  if (f.field.n > 1) os << "p=" << f.field.p << " n=" << f.field.n << " poly=" << poly_to_string(f.field.modulus) << '\n';
  os << "d=" << f.d << '\n';
  for (u64 i = 0; i < f.d; ++i) {
    const auto& b = f.branches[i];
    os << "branch " << i << ": a=";
    if (b.zero) os << "0";
    else os << "w^" << b.e;
    os << ", r=" << b.r << '\n';
  }
  return os.str();
}

std::string vertex_name(Vertex v) { return v == 0 ? "0F" : "w^" + std::to_string(v - 1); }

Vertex parse_vertex(const std::string& text, u64 q) {
  std::string t = trim(text);
  if (t == "0F" || t == "0") return 0;
  if (t.rfind("w^", 0) != 0) throw std::invalid_argument("field element must be w^<k> or 0F, got '" + text + "'");
  std::string num = t.substr(2);
  if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("bad exponent in '" + text + "'");
  u64 k = std::stoull(num);
  return vertex_of_exponent(k % (q - 1));
}

CosetPoint coset_point(const CyclotomicMapping& f, Vertex v) {
  if (v == 0) return {f.d, 0};
  u64 k = v - 1;
  return {k % f.d, k / f.d};
}

Vertex vertex_of(const CyclotomicMapping& f, CosetPoint c) {
  if (c.coset == f.d) return 0;
  return vertex_of_exponent(c.coset + f.d * c.z);
}

Vertex evaluate(const CyclotomicMapping& f, Vertex v) {
  if (v == 0) return 0;
  u64 k = v - 1, qm1 = f.q() - 1;
  const Branch& b = f.branches[k % f.d];
  if (b.zero) return 0;
  u64 e = static_cast<u64>((static_cast<u128>(b.r % qm1) * k + b.e) % qm1);
  return vertex_of_exponent(e);
}

FieldElement evaluate(const CyclotomicMapping& f, const FieldElement& x) {
  if (is_zero(x)) return x;
  Vertex w = evaluate(f, vertex_of_exponent(field_dlog(f.field, x)));
  return w == 0 ? field_zero(f.field) : omega_pow(f.field, w - 1);
}

InducedStructure induce(const CyclotomicMapping& f) {
  InducedStructure ind;
  const u64 d = f.d, s = f.s(), qm1 = f.q() - 1;
  ind.d = d;
  ind.s = s;
  ind.fbar.assign(d + 1, d);
  ind.A.assign(d, std::nullopt);
  for (u64 i = 0; i < d; ++i) {
    const Branch& b = f.branches[i];
    if (b.zero) {
      ind.zero_branches.push_back(i);
      continue;
    }
    // omega^(i + d z) -> omega^(E + d r z) with E = e + r i
    u128 E = static_cast<u128>(b.r % qm1) * i + b.e;
    u64 target = static_cast<u64>(E % d);
    u64 quot = static_cast<u64>(((E - target) / d) % s);
    ind.fbar[i] = target;
    ind.A[i] = make_affine(s, b.r % s, quot);
  }
  ind.periodic.assign(d + 1, false);
  for (u64 i = 0; i <= d; ++i) {
    u64 x = i;
    for (u64 k = 0; k <= d; ++k) x = ind.fbar[x];
    ind.periodic[x] = true;  // fbar^(d+1)(i) lies on a cycle
  }
  std::vector<bool> seen(d + 1, false);
  for (u64 i = 0; i < d; ++i) {
    if (!ind.periodic[i] || seen[i]) continue;
    std::vector<u64> cyc;
    for (u64 x = i; !seen[x]; x = ind.fbar[x]) {
      seen[x] = true;
      cyc.push_back(x);
    }
    ind.cycles.push_back(std::move(cyc));
  }
  return ind;
}

AffineMap cycle_map(const InducedStructure& ind, const std::vector<u64>& cycle, std::size_t t) {
  AffineMap M = make_affine(ind.s, 1, 0);
  for (std::size_t k = 0; k < cycle.size(); ++k) M = compose(M, *ind.A[cycle[(t + k) % cycle.size()]]);
  return M;
}

std::vector<FieldCrlEntry> crl_list(const CyclotomicMapping& f, u64 cycle_cap) {
  InducedStructure ind = induce(f);
  std::vector<FieldCrlEntry> out{{0, 1}};
  for (const auto& cyc : ind.cycles) {
    const u64 ell = cyc.size();
    for (const auto& e : crl_affine(cycle_map(ind, cyc), cycle_cap)) {
      if (out.size() >= cycle_cap) throw CapExceeded("CRL list exceeds the cycle cap");
      out.push_back({vertex_of(f, {cyc[0], e.rep}), e.length * ell});
    }
  }
  return out;
}

HeightInfo compute_H(const InducedStructure& ind, const std::vector<u64>& cycle) {
  std::vector<u64> alphas;
  for (u64 i : cycle) alphas.push_back(ind.A[i]->a);
  TreeDescriptionList scratch;
  auto cct = coset_cycle_trees(alphas, ind.s, scratch);
  return HeightInfo{cct.H, cct.heights, cct.procs};
}

ArithmeticPartition PartitionTreeRegister::height_partition(u64 i, unsigned h) const {
  const CosetRegister& c = cosets.at(i);
  ArithmeticPartition Q{induced.s, {}};
  for (unsigned u = 0; u <= h; ++u) Q = wedge(Q, c.pushed.at(u));
  return wedge(Q, c.heights);
}

namespace {

class RegisterBuilder {
 public:
  RegisterBuilder(PartitionTreeRegister& reg, unsigned max_bits) : reg_(reg), max_bits_(max_bits) {
    const auto& ind = reg_.induced;
    children_.assign(ind.d + 1, {});
    for (u64 j = 0; j < ind.d; ++j) {
      if (!ind.periodic[j]) children_[ind.fbar[j]].push_back(j);
    }
    done_.assign(ind.d, false);
  }

  void run() {
    const auto& ind = reg_.induced;
    reg_.cosets.assign(ind.d, {});
    for (u64 i = 0; i < ind.d; ++i)
      if (!ind.periodic[i]) transient(i);
    std::vector<TreeChild> raw;
    for (u64 j : ind.zero_branches)
      for (const auto& blk : reg_.cosets[j].blocks) raw.push_back({blk.tree, blk.size});
    reg_.zero_tree = reg_.trees.insert(raw);
    for (const auto& cyc : ind.cycles) periodic_cycle(cyc);
  }

 private:
  void check_width(std::size_t bits) const {
    if (bits > max_bits_)
      throw CapExceeded("sign tuples of " + std::to_string(bits) + " bits exceed the cap of " + std::to_string(max_bits_));
  }

  ArithmeticPartition children_partition(u64 i) {
    ArithmeticPartition P{reg_.induced.s, {}};
    for (u64 j : children_[i]) {
      transient(j);
      P = wedge(P, lift(reg_.cosets[j].partition, *reg_.induced.A[j]));
    }
    return P;
  }

  // Pre-images in transient child cosets of a point whose children-partition signs are `signs`.
  void transient_part(u64 i, const SignTuple& signs, std::vector<TreeChild>& raw) {
    std::size_t off = 0;
    for (u64 j : children_[i]) {
      const CosetRegister& cj = reg_.cosets[j];
      const std::size_t w = cj.partition.size() + 1;
      SignTuple seg(signs.begin() + off, signs.begin() + off + w);
      off += w;
      for (const auto& blk : cj.blocks) {
        u64 sigma = distribution_number(cj.partition, *reg_.induced.A[j], blk.signs, seg);
        if (sigma) raw.push_back({blk.tree, sigma});
      }
    }
  }

  void transient(u64 i) {
    if (done_[i]) return;
    done_[i] = true;
    CosetRegister& c = reg_.cosets[i];
    c.periodic = false;
    ArithmeticPartition P = children_partition(i);
    check_width(P.size());
    reg_.cosets[i].partition = P;
    for (auto& blk : nonempty_blocks(P)) {
      std::vector<TreeChild> raw;
      transient_part(i, blk.signs, raw);
      std::size_t tree = reg_.trees.insert(raw);
      reg_.cosets[i].tree_of[blk.signs] = tree;
      reg_.cosets[i].blocks.push_back({std::move(blk.signs), blk.size, tree, 0});
    }
  }

  void periodic_cycle(const std::vector<u64>& cyc) {
    const auto& ind = reg_.induced;
    const std::size_t ell = cyc.size();
    const unsigned H = compute_H(ind, cyc).H;
    auto at = [&](std::size_t t) -> CosetRegister& { return reg_.cosets[cyc[t % ell]]; };
    for (std::size_t t = 0; t < ell; ++t) {
      CosetRegister& c = at(t);
      c.periodic = true;
      c.H = H;
      c.prev = cyc[(t + ell - 1) % ell];
      c.transient_children = children_[cyc[t]];
      c.pushed.assign(H + 1, {});
      c.pushed[0] = children_partition(cyc[t]);
      c.heights = ArithmeticPartition{ind.s, {}};
      AffineMap M = make_affine(ind.s, 1, 0);
      for (unsigned j = 1; j <= H; ++j) {
        M = compose(*ind.A[cyc[(t + ell * j - j) % ell]], M);
        u64 mod = std::gcd(M.a, ind.s);
        c.heights.seq.push_back(Congruence{mod, M.b % mod});
      }
    }
    for (unsigned u = 1; u <= H; ++u)
      for (std::size_t t = 0; t < ell; ++t) {
        const CosetRegister& p = at(t + ell - 1);
        at(t).pushed[u] = lambda(p.pushed[u - 1], *ind.A[cyc[(t + ell - 1) % ell]]);
      }
    for (std::size_t t = 0; t < ell; ++t) {
      CosetRegister& c = at(t);
      c.partition = reg_.height_partition(cyc[t], H);
      check_width(c.partition.size() + 1);
      c.by_height.assign(H + 1, {});
      c.tree_of_prefix.assign(H + 1, {});
    }
    // Q[t][k]
    std::vector<std::vector<ArithmeticPartition>> Q(ell);
    for (std::size_t t = 0; t < ell; ++t)
      for (unsigned k = 0; k <= H; ++k) Q[t].push_back(reg_.height_partition(cyc[t], k));

    for (unsigned h = 0; h <= H; ++h) {
      for (std::size_t t = 0; t < ell; ++t) {
        const u64 i = cyc[t];
        const std::size_t tp = (t + ell - 1) % ell;
        const AffineMap& Aprev = *ind.A[cyc[tp]];
        CosetRegister& c = at(t);
        std::vector<std::size_t> widths;
        std::size_t prefix_len = 0;
        for (unsigned u = 0; u <= h; ++u) {
          widths.push_back(c.pushed[u].size());
          prefix_len += c.pushed[u].size();
        }
        std::vector<Forced> forced(prefix_len, Forced::Free);
        for (unsigned j = 1; j <= H; ++j) forced.push_back(j <= h ? Forced::Positive : Forced::Negated);
        // height signs of the successor-generation congruences on the lifted side
        auto theta_sign = [&](unsigned j) { return j <= h || h == H; };
        std::map<SignTuple, std::size_t> transient_memo;
        for (auto& blk : nonempty_blocks(Q[t][h], forced)) {
          SignTuple prefix(blk.signs.begin(), blk.signs.begin() + prefix_len);
          SignTuple own(prefix.begin(), prefix.begin() + widths[0]);
          std::vector<TreeChild> raw;
          transient_part(i, own, raw);
          std::size_t xoff = widths[0];
          SignTuple xs;  // o'_1 .. o'_{k+1}
          for (unsigned k = 0; k < h; ++k) {
            xs.insert(xs.end(), prefix.begin() + xoff, prefix.begin() + xoff + widths[k + 1]);
            xoff += widths[k + 1];
            SignTuple nu2 = xs;
            for (unsigned j = 2; j <= H + 1; ++j) nu2.push_back(theta_sign(j));
            nu2.push_back(theta_sign(1));
            for (const auto& pb : at(tp).by_height[k]) {
              u64 sigma = distribution_number(Q[tp][k], Aprev, pb.signs, nu2);
              if (sigma) raw.push_back({pb.tree, sigma});
            }
          }
          std::size_t tree = reg_.trees.insert(raw);
          c.tree_of_prefix[h][prefix] = tree;
          c.by_height[h].push_back({std::move(blk.signs), blk.size, tree, h});
        }
      }
    }
  }

  PartitionTreeRegister& reg_;
  unsigned max_bits_;
  std::vector<std::vector<u64>> children_;
  std::vector<bool> done_;
};

}  // namespace

PartitionTreeRegister build_register(const CyclotomicMapping& f, unsigned max_sign_bits) {
  PartitionTreeRegister reg;
  reg.induced = induce(f);
  RegisterBuilder(reg, max_sign_bits).run();
  return reg;
}

namespace {

SignTuple prefix_signs(const CosetRegister& c, unsigned h, u64 z) {
  SignTuple out;
  for (unsigned u = 0; u <= h; ++u) {
    auto part = block_of(c.pushed[u], z);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::size_t lookup(const std::map<SignTuple, std::size_t>& m, const SignTuple& key) {
  auto it = m.find(key);
  if (it == m.end()) throw std::logic_error("register has no block with signs " + render_signs(key));
  return it->second;
}

}  // namespace

std::size_t tree_of_vertex(const PartitionTreeRegister& reg, const CyclotomicMapping& f, Vertex v) {
  CosetPoint cp = coset_point(f, v);
  if (cp.coset == f.d) return reg.zero_tree;
  const CosetRegister& c = reg.cosets[cp.coset];
  if (!c.periodic) return lookup(c.tree_of, block_of(c.partition, cp.z));
  auto hs = block_of(c.heights, cp.z);
  unsigned h = 0;
  while (h < hs.size() && hs[h]) ++h;
  return lookup(c.tree_of_prefix[h], prefix_signs(c, h, cp.z));
}

std::vector<std::size_t> canonical_cyclic(const std::vector<std::size_t>& seq) {
  const std::size_t n = seq.size();
  if (n == 0) return {};
  std::vector<std::size_t> pi(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t k = pi[i - 1];
    while (k > 0 && seq[i] != seq[k]) k = pi[k - 1];
    if (seq[i] == seq[k]) ++k;
    pi[i] = k;
  }
  std::size_t p = n - pi[n - 1];
  if (n % p != 0) p = n;
  // least rotation of seq[0..p)
  std::size_t i = 0, j = 1, k = 0;
  while (i < p && j < p && k < p) {
    std::size_t a = seq[(i + k) % p], b = seq[(j + k) % p];
    if (a == b) {
      ++k;
      continue;
    }
    if (a > b) i += k + 1;
    else j += k + 1;
    if (i == j) ++j;
    k = 0;
  }
  std::size_t start = std::min(i, j);
  std::vector<std::size_t> out(p);
  for (std::size_t t = 0; t < p; ++t) out[t] = seq[(start + t) % p];
  return out;
}

ComponentNecklace component_necklace(const PartitionTreeRegister& reg, const CyclotomicMapping& f, Vertex rep,
                                     u64 length, u64 walk_threshold) {
  const auto& ind = reg.induced;
  if (rep == 0) {
    if (length != 1) throw std::invalid_argument("zero lies on a cycle of length 1");
    return {{reg.zero_tree}, 1, 1};
  }
  CosetPoint cp = coset_point(f, rep);
  if (!ind.periodic[cp.coset]) throw std::invalid_argument(vertex_name(rep) + " is not periodic");
  const std::vector<u64>* cyc = nullptr;
  std::size_t t0 = 0;
  for (const auto& c : ind.cycles) {
    auto it = std::find(c.begin(), c.end(), cp.coset);
    if (it != c.end()) {
      cyc = &c;
      t0 = static_cast<std::size_t>(it - c.begin());
    }
  }
  const std::size_t ell = cyc->size();
  AffineMap M0 = cycle_map(ind, *cyc, t0);
  Residue per = periodic_point_congruence(M0);
  if (cp.z % per.a != per.b) throw std::invalid_argument(vertex_name(rep) + " is not periodic");
  if (ell * affine_cycle_length(M0, cp.z) != length)
    throw std::invalid_argument("cycle through " + vertex_name(rep) + " does not have length " + std::to_string(length));
  ComponentNecklace out;
  out.length = length;
  if (length <= walk_threshold) {
    std::vector<std::size_t> seq;
    seq.reserve(length);
    Vertex v = rep;
    for (u64 n = 0; n < length; ++n) {
      seq.push_back(tree_of_vertex(reg, f, v));
      v = evaluate(f, v);
    }
    out.seq = canonical_cyclic(seq);
    return out;
  }
  // Per coset position: each congruence is constant or holds on one residue class of the step count.
  struct Active {
    bool constant;
    bool value;
    u64 offset, period;
  };
  const Factorization fs = factorize(ind.s);
  std::vector<std::vector<Active>> acts(ell);
  std::vector<u64> zs(ell);
  u64 period = 1;
  u64 z = cp.z;
  for (std::size_t t = 0; t < ell; ++t) {
    const u64 ci = (*cyc)[(t0 + t) % ell];
    zs[t] = z;
    AffineMap Mt = cycle_map(ind, *cyc, (t0 + t) % ell);
    const u64 g = part_dividing(fs, Mt.a);
    const CosetRegister& c = reg.cosets[ci];
    for (unsigned u = 0; u <= c.H; ++u)
      for (const auto& cg : c.pushed[u].seq) {
        u64 a2 = std::gcd(cg.a, g), a1 = cg.a / a2;
        if ((z % a2) != (cg.b % a2)) {
          acts[t].push_back({true, false, 0, 1});
          continue;
        }
        if (a1 == 1) {
          acts[t].push_back({true, true, 0, 1});
          continue;
        }
        AffineMap R = reduce_mod(Mt, a1);
        auto e = affine_dlog(R, z % a1, cg.b % a1);
        if (!e) {
          acts[t].push_back({true, false, 0, 1});
          continue;
        }
        u64 lj = affine_cycle_length(R, z % a1);
        acts[t].push_back({false, true, *e % lj, lj});
        period = lcm_u64(period, lj);
      }
    z = evaluate(*ind.A[ci], z);
  }
  const u64 steps = period * ell;
  if (steps > (u64(1) << 24)) throw CapExceeded("component period " + std::to_string(steps) + " too long to expand");
  std::vector<std::size_t> seq;
  seq.reserve(steps);
  for (u64 n = 0; n < steps; ++n) {
    const std::size_t t = n % ell;
    const u64 m = n / ell;
    const CosetRegister& c = reg.cosets[(*cyc)[(t0 + t) % ell]];
    SignTuple signs;
    for (const auto& a : acts[t]) signs.push_back(a.constant ? a.value : (m % a.period == a.offset));
    seq.push_back(lookup(c.tree_of_prefix[c.H], signs));
  }
  out.seq = canonical_cyclic(seq);
  return out;
}

BruteGraph brute_graph(const CyclotomicMapping& f, u64 cap) {
  const FieldContext& F = f.field;
  const u64 q = F.q;
  if (q > cap) throw CapExceeded("q=" + std::to_string(q) + " exceeds the oracle cap " + std::to_string(cap));
  std::vector<FieldElement> powers;
  powers.reserve(q - 1);
  std::vector<Vertex> by_code(q, 0);
  FieldElement x = field_one(F);
  for (u64 k = 0; k + 1 < q; ++k) {
    powers.push_back(x);
    by_code[element_code(F, x)] = vertex_of_exponent(k);
    x = mul(F, x, F.omega);
  }
  BruteGraph g;
  g.succ.assign(q, 0);
  for (u64 k = 0; k + 1 < q; ++k) {
    const Branch& b = f.branches[k % f.d];
    if (b.zero) continue;
    const FieldElement& xr = powers[static_cast<u64>((static_cast<u128>(k) * (b.r % (q - 1))) % (q - 1))];
    FieldElement y = mul(F, powers[b.e % (q - 1)], xr);
    g.succ[vertex_of_exponent(k)] = by_code[element_code(F, y)];
  }
  std::vector<u64> indeg(q, 0);
  for (Vertex v = 0; v < q; ++v) ++indeg[g.succ[v]];
  g.periodic.assign(q, true);
  std::deque<Vertex> queue;
  for (Vertex v = 0; v < q; ++v)
    if (indeg[v] == 0) queue.push_back(v);
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    g.periodic[v] = false;
    if (--indeg[g.succ[v]] == 0) queue.push_back(g.succ[v]);
  }
  return g;
}

std::vector<std::size_t> oracle_trees(const BruteGraph& g, TreeDescriptionList& list) {
  const u64 q = g.succ.size();
  std::vector<u64> pending(q, 0);
  for (Vertex v = 0; v < q; ++v)
    if (!g.periodic[v]) ++pending[g.succ[v]];
  std::vector<std::vector<TreeChild>> raw(q);
  std::vector<std::size_t> tree(q, 0);
  std::deque<Vertex> queue;
  for (Vertex v = 0; v < q; ++v)
    if (pending[v] == 0) queue.push_back(v);
  while (!queue.empty()) {
    Vertex v = queue.front();
    queue.pop_front();
    tree[v] = list.insert(raw[v]);
    raw[v].clear();
    if (g.periodic[v]) continue;
    Vertex w = g.succ[v];
    raw[w].push_back({tree[v], 1});
    if (--pending[w] == 0) queue.push_back(w);
  }
  return tree;
}

namespace {

template <class F>
void for_each_cycle(const BruteGraph& g, F&& fn) {
  std::vector<bool> seen(g.succ.size(), false);
  for (Vertex v = 0; v < g.succ.size(); ++v) {
    if (!g.periodic[v] || seen[v]) continue;
    std::vector<Vertex> cyc;
    for (Vertex w = v; !seen[w]; w = g.succ[w]) {
      seen[w] = true;
      cyc.push_back(w);
    }
    fn(cyc);
  }
}

}  // namespace

std::map<u64, u64> oracle_crl(const BruteGraph& g) {
  std::map<u64, u64> out;
  for_each_cycle(g, [&](const std::vector<Vertex>& c) { ++out[c.size()]; });
  return out;
}

std::vector<ComponentNecklace> oracle_components(const BruteGraph& g, const std::vector<std::size_t>& tree_index) {
  std::vector<ComponentNecklace> items;
  for_each_cycle(g, [&](const std::vector<Vertex>& c) {
    std::vector<std::size_t> seq;
    for (Vertex v : c) seq.push_back(tree_index[v]);
    items.push_back({canonical_cyclic(seq), c.size(), 1});
  });
  return aggregate(std::move(items));
}

std::vector<ComponentNecklace> aggregate(std::vector<ComponentNecklace> items) {
  std::map<std::pair<std::vector<std::size_t>, u64>, u64> counts;
  for (auto& it : items) counts[{std::move(it.seq), it.length}] += it.multiplicity;
  std::vector<ComponentNecklace> out;
  for (auto& [key, mult] : counts) out.push_back({key.first, key.second, mult});
  return out;
}

std::string dot_export(const CyclotomicMapping& f, u64 cap) {
  if (f.q() > cap) throw CapExceeded("q=" + std::to_string(f.q()) + " exceeds the dot cap " + std::to_string(cap));
  std::ostringstream os;
  os << "digraph cyclograph {\n";
  for (Vertex v = 0; v < f.q(); ++v)
    os << "  \"" << vertex_name(v) << "\" -> \"" << vertex_name(evaluate(f, v)) << "\";\n";
  os << "}\n";
  return os.str();
}

}  // namespace cyclograph
