#include "cyclograph/partition.hpp"

#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cyclograph {

Congruence make_congruence(u64 m, u64 a, u64 b) {
  if (a == 0 || m % a != 0) throw std::invalid_argument("congruence modulus must divide the ambient modulus");
  return Congruence{a, b % a};
}

std::optional<Residue> system_solve(const std::vector<Congruence>& positives) {
  std::vector<Residue> sys;
  sys.reserve(positives.size());
  for (const auto& c : positives) sys.push_back({c.b, c.a});
  return crt_combine(sys);
}

SignTuple block_of(const ArithmeticPartition& P, u64 x) {
  SignTuple nu(P.size());
  x %= P.m;
  for (std::size_t j = 0; j < P.size(); ++j) nu[j] = P.seq[j].holds(x);
  return nu;
}

namespace {

// Signed inclusion-exclusion sum over subsets J of `cands`:
//   sum (-1)^|J| * m / lcm(base, modulus of S and J)   over consistent S + J.
// A candidate already implied by the current system makes the whole subtree cancel.
i64 inclusion_exclusion(u64 m, u64 base, Residue S, std::vector<Congruence> cands) {
  std::vector<Congruence> live;
  live.reserve(cands.size());
  for (const auto& c : cands) {
    if (S.a % c.a == 0) {
      if (S.b % c.a == c.b) return 0;
      continue;
    }
    u64 g = std::gcd(S.a, c.a);
    if (S.b % g != c.b % g) continue;
    live.push_back(c);
  }
  if (live.empty()) return static_cast<i64>(m / lcm_u64(base, S.a));
  Congruence c = live.back();
  live.pop_back();
  auto T = crt_pair(S, Residue{c.b, c.a});
  return inclusion_exclusion(m, base, S, live) - inclusion_exclusion(m, base, *T, live);
}

}  // namespace

u64 block_size(const ArithmeticPartition& P, const SignTuple& nu) {
  if (nu.size() != P.size()) throw std::invalid_argument("block_size: sign tuple length mismatch");
  Residue S{0, 1};
  std::vector<Congruence> neg;
  for (std::size_t j = 0; j < P.size(); ++j) {
    if (nu[j]) {
      auto T = crt_pair(S, Residue{P.seq[j].b, P.seq[j].a});
      if (!T) return 0;
      S = *T;
    } else {
      neg.push_back(P.seq[j]);
    }
  }
  i64 r = inclusion_exclusion(P.m, 1, S, std::move(neg));
  if (r < 0) throw std::logic_error("block_size: negative inclusion-exclusion total");
  return static_cast<u64>(r);
}

ArithmeticPartition lambda(const ArithmeticPartition& P, const AffineMap& A) {
  if (A.m != P.m) throw std::invalid_argument("lambda: modulus mismatch");
  ArithmeticPartition out{P.m, {}};
  out.seq.reserve(P.size() + 1);
  for (const auto& c : P.seq) {
    u64 mod = std::gcd(mul_mod(A.a, c.a, P.m), P.m);
    u64 res = add_mod(mul_mod(A.a, c.b, P.m), A.b, P.m);
    out.seq.push_back(Congruence{mod, res % mod});
  }
  return out;
}

ArithmeticPartition lift(const ArithmeticPartition& P, const AffineMap& A) {
  ArithmeticPartition out = lambda(P, A);
  u64 mod = std::gcd(A.a, P.m);
  out.seq.push_back(Congruence{mod, A.b % mod});
  return out;
}

ArithmeticPartition wedge(const ArithmeticPartition& P, const ArithmeticPartition& Q) {
  if (P.m != Q.m) throw std::invalid_argument("wedge: modulus mismatch");
  ArithmeticPartition out = P;
  out.seq.insert(out.seq.end(), Q.seq.begin(), Q.seq.end());
  return out;
}

u64 distribution_number(const ArithmeticPartition& P, const AffineMap& A, const SignTuple& nu, const SignTuple& nu2) {
  const std::size_t K = P.size();
  if (nu.size() != K || nu2.size() != K + 1) throw std::invalid_argument("distribution_number: sign tuple length mismatch");
  if (A.m != P.m) throw std::invalid_argument("distribution_number: modulus mismatch");
  if (!nu2[K]) return 0;
  Residue S{0, 1};
  std::vector<Congruence> cands;
  for (std::size_t j = 0; j < K; ++j) {
    if (nu[j]) {
      if (!nu2[j]) return 0;
      auto T = crt_pair(S, Residue{P.seq[j].b, P.seq[j].a});
      if (!T) return 0;
      S = *T;
    } else if (nu2[j]) {
      cands.push_back(P.seq[j]);
    }
  }
  u64 base = P.m / std::gcd(A.a, P.m);
  i64 r = inclusion_exclusion(P.m, base, S, std::move(cands));
  if (r < 0) throw std::logic_error("distribution_number: negative inclusion-exclusion total");
  return static_cast<u64>(r);
}

namespace {

constexpr u64 kScanLimit = u64(1) << 24;

bool allowed(const std::vector<Forced>& forced, std::size_t j, bool sign) {
  if (forced.empty() || forced[j] == Forced::Free) return true;
  return (forced[j] == Forced::Positive) == sign;
}

void dfs_blocks(const ArithmeticPartition& P, const std::vector<Forced>& forced, std::size_t j, Residue S,
                std::vector<Congruence>& neg, SignTuple& cur, std::vector<Block>& out) {
  if (j == P.size()) {
    i64 sz = inclusion_exclusion(P.m, 1, S, neg);
    if (sz > 0) out.push_back({cur, static_cast<u64>(sz)});
    return;
  }
  const Congruence& c = P.seq[j];
  if (allowed(forced, j, false)) {
    neg.push_back(c);
    if (inclusion_exclusion(P.m, 1, S, neg) > 0) {
      cur.push_back(false);
      dfs_blocks(P, forced, j + 1, S, neg, cur, out);
      cur.pop_back();
    }
    neg.pop_back();
  }
  if (allowed(forced, j, true)) {
    auto T = crt_pair(S, Residue{c.b, c.a});
    if (T && inclusion_exclusion(P.m, 1, *T, neg) > 0) {
      cur.push_back(true);
      dfs_blocks(P, forced, j + 1, *T, neg, cur, out);
      cur.pop_back();
    }
  }
}

}  // namespace

std::vector<Block> nonempty_blocks(const ArithmeticPartition& P, const std::vector<Forced>& forced) {
  if (!forced.empty() && forced.size() != P.size()) throw std::invalid_argument("nonempty_blocks: constraint length mismatch");
  const std::size_t K = P.size();
  u64 L = 1;
  for (const auto& c : P.seq) L = lcm_u64(L, c.a);
  std::vector<Block> out;
  if (L <= kScanLimit && K <= 64) {
    // every block is a union of classes modulo L
    std::map<u64, u64> counts;
    for (u64 r = 0; r < L; ++r) {
      u64 code = 0;
      bool ok = true;
      for (std::size_t j = 0; j < K; ++j) {
        bool s = P.seq[j].holds(r);
        if (!allowed(forced, j, s)) {
          ok = false;
          break;
        }
        code = (code << 1) | (s ? 1 : 0);
      }
      if (ok) ++counts[code];
    }
    for (auto [code, cnt] : counts) {
      SignTuple nu(K);
      for (std::size_t j = 0; j < K; ++j) nu[j] = (code >> (K - 1 - j)) & 1;
      out.push_back({std::move(nu), cnt * (P.m / L)});
    }
    return out;
  }
  std::vector<Congruence> neg;
  SignTuple cur;
  dfs_blocks(P, forced, 0, Residue{0, 1}, neg, cur, out);
  return out;
}

std::string render_partition(const ArithmeticPartition& P) {
  std::ostringstream os;
  os << "P(mod " << P.m << "):";
  if (P.seq.empty()) {
    os << " true";
    return os.str();
  }
  for (std::size_t j = 0; j < P.size(); ++j) {
    os << (j == 0 ? " " : " & ") << "x=" << P.seq[j].b << '(' << P.seq[j].a << ')';
  }
  return os.str();
}

std::string render_signs(const SignTuple& nu) {
  std::string s = "(";
  for (std::size_t j = 0; j < nu.size(); ++j) {
    if (j) s += ',';
    s += nu[j] ? '+' : '-';
  }
  return s + ")";
}

SignTuple concat(const SignTuple& x, const SignTuple& y) {
  SignTuple r = x;
  r.insert(r.end(), y.begin(), y.end());
  return r;
}

}  // namespace cyclograph
