#include "cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <json.hpp>
#include <optional>
#include <random>
#include <sstream>

#include "cyclograph/cyclomap.hpp"
#include "cyclograph/isomorph.hpp"

namespace cyclograph::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr int kOk = 0, kCheckFailed = 1, kInputError = 2, kCapError = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

CyclotomicMapping load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_mapping(ss.str());
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string tree_name(std::size_t n) { return "T" + std::to_string(n); }

std::string render_necklace(const ComponentNecklace& c) {
  std::string s = "[";
  for (std::size_t j = 0; j < c.seq.size(); ++j) s += (j ? "," : "") + tree_name(c.seq[j]);
  return s + "]";
}

struct Caps {
  unsigned sign_bits = kDefaultSignBits;
  u64 cycle_cap = kDefaultCycleCap;
  u64 walk_threshold = kDefaultWalkThreshold;
};

std::vector<ComponentNecklace> components(const PartitionTreeRegister& reg, const CyclotomicMapping& f,
                                          const std::vector<FieldCrlEntry>& crl, const Caps& caps) {
  std::vector<ComponentNecklace> items;
  for (const auto& e : crl) items.push_back(component_necklace(reg, f, e.rep, e.length, caps.walk_threshold));
  return aggregate(std::move(items));
}

json tree_json(const TreeDescriptionList& trees, std::size_t n) {
  return json{{"tree", tree_name(n)},
              {"description", render_tree(trees, n)},
              {"vertices", trees.vertex_count(n)},
              {"height", trees.height(n)}};
}

json blocks_json(const std::vector<RegisterBlock>& blocks) {
  json arr = json::array();
  for (const auto& b : blocks)
    arr.push_back(json{{"signs", render_signs(b.signs)}, {"size", b.size}, {"tree", tree_name(b.tree)}});
  return arr;
}

json register_json(const PartitionTreeRegister& reg, bool with_blocks) {
  json parts = json::array();
  for (std::size_t i = 0; i < reg.cosets.size(); ++i) {
    const auto& c = reg.cosets[i];
    json e{{"coset", i}, {"kind", c.periodic ? "periodic" : "transient"}};
    if (c.periodic) e["H"] = c.H;
    e["partition"] = render_partition(c.partition);
    if (with_blocks) {
      if (c.periodic) {
        json layers = json::array();
        for (unsigned h = 0; h <= c.H; ++h) layers.push_back(json{{"h", h}, {"blocks", blocks_json(c.by_height[h])}});
        e["layers"] = layers;
      } else {
        e["blocks"] = blocks_json(c.blocks);
      }
    }
    parts.push_back(e);
  }
  return parts;
}

json trees_json(const TreeDescriptionList& trees) {
  json arr = json::array();
  for (std::size_t n = 0; n < trees.size(); ++n) arr.push_back(tree_json(trees, n));
  return arr;
}

json field_json(const CyclotomicMapping& f) {
  json j{{"q", f.q()}, {"p", f.field.p}, {"n", f.field.n}};
  if (f.field.n > 1) j["poly"] = poly_to_string(f.field.modulus);
  j["d"] = f.d;
  return j;
}

void add_caps(CLI::App* sub, Caps& caps) {
  sub->add_option("--max-sign-bits", caps.sign_bits, "sign bits per register tuple")->capture_default_str();
  sub->add_option("--cycle-cap", caps.cycle_cap, "maximum number of listed cycles")->capture_default_str();
  sub->add_option("--walk-threshold", caps.walk_threshold, "cycle length up to which necklaces are walked")
      ->capture_default_str();
}

CyclotomicMapping random_mapping(std::mt19937_64& rng, u64 max_q, u64 max_d) {
  std::vector<u64> qs;
  for (u64 q = 2; q <= max_q; ++q)
    if (factorize(q).factors.size() == 1) qs.push_back(q);
  if (qs.empty()) throw InputError("--max-q must be at least 2");
  u64 q = qs[rng() % qs.size()];
  std::vector<u64> ds;
  for (u64 d = 1; d <= max_d && d < q; ++d)
    if ((q - 1) % d == 0) ds.push_back(d);
  u64 d = ds[rng() % ds.size()];
  auto fq = factorize(q);
  FieldContext F = make_field(fq.factors[0].p, fq.factors[0].v);
  std::vector<Branch> bs(d);
  for (auto& b : bs) {
    u64 a = rng() % q;  // 0 stands for the zero coefficient
    b.zero = a == 0;
    b.e = a == 0 ? 0 : a - 1;
    b.r = rng() % q;
  }
  return make_mapping(F, d, bs);
}

struct CheckReport {
  explicit CheckReport(std::string n) : name(std::move(n)) {}
  std::string name;
  bool ok = true;
  std::string witness;
  void fail(const std::string& w) {
    if (ok) witness = w;
    ok = false;
  }
};

// Points the tree of the zero element at a fresh tree.
void corrupt_register(PartitionTreeRegister& reg) {
  reg.zero_tree = reg.trees.insert({{reg.zero_tree, 1}});
}

void check_mapping(const CyclotomicMapping& f, const Caps& caps, u64 oracle_cap, bool corrupt,
                   std::vector<CheckReport>& reports) {
  const std::string tag = "q=" + std::to_string(f.q()) + " d=" + std::to_string(f.d);
  PartitionTreeRegister reg = build_register(f, caps.sign_bits);
  if (corrupt) corrupt_register(reg);
  BruteGraph g = brute_graph(f, oracle_cap);
  TreeDescriptionList list = reg.trees;
  auto idx = oracle_trees(g, list);
  for (Vertex v = 0; v < f.q(); ++v) {
    if (tree_of_vertex(reg, f, v) != idx[v]) {
      reports[0].fail(tag + " vertex " + vertex_name(v) + ": register " + tree_name(tree_of_vertex(reg, f, v)) +
                      ", brute force " + tree_name(idx[v]));
      break;
    }
  }
  auto crl = crl_list(f, caps.cycle_cap);
  std::map<u64, u64> census;
  for (const auto& e : crl) {
    ++census[e.length];
    Vertex w = e.rep;
    u64 steps = 0;
    do {
      w = g.succ[w];
      ++steps;
    } while (w != e.rep && steps <= e.length);
    if (!g.periodic[e.rep] || steps != e.length) {
      reports[1].fail(tag + " representative " + vertex_name(e.rep) + " does not close in " + std::to_string(e.length) +
                      " steps");
    }
  }
  if (census != oracle_crl(g)) reports[1].fail(tag + " cycle census differs");
  auto mine = components(reg, f, crl, caps);
  auto theirs = oracle_components(g, idx);
  if (mine != theirs) {
    std::string w = tag;
    for (const auto& c : theirs)
      if (std::find(mine.begin(), mine.end(), c) == mine.end()) {
        w += " missing " + render_necklace(c) + " length " + std::to_string(c.length);
        break;
      }
    reports[2].fail(w);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Functional graphs of generalized cyclotomic mappings of finite fields", "cyclograph"};
  app.require_subcommand(1);
  Caps caps;
  std::string path, path2, rep_text;
  u64 len = 0;

  auto* analyze = app.add_subcommand("analyze", "CRL list, partitions, trees and component necklaces");
  analyze->add_option("mapping", path, "mapping file")->required();
  add_caps(analyze, caps);
  u64 analyze_oracle_cap = kDefaultOracleCap;
  analyze->add_option("--oracle-cap", analyze_oracle_cap, "largest q for the brute-force fallback")
      ->capture_default_str();

  auto* crl_cmd = app.add_subcommand("crl", "cycle representatives with their lengths");
  crl_cmd->add_option("mapping", path, "mapping file")->required();
  add_caps(crl_cmd, caps);

  auto* reg_cmd = app.add_subcommand("register", "partition-tree register");
  reg_cmd->add_option("mapping", path, "mapping file")->required();
  add_caps(reg_cmd, caps);

  auto* comp = app.add_subcommand("component", "tree necklace of one connected component");
  comp->add_option("mapping", path, "mapping file")->required();
  comp->add_option("--rep", rep_text, "periodic representative, w^<k> or 0F")->required();
  comp->add_option("--len", len, "cycle length of the representative")->required();
  add_caps(comp, caps);

  IsoOptions iso_opt;
  bool no_oracle = false;
  auto* iso = app.add_subcommand("iso", "decide whether two functional graphs are isomorphic");
  iso->add_option("first", path, "mapping file")->required();
  iso->add_option("second", path2, "mapping file")->required();
  iso->add_option("--bounded-bits", iso_opt.bounded_bits, "sign-bit cap d(H+L) of the bounded method")
      ->capture_default_str();
  iso->add_option("--oracle-cap", iso_opt.oracle_cap, "largest q for the brute-force fallback")->capture_default_str();
  iso->add_flag("--no-oracle", no_oracle, "never fall back to brute force");

  u64 dot_cap = 4096;
  auto* dot = app.add_subcommand("dot", "Graphviz export of the functional graph");
  dot->add_option("mapping", path, "mapping file")->required();
  dot->add_option("--max-q", dot_cap, "largest field order to export")->capture_default_str();

  u64 random_n = 0, max_q = 512, seed = 1, oracle_cap = kDefaultOracleCap, max_d = 8;
  bool corrupt = false;
  auto* check = app.add_subcommand("oracle-check", "compare register, CRL and necklaces with brute force");
  check->add_option("mapping", path, "mapping file");
  check->add_option("--random", random_n, "number of random mappings");
  check->add_option("--max-q", max_q, "largest field order of random mappings")->capture_default_str();
  check->add_option("--max-d", max_d, "largest index of random mappings")->capture_default_str();
  check->add_option("--seed", seed, "random seed")->capture_default_str();
  check->add_option("--oracle-cap", oracle_cap, "largest q for brute force")->capture_default_str();
  check->add_flag("--corrupt-register", corrupt, "negative control: damage one register entry");
  add_caps(check, caps);

  unsigned K = 100;
  auto* mpe_cmd = app.add_subcommand("mpe-table", "max and average of mpe(2^v - 1) for v <= K");
  mpe_cmd->add_option("-K,--K", K, "largest exponent (at most 100)")->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (*analyze) {
      auto f = load(path);
      auto crl = crl_list(f, caps.cycle_cap);
      json doc{{"field", field_json(f)}};
      json c = json::array();
      for (const auto& e : crl) c.push_back(json{{"rep", vertex_name(e.rep)}, {"length", e.length}});
      doc["crl"] = c;
      std::optional<PartitionTreeRegister> reg;
      try {
        reg = build_register(f, caps.sign_bits);
      } catch (const CapExceeded& e) {
        if (f.q() > analyze_oracle_cap) throw;
        err << "register cap exceeded (" << e.what() << "); components from brute force\n";
      }
      TreeNecklaceList nl;
      if (reg) {
        doc["method"] = "register";
        doc["partitions"] = register_json(*reg, false);
        nl.trees = reg->trees;
        nl.entries = components(*reg, f, crl, caps);
      } else {
        doc["method"] = "oracle";
        nl = necklace_list_oracle(f, analyze_oracle_cap);
      }
      doc["trees"] = trees_json(nl.trees);
      json comps = json::array();
      for (const auto& nk : nl.entries)
        comps.push_back(json{{"necklace", render_necklace(nk)}, {"length", nk.length}, {"multiplicity", nk.multiplicity}});
      doc["components"] = comps;
      out << doc.dump(2) << '\n';
    } else if (*crl_cmd) {
      auto f = load(path);
      try {
        for (const auto& e : crl_list(f, caps.cycle_cap)) out << vertex_name(e.rep) << ' ' << e.length << '\n';
      } catch (const CapExceeded&) {
        // census only: cycle types of the composite coset maps, blown up by the coset cycle length
        auto ind = induce(f);
        CycleType total{{1, 1}};
        for (const auto& cyc : ind.cycles)
          for (auto [l, n] : cycle_type(cycle_map(ind, cyc))) total[l * cyc.size()] += n;
        out << "# more than " << caps.cycle_cap << " cycles; census only (length count)\n";
        for (auto [l, n] : total) out << l << ' ' << n << '\n';
      }
    } else if (*reg_cmd) {
      auto f = load(path);
      auto reg = build_register(f, caps.sign_bits);
      json doc{{"field", field_json(f)}, {"zero_tree", tree_name(reg.zero_tree)}};
      doc["partitions"] = register_json(reg, true);
      doc["trees"] = trees_json(reg.trees);
      out << doc.dump(2) << '\n';
    } else if (*comp) {
      auto f = load(path);
      Vertex v;
      try {
        v = parse_vertex(rep_text, f.q());
      } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
      }
      auto reg = build_register(f, caps.sign_bits);
      auto nk = component_necklace(reg, f, v, len, caps.walk_threshold);
      out << render_necklace(nk) << " length " << nk.length << '\n';
      std::vector<std::size_t> seen;
      for (auto n : nk.seq) {
        if (std::find(seen.begin(), seen.end(), n) != seen.end()) continue;
        seen.push_back(n);
        out << render_tree(reg.trees, n) << "  (" << reg.trees.vertex_count(n) << " vertices)\n";
      }
    } else if (*iso) {
      auto f1 = load(path), f2 = load(path2);
      iso_opt.allow_oracle = !no_oracle;
      out << render_verdict(iso_decide(f1, f2, iso_opt)) << '\n';
    } else if (*dot) {
      out << dot_export(load(path), dot_cap);
    } else if (*check) {
      if (path.empty() == (random_n == 0)) throw InputError("oracle-check takes either a mapping file or --random N");
      std::vector<CheckReport> reports{CheckReport("trees"), CheckReport("crl"), CheckReport("necklaces")};
      if (!path.empty()) {
        check_mapping(load(path), caps, oracle_cap, corrupt, reports);
      } else {
        std::mt19937_64 rng(seed);
        for (u64 k = 0; k < random_n; ++k) check_mapping(random_mapping(rng, max_q, max_d), caps, oracle_cap, corrupt, reports);
      }
      bool all = true;
      for (const auto& r : reports) {
        out << (r.ok ? "PASS " : "FAIL ") << r.name;
        if (!r.ok) out << ": " << r.witness;
        out << '\n';
        all = all && r.ok;
      }
      return all ? kOk : kCheckFailed;
    } else if (*mpe_cmd) {
      auto [mx, avg] = mpe_table(K);
      std::ostringstream os;
      os.setf(std::ios::fixed);
      os.precision(2);
      os << "K=" << K << " max=" << mx << " average=" << avg << '\n';
      out << os.str();
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << '\n';
    return kCapError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kOk;
}

}  // namespace cyclograph::cli
