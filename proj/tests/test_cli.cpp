#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  args.insert(args.begin(), "cyclograph");
  std::ostringstream out, err;
  int code = cyclograph::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& body) {
  auto p = std::filesystem::temp_directory_path() / ("cyclograph_test_" + name);
  std::ofstream(p) << body;
  return p.string();
}

const std::string kExample = CYCLOGRAPH_DATA_DIR "/f256_d5.map";

}  // namespace

TEST_CASE("analyze lists the four component classes of the F_256 example") {
  auto r = call({"analyze", kExample});
  REQUIRE(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["crl"].size() == 4);
  REQUIRE(doc["components"].size() == 4);
  std::map<std::string, std::uint64_t> vertices;
  for (const auto& t : doc["trees"]) vertices[t["tree"]] = t["vertices"];
  std::multiset<std::vector<std::uint64_t>> got;
  for (const auto& c : doc["components"]) {
    std::string nk = c["necklace"];
    std::vector<std::uint64_t> sizes;
    std::stringstream ss(nk.substr(1, nk.size() - 2));
    for (std::string t; std::getline(ss, t, ',');) sizes.push_back(vertices[t]);
    sizes.push_back(c["length"]);
    got.insert(sizes);
  }
  std::multiset<std::vector<std::uint64_t>> want{{1, 1}, {6, 1}, {6, 8}, {6, 6, 6, 6, 23, 91, 6, 57, 8}};
  CHECK(got == want);
}

TEST_CASE("component and crl verbs") {
  auto c = call({"crl", kExample});
  CHECK(c.code == 0);
  CHECK(c.out == "0F 1\nw^185 8\nw^110 8\nw^95 1\n");
  auto census = call({"crl", "--cycle-cap", "2", kExample});
  CHECK(census.code == 0);
  CHECK(census.out.find("1 2\n8 2\n") != std::string::npos);
  auto k = call({"component", kExample, "--rep", "w^185", "--len", "8"});
  CHECK(k.code == 0);
  CHECK(k.out.rfind("[T6,T6,T6,T6,T9,T8,T6,T7] length 8\n", 0) == 0);
  CHECK(call({"component", kExample, "--rep", "x^3", "--len", "8"}).code == 2);
}

TEST_CASE("register verb reports block sizes per layer") {
  auto r = call({"register", kExample});
  REQUIRE(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  std::uint64_t total = 0;
  for (const auto& layer : doc["partitions"][0]["layers"])
    for (const auto& b : layer["blocks"]) total += b["size"].get<std::uint64_t>();
  CHECK(total == 51);
}

TEST_CASE("iso verb") {
  CHECK(call({"iso", kExample, kExample}).out == "isomorphic: yes (method: oracle)\n");
  CHECK(call({"iso", "--no-oracle", kExample, kExample}).out == "isomorphic: undecided (method: bounded-L)\n");
  auto id = write_temp("id.map", "q=257\nd=1\nbranch 0: a=w^0, r=1\n");
  auto sq = write_temp("sq.map", "q=257\nd=1\nbranch 0: a=w^0, r=2\n");
  CHECK(call({"iso", id, sq}).out == "isomorphic: no (method: monomial)\n");
  auto other = write_temp("q7.map", "q=7\nd=1\nbranch 0: a=w^0, r=1\n");
  CHECK(call({"iso", id, other}).code == 2);
}

TEST_CASE("input errors exit with code 2 and name the line") {
  auto bad = write_temp("bad.map", "q=256\nd=7\n");
  auto r = call({"analyze", bad});
  CHECK(r.code == 2);
  CHECK(r.err.find("line 2") != std::string::npos);
  CHECK(call({"analyze", "/nonexistent/file.map"}).code == 2);
  CHECK(call({"analyze"}).code == 2);
  CHECK(call({}).code == 2);
  CHECK(call({"mpe-table", "-K", "101"}).code == 2);
}

TEST_CASE("cap violations exit with code 3") {
  CHECK(call({"dot", "--max-q", "100", kExample}).code == 3);
  CHECK(call({"analyze", "--max-sign-bits", "4", "--oracle-cap", "100", kExample}).code == 3);
  CHECK(call({"analyze", "--cycle-cap", "2", kExample}).code == 3);
}

TEST_CASE("analyze falls back to brute force when the register is too wide") {
  auto r = call({"analyze", "--max-sign-bits", "4", kExample});
  REQUIRE(r.code == 0);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["method"] == "oracle");
  CHECK(doc["components"].size() == 4);
  CHECK(r.err.find("register cap exceeded") != std::string::npos);
  CHECK(nlohmann::json::parse(call({"analyze", kExample}).out)["method"] == "register");
}

TEST_CASE("dot export") {
  auto tiny = write_temp("tiny.map", "q=3\nd=1\nbranch 0: a=w^0, r=2\n");
  auto r = call({"dot", tiny});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("digraph cyclograph {", 0) == 0);
  CHECK(r.out.find("\"w^1\" -> \"w^0\"") != std::string::npos);
}

TEST_CASE("oracle-check passes and catches a damaged register") {
  auto ok = call({"oracle-check", kExample});
  CHECK(ok.code == 0);
  CHECK(ok.out == "PASS trees\nPASS crl\nPASS necklaces\n");
  auto bad = call({"oracle-check", "--corrupt-register", kExample});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("FAIL trees: q=256 d=5 vertex 0F") != std::string::npos);
  auto rnd = call({"oracle-check", "--random", "25", "--max-q", "200", "--seed", "3"});
  CHECK(rnd.code == 0);
  CHECK(rnd.out == "PASS trees\nPASS crl\nPASS necklaces\n");
  CHECK(call({"oracle-check"}).code == 2);
}

TEST_CASE("mpe table") {
  auto r = call({"mpe-table", "-K", "10"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("K=10 max=", 0) == 0);
}
