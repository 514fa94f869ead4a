#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ktower/cli.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  const int code = ktower::cli::run(args, in, out, err);
  return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args, const std::string& stdin_text = "", int expected = 0) {
  args.insert(args.begin(), {"--format", "json"});
  const Run r = run(args, stdin_text);
  REQUIRE_MESSAGE(r.code == expected, r.err);
  return json::parse(r.out);
}

const char* const kExactZ3 = R"({"maps": [
  {"source": {"free_rank": 0, "torsion": []}, "target": {"free_rank": 1, "torsion": []},
   "matrix": {"rows": 1, "cols": 0, "entries": [[]]}},
  {"source": {"free_rank": 1, "torsion": []}, "target": {"free_rank": 1, "torsion": []},
   "matrix": {"rows": 1, "cols": 1, "entries": [["3"]]}},
  {"source": {"free_rank": 1, "torsion": []}, "target": {"free_rank": 0, "torsion": ["3"]},
   "matrix": {"rows": 1, "cols": 1, "entries": [["1"]]}},
  {"source": {"free_rank": 0, "torsion": ["3"]}, "target": {"free_rank": 0, "torsion": []},
   "matrix": {"rows": 0, "cols": 1, "entries": []}}
]})";

}  // namespace

TEST_CASE("ktwist json output") {
  const json j = run_json({"ktwist", "--space", "su", "--n", "2", "--level", "2"});
  CHECK(j["k_total"]["free_rank"] == 0);
  CHECK(j["k_total"]["torsion"] == json::array({"2", "2"}));
  CHECK_FALSE(j["provenance"].empty());
}

TEST_CASE("exact command") {
  const Run r = run({"exact"}, kExactZ3);
  CHECK(r.code == 0);
  CHECK(r.out.find("exact at all nodes") != std::string::npos);

  json bad = json::parse(kExactZ3);
  bad["maps"][2]["matrix"]["entries"][0][0] = "0";
  const Run f = run({"exact"}, bad.dump());
  CHECK(f.code == 2);
  CHECK(f.out.find("fails at node 2") != std::string::npos);
}

TEST_CASE("tower commands") {
  const json lim1 = run_json({"tower", "lim1", "--builtin", "z-times-2", "--bound", "10"});
  CHECK(lim1["verdict"]["kind"] == "NonzeroUncomputed");
  CHECK(lim1["verdict"]["witness_level"] == 0);

  const json lim = run_json({"tower", "lim", "--builtin", "p-adic", "--param", "p=3", "--bound", "12"});
  CHECK(lim["verdict"]["kind"] == "ProfiniteNontrivial");

  const json colim = run_json({"tower", "colim", "--builtin", "su-khom", "--param", "level=2"});
  CHECK(colim["verdict"]["kind"] == "Trivial");

  const json milnor = run_json({"tower", "milnor", "--builtin", "su-k", "--param", "level=3"});
  CHECK(milnor["degrees"]["even"]["kind"] == "Trivial");
  CHECK(milnor["degrees"]["odd"]["kind"] == "Trivial");

  const json ml = run_json({"tower", "ml", "--builtin", "z-times-2", "--bound", "8"});
  CHECK(ml["verdict"]["kind"] == "FailedAt");

  CHECK(run({"tower", "colim", "--builtin", "pruefer", "--param", "p=2", "--bound", "8"}).code == 3);
  CHECK(run({"tower", "lim", "--builtin", "nonsense"}).code == 1);
}

TEST_CASE("prefix towers from a payload") {
  const std::string payload = R"({"prefix": [{"free_rank": 0, "torsion": ["4"]}, {"free_rank": 0, "torsion": ["2"]}],
    "maps": [{"source": {"free_rank": 0, "torsion": ["4"]}, "target": {"free_rank": 0, "torsion": ["2"]},
              "matrix": {"rows": 1, "cols": 1, "entries": [["1"]]}}],
    "tail": "constant"})";
  const json colim = run_json({"tower", "colim"}, payload);
  CHECK(colim["verdict"]["kind"] == "ExactGroup");
  CHECK(colim["verdict"]["group"]["torsion"] == json::array({"2"}));

  const std::string finite = R"({"prefix": [{"free_rank": 0, "torsion": ["2"]}, {"free_rank": 0, "torsion": []}],
    "tail": "finite"})";
  CHECK(run_json({"tower", "lim"}, finite)["verdict"]["kind"] == "Trivial");

  const Run bad = run({"tower", "lim"}, R"({"prefix": [], "tail": "finite"})");
  CHECK(bad.code == 1);
  CHECK(bad.err.find("tower.prefix") != std::string::npos);
}

TEST_CASE("grid rows") {
  const json g = run_json({"grid", "--n-max", "4", "--level-max", "3"});
  REQUIRE(g["rows"].size() == 3);
  CHECK(g["rows"][2]["values"] == json::array({"3", "3", "1"}));
  CHECK(g["rows"][2]["first_one"] == 4);
  CHECK(g["rows"][0]["first_one"] == 2);
  for (const auto& row : g["rows"]) CHECK(row["divisibility_ok"] == true);

  const json u = run_json({"--bound", "10", "grid", "--n-max", "4", "--level-max", "16"});
  CHECK(u["rows"][15]["first_one"] == "unproven@10");

  const json t = run_json({"ktwist", "--table", "4", "3"});
  CHECK(t == g);
}

TEST_CASE("hp and product commands") {
  const json hp = run_json({"hp", "--space", "su-inf", "--truncate", "4"});
  CHECK(hp["levels"].size() == 3);
  CHECK(hp["lim1"]["kind"] == "Zero");
  const json tw = run_json({"hp", "--twisted", "--space", "su", "--n", "3", "--level", "5"});
  CHECK(tw["twisted_hp"]["even"] == 0);
  CHECK(tw["twisted_hp"]["odd"] == 0);

  const json p = run_json({"--bound", "30", "product", "--n", "10"});
  CHECK(p["all_ones_order"] == "2520");
  CHECK(p["product"] == p["sum"]);
  CHECK_FALSE(p["torsion_witness"].is_null());
}

TEST_CASE("chern command") {
  CHECK(run({"chern", "--space", "su", "--n", "4", "--level", "6"}).code == 0);
  const Run bad = run({"chern"}, R"({"k_total": {"free_rank": 1, "torsion": []}, "hp_dim": 0})");
  CHECK(bad.code == 2);
}

TEST_CASE("exit codes for invalid input and unproven verdicts") {
  CHECK(run({"ktwist", "--space", "su", "--n", "1", "--level", "2"}).code == 1);
  CHECK(run({"ktwist", "--space", "su", "--n", "3", "--level", "0"}).code == 1);
  CHECK(run({"--bound", "1", "grid"}).code == 1);
  CHECK(run({"ktwist", "--unknown-flag"}).code == 1);
  CHECK(run({"snf"}, "{not json").code == 1);
  const Run field = run({"snf"}, R"({"rows": 2, "cols": 1, "entries": [["1"], ["x"]]})");
  CHECK(field.code == 1);
  CHECK(field.err.find("matrix.entries[1][0]") != std::string::npos);
  CHECK(run({"--bound", "10", "ktwist", "--space", "su-inf", "--level", "16"}).code == 3);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("json output is deterministic and round-trips") {
  const std::vector<std::vector<std::string>> commands{
      {"--format", "json", "ktwist", "--space", "su-inf", "--level", "5"},
      {"--format", "json", "ktwist", "--space", "s3-union", "--homology"},
      {"--format", "json", "grid", "--n-max", "6", "--level-max", "6"},
      {"--format", "json", "--bound", "12", "tower", "lim", "--builtin", "product"},
      {"--format", "json", "hp", "--space", "su", "--n", "5"}};
  for (const auto& args : commands) {
    const Run a = run(args), b = run(args);
    CHECK(a.out == b.out);
    const json parsed = json::parse(a.out);
    CHECK(parsed.dump(2) + "\n" == a.out);
  }
  const Run snf = run({"--format", "json", "snf"}, R"({"rows": 2, "cols": 2, "entries": [[2, 4], [6, 8]]})");
  const json d = json::parse(snf.out);
  CHECK(d["factors"] == json::array({"2", "4"}));
  // The written matrix parses back to the same factors.
  const Run again = run({"--format", "json", "snf"}, d["s"].dump());
  CHECK(json::parse(again.out)["factors"] == d["factors"]);
}

TEST_CASE("output file") {
  const std::string path = "ktower_cli_test_output.json";
  CHECK(run({"--format", "json", "--output", path, "ktwist", "--space", "s3", "--twist", "5"}).code == 0);
  std::ifstream f(path);
  const json j = json::parse(f);
  CHECK(j["k_odd"]["torsion"] == json::array({"5"}));
  std::remove(path.c_str());
}
