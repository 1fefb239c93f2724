#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using satbench::cli::run;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "satbench");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Workspace {
  fs::path root;
  Workspace() {
    root = fs::temp_directory_path() / ("satbench-cli-" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root);
  }
  ~Workspace() { fs::remove_all(root); }
  std::string operator/(const std::string& name) const { return (root / name).string(); }
};

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) lines.push_back(l);
  return lines;
}

std::string column(const std::string& header, const std::string& row, const std::string& name) {
  std::vector<std::string> h, r;
  std::stringstream hs(header), rs(row);
  for (std::string c; std::getline(hs, c, ',');) h.push_back(c);
  for (std::string c; std::getline(rs, c, ',');) r.push_back(c);
  while (r.size() < h.size()) r.push_back("");
  for (std::size_t i = 0; i < h.size(); ++i)
    if (h[i] == name) return r[i];
  FAIL("no column " << name);
  return {};
}

}  // namespace

TEST_CASE("gen writes one DIMACS file per formula plus a manifest") {
  Workspace w;
  const Result r = invoke({"gen", "--k", "3", "--n", "75", "--alpha", "4.0", "--count", "320", "--seed", "1",
                           "--out-dir", w / "g"});
  REQUIRE(r.code == 0);
  std::size_t cnf = 0;
  for (const auto& e : fs::directory_iterator(w / "g")) cnf += e.path().extension() == ".cnf";
  CHECK(cnf == 320);
  const auto m = nlohmann::json::parse(slurp(w / "g/manifest.json"));
  CHECK(m.at("stage") == "gen");
  CHECK(m.at("instances").size() == 320);
  const auto& first = m.at("instances").at(0);
  for (const char* key : {"file", "alpha", "seed", "label", "decisions", "conflicts"}) CHECK(first.contains(key));
  for (const char* key : {"command", "config", "seed", "version", "inputs", "outputs", "started", "finished"})
    CHECK(m.at("run").contains(key));
  CHECK(slurp(w / "g/a4.00-00000.cnf").rfind("p cnf 75 300\n", 0) == 0);
}

TEST_CASE("gen refuses an existing directory and is reproducible") {
  Workspace w;
  const std::vector<std::string> args = {"gen", "--n", "20", "--alpha", "3.5", "--alpha", "5", "--count", "4", "--seed", "9"};
  auto with = [&](std::string dir) {
    auto a = args;
    a.push_back("--out-dir");
    a.push_back(std::move(dir));
    return a;
  };
  REQUIRE(invoke(with(w / "a")).code == 0);
  const std::string before = slurp(w / "a/a5.00-00003.cnf");
  const Result again = invoke(with(w / "a"));
  CHECK(again.code == 2);
  CHECK(again.err.find("--force") != std::string::npos);
  CHECK(slurp(w / "a/a5.00-00003.cnf") == before);
  REQUIRE(invoke(with(w / "b")).code == 0);
  for (const auto& e : fs::directory_iterator(w / "a"))
    if (e.path().extension() == ".cnf") CHECK(slurp(e.path()) == slurp(fs::path(w / "b") / e.path().filename()));
}

TEST_CASE("usage errors exit with 1") {
  CHECK(invoke({}).code == 1);
  CHECK(invoke({"gen", "--n", "10"}).code == 1);
  CHECK(invoke({"frobnicate"}).code == 1);
  CHECK(invoke({"report", "--figure", "nope", "--in-dir", "x", "--out-dir", "y"}).code == 1);
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("a missing upstream manifest names the expected stage") {
  Workspace w;
  fs::create_directories(w / "empty");
  const Result r = invoke({"reduce", "--in-dir", w / "empty", "--out-dir", w / "r"});
  CHECK(r.code == 2);
  CHECK(r.err.find("'pair'") != std::string::npos);
  const Result s = invoke({"score", "--in-dir", w / "empty", "--out-dir", w / "s"});
  CHECK(s.code == 2);
  CHECK(s.err.find("'eval'") != std::string::npos);
}

TEST_CASE("solve prints a solver-style answer for one file") {
  Workspace w;
  std::ofstream(w / "f.cnf") << "p cnf 2 2\n1 2 0\n-1 0\n";
  const Result r = invoke({"solve", "--file", w / "f.cnf"});
  CHECK(r.code == 0);
  CHECK(r.out.find("s SATISFIABLE") != std::string::npos);
  CHECK(r.out.find("v -1 2 0") != std::string::npos);
  std::ofstream(w / "bad.cnf") << "p cnf 2 1\n3 0\n";
  CHECK(invoke({"solve", "--file", w / "bad.cnf"}).code == 2);
}

TEST_CASE("phase report has the documented columns") {
  Workspace w;
  REQUIRE(invoke({"gen", "--n", "30", "--alpha", "3.5", "--alpha", "4.26", "--alpha", "5.5", "--count", "10",
                  "--out-dir", w / "g"})
              .code == 0);
  REQUIRE(invoke({"solve", "--in-dir", w / "g", "--out-dir", w / "s"}).code == 0);
  REQUIRE(invoke({"report", "--figure", "phase", "--in-dir", w / "s", "--out-dir", w / "rep"}).code == 0);
  const auto lines = csv_lines(slurp(w / "rep/phase.csv"));
  REQUIRE(lines.size() == 4);
  CHECK(lines[0].find("alpha,") == 0);
  CHECK(lines[0].find("sat_fraction") != std::string::npos);
  CHECK(lines[0].find("median_decisions") != std::string::npos);
  CHECK(fs::exists(w / "rep/phase.manifest.json"));
}

TEST_CASE("pipeline from pairs to scores and agreement") {
  Workspace w;
  REQUIRE(invoke({"pair", "--n", "5", "--count", "12", "--seed", "2", "--out-dir", w / "p"}).code == 0);
  REQUIRE(invoke({"reduce", "--in-dir", w / "p", "--out-dir", w / "r"}).code == 0);
  REQUIRE(invoke({"eval", "--in-dir", w / "r", "--backend", "scripted:oracle", "--out-dir", w / "eo"}).code == 0);
  REQUIRE(invoke({"eval", "--in-dir", w / "r", "--backend", "scripted:always-sat", "--out-dir", w / "es"}).code == 0);
  REQUIRE(invoke({"score", "--in-dir", w / "eo", "--in-dir", w / "es", "--out-dir", w / "sc"}).code == 0);

  const auto lines = csv_lines(slurp(w / "sc/scores.csv"));
  REQUIRE(lines.size() == 7);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string model = column(lines[0], lines[i], "model");
    if (model == "scripted:oracle") {
      CHECK(column(lines[0], lines[i], "adr") == "1");
      CHECK(column(lines[0], lines[i], "accuracy") == "1");
    } else {
      CHECK(column(lines[0], lines[i], "adr") == "0");
      CHECK(column(lines[0], lines[i], "accuracy") == "0.5");
      CHECK(column(lines[0], lines[i], "recall_sat") == "1");
      CHECK(column(lines[0], lines[i], "recall_unsat") == "0");
      CHECK(column(lines[0], lines[i], "mcc") == "");
      CHECK(column(lines[0], lines[i], "undefined_reasons").find("mcc:") != std::string::npos);
    }
  }

  REQUIRE(invoke({"report", "--figure", "agreement", "--in-dir", w / "eo", "--out-dir", w / "rep"}).code == 0);
  const auto agree = csv_lines(slurp(w / "rep/agreement.csv"));
  REQUIRE(agree.size() == 3);
  CHECK(column(agree[0], agree[1], "agreement") == "1");
  CHECK(column(agree[0], agree[2], "adr_b") == "1");

  for (const char* fig : {"metrics", "paired"})
    CHECK(invoke({"report", "--figure", fig, "--in-dir", w / "eo", "--out-dir", w / "rep"}).code == 0);
  CHECK(invoke({"report", "--figure", "paired", "--in-dir", w / "eo", "--out-dir", w / "rep"}).code == 2);
}

TEST_CASE("2-SAT pairs flow into the 2sat report") {
  Workspace w;
  REQUIRE(invoke({"pair", "--k", "2", "--n", "10", "--count", "6", "--out-dir", w / "p"}).code == 0);
  REQUIRE(invoke({"reduce", "--in-dir", w / "p", "--target", "cnf", "--out-dir", w / "r"}).code == 0);
  REQUIRE(invoke({"eval", "--in-dir", w / "r", "--out-dir", w / "e"}).code == 0);
  REQUIRE(invoke({"report", "--figure", "2sat", "--in-dir", w / "e", "--out-dir", w / "rep"}).code == 0);
  const auto lines = csv_lines(slurp(w / "rep/2sat.csv"));
  REQUIRE(lines.size() == 2);
  CHECK(column(lines[0], lines[1], "adr") == "1");
  CHECK(column(lines[0], lines[1], "pairs") == "6");
}

TEST_CASE("timeouts show up as completion rate and unknown backends exit with 3") {
  Workspace w;
  REQUIRE(invoke({"pair", "--n", "5", "--count", "10", "--out-dir", w / "p"}).code == 0);
  REQUIRE(invoke({"reduce", "--in-dir", w / "p", "--representation", "cnf", "--out-dir", w / "r"}).code == 0);
  REQUIRE(invoke({"eval", "--in-dir", w / "r", "--backend", "scripted:timeout20", "--max-retries", "0", "--out-dir",
                  w / "e"})
              .code == 0);
  const auto m = nlohmann::json::parse(slurp(w / "e/manifest.json"));
  CHECK(m.at("completion").at(0).at("completion_rate").get<double>() == doctest::Approx(0.8));
  CHECK(invoke({"eval", "--in-dir", w / "r", "--backend", "mystery", "--out-dir", w / "x"}).code == 3);
  CHECK(invoke({"eval", "--in-dir", w / "r", "--backend", "scripted:timeout100", "--out-dir", w / "y"}).code == 3);
}

TEST_CASE("config file supplies defaults that flags override") {
  Workspace w;
  std::ofstream(w / "cfg.toml") << "[gen]\nn = 12\nalpha = [3.0]\ncount = 3\nseed = 5\n";
  REQUIRE(invoke({"--config", w / "cfg.toml", "gen", "--count", "2", "--out-dir", w / "g"}).code == 0);
  const auto m = nlohmann::json::parse(slurp(w / "g/manifest.json"));
  CHECK(m.at("instances").size() == 2);
  CHECK(m.at("n") == 12);
  CHECK(m.at("run").at("seed") == 5);
}
