#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "esslab/cli.hpp"
#include "esslab/errors.hpp"
#include "esslab/report.hpp"
#include "gen.hpp"

using namespace esslab;
namespace fs = std::filesystem;

namespace {

std::string model(const char* name) { return std::string(ESSLAB_MODELS_DIR) + "/" + name; }

struct Captured {
  int code = 0;
  std::string out, err;
};

Captured run(cli::RunConfig cfg) {
  std::ostringstream out, err;
  Captured c;
  c.code = cli::run(cfg, out, err);
  c.out = out.str();
  c.err = err.str();
  return c;
}

Captured run_argv(std::vector<std::string> args) {
  std::vector<char*> argv;
  args.insert(args.begin(), "esslab");
  for (auto& a : args) argv.push_back(a.data());
  Captured c;
  c.code = cli::main(static_cast<int>(argv.size()), argv.data());
  return c;
}

fs::path temp_file(const std::string& name, const std::string& text) {
  const fs::path p = fs::temp_directory_path() / ("esslab_test_" + name);
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("number lists") {
  CHECK(cli::parse_number_list("0,0.5,1") == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(cli::parse_number_list("0:1:3") == std::vector<double>{0.0, 0.5, 1.0});
  CHECK_THROWS_AS(cli::parse_number_list("1,x"), InvalidInput);
  CHECK_THROWS_AS(cli::parse_number_list("0:1"), InvalidInput);
}

TEST_CASE("property: CSV rows round-trip through JSON losslessly") {
  testing::Gen gen(81);
  for (int trial = 0; trial < 50; ++trial) {
    Table t;
    t.columns = {"a", "b", "c", "d"};
    for (int i = 0; i < 20; ++i) {
      double x = std::ldexp(gen.uniform(-1.0, 1.0), gen.integer(-1000, 1000));
      if (i == 3) x = std::numeric_limits<double>::infinity();
      if (i == 4) x = -0.0;
      t.add_row({x, static_cast<std::int64_t>(gen.integer(-5, 5)), gen.coin(), std::string(gen.coin() ? "p,q" : "dirichlet")});
    }
    t.set_meta("verdict", true);
    const Table from_csv = parse_csv(to_csv(t));
    const Table from_json = parse_json(to_json(from_csv));
    CHECK(rows_equal(t, from_csv));
    CHECK(rows_equal(from_csv, from_json));
    CHECK(to_csv(from_json) == to_csv(t));
    CHECK(parse_json(to_json(t)).meta.size() == 1);
  }
}

TEST_CASE("sweep on R^3 certifies every value") {
  cli::RunConfig cfg;
  cfg.subcommand = "sweep";
  cfg.model_path = model("euclidean3.json");
  cfg.lambdas = {0.0, 0.5, 1.0, 2.0};
  const Captured c = run(cfg);
  CHECK(c.code == 0);
  const Table t = parse_csv(c.out);
  CHECK(t.columns == std::vector<std::string>{"lambda", "p", "quotient", "defect_norm", "phi_norm", "R_or_l",
                                              "x_or_b", "y_or_a", "certified"});
  REQUIRE(t.rows.size() == 4);
  for (const auto& row : t.rows) CHECK(std::get<bool>(row.back()));
}

TEST_CASE("negative controls exit with 2") {
  cli::RunConfig cfg;
  cfg.subcommand = "volume";
  cfg.model_path = model("cusp.json");
  cfg.check = "growth";
  cfg.eps = 0.1;
  cfg.format = "json";
  const Captured c = run(cfg);
  CHECK(c.code == 2);
  const Table t = parse_json(c.out);
  CHECK(std::get<std::string>(t.meta.at(0).second) == "violated");

  cli::RunConfig h;
  h.subcommand = "sweep";
  h.model_path = model("hyperbolic3.json");
  h.lambdas = {0.5};
  h.p = 2;
  CHECK(run(h).code == 2);
}

TEST_CASE("oracle on R^3 fills the window") {
  cli::RunConfig cfg;
  cfg.subcommand = "oracle";
  cfg.model_path = model("euclidean3.json");
  cfg.format = "json";
  const Captured c = run(cfg);
  CHECK(c.code == 0);
  const Table t = parse_json(c.out);
  CHECK(t.columns == std::vector<std::string>{"L", "bc", "index", "eigenvalue"});
  bool fills = false;
  for (const auto& [k, v] : t.meta) {
    if (k == "fills") fills = std::get<bool>(v);
  }
  CHECK(fills);
}

TEST_CASE("identical configs give byte-identical output") {
  cli::RunConfig cfg;
  cfg.subcommand = "volume";
  cfg.model_path = model("gaussian3.json");
  cfg.check = "lemma3";
  cfg.seed = 99;
  const Captured a = run(cfg), b = run(cfg);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  cfg.seed = 100;
  CHECK(run(cfg).out != a.out);

  cli::RunConfig s;
  s.subcommand = "sweep";
  s.model_path = model("euclidean3.json");
  s.lambdas = {0.0, 1.0, 4.0};
  s.threads = 1;
  const std::string one = run(s).out;
  s.threads = 3;
  CHECK(run(s).out == one);
}

TEST_CASE("every subcommand produces parseable output") {
  const std::vector<std::pair<std::string, std::string>> cases{
      {"model", "cylinder4.json"}, {"smooth", "glued_cone.json"}, {"weyl", "gaussian3.json"}, {"ode", ""}};
  for (const auto& [sub, file] : cases) {
    cli::RunConfig cfg;
    cfg.subcommand = sub;
    if (!file.empty()) cfg.model_path = model(file.c_str());
    const Captured c = run(cfg);
    INFO(sub << ": " << c.err);
    CHECK(c.code == 0);
    CHECK(parse_csv(c.out).rows.size() > 0);
  }
}

TEST_CASE("errors exit with 1 and a diagnostic") {
  cli::RunConfig cfg;
  cfg.subcommand = "smooth";
  cfg.model_path = temp_file("bad.json", "{\"kind\": \"euclidean\", \"n\": 3, \"r_max\": 10, \"colour\": 1}").string();
  Captured c = run(cfg);
  CHECK(c.code == 1);
  CHECK(c.err.find("colour") != std::string::npos);

  cfg.model_path = temp_file("syntax.json", "{\"kind\": \"euclidean\",\n\"n\": }").string();
  c = run(cfg);
  CHECK(c.code == 1);
  CHECK(c.err.find("line 2") != std::string::npos);

  cli::RunConfig w;
  w.subcommand = "sweep";
  w.model_path = model("euclidean3.json");
  w.p = 3;
  CHECK(run(w).code == 1);

  cli::RunConfig v;
  v.subcommand = "volume";
  v.model_path = model("euclidean3.json");
  v.check = "soliton-id";
  CHECK(run(v).code == 1);
}

TEST_CASE("argument parsing") {
  CHECK(run_argv({"oracle", "--model", model("euclidean3.json"), "--colour", "red"}).code == 1);
  CHECK(run_argv({"frobnicate"}).code == 1);
  const fs::path out = fs::temp_directory_path() / "esslab_test_out.csv";
  CHECK(run_argv({"sweep", "--model", model("euclidean3.json"), "--lambda", "0,1", "--p", "1", "--eps", "0.05",
                  "--mu", "10", "--out", out.string()})
            .code == 0);
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(parse_csv(ss.str()).rows.size() == 2);
}
