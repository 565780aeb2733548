#include <algorithm>
#include <string>

#include "doctest.h"
#include "test_util.hpp"

using sftest::CmdResult;
using sftest::TempDir;
using sftest::run_cmd;

namespace {

const std::string kBin = SCHEMA_FORGE_BIN;

std::string q(const std::string& s) { return "'" + s + "'"; }

}  // namespace

TEST_CASE("ingest prints dataset statistics and writes the catalog cache") {
  TempDir dir("cli_ingest");
  std::string config = sftest::write_toy_fixture(dir);
  CmdResult r = run_cmd(kBin + " ingest --config " + q(config) + " --out " + q(dir.path()));
  CAPTURE(r.output);
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("json objects:    3") != std::string::npos);
  CHECK(r.output.find("rdf triples:     6") != std::string::npos);
  CHECK(r.output.find("relational rows: 3") != std::string::npos);
  CHECK(r.output.find("action space q:  8") != std::string::npos);

  std::string cache = sftest::read_file(dir.file("catalog.cache"));
  CHECK(cache.find("n=4") != std::string::npos);
  CHECK(cache.find("1|json|customer") != std::string::npos);
  CHECK(cache.find("21|relational|rate") != std::string::npos);
}

TEST_CASE("ingest --dump-dsm writes one csv per binary table") {
  TempDir dir("cli_dump");
  std::string config = sftest::write_toy_fixture(dir);
  std::string dump = dir.file("dsm");
  CmdResult r = run_cmd(kBin + " ingest --config " + q(config) + " --out " + q(dir.path()) +
                        " --dump-dsm " + q(dump));
  REQUIRE(r.exit_code == 0);
  CHECK(sftest::read_file(dump + "/1_customer.csv").rfind("entity,value\n", 0) == 0);
  CHECK(sftest::read_file(dump + "/array_string.csv").find("product2") != std::string::npos);
}

TEST_CASE("missing files exit 2 with the documented message") {
  TempDir dir("cli_missing");
  std::string absent = dir.file("nope.txt");
  CmdResult r = run_cmd(kBin + " ingest --config " + q(absent));
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("error: " + absent + " not found") != std::string::npos);

  // config exists but points at a missing source
  sftest::write_file(dir.file("c.txt"),
                     "json_path = ghost.jsonl\nthreshold1 = 10\nthreshold2 = 20\n");
  CmdResult r2 = run_cmd(kBin + " ingest --config " + q(dir.file("c.txt")));
  CHECK(r2.exit_code == 2);
  CHECK(r2.output.find("error: " + dir.file("ghost.jsonl") + " not found") != std::string::npos);
}

TEST_CASE("malformed sources exit 2") {
  TempDir dir("cli_malformed");
  sftest::write_file(dir.file("bad.jsonl"), "{broken\n");
  sftest::write_file(dir.file("c.txt"),
                     "json_path = bad.jsonl\nthreshold1 = 10\nthreshold2 = 20\n");
  CmdResult r = run_cmd(kBin + " ingest --config " + q(dir.file("c.txt")));
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("error:") != std::string::npos);
}

TEST_CASE("train writes the four artifacts and reruns byte-identically") {
  TempDir dir("cli_train");
  std::string config = sftest::write_toy_fixture(dir);
  std::string out1 = dir.file("run1");
  std::string out2 = dir.file("run2");
  std::string flags = " train --config " + q(config) +
                      " --episodes 6 --epsilon 0.2 --seed 7 --env analytic --out ";

  CmdResult r1 = run_cmd(kBin + flags + q(out1));
  CAPTURE(r1.output);
  REQUIRE(r1.exit_code == 0);
  CHECK(r1.output.find("best schema:") != std::string::npos);

  std::string conv = sftest::read_file(out1 + "/convergence.csv");
  CHECK(conv.rfind("episode,episode_best_cost_seconds,global_best_cost_seconds\n", 0) == 0);
  CHECK(std::count(conv.begin(), conv.end(), '\n') == 7);  // header + 6 episodes

  CHECK(!sftest::read_file(out1 + "/report.txt").empty());
  CHECK(sftest::read_file(out1 + "/best_schema.sql").find("CREATE TABLE") != std::string::npos);
  CHECK(sftest::read_file(out1 + "/qtables.txt").rfind("qta\n", 0) == 0);

  CmdResult r2 = run_cmd(kBin + flags + q(out2));
  REQUIRE(r2.exit_code == 0);
  CHECK(sftest::read_file(out1 + "/convergence.csv") ==
        sftest::read_file(out2 + "/convergence.csv"));
  CHECK(sftest::read_file(out1 + "/report.txt") == sftest::read_file(out2 + "/report.txt"));
  CHECK(sftest::read_file(out1 + "/qtables.txt") == sftest::read_file(out2 + "/qtables.txt"));
}

TEST_CASE("train --episodes 0 reports only the initial schema") {
  TempDir dir("cli_zero");
  std::string config = sftest::write_toy_fixture(dir);
  std::string out = dir.file("out");
  CmdResult r = run_cmd(kBin + " train --config " + q(config) + " --episodes 0 --out " + q(out));
  REQUIRE(r.exit_code == 0);
  std::string report = sftest::read_file(out + "/report.txt");
  CHECK(report.find("best_schema: 1 0 2 0 3 0 4 0 11 0 12 0 13 0 21\n") != std::string::npos);
  CHECK(report.find("episodes: 0") != std::string::npos);
  std::string conv = sftest::read_file(out + "/convergence.csv");
  CHECK(std::count(conv.begin(), conv.end(), '\n') == 1);  // header only
}

TEST_CASE("config-file training keys hold unless overridden by flags") {
  TempDir dir("cli_cfgkeys");
  std::string config = sftest::write_toy_fixture(dir, "episodes = 3\nseed = 9\n");
  std::string out = dir.file("out");
  CmdResult r = run_cmd(kBin + " train --config " + q(config) + " --out " + q(out));
  REQUIRE(r.exit_code == 0);
  std::string conv = sftest::read_file(out + "/convergence.csv");
  CHECK(std::count(conv.begin(), conv.end(), '\n') == 4);  // header + 3 episodes

  std::string out2 = dir.file("out2");
  CmdResult r2 =
      run_cmd(kBin + " train --config " + q(config) + " --episodes 1 --out " + q(out2));
  REQUIRE(r2.exit_code == 0);
  std::string conv2 = sftest::read_file(out2 + "/convergence.csv");
  CHECK(std::count(conv2.begin(), conv2.end(), '\n') == 2);
}

TEST_CASE("train over the sql executor environment works end to end") {
  TempDir dir("cli_sql");
  std::string config = sftest::write_toy_fixture(dir);
  std::string out = dir.file("out");
  CmdResult r = run_cmd("SCHEMAFORGE_DB_URL=sqlite::memory: " + kBin + " train --config " +
                        q(config) + " --episodes 2 --env sql --out " + q(out));
  CAPTURE(r.output);
  REQUIRE(r.exit_code == 0);
  CHECK(sftest::read_file(out + "/convergence.csv").size() > 0);
}

TEST_CASE("export-ddl validates the canonical string against the catalog") {
  TempDir dir("cli_export");
  std::string config = sftest::write_toy_fixture(dir);
  std::string out = dir.file("out");

  SUBCASE("a valid partition exports and loads") {
    CmdResult r = run_cmd(kBin + " export-ddl --schema '1 3 0 2 0 4 0 11 0 12 0 13 0 21'" +
                          " --config " + q(config) + " --out " + q(out));
    CAPTURE(r.output);
    REQUIRE(r.exit_code == 0);
    std::string ddl = sftest::read_file(out + "/schema.sql");
    CHECK(ddl.find("CREATE TABLE t1 (entity TEXT, a1 TEXT, a3 TEXT);") != std::string::npos);
    std::string load = sftest::read_file(out + "/load.sql");
    CHECK(load.find("INSERT INTO t1") != std::string::npos);
    CHECK(sftest::read_file(out + "/queries.sql").find("-- Q1") != std::string::npos);
  }
  SUBCASE("a non-partition exits 2") {
    CmdResult r = run_cmd(kBin + " export-ddl --schema '1 3 0 2' --config " + q(config) +
                          " --out " + q(out));
    CHECK(r.exit_code == 2);
  }
  SUBCASE("a malformed string exits 2") {
    CmdResult r = run_cmd(kBin + " export-ddl --schema '1 0 0 2' --config " + q(config) +
                          " --out " + q(out));
    CHECK(r.exit_code == 2);
    CmdResult r2 = run_cmd(kBin + " export-ddl --schema 'x y z' --config " + q(config) +
                           " --out " + q(out));
    CHECK(r2.exit_code == 2);
  }
}

TEST_CASE("usage errors exit 2, help exits 0") {
  CHECK(run_cmd(kBin + " train").exit_code == 2);           // missing --config
  CHECK(run_cmd(kBin + " frobnicate").exit_code == 2);      // unknown subcommand
  CHECK(run_cmd(kBin).exit_code == 2);                      // subcommand required
  CHECK(run_cmd(kBin + " --help").exit_code == 0);
  CHECK(run_cmd(kBin + " train --help").exit_code == 0);
  TempDir dir("cli_badflag");
  std::string config = sftest::write_toy_fixture(dir);
  CHECK(run_cmd(kBin + " train --config " + q(config) + " --epsilon 3").exit_code == 2);
}
