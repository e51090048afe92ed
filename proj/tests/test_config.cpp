#include "doctest.h"

#include <stdexcept>

#include "netsim/config.hpp"

using namespace netsim;

TEST_SUITE_BEGIN("config");

TEST_CASE("parses keys, comments and whitespace") {
  const RunConfig cfg = RunConfig::parse_text(
      "# experiment setup\n"
      "graph.kind = torus\n"
      "graph.width=30   # inline comment\n"
      "\n"
      "  run.t_end =  1.0 \n"
      "run.h = 0.005, 0.01,0.02\n"
      "seed = 42\n");
  CHECK(cfg.get_string("graph.kind") == "torus");
  CHECK(cfg.get_u64("graph.width") == 30);
  CHECK(cfg.get_double("run.t_end") == doctest::Approx(1.0));
  CHECK(cfg.get_u64("seed") == 42);
  const auto hs = cfg.get_double_list("run.h");
  REQUIRE(hs.size() == 3);
  CHECK(hs[0] == doctest::Approx(0.005));
  CHECK(hs[2] == doctest::Approx(0.02));
}

TEST_CASE("rejects unknown keys and malformed lines") {
  CHECK_THROWS_AS(RunConfig::parse_text("run.hh = 3\n"), std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::parse_text("not a key value line\n"),
                  std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::parse_text("seed =\n"), std::invalid_argument);
}

TEST_CASE("number parsing is strict") {
  const RunConfig cfg = RunConfig::parse_text("process.beta = 1.25x\nseed = 1\n");
  CHECK_THROWS_AS(cfg.get_double("process.beta"), std::invalid_argument);
  CHECK_THROWS_AS(RunConfig::parse_text("seed = 12\n").get_double("run.t_end"),
                  std::invalid_argument);  // missing key
  CHECK(RunConfig::parse_text("seed = 12\n").get_double_or("run.t_end", 2.5) == 2.5);
}

TEST_CASE("set() overrides file values and validates keys") {
  RunConfig cfg = RunConfig::parse_text("graph.width = 10\n");
  cfg.set("graph.width", "20");
  CHECK(cfg.get_u64("graph.width") == 20);
  CHECK_THROWS_AS(cfg.set("graph.nope", "1"), std::invalid_argument);
}

TEST_CASE("missing file") {
  CHECK_THROWS(RunConfig::parse_file("/nonexistent/netsim.cfg"));
}

TEST_SUITE_END();
