#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "hfclt/error.hpp"
#include "hfclt/experiments.hpp"

using namespace hfclt;
using testing::rel;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

ExperimentConfig small_exponential() {
  ExperimentConfig c;
  c.model = ExponentialModel{{0.5}, {1.0}};
  c.cutoff = 128;
  c.orders = {2, 3};
  c.ladder.start = 16;
  c.ladder.stop = 128;
  return c;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("ladders") {
  FrequencyLadder g;
  g.start = 8;
  g.stop = 512;
  CHECK(g.magnitudes() == std::vector<int>{8, 16, 32, 64, 128, 256, 512});
  g.stop = 100;
  CHECK(g.magnitudes().back() == 64);
  FrequencyLadder l;
  l.kind = LadderKind::kLinear;
  l.start = 0;
  l.stop = 10;
  l.step = 5;
  CHECK(l.magnitudes() == std::vector<int>{0, 5, 10});
  l.direction = {1, -1};
  CHECK(l.points()[2] == LatticePoint{10, -10});
  l.direction = {0, 0};
  CHECK_THROWS_AS(l.points(), InvalidArgument);
  g.factor = 1;
  CHECK_THROWS_AS(g.magnitudes(), InvalidArgument);
}

TEST_CASE("config validation") {
  ExperimentConfig c = small_exponential();
  CHECK_NOTHROW(c.validate());
  c.ladder.stop = 512;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = small_exponential();
  c.reps = 0;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c = small_exponential();
  c.dim = 2;
  CHECK_THROWS_AS(c.validate(), InvalidArgument);
  c.ladder.direction = {1, 1};
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("manifest round trip") {
  ExperimentConfig c = small_exponential();
  c.seed = 12345678901234ULL;
  c.reps = 777;
  c.method = ConvolveMethod::kDirect;
  c.ladder.kind = LadderKind::kLinear;
  const std::string text = manifest_json(c, "example2");
  std::string cmd;
  const auto back = config_from_manifest(text, &cmd);
  CHECK(cmd == "example2");
  CHECK(manifest_json(back, cmd) == text);
  CHECK(back.seed == c.seed);
  CHECK_THROWS_AS(config_from_manifest("{\"command\":\"x\"}"), SchemaError);
}

TEST_CASE("example2 rows halve per doubling") {
  const std::string csv = run_example2(small_exponential());
  CHECK(csv.rfind("freq,m,q,cond2_sum,cond3_ratio,variance\n", 0) == 0);
  const auto rows = parse_csv(csv);
  // 4 freqs x (1 row for m=2 + 2 rows for m=3)
  REQUIRE(rows.size() == 12);
  double prev = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double r = std::stod(rows[i][4]);
    if (i) CHECK(rel(r / prev, 0.5) < 0.15);
    prev = r;
  }
  CHECK(rows[0][0] == "16");
  CHECK(rows[0][1] == "2");
  CHECK(rows[4][1] == "3");
  CHECK_THROWS_AS(run_example1(small_exponential()), InvalidArgument);
}

TEST_CASE("example1 single row") {
  ExperimentConfig c;
  c.model = AlgebraicModel{2.0, 1.0};
  c.cutoff = 256;
  c.ladder.start = 64;
  c.ladder.stop = 64;
  const auto rows = parse_csv(run_example1(c));
  REQUIRE(rows.size() == 1);
  CHECK(rel(std::stod(rows[0][4]), 0.1568857110180978) < 1e-12);
  c.orders = {1};
  CHECK_THROWS_AS(run_example1(c), InvalidArgument);
}

TEST_CASE("large theta underflows to zero rows") {
  ExperimentConfig c = small_exponential();
  c.model = ExponentialModel{{5.0}, {1.0}};
  c.cutoff = 256;
  c.orders = {2};
  c.ladder.stop = 256;
  const auto rows = parse_csv(run_example2(c));
  REQUIRE(rows.size() == 5);
  for (const auto& r : rows) {
    CHECK(r[3].find("nan") == std::string::npos);
    CHECK(std::stod(r[4]) >= 0.0);
  }
  CHECK(std::stod(rows.back()[4]) == 0.0);
  CHECK(std::stod(rows.back()[5]) == 0.0);
}

TEST_CASE("mc validation joins analytic and sampled columns") {
  ExperimentConfig c;
  c.model = ExponentialModel{{0.5}, {1.0}};
  c.cutoff = 8;
  c.orders = {2};
  c.ladder.start = 4;
  c.ladder.stop = 8;
  c.reps = 300;
  c.seed = 5;
  const std::string csv = run_mc_validation(c);
  CHECK(csv.rfind("freq,m,cond3_max,re4_norm,re4_se,im4_norm,im4_se,abs2_ratio,abs2_se,reps\n", 0) == 0);
  const auto rows = parse_csv(csv);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0][1] == "1");
  CHECK(rows[0][2].empty());
  CHECK_FALSE(rows[1][2].empty());
  CHECK(rows[1][9] == "300");
  CHECK(run_mc_validation(c) == csv);
  c.ladder.stop = 16;
  CHECK_THROWS_AS(run_mc_validation(c), InvalidArgument);
}

}
