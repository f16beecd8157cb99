#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "covent/sweep.hpp"

using namespace covent;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("covent_test_" + name)).string();
}

}  // namespace

TEST_CASE("grids include both endpoints", "[sweep]") {
  const Grid g{0.0, 1.0, 201};
  const auto pts = g.points();
  CHECK(pts.size() == 201);
  CHECK(pts.front() == 0.0);
  CHECK(pts.back() == 1.0);
  CHECK_THAT(pts[1], WithinAbs(0.005, 1e-15));
  CHECK(Grid{0.3, 0.3, 1}.points() == std::vector<double>{0.3});
  CHECK_THROWS_AS(Grid({0.0, 1.0, 0}).validate("mu"), ValidationError);
  CHECK_THROWS_AS(Grid({1.0, 0.0, 5}).validate("mu"), ValidationError);
  CHECK_THROWS_AS(Grid({0.0, 1.0, 1}).validate("mu"), ValidationError);
}

TEST_CASE("sweep configuration is validated", "[sweep]") {
  SweepConfig c;
  CHECK_NOTHROW(c.validate());
  auto bad = c;
  bad.mu = {0.0, 1.2, 3};
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = c;
  bad.m = 0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = c;
  bad.criteria.ew = true;
  bad.m = 6;
  CHECK_THROWS_WITH(bad.validate(), ContainsSubstring("cap"));
  bad.witness_max_dim = 49;
  CHECK_NOTHROW(bad.validate());
  bad = c;
  bad.rotation = Rotation3::Identity() * 2.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("criteria lists parse", "[sweep]") {
  const auto c = CriteriaSet::parse("cm,ppt,ew");
  CHECK(c.cm);
  CHECK_FALSE(c.ds);
  CHECK(c.ppt);
  CHECK(c.ew);
  CHECK(c.str() == "cm,ppt,ew");
  CHECK_THROWS_AS(CriteriaSet::parse("cm,xx"), ValidationError);
  CHECK_THROWS_AS(CriteriaSet::parse(""), ValidationError);
}

TEST_CASE("verdict flips sit at bracketing midpoints", "[sweep]") {
  const std::vector<double> xs{0.0, 0.1, 0.2, 0.3};
  CHECK(verdict_flips(xs, {false, false, true, true}) == std::vector<double>{0.15000000000000002});
  CHECK(verdict_flips(xs, {true, false, false, true}).size() == 2);
  CHECK(verdict_flips(xs, {true, true, true, true}).empty());
  CHECK_THROWS_AS(verdict_flips(xs, {true}), DimensionError);
}

TEST_CASE("worker pool keeps order and propagates errors", "[sweep]") {
  const auto squares = parallel_map(100, [](std::size_t i) { return i * i; }, 4);
  for (std::size_t i = 0; i < squares.size(); ++i) CHECK(squares[i] == i * i);
  CHECK_THROWS_AS(parallel_map(10, [](std::size_t i) -> int { if (i == 7) throw NumericalError("x"); return 0; }, 3),
                  NumericalError);
}

TEST_CASE("per-point seeds are distinct and stable", "[sweep]") {
  CHECK(point_seed(42, 0) == point_seed(42, 0));
  CHECK(point_seed(42, 0) != point_seed(42, 1));
  CHECK(point_seed(42, 0) != point_seed(43, 0));
}

TEST_CASE("Werner-Bell sweep rows", "[sweep]") {
  SweepConfig c;
  c.experiment = Experiment::WernerBell;
  c.mu = {0.0, 1.0, 201};
  const auto rows = run_werner_bell(c);
  REQUIRE(rows.size() == 201);
  CHECK_FALSE(rows.front().report.entangled());
  CHECK((rows.front().report.eigenvalues.array() >= 0.0).all());
  CHECK(rows.back().report.negative_count() == 1);
  std::vector<double> mus;
  std::vector<bool> hits;
  for (const auto& r : rows) {
    mus.push_back(r.mu);
    hits.push_back(r.report.entangled());
  }
  const auto flips = verdict_flips(mus, hits);
  REQUIRE(flips.size() == 1);
  CHECK(std::abs(flips[0] - 1.0 / 3.0) <= 0.005);
}

TEST_CASE("spin-ensemble sweep: product column is undetected by every criterion", "[sweep]") {
  SweepConfig c;
  c.m = 2;
  c.mu = {0.5, 1.0, 3};
  c.t = {0.0, 0.3, 4};
  c.criteria = CriteriaSet::parse("cm,ds,ppt");
  const auto rows = run_spin_ensemble(c);
  REQUIRE(rows.size() == 12);
  for (std::size_t i = 0; i < rows.size(); i += 4) {
    CHECK(rows[i].t == 0.0);
    CHECK_FALSE(rows[i].cm->entangled());
    CHECK_FALSE(rows[i].ds->entangled());
    CHECK(*rows[i].ppt_min > -1e-9);
  }
  CHECK(rows[11].mu == 1.0);
  CHECK(rows[11].t == 0.3);
  CHECK(rows[11].cm->entangled());
}

TEST_CASE("CSV output is bit-stable and self-describing", "[sweep]") {
  SweepConfig c;
  c.m = 2;
  c.mu = {0.8, 1.0, 2};
  c.t = {0.0, 0.4, 3};
  c.criteria = CriteriaSet::parse("cm,ds,ppt");
  std::ostringstream a, b;
  write_spin_ensemble_csv(a, c, run_spin_ensemble(c));
  c.threads = 1;
  write_spin_ensemble_csv(b, c, run_spin_ensemble(c));
  CHECK(a.str() == b.str());
  std::istringstream in(a.str());
  std::string config_line, header, row;
  std::getline(in, config_line);
  std::getline(in, header);
  CHECK_THAT(config_line, ContainsSubstring("# config: {"));
  CHECK_THAT(config_line, ContainsSubstring("\"criteria\":\"cm,ds,ppt\""));
  CHECK(header.rfind("# mu,t,cm_eig1", 0) == 0);
  int rows = 0;
  while (std::getline(in, row)) {
    ++rows;
    CHECK(std::count(row.begin(), row.end(), ',') == std::count(header.begin(), header.end(), ','));
  }
  CHECK(rows == 6);
}

TEST_CASE("numbers round-trip through the CSV format", "[sweep]") {
  for (double v : {1.0 / 3.0, -2.5e-17, 123456.789, 0.1}) CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("correlation files round-trip", "[io]") {
  const auto rho = spin_ensemble_state(2, 1.0, 0.3);
  const auto set = collective_spin_set(2);
  const auto data = correlation_data(rho, set);
  const auto path = temp_path("roundtrip.json");
  write_correlation_file(data, path);
  const auto back = read_correlation_file(path);
  CHECK(back.labels == data.labels);
  CHECK(back.pt_parity == data.pt_parity);
  CHECK(back.partition == data.partition);
  CHECK(back.covariance == data.covariance);
  CHECK(back.commutation == data.commutation);
  CHECK(back.means == data.means);
  const auto rep = run_from_data(path);
  CHECK(rep.verdict == detect(criterion_matrix(rho, set)).verdict);
  std::filesystem::remove(path);
}

TEST_CASE("nested matrices are accepted", "[io]") {
  const auto data = parse_correlation_json(R"({"labels":["a","b"],"partition":["A","B"],"pt_parity":[1,-1],
    "means":[0,0],"V":[[1,0],[0,1]],"Omega":[[0,0],[0,0]]})");
  CHECK(data.covariance == RealMatrix::Identity(2, 2));
}

TEST_CASE("malformed correlation files give precise diagnostics", "[io]") {
  CHECK_THROWS_WITH(parse_correlation_json("{\n  \"labels\": [\"a\",\n  ]\n}"), ContainsSubstring("line 3"));
  CHECK_THROWS_WITH(parse_correlation_json(R"({"labels":["a"]})"), ContainsSubstring("missing field 'partition'"));
  CHECK_THROWS_WITH(parse_correlation_json(R"({"labels":["a","b"],"partition":["A","C"],"pt_parity":[1,1],
    "means":[0,0],"V":[1,0,0,1],"Omega":[0,0,0,0]})"), ContainsSubstring("partition[1]"));
  CHECK_THROWS_WITH(parse_correlation_json(R"({"labels":["a","b"],"partition":["A","B"],"pt_parity":[1,1],
    "means":[0,0],"V":[1,0,0],"Omega":[0,0,0,0]})"), ContainsSubstring("field 'V' has 3 entries, expected 4"));
  CHECK_THROWS_WITH(parse_correlation_json(R"({"labels":["a","b"],"partition":["A","B"],"pt_parity":[1,1],
    "means":[0,"x"],"V":[1,0,0,1],"Omega":[0,0,0,0]})"), ContainsSubstring("means[1]"));
  CHECK_THROWS_WITH(parse_correlation_json(R"({"labels":["a","b"],"partition":["A","B"],"pt_parity":[1,1],
    "means":[0,0],"V":[1,0.5,0,1],"Omega":[0,0,0,0]})"), ContainsSubstring("V is not symmetric"));
  CHECK_THROWS_WITH(parse_correlation_json(R"({"labels":["a","b"],"partition":["A","B"],"pt_parity":[1,1],
    "means":[0,0],"V":[1,0,0,1],"Omega":[0,0.3,-0.3,0]})"), ContainsSubstring("nonzero across partitions"));
  CHECK_THROWS_AS(read_correlation_file(temp_path("does_not_exist.json")), IoError);
}
