#include <doctest.h>

#include <json.hpp>

#include "oblab/config.hpp"

using namespace oblab;
using nlohmann::json;

namespace {

json minimal() {
  return json{
      {"grid", {{"dim", 1}, {"half_width", 1.0}, {"nodes_per_axis", 65}}},
      {"coefficients", {{"family", "identity"}}},
      {"f", {{"family", "constant"}, {"value", 1.0}}},
      {"boundary", {{"profile", "half_space"}, {"c", 0.5}}},
  };
}

}  // namespace

TEST_CASE("minimal config parses with documented defaults") {
  const RunConfig c = parse_config(minimal());
  CHECK(c.grid.dim == 1);
  CHECK(c.grid.nodes_per_axis == 65);
  CHECK(c.solver.method == SolveMethod::active_set);
  CHECK(c.solver.tol == 1e-10);
  CHECK(c.solver.max_iter == 1000000);
  CHECK(c.output_dir == "out");
  CHECK(c.seed == 0);
  CHECK_FALSE(c.synthetic.enabled);
  CHECK_FALSE(c.reference.enabled);
  CHECK(c.suites.empty());
}

TEST_CASE("unknown keys are rejected by name") {
  json j = minimal();
  j["solver"] = {{"tole", 1e-8}};
  CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("\"tole\""),
                       ConfigError);

  json k = minimal();
  k["grid"]["extra"] = 1;
  CHECK_THROWS_WITH_AS(parse_config(k), doctest::Contains("\"extra\""),
                       ConfigError);

  json top = minimal();
  top["outdir"] = "x";
  CHECK_THROWS_WITH_AS(parse_config(top), doctest::Contains("\"outdir\""),
                       ConfigError);
}

TEST_CASE("family parameters are only accepted where they apply") {
  json j = minimal();
  j["coefficients"] = {{"family", "identity"}, {"t", 0.3}};
  CHECK_THROWS_AS(parse_config(j), ConfigError);

  json k = minimal();
  k["coefficients"] = {{"family", "smooth_oscillation"}};  // t missing
  CHECK_THROWS_WITH_AS(parse_config(k), doctest::Contains("\"t\""),
                       ConfigError);

  json m = minimal();
  m["coefficients"] = {{"family", "nonsense"}};
  CHECK_THROWS_AS(parse_config(m), ConfigError);
}

TEST_CASE("type violations name the offending key") {
  json j = minimal();
  j["solver"] = {{"tol", "tight"}};
  CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("\"tol\""),
                       ConfigError);
  json k = minimal();
  k["grid"]["nodes_per_axis"] = 64.5;
  CHECK_THROWS_WITH_AS(parse_config(k),
                       doctest::Contains("\"nodes_per_axis\""), ConfigError);
}

TEST_CASE("asymmetric constant matrices are rejected") {
  json j = minimal();
  j["coefficients"] = {{"family", "constant"},
                       {"matrix", {{1.0, 0.5}, {0.2, 1.0}}}};
  CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("symmetric"),
                       ConfigError);
}

TEST_CASE("dimension-dependent blocks are validated") {
  json j = minimal();  // dim 1
  j["boundary"] = {{"profile", "radial"}, {"r0", 0.4}};
  CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("radial"),
                       ConfigError);

  json k = minimal();
  k["reference"] = {{"family", "radial"}, {"r0", 0.4}};
  CHECK_THROWS_AS(parse_config(k), ConfigError);

  json m = minimal();
  m["reference"] = {{"family", "half_line"}};
  CHECK_NOTHROW(parse_config(m));
}

TEST_CASE("suite entries parse their own parameter sets") {
  json j = minimal();
  j["suites"] = json::array(
      {{{"name", "optimal_regularity"}, {"radii", {0.25, 0.125}}},
       {{"name", "nondegeneracy"},
        {"radii", {0.25}},
        {"point", {0.0}},
        {"asserted", false}},
       {{"name", "alternative"}, {"radii", {0.25}}, {"sample_stride", 3}},
       {{"name", "measure_stability"},
        {"t_levels", {0.4, 0.2}},
        {"vary_rhs", true}},
       {{"name", "blowup"}, {"eps", {0.25, 0.125}}, {"target_nodes", 17}},
       {{"name", "reifenberg"}, {"radii", {0.25}}, {"theta_cap", 0.2}}});
  const RunConfig c = parse_config(j);
  REQUIRE(c.suites.size() == 6);
  CHECK(c.suites[0].point_policy == "auto");
  CHECK(c.suites[1].has_point);
  CHECK(c.suites[1].point[0] == 0.0);
  CHECK_FALSE(c.suites[1].asserted);
  CHECK(c.suites[2].sample_stride == 3);
  CHECK(c.suites[3].vary_rhs);
  CHECK(c.suites[4].target_nodes == 17);
  CHECK(c.suites[5].theta_cap == 0.2);
}

TEST_CASE("suite parameters from other suites are rejected") {
  json j = minimal();
  j["suites"] = json::array(
      {{{"name", "optimal_regularity"}, {"radii", {0.25}}, {"eps", {0.1}}}});
  CHECK_THROWS_WITH_AS(parse_config(j), doctest::Contains("\"eps\""),
                       ConfigError);

  json k = minimal();
  k["suites"] =
      json::array({{{"name", "growth"}, {"radii", {0.25}}}});
  CHECK_THROWS_WITH_AS(parse_config(k), doctest::Contains("growth"),
                       ConfigError);
}

TEST_CASE("explicit point policy demands a point and vice versa") {
  json j = minimal();
  j["suites"] = json::array(
      {{{"name", "blowup"}, {"eps", {0.25}}, {"point_policy", "explicit"}}});
  CHECK_THROWS_AS(parse_config(j), ConfigError);

  json k = minimal();
  k["suites"] = json::array({{{"name", "blowup"},
                              {"eps", {0.25}},
                              {"point_policy", "auto"},
                              {"point", {0.0}}}});
  CHECK_THROWS_AS(parse_config(k), ConfigError);
}

TEST_CASE("configs round-trip through serialization") {
  json j = minimal();
  j["solver"] = {{"method", "psor"}, {"tol", 1e-9}, {"max_iter", 5000}};
  j["reference"] = {{"family", "half_line"}};
  j["synthetic"] = {{"family", "quartic"}};
  j["suites"] = json::array({{{"name", "nondegeneracy"},
                              {"radii", {0.25, 0.125}},
                              {"point", {0.0}}}});
  j["output"] = "artifacts";
  j["seed"] = 7;
  const RunConfig c1 = parse_config(j);
  const json s1 = serialize_config(c1);
  const RunConfig c2 = parse_config(s1);
  const json s2 = serialize_config(c2);
  CHECK(s1 == s2);
  CHECK(s1["solver"]["method"] == "psor");
  CHECK(s1["seed"] == 7);
}

TEST_CASE("malformed files and json report as config errors") {
  CHECK_THROWS_WITH_AS(load_config("/nonexistent/path.json"),
                       doctest::Contains("cannot open"), ConfigError);
}
