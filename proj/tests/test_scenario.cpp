#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "flexprice/scenario.hpp"

using flexprice::AdaptiveSettings;
using flexprice::ControllerType;
using flexprice::Integrator;
using flexprice::PlantType;
using flexprice::Scenario;
using flexprice::SignalSpec;
using flexprice::json;

namespace {

json minimal() {
  return json{{"plant", {{"type", "linear"}}}, {"controller", {{"type", "exact"}}}};
}

bool has_error_containing(const std::vector<std::string>& errs,
                          const std::string& needle) {
  for (const auto& e : errs)
    if (e.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("minimal scenario materializes every default") {
  std::vector<std::string> errs;
  const auto sc = flexprice::parse_scenario(minimal(), errs);
  REQUIRE(errs.empty());
  REQUIRE(sc.has_value());
  CHECK(sc->plant == PlantType::linear);
  CHECK(sc->controller == ControllerType::exact);
  CHECK(sc->x0 == 0.5);
  CHECK(sc->linear.eta1 == -1.0);
  CHECK(sc->linear.eta2 == -0.9);
  CHECK(sc->linear.C == 2.97);
  CHECK(sc->sim.dt == 1e-3);
  CHECK(sc->sim.horizon == 24.0);
  CHECK(sc->sim.integrator == Integrator::rk4);
  CHECK(sc->sim.seed == 1);
  CHECK_FALSE(sc->sim.abort_on_error);
  CHECK(sc->B.kind == SignalSpec::Kind::constant);
  CHECK(sc->B.value == 0.5);
  CHECK(sc->D_ref.value == 0.65);
  CHECK(sc->output_prefix.empty());
}

TEST_CASE("effective config is a fixed point of parse and echo") {
  std::vector<std::string> errs;
  const auto sc = flexprice::parse_scenario(minimal(), errs);
  REQUIRE(sc.has_value());
  const json echo = flexprice::effective_config(*sc);
  // The echo must itself parse cleanly and echo to the same document.
  std::vector<std::string> errs2;
  const auto sc2 = flexprice::parse_scenario(echo, errs2);
  REQUIRE(errs2.empty());
  REQUIRE(sc2.has_value());
  CHECK(flexprice::effective_config(*sc2) == echo);
  // Defaults appear explicitly in the echo.
  CHECK(echo["sim"]["dt"] == 1e-3);
  CHECK(echo["plant"]["linear"]["eta2"] == -0.9);
  CHECK(echo["signals"]["D_ref"]["value"] == 0.65);
}

TEST_CASE("adaptive scenario round-trips through the echo") {
  json j = minimal();
  j["plant"] = {{"type", "frozen"},
                {"x0", 0.2},
                {"frozen",
                 {{"C", 2.97},
                  {"segments",
                   json::array({{{"t_start", 0.0},
                                 {"a", -0.168},
                                 {"b", -0.1515},
                                 {"d", 0.168}}})}}}};
  j["controller"] = {{"type", "adaptive"},
                     {"adaptive",
                      {{"lambda", -0.5},
                       {"gamma", {10.0, 10.0, 10.0}},
                       {"specs",
                        json::array({{{"min", 0.0}, {"max", 2.5}, {"epsilon", 0.1}},
                                     {{"min", -3.0}, {"max", 0.0}, {"epsilon", 0.15}},
                                     {{"min", 0.0}, {"max", 2.1}, {"epsilon", 0.1}}})},
                       {"init", {1.25, -1.5, 1.05}},
                       {"y0", 0.2},
                       {"sign_b", -1},
                       {"state_source", "direct"}}}};
  std::vector<std::string> errs;
  const auto sc = flexprice::parse_scenario(j, errs);
  REQUIRE(errs.empty());
  REQUIRE(sc.has_value());
  CHECK(sc->adaptive.lambda == -0.5);
  CHECK(sc->adaptive.specs[1].theta_min == -3.0);
  REQUIRE(sc->adaptive.init.has_value());
  CHECK((*sc->adaptive.init)[2] == 1.05);
  CHECK(sc->adaptive.state_source == AdaptiveSettings::StateSource::direct);
  REQUIRE(sc->segments.size() == 1);
  CHECK(sc->segments[0].b == -0.1515);

  const json echo = flexprice::effective_config(*sc);
  std::vector<std::string> errs2;
  const auto sc2 = flexprice::parse_scenario(echo, errs2);
  REQUIRE(errs2.empty());
  CHECK(flexprice::effective_config(*sc2) == echo);
}

TEST_CASE("gains defaulting to spec midpoints") {
  json j = minimal();
  j["controller"] = {{"type", "adaptive"}};
  std::vector<std::string> errs;
  const auto sc = flexprice::parse_scenario(j, errs);
  REQUIRE(sc.has_value());
  CHECK_FALSE(sc->adaptive.init.has_value());
  const auto init = sc->adaptive.initial_gains();
  CHECK(init[0] == sc->adaptive.specs[0].midpoint());
  CHECK(init[1] == sc->adaptive.specs[1].midpoint());
  CHECK(init[2] == sc->adaptive.specs[2].midpoint());
}

TEST_CASE("unknown keys are rejected at every nesting level") {
  json j = minimal();
  j["surprise"] = 1;
  j["plant"]["warp"] = 2;
  j["controller"]["crank"] = 3;
  j["sim"] = {{"dt", 1e-3}, {"turbo", true}};
  j["signals"] = {{"B", {{"kind", "constant"}, {"value", 0.5}, {"hue", 1}}}};
  std::vector<std::string> errs;
  const auto sc = flexprice::parse_scenario(j, errs);
  CHECK_FALSE(sc.has_value());
  CHECK(has_error_containing(errs, "unknown key 'surprise'"));
  CHECK(has_error_containing(errs, "unknown key 'warp'"));
  CHECK(has_error_containing(errs, "unknown key 'crank'"));
  CHECK(has_error_containing(errs, "unknown key 'turbo'"));
  CHECK(has_error_containing(errs, "unknown key 'hue'"));
  CHECK(errs.size() == 5);
}

TEST_CASE("all violations are reported in one pass") {
  json j = minimal();
  j["plant"]["x0"] = 2.0;
  j["sim"] = {{"dt", -1.0}, {"integrator", "leapfrog"}};
  j["signals"] = {{"D_ref", {{"kind", "constant"}, {"value", 1.4}}}};
  std::vector<std::string> errs;
  const auto sc = flexprice::parse_scenario(j, errs);
  CHECK_FALSE(sc.has_value());
  CHECK(has_error_containing(errs, "x0"));
  CHECK(has_error_containing(errs, "sim.dt"));
  CHECK(has_error_containing(errs, "integrator"));
  CHECK(has_error_containing(errs, "D_ref"));
  CHECK(errs.size() >= 4);
}

TEST_CASE("projection epsilon wider than half the gain range is rejected") {
  json j = minimal();
  j["controller"] = {{"type", "adaptive"},
                     {"adaptive",
                      {{"specs",
                        json::array({{{"min", 0.0},
                                      {"max", 1.0 / 3.0},
                                      {"epsilon", 0.2}},
                                     {{"min", 0.0}, {"max", 1.0 / 3.0},
                                      {"epsilon", 0.03}},
                                     {{"min", 0.0}, {"max", 1.0 / 3.0},
                                      {"epsilon", 0.03}}})}}}};
  std::vector<std::string> errs;
  const auto sc = flexprice::parse_scenario(j, errs);
  CHECK_FALSE(sc.has_value());
  CHECK(has_error_containing(errs, "epsilon"));
}

TEST_CASE("cross-field rules tie controllers to compatible plants") {
  // Branch-inverting controllers need the linear plant.
  json j = minimal();
  j["plant"] = {{"type", "nonlinear"}};
  std::vector<std::string> errs;
  CHECK_FALSE(flexprice::parse_scenario(j, errs).has_value());
  CHECK(has_error_containing(errs, "require the linear plant"));

  // The stochastic integrator needs the nonlinear plant.
  json j2 = minimal();
  j2["sim"] = {{"integrator", "euler_maruyama"}};
  errs.clear();
  CHECK_FALSE(flexprice::parse_scenario(j2, errs).has_value());
  CHECK(has_error_containing(errs, "euler_maruyama"));

  // A fixed price schedule cannot drive the frozen plant.
  json j3 = minimal();
  j3["plant"] = {{"type", "frozen"},
                 {"frozen",
                  {{"segments", json::array({{{"t_start", 0.0},
                                              {"a", -0.1},
                                              {"b", -0.1},
                                              {"d", 0.1}}})}}}};
  j3["controller"] = {{"type", "price"},
                      {"price", {{"kind", "constant"}, {"value", 0.5}}}};
  errs.clear();
  CHECK_FALSE(flexprice::parse_scenario(j3, errs).has_value());
  CHECK(has_error_containing(errs, "not available for the frozen plant"));
}

TEST_CASE("frozen segment lists are validated") {
  json j = minimal();
  j["controller"] = {{"type", "adaptive"}};
  j["plant"] = {{"type", "frozen"},
                {"frozen",
                 {{"segments",
                   json::array({{{"t_start", 1.0},
                                 {"a", -0.1},
                                 {"b", 0.0},
                                 {"d", 0.1}},
                                {{"t_start", 0.5},
                                 {"a", -0.1},
                                 {"b", -0.1},
                                 {"d", 0.1}}})}}}};
  std::vector<std::string> errs;
  CHECK_FALSE(flexprice::parse_scenario(j, errs).has_value());
  CHECK(has_error_containing(errs, "first must start at 0"));
  CHECK(has_error_containing(errs, "strictly increasing"));
  CHECK(has_error_containing(errs, "b must be nonzero"));
}

TEST_CASE("adaptive initial gains must respect the projection bounds") {
  json j = minimal();
  j["controller"] = {{"type", "adaptive"},
                     {"adaptive", {{"init", {0.5, 0.1, 0.1}}}}};
  std::vector<std::string> errs;
  CHECK_FALSE(flexprice::parse_scenario(j, errs).has_value());
  CHECK(has_error_containing(errs, "init[0]"));
}

TEST_CASE("scenario files load with joined diagnostics") {
  const std::string good_path = "test_scenario_good.json";
  {
    std::ofstream out(good_path);
    out << minimal().dump(2);
  }
  const Scenario sc = flexprice::load_scenario_file(good_path);
  CHECK(sc.controller == ControllerType::exact);

  const std::string bad_path = "test_scenario_bad.json";
  {
    std::ofstream out(bad_path);
    json j = minimal();
    j["plant"]["x0"] = -1.0;
    j["sim"] = {{"dt", 0.0}};
    out << j.dump(2);
  }
  try {
    (void)flexprice::load_scenario_file(bad_path);
    FAIL("expected load_scenario_file to throw");
  } catch (const std::runtime_error& ex) {
    const std::string msg = ex.what();
    CHECK(msg.find("x0") != std::string::npos);
    CHECK(msg.find("sim.dt") != std::string::npos);
  }

  CHECK_THROWS_AS(flexprice::load_scenario_file("does_not_exist.json"),
                  std::runtime_error);

  const std::string garbled_path = "test_scenario_garbled.json";
  {
    std::ofstream out(garbled_path);
    out << "{ not json";
  }
  CHECK_THROWS_AS(flexprice::load_scenario_file(garbled_path),
                  std::runtime_error);
}
