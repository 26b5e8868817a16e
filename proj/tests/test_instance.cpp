#include <doctest.h>

#include <random>

#include "mcnf/instance.hpp"
#include "support/fixtures.hpp"

using namespace mcnf;

TEST_CASE("load_instance reads the T1 fixture") {
  const Instance inst = test::t1();
  CHECK(inst.nodes.size() == 3);
  CHECK(inst.distances.size() == 6);  // symmetric flag expands both directions
  CHECK(inst.commodities.size() == 1);
  CHECK(*inst.distance(inst.node_index("3"), inst.node_index("1")) == 10.0);
  CHECK(inst.vehicle_capacity == 15.0);
  CHECK(inst.speed == 1.0);
  CHECK(inst.hop_processing_time == 0.0);
  CHECK_FALSE(inst.distance(0, 0).has_value());
}

TEST_CASE("load_instance reports schema problems with their location") {
  SUBCASE("unknown node in a commodity") {
    auto doc = test::t1_document();
    doc.replace(doc.find("\"destination\": \"3\""), 18, "\"destination\": \"99\"");
    try {
      load_instance(doc);
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(e.path() == "/commodities/0/destination");
      CHECK(std::string(e.what()).find("99") != std::string::npos);
    }
  }
  SUBCASE("missing field") {
    CHECK_THROWS_AS(load_instance(R"({"nodes": [], "arcs": [], "commodities": []})"), SchemaError);
  }
  SUBCASE("unknown key") {
    CHECK_THROWS_AS(load_instance(R"({"nodes": [], "arcs": [], "vehicle": {"capacity": 1,
      "cost_per_km": 1}, "commodities": [], "colour": 1})"),
                    SchemaError);
  }
  SUBCASE("not json") { CHECK_THROWS_AS(load_instance("{nodes"), ParseError); }
}

TEST_CASE("empty commodity list is a valid instance") {
  const auto inst = load_instance(R"({"nodes": ["a", "b"], "arcs": [{"from": "a", "to": "b", "km": 1}],
    "vehicle": {"capacity": 1, "cost_per_km": 1}, "commodities": []})");
  CHECK(inst.commodities.empty());
  CHECK(validate_instance(inst).ok);
}

TEST_CASE("validate_instance") {
  CHECK(validate_instance(test::t1()).ok);
  CHECK(validate_instance(test::t1()).issues.empty());

  auto zero_w = test::t1();
  zero_w.vehicle_capacity = 0;
  auto report = validate_instance(zero_w);
  CHECK_FALSE(report.ok);
  REQUIRE(report.issues.size() == 1);
  CHECK(report.issues[0].message == "vehicle_capacity must be positive");

  auto negative = test::t1();
  negative.distances[Arc{0, 2}] = -1;
  report = validate_instance(negative);
  CHECK_FALSE(report.ok);
  REQUIRE(report.issues.size() == 1);
  CHECK(report.issues[0].location == "arc 1->3");

  auto broken = test::t1();
  broken.distances[Arc{1, 1}] = 3;
  broken.distances[Arc{0, 7}] = 3;
  broken.commodities.push_back({"k2", 2, 2, -1, 0});
  broken.speed = 0;
  CHECK_NOTHROW(report = validate_instance(broken));
  CHECK(report.issues.size() == 6);
}

TEST_CASE("supply_value follows the origin/destination cases") {
  const auto inst = test::t1();
  CHECK(supply_value(inst, "k1", "1") == 10.0);
  CHECK(supply_value(inst, "k1", "3") == -10.0);
  CHECK(supply_value(inst, "k1", "2") == 0.0);
  CHECK_THROWS_AS(supply_value(inst, "k9", "1"), UnknownId);
  CHECK_THROWS_AS(supply_value(inst, "k1", "9"), UnknownId);
}

TEST_CASE("supplies sum to zero and documents round-trip (random instances)") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto inst = test::random_instance(rng, {.max_nodes = 6, .max_commodities = 5});
    for (CommodityIndex k = 0; k < inst.commodities.size(); ++k) {
      double sum = 0;
      for (NodeIndex i = 0; i < inst.num_nodes(); ++i) sum += supply_value(inst, k, i);
      CHECK(sum == 0.0);
    }
    const auto again = load_instance(dump_instance(inst));
    CHECK(again == inst);
    CHECK(dump_instance(again) == dump_instance(inst));
  }
}
