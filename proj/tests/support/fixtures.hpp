#pragma once

#include <random>
#include <string>

#include "mcnf/instance.hpp"

namespace mcnf::test {

// Three nodes, symmetric arcs 1-2 (6 km), 2-3 (6 km), 1-3 (10 km); one 10-unit
// load from 1 to 3 with a turnaround time of `tat` hours at unit speed.
inline std::string t1_document(double tat = 11, double capacity = 15) {
  return R"({
    "nodes": ["1", "2", "3"],
    "symmetric": true,
    "arcs": [
      {"from": "1", "to": "2", "km": 6},
      {"from": "2", "to": "3", "km": 6},
      {"from": "1", "to": "3", "km": 10}
    ],
    "vehicle": {"capacity": )" +
         std::to_string(capacity) + R"(, "cost_per_km": 1},
    "commodities": [
      {"id": "k1", "origin": "1", "destination": "3", "load": 10, "tat": )" +
         std::to_string(tat) + R"(}
    ]
  })";
}

inline Instance t1(double tat = 11) { return load_instance(t1_document(tat)); }

// Consolidation case: routing k1 through node 2 lets both loads share one
// vehicle on 2-3 (cost 3 + 6 = 9) instead of shipping each directly (10 + 6).
inline Instance t2() {
  return load_instance(R"({
    "nodes": ["1", "2", "3"],
    "symmetric": true,
    "arcs": [
      {"from": "1", "to": "3", "km": 10},
      {"from": "1", "to": "2", "km": 3},
      {"from": "2", "to": "3", "km": 6}
    ],
    "vehicle": {"capacity": 15, "cost_per_km": 1},
    "commodities": [
      {"id": "k1", "origin": "1", "destination": "3", "load": 5, "tat": 100},
      {"id": "k2", "origin": "2", "destination": "3", "load": 5, "tat": 100}
    ]
  })");
}

struct RandomSpec {
  std::size_t max_nodes = 5;
  std::size_t max_commodities = 4;
  double arc_probability = 0.6;
  int max_km = 20;
  double capacity = 10;
  int max_load = 12;
  double tat_factor = 1.0;  // tat = tat_factor * direct-line budget; large keeps everything
};

// Small random instance built directly (independent of the harness generator).
// Integer distances and loads; every commodity gets a generous tat unless
// tat_factor is small.
inline Instance random_instance(std::mt19937_64& rng, const RandomSpec& spec) {
  std::uniform_int_distribution<std::size_t> nodes_dist(2, spec.max_nodes);
  const std::size_t n = nodes_dist(rng);
  Instance inst;
  for (std::size_t i = 0; i < n; ++i) inst.nodes.push_back("n" + std::to_string(i));
  inst.vehicle_capacity = spec.capacity;
  inst.vehicle_cost_per_km = 1.0 + static_cast<double>(rng() % 3);
  inst.speed = 1.0;
  inst.hop_processing_time = static_cast<double>(rng() % 3);
  std::bernoulli_distribution has_arc(spec.arc_probability);
  std::uniform_int_distribution<int> km(1, spec.max_km);
  for (NodeIndex i = 0; i < n; ++i)
    for (NodeIndex j = 0; j < n; ++j)
      if (i != j && has_arc(rng)) inst.distances[Arc{i, j}] = km(rng);
  std::uniform_int_distribution<std::size_t> count_dist(1, spec.max_commodities);
  std::uniform_int_distribution<NodeIndex> node(0, n - 1);
  std::uniform_int_distribution<int> load(1, spec.max_load);
  std::uniform_real_distribution<double> tat(0.0, 1.0);
  const std::size_t count = count_dist(rng);
  for (std::size_t k = 0; k < count; ++k) {
    Commodity c;
    c.id = "c" + std::to_string(k);
    c.origin = node(rng);
    do c.destination = node(rng);
    while (c.destination == c.origin);
    c.load = load(rng);
    c.tat = 1.0 + spec.tat_factor * tat(rng) * spec.max_km * 4;
    inst.commodities.push_back(std::move(c));
  }
  return inst;
}

}  // namespace mcnf::test
