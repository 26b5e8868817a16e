#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mcnf/errors.hpp"

namespace mcnf {

using NodeIndex = std::size_t;
using CommodityIndex = std::size_t;

// Directed arc between two nodes, ordered lexicographically by (from, to).
struct Arc {
  NodeIndex from = 0;
  NodeIndex to = 0;

  friend auto operator<=>(const Arc&, const Arc&) = default;
};

// One origin-destination demand. Origin and destination index into Instance::nodes.
struct Commodity {
  std::string id;
  NodeIndex origin = 0;
  NodeIndex destination = 0;
  double load = 0.0;  // weight units
  double tat = 0.0;   // hours

  friend bool operator==(const Commodity&, const Commodity&) = default;
};

// Line-haul network with one vehicle type.
//
// A plain value: it may hold data that violates the model invariants (for
// example a zero capacity) so that validate_instance can report them.
// Arcs absent from `distances` do not exist.
struct Instance {
  std::vector<std::string> nodes;
  std::map<Arc, double> distances;  // km, directed
  double vehicle_capacity = 0.0;    // W
  double vehicle_cost_per_km = 0.0; // CV
  double speed = 1.0;               // km per hour
  double hop_processing_time = 0.0; // hours per intermediate node
  std::vector<Commodity> commodities;

  friend bool operator==(const Instance&, const Instance&) = default;

  std::size_t num_nodes() const noexcept { return nodes.size(); }

  // Throws UnknownId.
  NodeIndex node_index(std::string_view id) const;
  CommodityIndex commodity_index(std::string_view id) const;

  std::optional<double> distance(NodeIndex from, NodeIndex to) const;

  // Outgoing neighbours of every node, sorted by index.
  std::vector<std::vector<NodeIndex>> adjacency() const;
};

enum class Severity { warning, error };

struct Issue {
  Severity severity = Severity::error;
  std::string message;
  std::string location;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Issue> issues;
};

// Parses an instance JSON document. Throws ParseError or SchemaError.
Instance load_instance(std::string_view document);

// Inverse of load_instance: arcs are written one per direction.
std::string dump_instance(const Instance& inst);

// Reports every invariant violation. Never throws.
ValidationReport validate_instance(const Instance& inst);

// b_ki: +L_k at the origin, -L_k at the destination, 0 elsewhere.
double supply_value(const Instance& inst, CommodityIndex k, NodeIndex i);
double supply_value(const Instance& inst, std::string_view commodity, std::string_view node);

// Travel time of a node sequence under the instance time model.
double path_time(const Instance& inst, double length_km, std::size_t num_nodes);

}  // namespace mcnf
