#pragma once

#include <cstddef>
#include <set>
#include <variant>
#include <vector>

#include "mcnf/instance.hpp"

namespace mcnf {

// Successors each node may reach directly; a subset of the instance arcs.
struct RestrictionMatrix {
  std::vector<std::vector<NodeIndex>> allowed;  // sorted by node index

  bool allows(NodeIndex from, NodeIndex to) const;
};

namespace policy {
struct All {};
// Keep the m nearest outgoing neighbours of every node.
struct NearestM {
  std::size_t m = 1;
};
// Keep outgoing neighbours no farther than km.
struct Radius {
  double km = 0.0;
};
}  // namespace policy

using RestrictionPolicy = std::variant<policy::All, policy::NearestM, policy::Radius>;

// Parses "all", "nearest:<m>" or "radius:<km>". Throws SchemaError.
RestrictionPolicy parse_policy(std::string_view text);

RestrictionMatrix build_restriction_matrix(const Instance& inst, const RestrictionPolicy& policy);

struct Path {
  std::vector<NodeIndex> nodes;
  double length_km = 0.0;
  double time = 0.0;

  friend bool operator==(const Path&, const Path&) = default;
};

inline constexpr std::size_t kDefaultMaxHops = 4;
inline constexpr std::size_t kDefaultPathCap = 10'000;

// All simple origin-destination paths of commodity k over allowed arcs with at
// most max_hops arcs, ordered by length then by node sequence.
// Throws PathExplosion once more than `cap` paths are found.
std::vector<Path> enumerate_paths(const Instance& inst, const RestrictionMatrix& rm,
                                  CommodityIndex k, std::size_t max_hops,
                                  std::size_t cap = kDefaultPathCap);

// Keeps paths with time <= tat_k, preserving order.
std::vector<Path> filter_paths_by_tat(const Instance& inst, std::vector<Path> paths,
                                      CommodityIndex k);

// Per-commodity surviving paths and arc subsets. Vectors are indexed by commodity.
struct PreprocessedInstance {
  std::vector<std::vector<Path>> paths;
  std::vector<std::set<Arc>> arcs_for;
  std::set<Arc> union_arcs;
  std::vector<CommodityIndex> infeasible;  // commodities with no surviving path
};

PreprocessedInstance restrict_instance(const Instance& inst, const RestrictionMatrix& rm,
                                       std::size_t max_hops = kDefaultMaxHops,
                                       std::size_t cap = kDefaultPathCap);

// {commodity id: [[node id, ...], ...]}
std::string dump_preprocessed(const Instance& inst, const PreprocessedInstance& pre);

}  // namespace mcnf
