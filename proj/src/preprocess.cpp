#include "mcnf/preprocess.hpp"

#include <algorithm>
#include <string>

#include <json.hpp>

namespace mcnf {

bool RestrictionMatrix::allows(NodeIndex from, NodeIndex to) const {
  if (from >= allowed.size()) return false;
  return std::binary_search(allowed[from].begin(), allowed[from].end(), to);
}

RestrictionPolicy parse_policy(std::string_view text) {
  if (text == "all") return policy::All{};
  const auto colon = text.find(':');
  if (colon == std::string_view::npos)
    throw SchemaError("policy", "expected all, nearest:<m> or radius:<km>");
  const auto name = text.substr(0, colon);
  const std::string value(text.substr(colon + 1));
  try {
    std::size_t used = 0;
    if (name == "nearest") {
      const long m = std::stol(value, &used);
      if (used == value.size() && m >= 1) return policy::NearestM{static_cast<std::size_t>(m)};
    } else if (name == "radius") {
      const double km = std::stod(value, &used);
      if (used == value.size() && km > 0) return policy::Radius{km};
    }
  } catch (const std::logic_error&) {
  }
  throw SchemaError("policy", "invalid policy '" + std::string(text) + "'");
}

RestrictionMatrix build_restriction_matrix(const Instance& inst, const RestrictionPolicy& policy) {
  RestrictionMatrix rm;
  rm.allowed = inst.adjacency();
  for (NodeIndex i = 0; i < rm.allowed.size(); ++i) {
    auto& succ = rm.allowed[i];
    if (const auto* nearest = std::get_if<policy::NearestM>(&policy)) {
      // stable: equal distances keep index order
      std::stable_sort(succ.begin(), succ.end(), [&](NodeIndex a, NodeIndex b) {
        return *inst.distance(i, a) < *inst.distance(i, b);
      });
      if (succ.size() > nearest->m) succ.resize(nearest->m);
      std::sort(succ.begin(), succ.end());
    } else if (const auto* radius = std::get_if<policy::Radius>(&policy)) {
      std::erase_if(succ, [&](NodeIndex j) { return *inst.distance(i, j) > radius->km; });
    }
  }
  return rm;
}

namespace {

struct PathSearch {
  const Instance& inst;
  const RestrictionMatrix& rm;
  const Commodity& commodity;
  std::size_t max_hops;
  std::size_t cap;
  std::vector<NodeIndex> stack;
  std::vector<char> on_path;
  std::vector<Path> found;

  void extend(NodeIndex at, double length) {
    if (at == commodity.destination) {
      if (found.size() == cap) throw PathExplosion(commodity.id, cap);
      found.push_back(Path{stack, length, path_time(inst, length, stack.size())});
      return;
    }
    if (stack.size() > max_hops) return;  // stack holds hops + 1 nodes
    for (NodeIndex next : rm.allowed[at]) {
      if (on_path[next]) continue;
      stack.push_back(next);
      on_path[next] = 1;
      extend(next, length + *inst.distance(at, next));
      on_path[next] = 0;
      stack.pop_back();
    }
  }
};

}  // namespace

std::vector<Path> enumerate_paths(const Instance& inst, const RestrictionMatrix& rm,
                                  CommodityIndex k, std::size_t max_hops, std::size_t cap) {
  if (k >= inst.commodities.size()) throw UnknownId("unknown commodity index " + std::to_string(k));
  const auto& c = inst.commodities[k];
  PathSearch search{inst, rm, c, max_hops, cap, {c.origin}, std::vector<char>(inst.num_nodes()), {}};
  search.on_path[c.origin] = 1;
  if (max_hops >= 1) search.extend(c.origin, 0.0);
  std::sort(search.found.begin(), search.found.end(), [](const Path& a, const Path& b) {
    if (a.length_km != b.length_km) return a.length_km < b.length_km;
    return a.nodes < b.nodes;
  });
  return std::move(search.found);
}

std::vector<Path> filter_paths_by_tat(const Instance& inst, std::vector<Path> paths,
                                      CommodityIndex k) {
  const double tat = inst.commodities.at(k).tat;
  std::erase_if(paths, [tat](const Path& p) { return p.time > tat; });
  return paths;
}

PreprocessedInstance restrict_instance(const Instance& inst, const RestrictionMatrix& rm,
                                       std::size_t max_hops, std::size_t cap) {
  PreprocessedInstance pre;
  const std::size_t n = inst.commodities.size();
  pre.paths.resize(n);
  pre.arcs_for.resize(n);
  for (CommodityIndex k = 0; k < n; ++k) {
    pre.paths[k] = filter_paths_by_tat(inst, enumerate_paths(inst, rm, k, max_hops, cap), k);
    if (pre.paths[k].empty()) pre.infeasible.push_back(k);
    for (const auto& p : pre.paths[k])
      for (std::size_t h = 0; h + 1 < p.nodes.size(); ++h)
        pre.arcs_for[k].insert(Arc{p.nodes[h], p.nodes[h + 1]});
    pre.union_arcs.insert(pre.arcs_for[k].begin(), pre.arcs_for[k].end());
  }
  return pre;
}

std::string dump_preprocessed(const Instance& inst, const PreprocessedInstance& pre) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (CommodityIndex k = 0; k < inst.commodities.size(); ++k) {
    auto paths = nlohmann::ordered_json::array();
    for (const auto& p : pre.paths.at(k)) {
      auto seq = nlohmann::ordered_json::array();
      for (NodeIndex i : p.nodes) seq.push_back(inst.nodes.at(i));
      paths.push_back(std::move(seq));
    }
    doc[inst.commodities[k].id] = std::move(paths);
  }
  return doc.dump(2);
}

}  // namespace mcnf
