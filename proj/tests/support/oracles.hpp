#pragma once

// Reference computations used only by the tests. They share no code with the
// library paths they check: paths come from permutations of node subsets,
// optima from full products of path choices, energies from the variable map.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "mcnf/encode.hpp"
#include "mcnf/instance.hpp"
#include "mcnf/model.hpp"
#include "mcnf/preprocess.hpp"

namespace mcnf::test {

// Every simple origin->destination node sequence with at most max_hops arcs,
// built by permuting subsets of the intermediate nodes.
inline std::set<std::vector<NodeIndex>> brute_force_paths(const Instance& inst,
                                                          const RestrictionMatrix& rm,
                                                          NodeIndex origin, NodeIndex destination,
                                                          std::size_t max_hops) {
  std::vector<NodeIndex> middle;
  for (NodeIndex i = 0; i < inst.num_nodes(); ++i)
    if (i != origin && i != destination) middle.push_back(i);
  std::set<std::vector<NodeIndex>> out;
  const std::size_t subsets = std::size_t{1} << middle.size();
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    std::vector<NodeIndex> chosen;
    for (std::size_t b = 0; b < middle.size(); ++b)
      if (mask >> b & 1) chosen.push_back(middle[b]);
    if (chosen.size() + 1 > max_hops) continue;
    std::sort(chosen.begin(), chosen.end());
    do {
      std::vector<NodeIndex> seq{origin};
      seq.insert(seq.end(), chosen.begin(), chosen.end());
      seq.push_back(destination);
      bool ok = true;
      for (std::size_t h = 0; ok && h + 1 < seq.size(); ++h)
        ok = inst.distances.count(Arc{seq[h], seq[h + 1]}) && rm.allows(seq[h], seq[h + 1]);
      if (ok) out.insert(seq);
    } while (std::next_permutation(chosen.begin(), chosen.end()));
  }
  return out;
}

inline double sequence_km(const Instance& inst, const std::vector<NodeIndex>& seq) {
  double km = 0;
  for (std::size_t h = 0; h + 1 < seq.size(); ++h) km += inst.distances.at(Arc{seq[h], seq[h + 1]});
  return km;
}

inline double sequence_time(const Instance& inst, const std::vector<NodeIndex>& seq) {
  return sequence_km(inst, seq) / inst.speed +
         inst.hop_processing_time * static_cast<double>(seq.size() - 2);
}

// Cost of routing every commodity on the given node sequences with just enough vehicles.
inline double routing_cost(const Instance& inst, const std::vector<std::vector<NodeIndex>>& routes,
                           const std::vector<double>& loads) {
  std::map<std::pair<NodeIndex, NodeIndex>, double> flow;
  for (std::size_t k = 0; k < routes.size(); ++k)
    for (std::size_t h = 0; h + 1 < routes[k].size(); ++h)
      flow[{routes[k][h], routes[k][h + 1]}] += loads[k];
  double cost = 0;
  for (const auto& [arc, f] : flow) {
    const double trucks = std::ceil(f / inst.vehicle_capacity - 1e-9);
    cost += inst.distances.at(Arc{arc.first, arc.second}) * inst.vehicle_cost_per_km * trucks;
  }
  return cost;
}

// Minimum routing cost over the full product of each positive-load commodity's
// paths. Commodities with zero load are ignored.
inline double exhaustive_optimum(const Instance& inst,
                                 const std::vector<std::vector<std::vector<NodeIndex>>>& paths) {
  std::vector<std::size_t> active;
  for (std::size_t k = 0; k < inst.commodities.size(); ++k)
    if (inst.commodities[k].load > 0) active.push_back(k);
  std::vector<double> loads;
  for (auto k : active) loads.push_back(inst.commodities[k].load);
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> pick(active.size(), 0);
  while (true) {
    std::vector<std::vector<NodeIndex>> routes;
    for (std::size_t a = 0; a < active.size(); ++a) routes.push_back(paths[active[a]][pick[a]]);
    best = std::min(best, routing_cost(inst, routes, loads));
    std::size_t a = 0;
    for (; a < active.size(); ++a) {
      if (++pick[a] < paths[active[a]].size()) break;
      pick[a] = 0;
    }
    if (a == active.size()) break;
  }
  return best;
}

inline std::vector<std::vector<std::vector<NodeIndex>>> surviving_sequences(
    const PreprocessedInstance& pre) {
  std::vector<std::vector<std::vector<NodeIndex>>> out;
  for (const auto& list : pre.paths) {
    out.emplace_back();
    for (const auto& p : list) out.back().push_back(p.nodes);
  }
  return out;
}

// Penalized objective read straight off the variable map: objective of the
// decoded vehicle counts plus the squared flow and capacity residuals.
inline double penalized_objective(const MipModel& m, const EncodedModel& enc,
                                  const std::vector<std::uint8_t>& bits) {
  std::vector<double> x(m.x_vars.size(), 0), trucks(m.n_vars.size(), 0), slack(m.n_vars.size(), 0);
  for (std::size_t v = 0; v < enc.varmap.size(); ++v) {
    if (!bits[v]) continue;
    const auto& qv = enc.varmap[v];
    switch (qv.kind) {
      case QuboVarKind::route: x[qv.owner] = 1; break;
      case QuboVarKind::vehicle_bit: trucks[qv.owner] += static_cast<double>(qv.weight); break;
      case QuboVarKind::slack_bit: slack[qv.owner] += static_cast<double>(qv.weight); break;
    }
  }
  double total = 0;
  for (std::size_t n = 0; n < m.n_vars.size(); ++n) total += m.n_vars[n].cost * trucks[n];

  const std::size_t nodes = m.node_names.size();
  for (std::size_t k = 0; k < m.commodities.size(); ++k) {
    std::vector<double> net(nodes, 0);
    for (std::size_t v = 0; v < m.x_vars.size(); ++v) {
      if (m.x_vars[v].commodity != k) continue;
      net[m.x_vars[v].arc.from] += x[v];
      net[m.x_vars[v].arc.to] -= x[v];
    }
    net[m.commodities[k].origin] -= 1;
    net[m.commodities[k].destination] += 1;
    for (double r : net) total += enc.config.flow_penalty * r * r;
  }

  const double u = enc.config.slack_unit;
  for (std::size_t n = 0; n < m.n_vars.size(); ++n) {
    double carried = 0;
    for (std::size_t v = 0; v < m.x_vars.size(); ++v)
      if (m.x_vars[v].arc == m.n_vars[n].arc) carried += x[v] * m.commodities[m.x_vars[v].commodity].load;
    const double r = carried / u - trucks[n] * m.vehicle_capacity / u + slack[n];
    total += enc.config.capacity_penalty * r * r;
  }
  return total;
}

inline std::vector<std::uint8_t> bits_of(std::uint64_t word, std::size_t size) {
  std::vector<std::uint8_t> bits(size);
  for (std::size_t i = 0; i < size; ++i) bits[i] = (word >> i) & 1;
  return bits;
}

}  // namespace mcnf::test
