#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "mcnf/harness.hpp"
#include "mcnf/model.hpp"

namespace mcnf {

void validate_config(const GeneratorConfig& cfg) {
  auto check = [](bool ok, const char* what) {
    if (!ok) throw Error(std::string("generator config: ") + what);
  };
  check(cfg.num_nodes >= 2, "num_nodes must be at least 2");
  check(cfg.arc_density > 0 && cfg.arc_density <= 1, "arc_density must be in (0, 1]");
  check(cfg.commodity_fraction > 0 && cfg.commodity_fraction <= 1,
        "commodity_fraction must be in (0, 1]");
  check(cfg.load_min > 0 && cfg.load_max >= cfg.load_min, "load range must be positive");
  check(cfg.load_step > 0, "load_step must be positive");
  check(cfg.tat_slack >= 1, "tat_slack must be at least 1");
  check(cfg.vehicle_capacity > 0 && cfg.cost_per_km > 0 && cfg.speed > 0,
        "vehicle and speed parameters must be positive");
  check(cfg.hop_processing_time >= 0, "hop_processing_time must be nonnegative");
  check(cfg.max_hops >= 1, "max_hops must be at least 1");
}

namespace {

// Fastest travel time from `origin` using at most max_hops arcs. For each hop
// count the shortest walk is kept; a walk with a cycle never beats the simple
// path inside it. Lengths are summed in path order so the times match
// path_time exactly.
std::vector<double> fastest_within_hops(const Instance& inst,
                                        const std::vector<std::vector<NodeIndex>>& adj,
                                        NodeIndex origin, std::size_t max_hops) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> best(inst.num_nodes(), inf), frontier(inst.num_nodes(), inf);
  frontier[origin] = 0.0;
  for (std::size_t hop = 1; hop <= max_hops; ++hop) {
    std::vector<double> next(inst.num_nodes(), inf);
    for (NodeIndex u = 0; u < inst.num_nodes(); ++u) {
      if (!std::isfinite(frontier[u])) continue;
      for (NodeIndex v : adj[u])
        if (v != origin) next[v] = std::min(next[v], frontier[u] + *inst.distance(u, v));
    }
    for (NodeIndex v = 0; v < inst.num_nodes(); ++v)
      if (std::isfinite(next[v])) best[v] = std::min(best[v], path_time(inst, next[v], hop + 1));
    frontier = std::move(next);
  }
  return best;
}

}  // namespace

Instance generate_instance(const GeneratorConfig& cfg) {
  validate_config(cfg);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> coord(0.0, 100.0);
  const std::size_t n = cfg.num_nodes;

  Instance inst;
  inst.vehicle_capacity = cfg.vehicle_capacity;
  inst.vehicle_cost_per_km = cfg.cost_per_km;
  inst.speed = cfg.speed;
  inst.hop_processing_time = cfg.hop_processing_time;
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    inst.nodes.push_back(std::to_string(i + 1));
    xs[i] = coord(rng);
    ys[i] = coord(rng);
  }
  auto km = [&](NodeIndex i, NodeIndex j) {
    const double d = std::hypot(xs[i] - xs[j], ys[i] - ys[j]);
    return std::max(0.1, std::round(d * 10.0) / 10.0);
  };

  const auto keep = static_cast<std::size_t>(
      std::max(1.0, std::ceil(cfg.arc_density * static_cast<double>(n - 1))));
  for (NodeIndex i = 0; i < n; ++i) {
    std::vector<NodeIndex> others;
    for (NodeIndex j = 0; j < n; ++j)
      if (j != i) others.push_back(j);
    std::stable_sort(others.begin(), others.end(),
                     [&](NodeIndex a, NodeIndex b) { return km(i, a) < km(i, b); });
    for (std::size_t r = 0; r < std::min(keep, others.size()); ++r)
      inst.distances[Arc{i, others[r]}] = km(i, others[r]);
    const NodeIndex ring = (i + 1) % n;
    inst.distances[Arc{i, ring}] = km(i, ring);
  }

  const auto adj = inst.adjacency();
  std::vector<std::pair<Arc, double>> eligible;  // OD pair, fastest time
  for (NodeIndex o = 0; o < n; ++o) {
    const auto fastest = fastest_within_hops(inst, adj, o, cfg.max_hops);
    for (NodeIndex d = 0; d < n; ++d)
      if (d != o && std::isfinite(fastest[d])) eligible.emplace_back(Arc{o, d}, fastest[d]);
  }
  std::shuffle(eligible.begin(), eligible.end(), rng);
  const auto wanted = static_cast<std::size_t>(
      std::llround(cfg.commodity_fraction * static_cast<double>(n * (n - 1))));
  eligible.resize(std::min(wanted, eligible.size()));

  std::uniform_real_distribution<double> load(cfg.load_min, cfg.load_max);
  std::vector<Commodity> drawn;
  for (const auto& [od, fastest] : eligible) {
    Commodity c;
    c.origin = od.from;
    c.destination = od.to;
    c.load = std::max(cfg.load_step, std::round(load(rng) / cfg.load_step) * cfg.load_step);
    // rounded up so the fastest path survives the inclusive comparison
    c.tat = std::max(std::ceil(cfg.tat_slack * fastest * 1e6) / 1e6, fastest);
    drawn.push_back(std::move(c));
  }
  std::sort(drawn.begin(), drawn.end(), [](const Commodity& a, const Commodity& b) {
    return std::pair(a.origin, a.destination) < std::pair(b.origin, b.destination);
  });
  for (std::size_t k = 0; k < drawn.size(); ++k) drawn[k].id = "k" + std::to_string(k + 1);
  inst.commodities = std::move(drawn);
  return inst;
}

namespace {

std::size_t count_variables(const GeneratorConfig& cfg, const RestrictionPolicy& policy,
                            std::size_t max_hops) {
  const Instance inst = generate_instance(cfg);
  const auto pre = restrict_instance(inst, build_restriction_matrix(inst, policy), max_hops);
  if (!pre.infeasible.empty()) return 0;
  return model_stats(build_mip(inst, pre)).num_variables;
}

}  // namespace

GeneratorConfig size_for_variables(std::size_t target, GeneratorConfig base,
                                   const RestrictionPolicy& policy, std::size_t max_hops) {
  base.max_hops = max_hops;
  auto with_nodes = [&](std::size_t nodes) {
    GeneratorConfig c = base;
    c.num_nodes = nodes;
    c.commodity_fraction = 1.0;
    return c;
  };
  // smallest node count whose full OD set reaches the target
  std::size_t lo = 2, hi = 3;
  while (count_variables(with_nodes(hi), policy, max_hops) < target && hi < 4096) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    (count_variables(with_nodes(mid), policy, max_hops) < target ? lo : hi) = mid;
  }
  GeneratorConfig best = with_nodes(hi);
  const std::size_t pairs = hi * (hi - 1);
  auto with_count = [&](std::size_t count) {
    GeneratorConfig c = best;
    c.commodity_fraction = static_cast<double>(count) / static_cast<double>(pairs);
    return c;
  };
  // the commodity set is a prefix of a fixed shuffle, so the count is monotone in it
  std::size_t clo = 1, chi = pairs;
  while (chi - clo > 1) {
    const std::size_t mid = (clo + chi) / 2;
    (count_variables(with_count(mid), policy, max_hops) < target ? clo : chi) = mid;
  }
  const auto distance = [&](std::size_t count) {
    const auto v = count_variables(with_count(count), policy, max_hops);
    return v > target ? v - target : target - v;
  };
  return distance(clo) < distance(chi) ? with_count(clo) : with_count(chi);
}

}  // namespace mcnf
