#include "mcnf/model.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace mcnf {

std::optional<std::size_t> MipModel::route_index(std::size_t commodity, Arc arc) const {
  auto it = route_lookup_.find({commodity, arc});
  if (it == route_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> MipModel::vehicle_index(Arc arc) const {
  auto it = vehicle_lookup_.find(arc);
  if (it == vehicle_lookup_.end()) return std::nullopt;
  return it->second;
}

std::int64_t vehicles_needed(double load, double capacity) {
  if (load <= 0) return 0;
  const double ratio = load / capacity;
  // absorb representation error such as 0.1 + 0.2 against 0.3
  return static_cast<std::int64_t>(std::ceil(ratio - 1e-9 * std::max(1.0, ratio)));
}

MipModel build_mip(const Instance& inst, const PreprocessedInstance& pre) {
  MipModel m;
  m.node_names = inst.nodes;
  m.vehicle_capacity = inst.vehicle_capacity;
  m.cost_per_km = inst.vehicle_cost_per_km;

  for (CommodityIndex k = 0; k < inst.commodities.size(); ++k) {
    const auto& c = inst.commodities[k];
    if (c.load <= 0) continue;
    if (pre.paths.at(k).empty()) throw InfeasibleCommodity(c.id);
    m.commodities.push_back({k, c.id, c.origin, c.destination, c.load});
    for (const auto& p : pre.paths[k]) m.longest_path_km = std::max(m.longest_path_km, p.length_km);
  }

  // worst-case load per arc, over kept commodities only
  std::map<Arc, double> arc_load;
  for (std::size_t mk = 0; mk < m.commodities.size(); ++mk) {
    const auto& c = m.commodities[mk];
    for (const Arc& arc : pre.arcs_for[c.source]) {
      m.route_lookup_.emplace(std::pair{mk, arc}, m.x_vars.size());
      m.x_vars.push_back({mk, arc});
      arc_load[arc] += c.load;
    }
  }
  for (const auto& [arc, load] : arc_load) {
    m.vehicle_lookup_.emplace(arc, m.n_vars.size());
    m.n_vars.push_back({arc, *inst.distance(arc.from, arc.to) * inst.vehicle_cost_per_km,
                        vehicles_needed(load, inst.vehicle_capacity)});
  }

  for (std::size_t mk = 0; mk < m.commodities.size(); ++mk) {
    const auto& c = m.commodities[mk];
    const std::size_t first = m.flow_constraints.size();
    for (NodeIndex i = 0; i < inst.num_nodes(); ++i) {
      FlowConstraint fc;
      fc.node = i;
      fc.commodity = mk;
      fc.rhs = i == c.origin ? 1 : (i == c.destination ? -1 : 0);
      m.flow_constraints.push_back(std::move(fc));
    }
    for (std::size_t x = 0; x < m.x_vars.size(); ++x) {
      if (m.x_vars[x].commodity != mk) continue;
      const Arc arc = m.x_vars[x].arc;
      m.flow_constraints[first + arc.from].terms.emplace_back(x, +1);
      m.flow_constraints[first + arc.to].terms.emplace_back(x, -1);
    }
  }

  m.capacity_constraints.resize(m.n_vars.size());
  for (std::size_t n = 0; n < m.n_vars.size(); ++n) m.capacity_constraints[n].vehicle = n;
  for (std::size_t x = 0; x < m.x_vars.size(); ++x)
    m.capacity_constraints[m.vehicle_lookup_.at(m.x_vars[x].arc)].routes.push_back(x);
  return m;
}

Assignment zero_assignment(const MipModel& m) {
  return Assignment{std::vector<std::uint8_t>(m.x_vars.size(), 0),
                    std::vector<std::int64_t>(m.n_vars.size(), 0)};
}

void repair_vehicles(const MipModel& m, Assignment& a) {
  for (std::size_t n = 0; n < m.n_vars.size(); ++n) {
    double load = 0.0;
    for (std::size_t x : m.capacity_constraints[n].routes)
      if (a.x[x]) load += m.load(m.x_vars[x]);
    a.n[n] = vehicles_needed(load, m.vehicle_capacity);
  }
}

Assignment assignment_from_paths(const MipModel& m, const std::vector<const Path*>& paths) {
  if (paths.size() != m.commodities.size())
    throw KeyMismatch("one path per model commodity expected");
  Assignment a = zero_assignment(m);
  for (std::size_t mk = 0; mk < paths.size(); ++mk) {
    const auto& nodes = paths[mk]->nodes;
    for (std::size_t h = 0; h + 1 < nodes.size(); ++h) {
      auto x = m.route_index(mk, Arc{nodes[h], nodes[h + 1]});
      if (!x) throw KeyMismatch("path arc outside the commodity arc set");
      a.x[*x] = 1;
    }
  }
  repair_vehicles(m, a);
  return a;
}

namespace {

void require_match(const MipModel& m, const Assignment& a) {
  if (a.x.size() != m.x_vars.size() || a.n.size() != m.n_vars.size())
    throw KeyMismatch("assignment has " + std::to_string(a.x.size()) + "/" +
                      std::to_string(a.n.size()) + " entries, model has " +
                      std::to_string(m.x_vars.size()) + "/" + std::to_string(m.n_vars.size()));
}

}  // namespace

double objective_value(const MipModel& m, const Assignment& a) {
  require_match(m, a);
  double total = 0.0;
  for (std::size_t n = 0; n < m.n_vars.size(); ++n)
    total += m.n_vars[n].cost * static_cast<double>(a.n[n]);
  return total;
}

FeasibilityReport check_feasibility(const MipModel& m, const Assignment& a, ResidualScale scale) {
  require_match(m, a);
  FeasibilityReport report;
  for (const auto& fc : m.flow_constraints) {
    long lhs = 0;
    for (auto [x, sign] : fc.terms) lhs += sign * static_cast<long>(a.x[x]);
    const double load = m.commodities[fc.commodity].load;
    const double residual = static_cast<double>(lhs - fc.rhs);
    // residual is integral in unit form, so the 1e-9 * L_k tolerance is exact zero
    if (std::abs(residual) > 1e-9)
      report.flow_violations.push_back(
          {fc.node, fc.commodity, scale == ResidualScale::load ? residual * load : residual});
  }
  const double tol = 1e-9 * std::max(1.0, m.vehicle_capacity);
  for (const auto& cc : m.capacity_constraints) {
    double carried = 0.0;
    for (std::size_t x : cc.routes)
      if (a.x[x]) carried += m.load(m.x_vars[x]);
    const double excess = carried - static_cast<double>(a.n[cc.vehicle]) * m.vehicle_capacity;
    if (excess > tol) report.capacity_violations.push_back({m.n_vars[cc.vehicle].arc, excess});
  }
  report.feasible = report.flow_violations.empty() && report.capacity_violations.empty();
  return report;
}

ModelStats model_stats(const MipModel& m) {
  return {m.x_vars.size() + m.n_vars.size(),
          m.flow_constraints.size() + m.capacity_constraints.size()};
}

double mip_gap(double incumbent, double bound) {
  if (!(bound >= 0) || !(incumbent >= bound))
    throw BoundExceedsIncumbent("mip_gap requires incumbent >= bound >= 0 (got " +
                                std::to_string(incumbent) + ", " + std::to_string(bound) + ")");
  return std::abs(incumbent - bound) / (1e-10 + std::abs(incumbent));
}

std::string route_key(const MipModel& m, std::size_t x) {
  const auto& v = m.x_vars.at(x);
  return m.commodities[v.commodity].id + "|" + m.node_names[v.arc.from] + "|" +
         m.node_names[v.arc.to];
}

std::string vehicle_key(const MipModel& m, std::size_t n) {
  const auto& v = m.n_vars.at(n);
  return m.node_names[v.arc.from] + "|" + m.node_names[v.arc.to];
}

Assignment load_assignment(const MipModel& m, std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("assignment document: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("x") || !doc.contains("n") || doc.size() != 2 ||
      !doc["x"].is_object() || !doc["n"].is_object())
    throw KeyMismatch("assignment document needs exactly the objects \"x\" and \"n\"");

  std::map<std::string, std::size_t> xkeys, nkeys;
  for (std::size_t x = 0; x < m.x_vars.size(); ++x) xkeys.emplace(route_key(m, x), x);
  for (std::size_t n = 0; n < m.n_vars.size(); ++n) nkeys.emplace(vehicle_key(m, n), n);

  Assignment a = zero_assignment(m);
  auto read = [](const nlohmann::json& part, const std::map<std::string, std::size_t>& keys,
                 const char* what, auto&& store) {
    if (part.size() != keys.size())
      throw KeyMismatch(std::string(what) + " has " + std::to_string(part.size()) +
                        " entries, model has " + std::to_string(keys.size()));
    for (const auto& item : part.items()) {
      auto it = keys.find(item.key());
      if (it == keys.end()) throw KeyMismatch(std::string("unknown ") + what + " key " + item.key());
      if (!item.value().is_number_integer() || item.value().get<std::int64_t>() < 0)
        throw KeyMismatch(std::string(what) + " value for " + item.key() + " must be an integer");
      store(it->second, item.value().get<std::int64_t>());
    }
  };
  read(doc["x"], xkeys, "x", [&](std::size_t x, std::int64_t v) {
    if (v > 1) throw KeyMismatch("x value for " + route_key(m, x) + " must be 0 or 1");
    a.x[x] = static_cast<std::uint8_t>(v);
  });
  read(doc["n"], nkeys, "n", [&](std::size_t n, std::int64_t v) { a.n[n] = v; });
  return a;
}

std::string dump_assignment(const MipModel& m, const Assignment& a) {
  require_match(m, a);
  nlohmann::ordered_json doc;
  doc["x"] = nlohmann::ordered_json::object();
  doc["n"] = nlohmann::ordered_json::object();
  for (std::size_t x = 0; x < a.x.size(); ++x) doc["x"][route_key(m, x)] = a.x[x];
  for (std::size_t n = 0; n < a.n.size(); ++n) doc["n"][vehicle_key(m, n)] = a.n[n];
  return doc.dump(2);
}

}  // namespace mcnf
