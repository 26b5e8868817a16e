#include "mcnf/instance.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

namespace mcnf {

using nlohmann::json;

NodeIndex Instance::node_index(std::string_view id) const {
  for (NodeIndex i = 0; i < nodes.size(); ++i)
    if (nodes[i] == id) return i;
  throw UnknownId("unknown node '" + std::string(id) + "'");
}

CommodityIndex Instance::commodity_index(std::string_view id) const {
  for (CommodityIndex k = 0; k < commodities.size(); ++k)
    if (commodities[k].id == id) return k;
  throw UnknownId("unknown commodity '" + std::string(id) + "'");
}

std::optional<double> Instance::distance(NodeIndex from, NodeIndex to) const {
  auto it = distances.find(Arc{from, to});
  if (it == distances.end()) return std::nullopt;
  return it->second;
}

std::vector<std::vector<NodeIndex>> Instance::adjacency() const {
  std::vector<std::vector<NodeIndex>> adj(nodes.size());
  for (const auto& [arc, km] : distances)
    if (arc.from < nodes.size() && arc.to < nodes.size()) adj[arc.from].push_back(arc.to);
  return adj;  // std::map order keeps each list sorted
}

double path_time(const Instance& inst, double length_km, std::size_t num_nodes) {
  const double hops = num_nodes > 2 ? static_cast<double>(num_nodes - 2) : 0.0;
  return length_km / inst.speed + inst.hop_processing_time * hops;
}

double supply_value(const Instance& inst, CommodityIndex k, NodeIndex i) {
  if (k >= inst.commodities.size())
    throw UnknownId("unknown commodity index " + std::to_string(k));
  if (i >= inst.nodes.size()) throw UnknownId("unknown node index " + std::to_string(i));
  const auto& c = inst.commodities[k];
  if (i == c.origin) return c.load;
  if (i == c.destination) return -c.load;
  return 0.0;
}

double supply_value(const Instance& inst, std::string_view commodity, std::string_view node) {
  return supply_value(inst, inst.commodity_index(commodity), inst.node_index(node));
}

namespace {

void reject_unknown_keys(const json& obj, const std::string& path,
                         std::initializer_list<std::string_view> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || item.key() == a;
    if (!known) throw SchemaError(path + "/" + item.key(), "unknown key");
  }
}

const json& require(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "/" + key, "missing required field");
  return *it;
}

const json& require_object(const json& v, const std::string& path) {
  if (!v.is_object()) throw SchemaError(path, "expected an object");
  return v;
}

const json& require_array(const json& v, const std::string& path) {
  if (!v.is_array()) throw SchemaError(path, "expected an array");
  return v;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected a number");
  return v.get<double>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) throw SchemaError(path, "expected a string");
  return v.get<std::string>();
}

NodeIndex lookup_node(const std::map<std::string, NodeIndex>& index, const std::string& id,
                      const std::string& path) {
  auto it = index.find(id);
  if (it == index.end()) throw SchemaError(path, "unknown node " + id);
  return it->second;
}

}  // namespace

Instance load_instance(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("instance document: ") + e.what());
  }
  require_object(doc, "");
  reject_unknown_keys(doc, "",
                      {"nodes", "arcs", "symmetric", "vehicle", "time_model", "commodities"});

  Instance inst;
  std::map<std::string, NodeIndex> index;
  const auto& nodes = require_array(require(doc, "", "nodes"), "/nodes");
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    auto id = text(nodes[n], "/nodes/" + std::to_string(n));
    if (!index.emplace(id, inst.nodes.size()).second)
      throw SchemaError("/nodes/" + std::to_string(n), "duplicate node " + id);
    inst.nodes.push_back(std::move(id));
  }

  bool symmetric = false;
  if (auto it = doc.find("symmetric"); it != doc.end()) {
    if (!it->is_boolean()) throw SchemaError("/symmetric", "expected a boolean");
    symmetric = it->get<bool>();
  }

  auto put_arc = [&](Arc arc, double km, const std::string& path) {
    auto [it, inserted] = inst.distances.emplace(arc, km);
    if (!inserted && it->second != km) throw SchemaError(path, "conflicting duplicate arc");
  };
  const auto& arcs = require_array(require(doc, "", "arcs"), "/arcs");
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    const std::string path = "/arcs/" + std::to_string(a);
    const auto& arc = require_object(arcs[a], path);
    reject_unknown_keys(arc, path, {"from", "to", "km"});
    const NodeIndex from =
        lookup_node(index, text(require(arc, path, "from"), path + "/from"), path + "/from");
    const NodeIndex to =
        lookup_node(index, text(require(arc, path, "to"), path + "/to"), path + "/to");
    const double km = number(require(arc, path, "km"), path + "/km");
    put_arc(Arc{from, to}, km, path);
    if (symmetric) put_arc(Arc{to, from}, km, path);
  }

  const auto& vehicle = require_object(require(doc, "", "vehicle"), "/vehicle");
  reject_unknown_keys(vehicle, "/vehicle", {"capacity", "cost_per_km"});
  inst.vehicle_capacity = number(require(vehicle, "/vehicle", "capacity"), "/vehicle/capacity");
  inst.vehicle_cost_per_km =
      number(require(vehicle, "/vehicle", "cost_per_km"), "/vehicle/cost_per_km");

  if (auto it = doc.find("time_model"); it != doc.end()) {
    require_object(*it, "/time_model");
    reject_unknown_keys(*it, "/time_model", {"speed", "hop_processing_time"});
    if (auto s = it->find("speed"); s != it->end()) inst.speed = number(*s, "/time_model/speed");
    if (auto h = it->find("hop_processing_time"); h != it->end())
      inst.hop_processing_time = number(*h, "/time_model/hop_processing_time");
  }

  std::set<std::string> seen;
  const auto& commodities = require_array(require(doc, "", "commodities"), "/commodities");
  for (std::size_t k = 0; k < commodities.size(); ++k) {
    const std::string path = "/commodities/" + std::to_string(k);
    const auto& c = require_object(commodities[k], path);
    reject_unknown_keys(c, path, {"id", "origin", "destination", "load", "tat"});
    Commodity com;
    com.id = text(require(c, path, "id"), path + "/id");
    if (!seen.insert(com.id).second) throw SchemaError(path + "/id", "duplicate commodity " + com.id);
    com.origin = lookup_node(index, text(require(c, path, "origin"), path + "/origin"),
                             path + "/origin");
    com.destination = lookup_node(
        index, text(require(c, path, "destination"), path + "/destination"), path + "/destination");
    com.load = number(require(c, path, "load"), path + "/load");
    com.tat = number(require(c, path, "tat"), path + "/tat");
    inst.commodities.push_back(std::move(com));
  }
  return inst;
}

std::string dump_instance(const Instance& inst) {
  json doc;
  doc["nodes"] = inst.nodes;
  doc["arcs"] = json::array();
  for (const auto& [arc, km] : inst.distances)
    doc["arcs"].push_back(
        {{"from", inst.nodes.at(arc.from)}, {"to", inst.nodes.at(arc.to)}, {"km", km}});
  doc["vehicle"] = {{"capacity", inst.vehicle_capacity},
                    {"cost_per_km", inst.vehicle_cost_per_km}};
  doc["time_model"] = {{"speed", inst.speed},
                       {"hop_processing_time", inst.hop_processing_time}};
  doc["commodities"] = json::array();
  for (const auto& c : inst.commodities)
    doc["commodities"].push_back({{"id", c.id},
                                  {"origin", inst.nodes.at(c.origin)},
                                  {"destination", inst.nodes.at(c.destination)},
                                  {"load", c.load},
                                  {"tat", c.tat}});
  return doc.dump(2);
}

ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  auto error = [&](std::string message, std::string location) {
    report.issues.push_back({Severity::error, std::move(message), std::move(location)});
  };
  auto node_name = [&](NodeIndex i) {
    return i < inst.nodes.size() ? inst.nodes[i] : "#" + std::to_string(i);
  };

  if (!(inst.vehicle_capacity > 0)) error("vehicle_capacity must be positive", "vehicle");
  if (!(inst.vehicle_cost_per_km > 0)) error("vehicle_cost_per_km must be positive", "vehicle");
  if (!(inst.speed > 0) || !std::isfinite(inst.speed)) error("speed must be positive", "time_model");
  if (!(inst.hop_processing_time >= 0) || !std::isfinite(inst.hop_processing_time))
    error("hop_processing_time must be nonnegative", "time_model");

  std::set<std::string> names;
  for (const auto& n : inst.nodes)
    if (!names.insert(n).second) error("duplicate node id " + n, "nodes");

  for (const auto& [arc, km] : inst.distances) {
    const std::string where = "arc " + node_name(arc.from) + "->" + node_name(arc.to);
    if (arc.from >= inst.nodes.size() || arc.to >= inst.nodes.size())
      error("arc references a node that does not exist", where);
    if (arc.from == arc.to) error("self-arc is not allowed", where);
    if (!(km > 0) || !std::isfinite(km)) error("distance must be finite and positive", where);
  }

  std::set<std::string> ids;
  for (const auto& c : inst.commodities) {
    const std::string where = "commodity " + c.id;
    if (!ids.insert(c.id).second) error("duplicate commodity id", where);
    if (c.origin >= inst.nodes.size() || c.destination >= inst.nodes.size())
      error("commodity references a node that does not exist", where);
    if (c.origin == c.destination) error("origin and destination must differ", where);
    if (!(c.load >= 0) || !std::isfinite(c.load)) error("load must be nonnegative", where);
    if (!(c.tat > 0)) error("tat must be positive", where);
  }

  report.ok = std::none_of(report.issues.begin(), report.issues.end(),
                           [](const Issue& i) { return i.severity == Severity::error; });
  return report;
}

}  // namespace mcnf
