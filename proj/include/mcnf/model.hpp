#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mcnf/instance.hpp"
#include "mcnf/preprocess.hpp"

namespace mcnf {

// Commodity kept by the model (positive load). `source` indexes Instance::commodities.
struct ModelCommodity {
  CommodityIndex source = 0;
  std::string id;
  NodeIndex origin = 0;
  NodeIndex destination = 0;
  double load = 0.0;
};

// x_kij: commodity k is routed over arc (i, j). `commodity` indexes MipModel::commodities.
struct RouteVar {
  std::size_t commodity = 0;
  Arc arc;
};

// N_ij: number of vehicles on an arc, 0 <= N_ij <= upper.
struct VehicleVar {
  Arc arc;
  double cost = 0.0;  // d_ij * CV
  std::int64_t upper = 0;
};

// Unit-flow conservation at one node for one commodity:
//   sum(out x) - sum(in x) = rhs,  rhs in {+1, -1, 0}.
// Multiplying by the commodity load gives the load-scaled form.
struct FlowConstraint {
  NodeIndex node = 0;
  std::size_t commodity = 0;
  std::vector<std::pair<std::size_t, int>> terms;  // (route var, +1 out / -1 in)
  int rhs = 0;
};

// sum_k L_k x_kij <= N_ij * W on one arc.
struct CapacityConstraint {
  std::size_t vehicle = 0;
  std::vector<std::size_t> routes;
};

struct MipModel {
  std::vector<ModelCommodity> commodities;
  std::vector<RouteVar> x_vars;
  std::vector<VehicleVar> n_vars;
  std::vector<FlowConstraint> flow_constraints;
  std::vector<CapacityConstraint> capacity_constraints;
  std::vector<std::string> node_names;
  double vehicle_capacity = 0.0;
  double cost_per_km = 0.0;
  double longest_path_km = 0.0;  // over all surviving paths

  std::optional<std::size_t> route_index(std::size_t commodity, Arc arc) const;
  std::optional<std::size_t> vehicle_index(Arc arc) const;

  double load(const RouteVar& x) const { return commodities[x.commodity].load; }

 private:
  friend MipModel build_mip(const Instance&, const PreprocessedInstance&);
  std::map<std::pair<std::size_t, Arc>, std::size_t> route_lookup_;
  std::map<Arc, std::size_t> vehicle_lookup_;
};

// Candidate solution, indexed like MipModel::x_vars and MipModel::n_vars.
struct Assignment {
  std::vector<std::uint8_t> x;
  std::vector<std::int64_t> n;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct FlowViolation {
  NodeIndex node = 0;
  std::size_t commodity = 0;
  double residual = 0.0;  // lhs - b_ik
};

struct CapacityViolation {
  Arc arc;
  double excess = 0.0;  // carried load - N_ij * W
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<FlowViolation> flow_violations;
  std::vector<CapacityViolation> capacity_violations;
};

struct ModelStats {
  std::size_t num_variables = 0;
  std::size_t num_constraints = 0;
};

// Throws InfeasibleCommodity if a positive-load commodity has no surviving path.
MipModel build_mip(const Instance& inst, const PreprocessedInstance& pre);

// Smallest vehicle count that carries `load` with capacity W.
std::int64_t vehicles_needed(double load, double capacity);

Assignment zero_assignment(const MipModel& m);

// Routes each model commodity along the given path (indexed like MipModel::commodities)
// and sets N_ij = vehicles_needed(arc flow).
Assignment assignment_from_paths(const MipModel& m, const std::vector<const Path*>& paths);

// Recomputes N_ij from the x part so every capacity constraint holds.
void repair_vehicles(const MipModel& m, Assignment& a);

// Throws KeyMismatch.
double objective_value(const MipModel& m, const Assignment& a);

enum class ResidualScale { load, unit };

// Throws KeyMismatch.
FeasibilityReport check_feasibility(const MipModel& m, const Assignment& a,
                                    ResidualScale scale = ResidualScale::load);

ModelStats model_stats(const MipModel& m);

// |incumbent - bound| / (1e-10 + |incumbent|). Throws BoundExceedsIncumbent unless
// incumbent >= bound >= 0.
double mip_gap(double incumbent, double bound);

// Assignment document: {"x": {"k|i|j": 0/1}, "n": {"i|j": int}}. Throws KeyMismatch.
Assignment load_assignment(const MipModel& m, std::string_view document);
std::string dump_assignment(const MipModel& m, const Assignment& a);

std::string route_key(const MipModel& m, std::size_t x);
std::string vehicle_key(const MipModel& m, std::size_t n);

}  // namespace mcnf
