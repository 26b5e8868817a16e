#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcnf/instance.hpp"
#include "mcnf/preprocess.hpp"
#include "mcnf/solve.hpp"

namespace mcnf {

struct GeneratorConfig {
  std::size_t num_nodes = 5;
  double arc_density = 0.5;        // fraction of nearest out-neighbours kept, (0, 1]
  double load_min = 1.0;
  double load_max = 20.0;
  double load_step = 1.0;          // loads are multiples of this
  double tat_slack = 1.5;          // >= 1, times the fastest feasible path
  double commodity_fraction = 0.5; // of the n(n-1) OD pairs, (0, 1]
  std::uint64_t seed = 1;
  double vehicle_capacity = 30.0;
  double cost_per_km = 1.0;
  double speed = 60.0;
  double hop_processing_time = 0.5;
  std::size_t max_hops = kDefaultMaxHops;  // every commodity has a path within this many hops

  friend bool operator==(const GeneratorConfig&, const GeneratorConfig&) = default;
};

// Throws Error when the configuration is out of range.
void validate_config(const GeneratorConfig& cfg);

// Nodes uniform in a 100 x 100 km square; each node keeps its nearest
// out-neighbours plus a ring 1 -> 2 -> ... -> n -> 1; distances are Euclidean
// rounded to 0.1 km. OD pairs are drawn without replacement among pairs that
// are connected within max_hops, and tat = tat_slack * fastest such path.
Instance generate_instance(const GeneratorConfig& cfg);

// Searches node count and commodity count so that the built model has about
// `target` variables (node count first, then the commodity prefix).
GeneratorConfig size_for_variables(std::size_t target, GeneratorConfig base,
                                   const RestrictionPolicy& policy, std::size_t max_hops);

enum class SolverKind { hybrid, exact, greedy, anneal };

SolverKind parse_solver_kind(std::string_view name);
std::string_view solver_kind_name(SolverKind kind);

struct SolverConfig {
  SolverKind kind = SolverKind::hybrid;
  std::size_t sweeps = 2000;
  std::optional<std::size_t> restarts;  // default: the schedule rule
  std::uint64_t seed = 0;
  double time_limit_s = 60.0;
  std::size_t node_limit = 1'000'000;
  bool repair = true;
};

// Runs one solver on a preprocessed instance; `enc` is needed for hybrid and anneal.
SolveResult run_solver(const SolverConfig& solver, const MipModel& m,
                       const PreprocessedInstance& pre, const EncodedModel* enc);

struct BenchInstance {
  GeneratorConfig config;
  std::optional<std::size_t> target_variables;
  std::optional<double> time_limit_s;  // overrides every solver's budget
};

struct BenchOptions {
  RestrictionPolicy policy = policy::All{};
  std::size_t max_hops = kDefaultMaxHops;
  std::size_t path_cap = kDefaultPathCap;
};

struct BenchRecord {
  std::size_t num_variables = 0;
  std::size_t num_constraints = 0;
  std::string solver_name;
  double objective = 0.0;
  double wall_time = 0.0;
  double gap = 0.0;
  std::uint64_t instance_seed = 0;
  bool feasible = false;
  std::string note;  // solver status, or the error that stopped this entry
};

struct BenchSuite {
  std::vector<BenchInstance> instances;
  BenchOptions options;
  SolverConfig solver_defaults;
};

// Throws ParseError or SchemaError.
BenchSuite load_suite(std::string_view document);

// One record per (instance, solver) in suite order. Errors become annotated
// records. Throws Error if `instances` or `solvers` is empty.
std::vector<BenchRecord> run_benchmark(const std::vector<BenchInstance>& instances,
                                       const std::vector<SolverConfig>& solvers,
                                       const BenchOptions& options = {});

enum class ReportFormat { csv, table, plotdata };

ReportFormat parse_report_format(std::string_view name);

struct ReportOptions {
  bool timings = true;  // false prints NA for running time
};

std::string emit_report(const std::vector<BenchRecord>& records, ReportFormat format,
                        const ReportOptions& options = {});

}  // namespace mcnf
