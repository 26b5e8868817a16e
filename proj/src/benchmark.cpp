#include <chrono>
#include <set>

#include <json.hpp>

#include "mcnf/harness.hpp"
#include "mcnf/model.hpp"

namespace mcnf {

SolverKind parse_solver_kind(std::string_view name) {
  if (name == "hybrid") return SolverKind::hybrid;
  if (name == "exact") return SolverKind::exact;
  if (name == "greedy") return SolverKind::greedy;
  if (name == "anneal") return SolverKind::anneal;
  throw SchemaError("solver", "unknown solver '" + std::string(name) + "'");
}

std::string_view solver_kind_name(SolverKind kind) {
  switch (kind) {
    case SolverKind::hybrid: return "hybrid";
    case SolverKind::exact: return "exact";
    case SolverKind::greedy: return "greedy";
    case SolverKind::anneal: return "anneal";
  }
  return "unknown";
}

SolveResult run_solver(const SolverConfig& solver, const MipModel& m,
                       const PreprocessedInstance& pre, const EncodedModel* enc) {
  auto schedule = [&] {
    auto s = default_schedule(enc->qubo, solver.seed, solver.sweeps);
    if (solver.restarts) s.restarts = *solver.restarts;
    return s;
  };
  switch (solver.kind) {
    case SolverKind::greedy:
      return greedy_solve(m, pre);
    case SolverKind::exact:
      return exact_solve(m, pre, solver.node_limit, solver.time_limit_s);
    case SolverKind::hybrid:
      if (!enc) throw Error("hybrid solver needs an encoded model");
      return hybrid_solve(m, pre, *enc, schedule(), solver.time_limit_s);
    case SolverKind::anneal:
      if (!enc) throw Error("anneal solver needs an encoded model");
      return anneal_solve(m, *enc, schedule(), solver.time_limit_s, solver.repair);
  }
  throw Error("unknown solver kind");
}

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& path,
                    const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw SchemaError(path, "expected an object");
  for (const auto& item : obj.items())
    if (!allowed.count(item.key())) throw SchemaError(path + "/" + item.key(), "unknown key");
}

template <typename T>
void read(const json& obj, const char* key, const std::string& path, T& out) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw SchemaError(path + "/" + key, "wrong type");
  }
}

SolverConfig read_solver_defaults(const json& obj, const std::string& path) {
  reject_unknown(obj, path, {"sweeps", "restarts", "seed", "time_limit_s", "node_limit", "repair"});
  SolverConfig s;
  read(obj, "sweeps", path, s.sweeps);
  if (obj.contains("restarts")) {
    std::size_t r = 0;
    read(obj, "restarts", path, r);
    s.restarts = r;
  }
  read(obj, "seed", path, s.seed);
  read(obj, "time_limit_s", path, s.time_limit_s);
  read(obj, "node_limit", path, s.node_limit);
  read(obj, "repair", path, s.repair);
  return s;
}

}  // namespace

BenchSuite load_suite(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("suite document: ") + e.what());
  }
  reject_unknown(doc, "", {"instances", "policy", "max_hops", "path_cap", "solver_settings"});
  BenchSuite suite;
  if (auto it = doc.find("policy"); it != doc.end()) {
    if (!it->is_string()) throw SchemaError("/policy", "expected a string");
    suite.options.policy = parse_policy(it->get<std::string>());
  }
  read(doc, "max_hops", "", suite.options.max_hops);
  read(doc, "path_cap", "", suite.options.path_cap);
  if (auto it = doc.find("solver_settings"); it != doc.end())
    suite.solver_defaults = read_solver_defaults(*it, "/solver_settings");

  auto it = doc.find("instances");
  if (it == doc.end() || !it->is_array()) throw SchemaError("/instances", "expected an array");
  for (std::size_t i = 0; i < it->size(); ++i) {
    const std::string path = "/instances/" + std::to_string(i);
    const json& e = (*it)[i];
    reject_unknown(e, path,
                   {"nodes", "density", "commodities", "seed", "load_min", "load_max", "load_step",
                    "tat_slack", "capacity", "cost_per_km", "speed", "hop_processing_time",
                    "target_variables", "time_limit_s"});
    BenchInstance bi;
    auto& c = bi.config;
    read(e, "nodes", path, c.num_nodes);
    read(e, "density", path, c.arc_density);
    read(e, "commodities", path, c.commodity_fraction);
    read(e, "seed", path, c.seed);
    read(e, "load_min", path, c.load_min);
    read(e, "load_max", path, c.load_max);
    read(e, "load_step", path, c.load_step);
    read(e, "tat_slack", path, c.tat_slack);
    read(e, "capacity", path, c.vehicle_capacity);
    read(e, "cost_per_km", path, c.cost_per_km);
    read(e, "speed", path, c.speed);
    read(e, "hop_processing_time", path, c.hop_processing_time);
    c.max_hops = suite.options.max_hops;
    if (e.contains("target_variables")) {
      std::size_t t = 0;
      read(e, "target_variables", path, t);
      bi.target_variables = t;
    }
    if (e.contains("time_limit_s")) {
      double t = 0;
      read(e, "time_limit_s", path, t);
      bi.time_limit_s = t;
    }
    try {
      validate_config(c);
    } catch (const Error& err) {
      throw SchemaError(path, err.what());
    }
    suite.instances.push_back(std::move(bi));
  }
  return suite;
}

std::vector<BenchRecord> run_benchmark(const std::vector<BenchInstance>& instances,
                                       const std::vector<SolverConfig>& solvers,
                                       const BenchOptions& options) {
  if (instances.empty()) throw Error("benchmark suite is empty");
  if (solvers.empty()) throw Error("benchmark needs at least one solver");

  std::vector<BenchRecord> records;
  for (const auto& entry : instances) {
    auto failed = [&](const std::string& why, std::size_t vars, std::size_t cons) {
      for (const auto& s : solvers) {
        BenchRecord r;
        r.num_variables = vars;
        r.num_constraints = cons;
        r.solver_name = std::string(solver_kind_name(s.kind));
        r.instance_seed = entry.config.seed;
        r.gap = 1.0;
        r.note = "error: " + why;
        records.push_back(std::move(r));
      }
    };

    std::optional<Instance> inst;
    PreprocessedInstance pre;
    MipModel model;
    try {
      GeneratorConfig cfg = entry.config;
      cfg.max_hops = options.max_hops;
      if (entry.target_variables)
        cfg = size_for_variables(*entry.target_variables, cfg, options.policy, options.max_hops);
      inst = generate_instance(cfg);
      pre = restrict_instance(*inst, build_restriction_matrix(*inst, options.policy),
                              options.max_hops, options.path_cap);
      model = build_mip(*inst, pre);
    } catch (const std::exception& e) {
      failed(e.what(), 0, 0);
      continue;
    }
    const ModelStats stats = model_stats(model);

    std::optional<EncodedModel> enc;
    for (const auto& s : solvers) {
      BenchRecord r;
      r.num_variables = stats.num_variables;
      r.num_constraints = stats.num_constraints;
      r.solver_name = std::string(solver_kind_name(s.kind));
      r.instance_seed = entry.config.seed;
      try {
        if (!enc && (s.kind == SolverKind::hybrid || s.kind == SolverKind::anneal))
          enc = encode_qubo(model, default_penalties(model));
        SolverConfig effective = s;
        if (entry.time_limit_s) effective.time_limit_s = *entry.time_limit_s;
        const SolveResult result = run_solver(effective, model, pre, enc ? &*enc : nullptr);
        r.objective = result.objective;
        r.wall_time = result.wall_time;
        r.gap = result.gap;
        r.feasible = result.feasible;
        r.note = result.status;
      } catch (const std::exception& e) {
        r.gap = 1.0;
        r.note = std::string("error: ") + e.what();
      }
      records.push_back(std::move(r));
    }
  }
  return records;
}

}  // namespace mcnf
