// Command-line front end: generate, preprocess, encode, solve, bench.
//
// Exit codes: 0 success, 2 input error, 3 no feasible result within budget.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcnf/encode.hpp"
#include "mcnf/harness.hpp"
#include "mcnf/model.hpp"
#include "mcnf/preprocess.hpp"
#include "mcnf/solve.hpp"

namespace {

constexpr int kInputError = 2;
constexpr int kNoFeasible = 3;

struct InputError : mcnf::Error {
  using mcnf::Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

mcnf::Instance load_checked(const std::string& path) {
  auto inst = mcnf::load_instance(read_file(path));
  const auto report = mcnf::validate_instance(inst);
  for (const auto& issue : report.issues)
    std::cerr << (issue.severity == mcnf::Severity::error ? "error: " : "warning: ")
              << issue.location << ": " << issue.message << '\n';
  if (!report.ok) throw InputError("instance " + path + " is invalid");
  return inst;
}

struct ModelInputs {
  std::string input;
  std::string policy = "all";
  std::size_t max_hops = mcnf::kDefaultMaxHops;
};

void add_model_options(CLI::App* cmd, ModelInputs& in) {
  cmd->add_option("-i,--input", in.input, "instance JSON")->required();
  cmd->add_option("--policy", in.policy, "restriction policy: all | nearest:<m> | radius:<km>");
  cmd->add_option("--max-hops", in.max_hops, "hop limit for path enumeration")
      ->check(CLI::PositiveNumber);
}

struct Built {
  mcnf::Instance inst;
  mcnf::PreprocessedInstance pre;
  mcnf::MipModel model;
};

Built build(const ModelInputs& in) {
  Built b{load_checked(in.input), {}, {}};
  const auto rm = mcnf::build_restriction_matrix(b.inst, mcnf::parse_policy(in.policy));
  b.pre = mcnf::restrict_instance(b.inst, rm, in.max_hops);
  b.model = mcnf::build_mip(b.inst, b.pre);
  return b;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multicommodity line-haul network flow toolkit"};
  app.require_subcommand(1);

  mcnf::GeneratorConfig gen;
  std::string gen_out;
  auto* generate = app.add_subcommand("generate", "write a synthetic instance");
  generate->add_option("--nodes", gen.num_nodes)->check(CLI::Range(2, 100000));
  generate->add_option("--density", gen.arc_density, "fraction of nearest neighbours kept");
  generate->add_option("--commodities", gen.commodity_fraction, "fraction of OD pairs with load");
  generate->add_option("--seed", gen.seed);
  generate->add_option("--load-min", gen.load_min);
  generate->add_option("--load-max", gen.load_max);
  generate->add_option("--tat-slack", gen.tat_slack);
  generate->add_option("--capacity", gen.vehicle_capacity);
  generate->add_option("--max-hops", gen.max_hops);
  generate->add_option("-o,--output", gen_out, "output path (default stdout)");

  ModelInputs pre_in;
  std::string pre_out;
  auto* preprocess = app.add_subcommand("preprocess", "enumerate and filter paths");
  add_model_options(preprocess, pre_in);
  preprocess->add_option("-o,--output", pre_out, "output path (default stdout)");

  ModelInputs enc_in;
  std::string enc_out, varmap_out;
  std::optional<double> flow_penalty, capacity_penalty, slack_unit;
  auto* encode = app.add_subcommand("encode", "write the QUBO and its variable map");
  add_model_options(encode, enc_in);
  encode->add_option("-o,--output", enc_out, "QUBO file")->required();
  encode->add_option("--varmap", varmap_out, "variable map JSON (default <output>.varmap.json)");
  encode->add_option("--flow-penalty", flow_penalty);
  encode->add_option("--capacity-penalty", capacity_penalty);
  encode->add_option("--slack-unit", slack_unit);

  ModelInputs solve_in;
  mcnf::SolverConfig solver;
  std::string solver_name = "hybrid", repair = "on", check_path;
  std::size_t restarts = 0;
  auto* solve = app.add_subcommand("solve", "solve an instance and print the result as JSON");
  add_model_options(solve, solve_in);
  solve->add_option("--solver", solver_name)
      ->check(CLI::IsMember({"hybrid", "exact", "greedy", "anneal"}));
  solve->add_option("--seed", solver.seed);
  solve->add_option("--sweeps", solver.sweeps)->check(CLI::PositiveNumber);
  solve->add_option("--restarts", restarts, "annealing restarts (default: schedule rule)");
  solve->add_option("--time-limit-s", solver.time_limit_s);
  solve->add_option("--node-limit", solver.node_limit);
  solve->add_option("--repair", repair)->check(CLI::IsMember({"on", "off"}));
  solve->add_option("--check", check_path, "evaluate an assignment document instead of solving");

  std::string suite_path, solver_list = "hybrid,exact", format = "csv", bench_out;
  bool no_timings = false;
  auto* bench = app.add_subcommand("bench", "run a benchmark suite");
  bench->add_option("--suite", suite_path)->required();
  bench->add_option("--solvers", solver_list, "comma-separated solver names");
  bench->add_option("--format", format)->check(CLI::IsMember({"csv", "table", "plotdata"}));
  bench->add_flag("--no-timings", no_timings, "print NA instead of running times");
  bench->add_option("-o,--output", bench_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*generate) {
      write_output(gen_out, mcnf::dump_instance(mcnf::generate_instance(gen)) + "\n");
    } else if (*preprocess) {
      const auto inst = load_checked(pre_in.input);
      const auto rm = mcnf::build_restriction_matrix(inst, mcnf::parse_policy(pre_in.policy));
      const auto pre = mcnf::restrict_instance(inst, rm, pre_in.max_hops);
      for (auto k : pre.infeasible)
        std::cerr << "warning: commodity " << inst.commodities[k].id << " has no surviving path\n";
      write_output(pre_out, mcnf::dump_preprocessed(inst, pre) + "\n");
    } else if (*encode) {
      const auto b = build(enc_in);
      auto cfg = mcnf::default_penalties(b.model);
      if (flow_penalty) cfg.flow_penalty = *flow_penalty;
      if (capacity_penalty) cfg.capacity_penalty = *capacity_penalty;
      if (slack_unit) cfg.slack_unit = *slack_unit;
      if (!(cfg.flow_penalty > 0 && cfg.capacity_penalty > 0 && cfg.slack_unit > 0))
        throw InputError("penalties and slack unit must be positive");
      const auto enc = mcnf::encode_qubo(b.model, cfg);
      for (const auto& w : enc.warnings) std::cerr << "warning: " << w << '\n';
      std::ofstream out(enc_out);
      if (!out) throw InputError("cannot write " + enc_out);
      mcnf::write_qubo(out, enc.qubo);
      if (varmap_out.empty())
        varmap_out = std::filesystem::path(enc_out).replace_extension(".varmap.json").string();
      write_output(varmap_out, mcnf::dump_varmap(b.model, enc) + "\n");
    } else if (*solve) {
      const auto b = build(solve_in);
      if (!check_path.empty()) {
        const auto a = mcnf::load_assignment(b.model, read_file(check_path));
        const auto report = mcnf::check_feasibility(b.model, a);
        nlohmann::ordered_json doc;
        doc["objective"] = mcnf::objective_value(b.model, a);
        doc["feasible"] = report.feasible;
        doc["flow_violations"] = nlohmann::ordered_json::array();
        for (const auto& v : report.flow_violations)
          doc["flow_violations"].push_back({{"node", b.model.node_names[v.node]},
                                            {"commodity", b.model.commodities[v.commodity].id},
                                            {"residual", v.residual}});
        doc["capacity_violations"] = nlohmann::ordered_json::array();
        for (const auto& v : report.capacity_violations)
          doc["capacity_violations"].push_back({{"from", b.model.node_names[v.arc.from]},
                                                {"to", b.model.node_names[v.arc.to]},
                                                {"excess", v.excess}});
        std::cout << doc.dump(2) << '\n';
        return 0;
      }
      solver.kind = mcnf::parse_solver_kind(solver_name);
      solver.repair = repair == "on";
      if (restarts > 0) solver.restarts = restarts;
      std::optional<mcnf::EncodedModel> enc;
      if (solver.kind == mcnf::SolverKind::hybrid || solver.kind == mcnf::SolverKind::anneal)
        enc = mcnf::encode_qubo(b.model, mcnf::default_penalties(b.model));
      const auto result = mcnf::run_solver(solver, b.model, b.pre, enc ? &*enc : nullptr);
      std::cout << mcnf::dump_result(b.model, result) << '\n';
      if (!result.feasible) return kNoFeasible;
    } else if (*bench) {
      const auto suite = mcnf::load_suite(read_file(suite_path));
      std::vector<mcnf::SolverConfig> solvers;
      std::stringstream names(solver_list);
      for (std::string name; std::getline(names, name, ',');) {
        if (name.empty()) continue;
        auto s = suite.solver_defaults;
        s.kind = mcnf::parse_solver_kind(name);
        solvers.push_back(s);
      }
      if (solvers.empty()) throw InputError("no solvers given");
      const auto records = mcnf::run_benchmark(suite.instances, solvers, suite.options);
      write_output(bench_out, mcnf::emit_report(records, mcnf::parse_report_format(format),
                                                {.timings = !no_timings}));
    }
  } catch (const mcnf::InfeasibleCommodity& e) {
    std::cerr << "error: " << e.what() << '\n';
    return *solve ? kNoFeasible : kInputError;
  } catch (const mcnf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
