// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. Pass criterion numbers as arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mcnf/encode.hpp"
#include "mcnf/harness.hpp"
#include "mcnf/model.hpp"
#include "mcnf/preprocess.hpp"
#include "mcnf/solve.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace mcnf;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double max_seconds;  // 0: no runtime bound
  std::function<Outcome()> run;
};

std::string format(const char* spec, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, spec, args...);
  return buf;
}

bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

PreprocessedInstance preprocess_all(const Instance& inst, std::size_t max_hops) {
  return restrict_instance(inst, build_restriction_matrix(inst, policy::All{}), max_hops);
}

// Random instances whose commodities all keep at least one path.
Instance feasible_instance(std::mt19937_64& rng, const test::RandomSpec& spec, std::size_t max_hops) {
  for (;;) {
    auto inst = test::random_instance(rng, spec);
    if (preprocess_all(inst, max_hops).infeasible.empty()) return inst;
  }
}

Outcome encoder_identity() {
  std::mt19937_64 rng(101);
  const test::RandomSpec spec{.max_nodes = 3, .max_commodities = 2, .capacity = 4, .max_load = 5};
  Outcome out;
  std::size_t instances = 0, vectors = 0, largest = 0;
  double worst = 0;
  while (instances < 50) {
    const auto inst = feasible_instance(rng, spec, 2);
    const auto m = build_mip(inst, preprocess_all(inst, 2));
    const auto enc = encode_qubo(m, default_penalties(m));
    if (enc.size() == 0 || enc.size() > 24) continue;
    ++instances;
    largest = std::max(largest, enc.size());
    for (std::uint64_t word = 0; word < (std::uint64_t{1} << enc.size()); ++word) {
      const auto bits = test::bits_of(word, enc.size());
      const double got = qubo_energy(enc.qubo, bits);
      const double want = test::penalized_objective(m, enc, bits);
      const double rel = std::abs(got - want) / std::max(1.0, std::abs(want));
      worst = std::max(worst, rel);
      ++vectors;
    }
  }
  out.pass = worst <= 1e-9;
  out.detail = format("%zu instances, %zu bit vectors, largest %zu vars, worst rel err %.2e",
                      instances, vectors, largest, worst);
  return out;
}

Outcome ising_equivalence() {
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> size_dist(1, 16);
  std::uniform_int_distribution<int> int_coef(-20, 20);
  std::uniform_real_distribution<double> real_coef(-50.0, 50.0);
  std::bernoulli_distribution present(0.4);
  double worst_real = 0;
  bool integer_exact = true;
  std::size_t vectors = 0;
  for (int trial = 0; trial < 50; ++trial) {
    // even trials use integer coefficients, whose Ising image is exact in binary
    const bool integral = trial % 2 == 0;
    const int n = size_dist(rng);
    QuboBuilder<double> b(n);
    for (int p = 0; p < n; ++p)
      for (int q = p; q < n; ++q)
        if (p == q || present(rng))
          b.add_quadratic(p, q, integral ? int_coef(rng) : real_coef(rng));
    b.add_offset(integral ? int_coef(rng) : real_coef(rng));
    const auto qubo = b.build();
    const auto ising = qubo_to_ising(qubo);
    for (std::uint64_t word = 0; word < (std::uint64_t{1} << n); ++word) {
      const auto bits = test::bits_of(word, static_cast<std::size_t>(n));
      const double e_q = qubo_energy(qubo, bits);
      const double e_s = ising_energy(ising, to_spins(bits));
      if (integral)
        integer_exact = integer_exact && e_q == e_s;
      else
        worst_real = std::max(worst_real, std::abs(e_q - e_s) / std::max(1.0, std::abs(e_q)));
      ++vectors;
    }
  }
  return {integer_exact && worst_real <= 1e-12,
          format("50 QUBOs, %zu spin states, integer cases %s, worst real rel err %.2e", vectors,
                 integer_exact ? "exact" : "INEXACT", worst_real)};
}

Outcome exact_oracle() {
  std::mt19937_64 rng(303);
  const test::RandomSpec spec{.max_nodes = 5, .max_commodities = 4};
  std::size_t matched = 0, certified = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto inst = feasible_instance(rng, spec, 3);
    const auto pre = preprocess_all(inst, 3);
    const auto m = build_mip(inst, pre);
    const double optimum = test::exhaustive_optimum(inst, test::surviving_sequences(pre));
    const auto r = exact_solve(m, pre, 10'000'000);
    if (close_rel(r.objective, optimum, 1e-9)) ++matched;
    if (r.gap == 0.0 && r.status == "optimal") ++certified;
  }
  return {matched == 100 && certified == 100,
          format("100 instances, %zu match exhaustive enumeration, %zu certified gap 0", matched,
                 certified)};
}

Outcome annealer_tiny() {
  std::mt19937_64 rng(404);
  const test::RandomSpec spec{.max_nodes = 4, .max_commodities = 3};
  std::size_t optimal = 0, feasible = 0;
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    const auto inst = feasible_instance(rng, spec, kDefaultMaxHops);
    const auto pre = preprocess_all(inst, kDefaultMaxHops);
    const auto m = build_mip(inst, pre);
    const auto enc = encode_qubo(m, default_penalties(m));
    auto sched = default_schedule(enc.qubo, 1000 + trial, 2000);
    sched.restarts = 16;
    const auto h = hybrid_solve(m, pre, enc, sched, kNoTimeLimit);
    const auto e = exact_solve(m, pre, 10'000'000);
    if (h.feasible) ++feasible;
    if (h.feasible && close_rel(h.objective, e.objective, 1e-9)) ++optimal;
  }
  return {feasible == 50 && optimal * 100 >= 95 * 50,
          format("50 instances, hybrid optimal on %zu (%.0f%%), feasible on %zu", optimal,
                 100.0 * static_cast<double>(optimal) / 50.0, feasible)};
}

Outcome consolidation_fixture() {
  const auto inst = test::t2();
  const auto pre = preprocess_all(inst, kDefaultMaxHops);
  const auto m = build_mip(inst, pre);
  const auto enc = encode_qubo(m, default_penalties(m));
  const double greedy = greedy_solve(m, pre).objective;
  const double exact = exact_solve(m, pre, 1000).objective;
  // schedule seed 7, default sweeps and restarts
  const double hybrid = hybrid_solve(m, pre, enc, default_schedule(enc.qubo, 7), kNoTimeLimit).objective;
  return {greedy == 16.0 && exact == 9.0 && hybrid == 9.0,
          format("greedy %.1f, exact %.1f, hybrid %.1f (seed 7)", greedy, exact, hybrid)};
}

Outcome preprocessing_soundness() {
  std::mt19937_64 rng(606);
  std::size_t mismatches = 0, over_tat = 0, paths = 0, kept = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const test::RandomSpec spec{.max_nodes = 7, .max_commodities = 4, .arc_probability = 0.5,
                                .tat_factor = 0.3};
    const auto inst = test::random_instance(rng, spec);
    const std::size_t max_hops = 1 + static_cast<std::size_t>(rng() % 6);
    const auto policy = trial % 3 == 0 ? RestrictionPolicy{policy::All{}}
                        : trial % 3 == 1 ? RestrictionPolicy{policy::NearestM{1 + rng() % 4}}
                                         : RestrictionPolicy{policy::Radius{5.0 + static_cast<double>(rng() % 15)}};
    const auto rm = build_restriction_matrix(inst, policy);
    for (CommodityIndex k = 0; k < inst.commodities.size(); ++k) {
      const auto& c = inst.commodities[k];
      const auto found = enumerate_paths(inst, rm, k, max_hops, kDefaultPathCap);
      std::set<std::vector<NodeIndex>> got;
      for (const auto& p : found) got.insert(p.nodes);
      if (got.size() != found.size() ||
          got != test::brute_force_paths(inst, rm, c.origin, c.destination, max_hops))
        ++mismatches;
      paths += found.size();
      for (const auto& p : filter_paths_by_tat(inst, found, k)) {
        ++kept;
        if (test::sequence_time(inst, p.nodes) > c.tat) ++over_tat;
      }
    }
  }
  return {mismatches == 0 && over_tat == 0,
          format("100 graphs, %zu paths, %zu enumeration mismatches, %zu of %zu kept paths over tat",
                 paths, mismatches, over_tat, kept)};
}

// Synthetic sweep over model sizes with the same per-size budget for both solvers.
Outcome trend() {
  const std::vector<std::size_t> targets{100, 500, 2000, 10000, 20000};
  const std::vector<double> budgets{2, 5, 15, 60, 120};
  std::vector<BenchInstance> suite;
  for (std::size_t i = 0; i < targets.size(); ++i)
    suite.push_back({.config = {.arc_density = 0.3, .seed = 2024 + i},
                     .target_variables = targets[i],
                     .time_limit_s = budgets[i]});
  const std::vector<SolverConfig> solvers{
      {.kind = SolverKind::hybrid, .sweeps = 200, .restarts = 8, .seed = 11},
      // no node limit: the exact search runs until the shared time budget
      {.kind = SolverKind::exact, .node_limit = std::numeric_limits<std::size_t>::max()}};
  const BenchOptions options{.max_hops = 3};
  const auto records = run_benchmark(suite, solvers, options);
  std::fputs(emit_report(records, ReportFormat::table).c_str(), stdout);

  Outcome out;
  double prev_time = -1, worst_ratio = 0;
  bool grows = true;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const auto& h = records[2 * i];
    const auto& e = records[2 * i + 1];
    if (!h.feasible || !e.feasible) {
      out.pass = false;
      out.detail += format("size %zu infeasible; ", targets[i]);
      continue;
    }
    const double best = std::min(h.objective, e.objective);
    worst_ratio = std::max(worst_ratio, h.objective / best);
    grows = grows && h.wall_time > prev_time;
    prev_time = h.wall_time;
  }
  out.pass = out.pass && grows && worst_ratio <= 2.5;
  out.detail += format("hybrid wall time %s with size, worst hybrid/best ratio %.3f",
                       grows ? "grows" : "does NOT grow", worst_ratio);
  return out;
}

Outcome gap_formula() {
  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> value(1.0, 1e6), fraction(0.0, 1.0), scale(1e-3, 1e3);
  bool identity = true, invariant = true;
  for (int trial = 0; trial < 1000; ++trial) {
    const double inc = value(rng), bound = inc * fraction(rng), s = scale(rng);
    identity = identity && mip_gap(inc, inc) == 0.0;
    invariant = invariant && close_rel(mip_gap(inc, bound), mip_gap(s * inc, s * bound), 1e-9);
  }
  const double g = mip_gap(100.0, 67.2);
  const bool table = std::abs(g - 0.328) <= 1e-12;
  return {identity && invariant && table,
          format("gap(i,i)=0 %s, scale invariance %s, gap(100, 67.2) = %.15f", identity ? "ok" : "FAILS",
                 invariant ? "ok" : "FAILS", g)};
}

Outcome determinism() {
  std::ifstream file(MCNF_SUITE);
  if (!file) throw Error(std::string("cannot read ") + MCNF_SUITE);
  std::stringstream text;
  text << file.rdbuf();
  const auto suite = load_suite(text.str());
  std::vector<SolverConfig> solvers;
  for (auto kind : {SolverKind::greedy, SolverKind::exact, SolverKind::hybrid, SolverKind::anneal}) {
    SolverConfig s = suite.solver_defaults;
    s.kind = kind;
    solvers.push_back(s);
  }
  const ReportOptions opts{.timings = false};
  const auto first = emit_report(run_benchmark(suite.instances, solvers, suite.options), ReportFormat::csv, opts);
  const auto second = emit_report(run_benchmark(suite.instances, solvers, suite.options), ReportFormat::csv, opts);
  const auto rows = static_cast<std::size_t>(std::count(first.begin(), first.end(), '\n'));
  return {first == second, format("%zu csv lines, %s", rows, first == second ? "byte-identical" : "DIFFER")};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "encoder-oracle identity", 60, encoder_identity},
      {2, "Ising equivalence", 30, ising_equivalence},
      {3, "exact solver vs exhaustive enumeration", 120, exact_oracle},
      {4, "annealer optimality at tiny scale", 300, annealer_tiny},
      {5, "consolidation fixture", 0, consolidation_fixture},
      {6, "preprocessing soundness", 30, preprocessing_soundness},
      {7, "trend over model size", 900, trend},
      {8, "MIP gap formula", 0, gap_formula},
      {9, "end-to-end determinism", 0, determinism},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::stoi(argv[i]));

  int failed = 0;
  for (const auto& c : criteria) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = c.max_seconds == 0 || secs < c.max_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("criterion %d (%s): %s | %s | %.1f s%s\n", c.id, c.name, pass ? "PASS" : "FAIL",
                o.detail.c_str(), secs,
                in_time ? "" : format(" (limit %.0f s)", c.max_seconds).c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
