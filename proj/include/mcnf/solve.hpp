#pragma once

#include <cstddef>
#include <limits>
#include <string>

#include "mcnf/anneal.hpp"
#include "mcnf/encode.hpp"
#include "mcnf/model.hpp"
#include "mcnf/preprocess.hpp"

namespace mcnf {

struct SolveResult {
  Assignment assignment;
  double objective = 0.0;
  bool feasible = false;
  double bound = 0.0;  // certified lower bound; 0 for heuristics
  double gap = 0.0;
  double wall_time = 0.0;  // seconds
  std::string solver_name;
  // optimal, node_limit, time_limit, heuristic, truncated
  std::string status;
};

// Each commodity on its surviving path with the fewest arcs (shortest among
// those), shipped independently with N_ij = vehicles_needed(flow).
// Throws InfeasibleCommodity.
Assignment greedy_construct(const MipModel& m, const PreprocessedInstance& pre);

SolveResult greedy_solve(const MipModel& m, const PreprocessedInstance& pre);

// Plain annealing: best sample decoded with or without vehicle repair.
SolveResult anneal_solve(const MipModel& m, const EncodedModel& enc, const AnnealSchedule& sched,
                         double time_limit_s, bool repair);

// Greedy incumbent refined by annealing. Restart 0 starts from the incumbent's
// bit image; every sample is decoded with repair and the cheapest feasible one
// wins. Never worse than the incumbent.
SolveResult hybrid_solve(const MipModel& m, const PreprocessedInstance& pre,
                         const EncodedModel& enc, const AnnealSchedule& sched,
                         double time_limit_s);

inline constexpr double kNoTimeLimit = std::numeric_limits<double>::infinity();

// Branch and bound over per-commodity path choices (largest load first).
// The first dive always completes; afterwards the search stops at node_limit
// nodes or time_limit_s, reporting the best open bound.
SolveResult exact_solve(const MipModel& m, const PreprocessedInstance& pre, std::size_t node_limit,
                        double time_limit_s = kNoTimeLimit);

std::string dump_result(const MipModel& m, const SolveResult& r);

}  // namespace mcnf
