#include "mcnf/solve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include <json.hpp>

namespace mcnf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::optional<Clock::time_point> deadline_after(Clock::time_point t0, double seconds) {
  if (!std::isfinite(seconds)) return std::nullopt;
  return t0 + std::chrono::duration_cast<Clock::duration>(
                  std::chrono::duration<double>(std::max(0.0, seconds)));
}

bool improves(double candidate, double incumbent) {
  return candidate < incumbent - 1e-9 * std::max(1.0, std::abs(incumbent));
}

void finish(const MipModel& m, SolveResult& r) {
  r.objective = objective_value(m, r.assignment);
  r.feasible = check_feasibility(m, r.assignment).feasible;
  r.gap = mip_gap(r.objective, std::min(r.bound, r.objective));
}

}  // namespace

Assignment greedy_construct(const MipModel& m, const PreprocessedInstance& pre) {
  std::vector<const Path*> choice;
  for (const auto& c : m.commodities) {
    const auto& paths = pre.paths.at(c.source);
    if (paths.empty()) throw InfeasibleCommodity(c.id);
    // paths are sorted by length, so min_element keeps the shortest among the fewest hops
    choice.push_back(&*std::min_element(paths.begin(), paths.end(), [](const Path& a, const Path& b) {
      return a.nodes.size() < b.nodes.size();
    }));
  }
  return assignment_from_paths(m, choice);
}

SolveResult greedy_solve(const MipModel& m, const PreprocessedInstance& pre) {
  const auto t0 = Clock::now();
  SolveResult r;
  r.solver_name = "greedy";
  r.status = "heuristic";
  r.assignment = greedy_construct(m, pre);
  r.wall_time = seconds_since(t0);
  finish(m, r);
  return r;
}

SolveResult anneal_solve(const MipModel& m, const EncodedModel& enc, const AnnealSchedule& sched,
                         double time_limit_s, bool repair) {
  const auto t0 = Clock::now();
  SolveResult r;
  r.solver_name = "anneal";
  r.status = "heuristic";
  r.assignment = zero_assignment(m);
  if (enc.size() > 0) {
    AnnealOptions opts;
    opts.deadline = deadline_after(t0, time_limit_s);
    const auto set = simulated_anneal(enc.qubo, sched, opts);
    if (set.truncated) r.status = "truncated";
    if (!set.samples.empty()) r.assignment = decode(m, enc, set.samples[set.best].bits, repair);
  }
  r.wall_time = seconds_since(t0);
  finish(m, r);
  return r;
}

SolveResult hybrid_solve(const MipModel& m, const PreprocessedInstance& pre,
                         const EncodedModel& enc, const AnnealSchedule& sched,
                         double time_limit_s) {
  const auto t0 = Clock::now();
  SolveResult r;
  r.solver_name = "hybrid";
  r.status = "heuristic";
  r.assignment = greedy_construct(m, pre);
  double best = objective_value(m, r.assignment);

  if (time_limit_s > 0 && enc.size() > 0) {
    AnnealOptions opts;
    opts.deadline = deadline_after(t0, time_limit_s);
    opts.initial_states.push_back(encode_assignment(m, enc, r.assignment));
    const auto set = simulated_anneal(enc.qubo, sched, opts);
    if (set.truncated) r.status = "truncated";
    for (const auto& s : set.samples) {
      Assignment a = decode(m, enc, s.bits, true);
      if (!check_feasibility(m, a).feasible) continue;
      const double v = objective_value(m, a);
      if (improves(v, best)) {
        best = v;
        r.assignment = std::move(a);
      }
    }
  }
  r.wall_time = seconds_since(t0);
  finish(m, r);
  return r;
}

namespace {

struct PathOption {
  std::vector<std::size_t> vehicles;  // n-var per arc
  double fractional = 0.0;            // sum d CV L / W
};

class BranchAndBound {
 public:
  BranchAndBound(const MipModel& m, const PreprocessedInstance& pre, std::size_t node_limit,
                 std::optional<Clock::time_point> deadline)
      : m_(m), node_limit_(node_limit), deadline_(deadline), flow_(m.n_vars.size(), 0.0) {
    order_.resize(m.commodities.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return m.commodities[a].load > m.commodities[b].load;
    });
    options_.resize(order_.size());
    paths_.resize(order_.size());
    for (std::size_t d = 0; d < order_.size(); ++d) {
      const auto& c = m.commodities[order_[d]];
      const auto& paths = pre.paths.at(c.source);
      if (paths.empty()) throw InfeasibleCommodity(c.id);
      for (const auto& p : paths) {
        PathOption opt;
        for (std::size_t h = 0; h + 1 < p.nodes.size(); ++h) {
          const std::size_t v = *m.vehicle_index(Arc{p.nodes[h], p.nodes[h + 1]});
          opt.vehicles.push_back(v);
          opt.fractional += m.n_vars[v].cost * c.load / m.vehicle_capacity;
        }
        options_[d].push_back(std::move(opt));
        paths_[d].push_back(&p);
      }
    }
    // suffix_[d]: cheapest fractional completion of depths d..end
    suffix_.assign(order_.size() + 1, 0.0);
    for (std::size_t d = order_.size(); d-- > 0;) {
      double cheapest = std::numeric_limits<double>::infinity();
      for (const auto& o : options_[d]) cheapest = std::min(cheapest, o.fractional);
      suffix_[d] = suffix_[d + 1] + cheapest;
    }
    choice_.assign(order_.size(), 0);
  }

  void run() { dive(0); }

  bool stopped() const { return stop_reason_ != nullptr; }
  const char* stop_reason() const { return stop_reason_; }
  double open_bound() const { return open_bound_; }
  std::size_t nodes() const { return nodes_; }

  Assignment best_assignment() const {
    std::vector<const Path*> chosen(order_.size());
    for (std::size_t d = 0; d < order_.size(); ++d) chosen[order_[d]] = paths_[d][best_choice_[d]];
    return assignment_from_paths(m_, chosen);
  }

 private:
  void dive(std::size_t depth) {
    if (depth == order_.size()) {
      if (!have_incumbent_ || improves(ceil_cost_, incumbent_)) {
        incumbent_ = ceil_cost_;
        best_choice_ = choice_;
        have_incumbent_ = true;
      }
      return;
    }
    const double load = m_.commodities[order_[depth]].load;
    for (std::size_t p = 0; p < options_[depth].size(); ++p) {
      const auto& opt = options_[depth][p];
      apply(opt, load);
      const double bound = fractional_ + opt.fractional + suffix_[depth + 1];
      const bool pruned = have_incumbent_ && !improves(bound, incumbent_);
      if (!pruned && stopped()) open_bound_ = std::min(open_bound_, bound);
      if (!pruned && !stopped()) {
        ++nodes_;
        choice_[depth] = p;
        fractional_ += opt.fractional;
        dive(depth + 1);
        fractional_ -= opt.fractional;
      }
      undo(opt);
      if (have_incumbent_ && !stopped()) {
        if (nodes_ >= node_limit_)
          stop_reason_ = "node_limit";
        else if (deadline_ && (nodes_ & 63) == 0 && Clock::now() >= *deadline_)
          stop_reason_ = "time_limit";
      }
    }
  }

  void apply(const PathOption& opt, double load) {
    for (std::size_t v : opt.vehicles) {
      saved_.push_back(flow_[v]);
      const double before = flow_[v];
      flow_[v] += load;
      ceil_cost_ += m_.n_vars[v].cost *
                    static_cast<double>(vehicles_needed(flow_[v], m_.vehicle_capacity) -
                                        vehicles_needed(before, m_.vehicle_capacity));
    }
  }

  void undo(const PathOption& opt) {
    for (std::size_t i = opt.vehicles.size(); i-- > 0;) {
      const std::size_t v = opt.vehicles[i];
      const double before = saved_.back();
      saved_.pop_back();
      ceil_cost_ -= m_.n_vars[v].cost *
                    static_cast<double>(vehicles_needed(flow_[v], m_.vehicle_capacity) -
                                        vehicles_needed(before, m_.vehicle_capacity));
      flow_[v] = before;
    }
  }

  const MipModel& m_;
  std::size_t node_limit_;
  std::optional<Clock::time_point> deadline_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<PathOption>> options_;
  std::vector<std::vector<const Path*>> paths_;
  std::vector<double> suffix_;
  std::vector<double> flow_;
  std::vector<double> saved_;
  std::vector<std::size_t> choice_, best_choice_;
  double ceil_cost_ = 0.0;
  double fractional_ = 0.0;
  double incumbent_ = std::numeric_limits<double>::infinity();
  bool have_incumbent_ = false;
  double open_bound_ = std::numeric_limits<double>::infinity();
  std::size_t nodes_ = 0;
  const char* stop_reason_ = nullptr;
};

}  // namespace

SolveResult exact_solve(const MipModel& m, const PreprocessedInstance& pre, std::size_t node_limit,
                        double time_limit_s) {
  const auto t0 = Clock::now();
  BranchAndBound bnb(m, pre, node_limit, deadline_after(t0, time_limit_s));
  bnb.run();
  SolveResult r;
  r.solver_name = "exact";
  r.assignment = bnb.best_assignment();
  r.wall_time = seconds_since(t0);
  r.objective = objective_value(m, r.assignment);
  // a stop with nothing left open still proved optimality
  if (bnb.stopped() && std::isfinite(bnb.open_bound())) {
    r.status = bnb.stop_reason();
    r.bound = std::max(0.0, std::min(bnb.open_bound(), r.objective));
  } else {
    r.status = "optimal";
    r.bound = r.objective;
  }
  finish(m, r);
  return r;
}

std::string dump_result(const MipModel& m, const SolveResult& r) {
  nlohmann::ordered_json doc;
  doc["solver"] = r.solver_name;
  doc["status"] = r.status;
  doc["objective"] = r.objective;
  doc["feasible"] = r.feasible;
  doc["bound"] = r.bound;
  doc["gap"] = r.gap;
  doc["wall_time_s"] = r.wall_time;
  doc["assignment"] = nlohmann::ordered_json::parse(dump_assignment(m, r.assignment));
  return doc.dump(2);
}

}  // namespace mcnf
