#pragma once

// Single-flip Metropolis sampler for QUBO energies.
//
// Each restart draws from its own stream seeded by (seed, restart), so the
// samples of restart r do not depend on how many restarts run or in which
// order. Local fields f_p = sum_{q != p} Q_pq x_q are updated on every
// accepted flip, which makes one proposal O(1) and one flip O(degree).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "mcnf/qubo.hpp"

namespace mcnf {

struct AnnealSchedule {
  std::size_t sweeps = 2000;
  std::size_t restarts = 8;
  double beta_start = 0.1;
  double beta_end = 10.0;
  std::uint64_t seed = 0;

  bool valid() const { return sweeps >= 1 && restarts >= 1 && beta_start > 0 && beta_start < beta_end; }
};

struct Sample {
  Bits bits;
  double energy = 0.0;
  std::size_t restart = 0;
};

// Per completed restart: the final state, then the best state seen at a sweep boundary.
struct SampleSet {
  std::vector<Sample> samples;
  std::size_t best = 0;
  bool truncated = false;  // deadline cut the run short
};

struct AnnealOptions {
  // initial_states[r], when present and non-empty, replaces the random start of restart r.
  std::vector<Bits> initial_states;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

inline std::mt19937_64 restart_stream(std::uint64_t seed, std::size_t restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart),
                    static_cast<std::uint32_t>(static_cast<std::uint64_t>(restart) >> 32)};
  return std::mt19937_64(seq);
}

namespace detail {

template <typename Scalar>
struct FlipState {
  const SparseUpper<Scalar>& sym;  // off-diagonal part, symmetrized
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> diag;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> field;
  Bits bits;

  Scalar delta(Eigen::Index p) const {
    const Scalar gain = diag[p] + field[p];
    return bits[static_cast<std::size_t>(p)] ? -gain : gain;
  }

  void reset(Bits start) {
    bits = std::move(start);
    const auto x = as_vector<Scalar>(bits);
    field = sym * x;
  }

  void flip(Eigen::Index p) {
    auto& b = bits[static_cast<std::size_t>(p)];
    const Scalar step = b ? Scalar(-1) : Scalar(1);
    b ^= 1;
    for (typename SparseUpper<Scalar>::InnerIterator it(sym, p); it; ++it) field[it.col()] += step * it.value();
  }
};

template <typename Scalar>
SparseUpper<Scalar> symmetric_offdiagonal(const Qubo<Scalar>& q) {
  SparseUpper<Scalar> upper = q.terms.template triangularView<Eigen::StrictlyUpper>();
  SparseUpper<Scalar> sym = upper;
  sym += SparseUpper<Scalar>(upper.transpose());
  return sym;
}

}  // namespace detail

// Default schedule: beta_start = ln 2 / dE_max, beta_end = ln 100 / dE_min, where
// dE_max and dE_min are the largest and smallest nonzero single-flip energy
// changes over 100 random states.
template <typename Scalar>
AnnealSchedule default_schedule(const Qubo<Scalar>& q, std::uint64_t seed, std::size_t sweeps = 2000) {
  AnnealSchedule s;
  s.sweeps = sweeps;
  s.seed = seed;
  s.restarts = std::max<std::size_t>(8, static_cast<std::size_t>(q.size()) / 64);
  const auto sym = detail::symmetric_offdiagonal(q);
  detail::FlipState<Scalar> state{sym, q.terms.diagonal(), {}, {}};
  auto rng = restart_stream(seed, std::numeric_limits<std::size_t>::max());
  std::bernoulli_distribution coin(0.5);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Bits bits(static_cast<std::size_t>(q.size()));
    for (auto& b : bits) b = coin(rng);
    state.reset(std::move(bits));
    for (Eigen::Index p = 0; p < q.size(); ++p) {
      const double d = std::abs(static_cast<double>(state.delta(p)));
      if (d > 1e-12) {
        lo = std::min(lo, d);
        hi = std::max(hi, d);
      }
    }
  }
  if (!(hi > 0)) {
    lo = hi = 1.0;
  }
  s.beta_start = std::log(2.0) / hi;
  s.beta_end = std::log(100.0) / lo;
  if (!(s.beta_end > s.beta_start)) s.beta_end = s.beta_start * 100.0;
  return s;
}

template <typename Scalar>
SampleSet simulated_anneal(const Qubo<Scalar>& q, const AnnealSchedule& sched,
                           const AnnealOptions& opts = {}) {
  if (!sched.valid()) throw Error("anneal schedule needs sweeps, restarts >= 1 and 0 < beta_start < beta_end");
  SampleSet out;
  const Eigen::Index n = q.size();
  if (n == 0) return out;
  const auto sym = detail::symmetric_offdiagonal(q);
  detail::FlipState<Scalar> state{sym, q.terms.diagonal(), {}, {}};
  const double ratio = sched.sweeps > 1 ? std::pow(sched.beta_end / sched.beta_start,
                                                   1.0 / static_cast<double>(sched.sweeps - 1))
                                        : 1.0;
  auto expired = [&] { return opts.deadline && std::chrono::steady_clock::now() >= *opts.deadline; };

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (std::size_t r = 0; r < sched.restarts && !out.truncated; ++r) {
    if (expired()) {
      out.truncated = true;
      break;
    }
    auto rng = restart_stream(sched.seed, r);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    Bits start(static_cast<std::size_t>(n));
    if (r < opts.initial_states.size() && opts.initial_states[r].size() == start.size()) {
      start = opts.initial_states[r];
    } else {
      std::bernoulli_distribution coin(0.5);
      for (auto& b : start) b = coin(rng);
    }
    state.reset(std::move(start));
    Scalar energy = qubo_energy(q, std::span<const std::uint8_t>(state.bits));
    Bits best_bits = state.bits;
    Scalar best_energy = energy;

    std::iota(order.begin(), order.end(), Eigen::Index{0});
    double beta = sched.beta_start;
    for (std::size_t sweep = 0; sweep < sched.sweeps; ++sweep, beta *= ratio) {
      if (sweep > 0 && expired()) {
        out.truncated = true;
        break;
      }
      std::shuffle(order.begin(), order.end(), rng);
      for (Eigen::Index p : order) {
        const Scalar d = state.delta(p);
        if (d <= Scalar(0) || uniform(rng) < std::exp(-beta * static_cast<double>(d))) {
          state.flip(p);
          energy += d;
        }
      }
      if (energy < best_energy) {
        best_energy = energy;
        best_bits = state.bits;
      }
    }
    // report exact energies rather than the accumulated ones
    out.samples.push_back({state.bits, static_cast<double>(qubo_energy(q, std::span<const std::uint8_t>(state.bits))), r});
    out.samples.push_back({best_bits, static_cast<double>(qubo_energy(q, std::span<const std::uint8_t>(best_bits))), r});
  }
  for (std::size_t i = 1; i < out.samples.size(); ++i)
    if (out.samples[i].energy < out.samples[out.best].energy) out.best = i;
  return out;
}

}  // namespace mcnf
