#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mcnf/model.hpp"
#include "mcnf/qubo.hpp"

namespace mcnf {

// Bounded binary expansion of an integer in [0, upper]:
// weights 1, 2, ..., 2^(m-2), upper - (2^(m-1) - 1) with m = bit_width(upper).
struct BitGroup {
  std::vector<std::size_t> bits;  // QUBO variable ids
  std::vector<std::int64_t> weights;
  std::int64_t upper = 0;

  std::int64_t decode(std::span<const std::uint8_t> all_bits) const;
  // Writes a representation of value (clamped to [0, upper]) into all_bits.
  void encode(std::int64_t value, std::span<std::uint8_t> all_bits) const;
};

// Bits are numbered first_bit, first_bit + 1, ...
BitGroup binary_expand(std::int64_t upper, std::size_t first_bit = 0);

enum class QuboVarKind { route, vehicle_bit, slack_bit };

// What a QUBO variable stands for. `owner` is the x-var index for routes and
// the n-var (arc) index for vehicle and slack bits.
struct QuboVar {
  QuboVarKind kind = QuboVarKind::route;
  std::size_t owner = 0;
  std::int64_t weight = 1;
};

struct PenaltyConfig {
  double flow_penalty = 1.0;
  double capacity_penalty = 1.0;
  double slack_unit = 1.0;  // weight granularity of the capacity slack
};

inline constexpr int kMaxSlackBits = 12;

// Greatest common decimal granularity of the loads and W, coarsened so no arc
// needs more than kMaxSlackBits slack bits.
double default_slack_unit(const MipModel& m);

// flow = 2 * CV * longest path * largest vehicle bound;
// capacity = 2 * cost of the dearest single vehicle.
PenaltyConfig default_penalties(const MipModel& m);

struct EncodedModel {
  Qubo<double> qubo;
  std::vector<QuboVar> varmap;
  std::vector<BitGroup> vehicle_bits;  // per n-var
  std::vector<BitGroup> slack_bits;    // per n-var
  PenaltyConfig config;
  std::vector<std::string> warnings;

  std::size_t size() const { return varmap.size(); }
};

// Energy = sum d_ij CV N_ij
//        + flow_penalty * sum over flow constraints (unit residual)^2
//        + capacity_penalty * sum over arcs (load/u - N W/u + s)^2
// for every bit vector; N and s are binary expanded.
EncodedModel encode_qubo(const MipModel& m, const PenaltyConfig& cfg);

// Reads x directly and N by weights. With repair, N is recomputed from x.
// Throws SizeMismatch.
Assignment decode(const MipModel& m, const EncodedModel& enc, std::span<const std::uint8_t> bits,
                  bool repair);

// Bit image of an assignment; slack takes the value closest to closing its arc.
Bits encode_assignment(const MipModel& m, const EncodedModel& enc, const Assignment& a);

// QUBO text format:
//   c <comment>
//   p qubo 0 <maxDiagonals> <nDiagonals> <nElements>
//   <p> <p> <coefficient>      diagonal entries first
//   <p> <q> <coefficient>      then couplers, p < q
//   c offset <value>
void write_qubo(std::ostream& os, const Qubo<double>& q);
// Throws ParseError.
Qubo<double> read_qubo(std::istream& is);

std::string dump_varmap(const MipModel& m, const EncodedModel& enc);

}  // namespace mcnf
