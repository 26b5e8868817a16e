#include "mcnf/encode.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include <json.hpp>

namespace mcnf {

BitGroup binary_expand(std::int64_t upper, std::size_t first_bit) {
  BitGroup g;
  g.upper = std::max<std::int64_t>(upper, 0);
  const int m = std::bit_width(static_cast<std::uint64_t>(g.upper));
  for (int b = 0; b + 1 < m; ++b) g.weights.push_back(std::int64_t{1} << b);
  if (m > 0) g.weights.push_back(g.upper - ((std::int64_t{1} << (m - 1)) - 1));
  for (std::size_t b = 0; b < g.weights.size(); ++b) g.bits.push_back(first_bit + b);
  return g;
}

std::int64_t BitGroup::decode(std::span<const std::uint8_t> all_bits) const {
  std::int64_t v = 0;
  for (std::size_t b = 0; b < bits.size(); ++b)
    if (all_bits[bits[b]]) v += weights[b];
  return v;
}

void BitGroup::encode(std::int64_t value, std::span<std::uint8_t> all_bits) const {
  value = std::clamp<std::int64_t>(value, 0, upper);
  for (std::size_t b : bits) all_bits[b] = 0;
  if (bits.empty()) return;
  // low bits cover [0, 2^(m-1) - 1]; the last weight tops up to `upper`
  const std::size_t last = bits.size() - 1;
  if (value > (std::int64_t{1} << last) - 1) {
    all_bits[bits[last]] = 1;
    value -= weights[last];
  }
  for (std::size_t b = 0; b < last; ++b) all_bits[bits[b]] = (value >> b) & 1;
}

namespace {

std::int64_t slack_upper(const VehicleVar& n, double capacity, double unit) {
  return static_cast<std::int64_t>(std::floor(static_cast<double>(n.upper) * capacity / unit + 1e-9));
}

}  // namespace

double default_slack_unit(const MipModel& m) {
  if (m.n_vars.empty()) return m.vehicle_capacity > 0 ? m.vehicle_capacity : 1.0;
  std::vector<double> values{m.vehicle_capacity};
  for (const auto& c : m.commodities) values.push_back(c.load);

  int digits = 0;
  for (; digits < 6; ++digits) {
    const double scale = std::pow(10.0, digits);
    const bool integral = std::all_of(values.begin(), values.end(), [&](double v) {
      return std::abs(v * scale - std::round(v * scale)) <= 1e-6 * std::max(1.0, v * scale);
    });
    if (integral) break;
  }
  const double scale = std::pow(10.0, digits);
  std::int64_t g = 0;
  for (double v : values) g = std::gcd(g, static_cast<std::int64_t>(std::llround(v * scale)));
  double unit = g > 0 ? static_cast<double>(g) / scale : 1.0 / scale;

  std::int64_t widest = 0;
  for (const auto& n : m.n_vars) widest = std::max(widest, slack_upper(n, m.vehicle_capacity, unit));
  const std::int64_t limit = (std::int64_t{1} << kMaxSlackBits) - 1;
  if (widest > limit) unit *= std::ceil(static_cast<double>(widest) / static_cast<double>(limit));
  return unit;
}

PenaltyConfig default_penalties(const MipModel& m) {
  std::int64_t widest = 1;
  for (const auto& n : m.n_vars) widest = std::max(widest, n.upper);
  double p = 2.0 * m.cost_per_km * m.longest_path_km * static_cast<double>(widest);
  if (!(p > 0)) p = 1.0;
  // Dropping j vehicles below need on an arc leaves a residual of at least
  // max(1, (j - 1) W/u) slack units, so twice the dearest vehicle already makes
  // that unprofitable. Larger values freeze the vehicle bits during annealing.
  double c = 0.0;
  for (const auto& n : m.n_vars) c = std::max(c, 2.0 * n.cost);
  if (!(c > 0)) c = 1.0;
  return {p, c, default_slack_unit(m)};
}

EncodedModel encode_qubo(const MipModel& m, const PenaltyConfig& cfg) {
  EncodedModel enc;
  enc.config = cfg;
  for (std::size_t x = 0; x < m.x_vars.size(); ++x)
    enc.varmap.push_back({QuboVarKind::route, x, 1});
  for (std::size_t n = 0; n < m.n_vars.size(); ++n) {
    enc.vehicle_bits.push_back(binary_expand(m.n_vars[n].upper, enc.varmap.size()));
    for (auto w : enc.vehicle_bits.back().weights)
      enc.varmap.push_back({QuboVarKind::vehicle_bit, n, w});
    enc.slack_bits.push_back(binary_expand(
        slack_upper(m.n_vars[n], m.vehicle_capacity, cfg.slack_unit), enc.varmap.size()));
    for (auto w : enc.slack_bits.back().weights) enc.varmap.push_back({QuboVarKind::slack_bit, n, w});
  }

  QuboBuilder<double> builder(static_cast<Eigen::Index>(enc.varmap.size()));
  using Term = std::pair<Eigen::Index, double>;
  auto id = [](std::size_t v) { return static_cast<Eigen::Index>(v); };

  for (std::size_t n = 0; n < m.n_vars.size(); ++n) {
    const auto& g = enc.vehicle_bits[n];
    for (std::size_t b = 0; b < g.bits.size(); ++b)
      builder.add_linear(id(g.bits[b]), m.n_vars[n].cost * static_cast<double>(g.weights[b]));
  }

  std::vector<Term> expr;
  for (const auto& fc : m.flow_constraints) {
    expr.clear();
    for (auto [x, sign] : fc.terms) expr.emplace_back(id(x), static_cast<double>(sign));
    builder.add_squared(expr, -static_cast<double>(fc.rhs), cfg.flow_penalty);
  }

  const double w_units = m.vehicle_capacity / cfg.slack_unit;
  for (const auto& cc : m.capacity_constraints) {
    expr.clear();
    for (std::size_t x : cc.routes) expr.emplace_back(id(x), m.load(m.x_vars[x]) / cfg.slack_unit);
    const auto& nb = enc.vehicle_bits[cc.vehicle];
    for (std::size_t b = 0; b < nb.bits.size(); ++b)
      expr.emplace_back(id(nb.bits[b]), -w_units * static_cast<double>(nb.weights[b]));
    const auto& sb = enc.slack_bits[cc.vehicle];
    for (std::size_t b = 0; b < sb.bits.size(); ++b)
      expr.emplace_back(id(sb.bits[b]), static_cast<double>(sb.weights[b]));
    builder.add_squared(expr, 0.0, cfg.capacity_penalty);
  }
  enc.qubo = builder.build();

  const double single_path = m.cost_per_km * m.longest_path_km;
  if (cfg.flow_penalty < 2.0 * single_path)
    enc.warnings.push_back("PenaltyTooSmall: flow_penalty " + std::to_string(cfg.flow_penalty) +
                           " is below twice the most expensive single path (" +
                           std::to_string(single_path) + ")");
  return enc;
}

Assignment decode(const MipModel& m, const EncodedModel& enc, std::span<const std::uint8_t> bits,
                  bool repair) {
  if (bits.size() != enc.size())
    throw SizeMismatch("bit vector has " + std::to_string(bits.size()) + " entries, QUBO has " +
                       std::to_string(enc.size()));
  Assignment a = zero_assignment(m);
  for (std::size_t x = 0; x < a.x.size(); ++x) a.x[x] = bits[x] ? 1 : 0;
  if (repair)
    repair_vehicles(m, a);
  else
    for (std::size_t n = 0; n < a.n.size(); ++n) a.n[n] = enc.vehicle_bits[n].decode(bits);
  return a;
}

Bits encode_assignment(const MipModel& m, const EncodedModel& enc, const Assignment& a) {
  Bits bits(enc.size(), 0);
  for (std::size_t x = 0; x < a.x.size(); ++x) bits[x] = a.x[x];
  for (std::size_t n = 0; n < a.n.size(); ++n) {
    enc.vehicle_bits[n].encode(a.n[n], bits);
    double carried = 0.0;
    for (std::size_t x : m.capacity_constraints[n].routes)
      if (a.x[x]) carried += m.load(m.x_vars[x]);
    const double spare = (static_cast<double>(enc.vehicle_bits[n].decode(bits)) * m.vehicle_capacity -
                          carried) / enc.config.slack_unit;
    enc.slack_bits[n].encode(std::llround(spare), bits);
  }
  return bits;
}

std::string dump_varmap(const MipModel& m, const EncodedModel& enc) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (std::size_t v = 0; v < enc.varmap.size(); ++v) {
    const auto& qv = enc.varmap[v];
    nlohmann::ordered_json e;
    e["id"] = v;
    switch (qv.kind) {
      case QuboVarKind::route:
        e["kind"] = "x";
        e["key"] = route_key(m, qv.owner);
        break;
      case QuboVarKind::vehicle_bit:
        e["kind"] = "n_bit";
        e["key"] = vehicle_key(m, qv.owner);
        e["weight"] = qv.weight;
        break;
      case QuboVarKind::slack_bit:
        e["kind"] = "slack_bit";
        e["key"] = vehicle_key(m, qv.owner);
        e["weight"] = qv.weight;
        break;
    }
    doc.push_back(std::move(e));
  }
  nlohmann::ordered_json out;
  out["slack_unit"] = enc.config.slack_unit;
  out["flow_penalty"] = enc.config.flow_penalty;
  out["capacity_penalty"] = enc.config.capacity_penalty;
  out["variables"] = std::move(doc);
  return out.dump(2);
}

}  // namespace mcnf
