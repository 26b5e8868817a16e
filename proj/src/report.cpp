#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "mcnf/harness.hpp"

namespace mcnf {

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::csv;
  if (name == "table") return ReportFormat::table;
  if (name == "plotdata") return ReportFormat::plotdata;
  throw SchemaError("format", "unknown report format '" + std::string(name) + "'");
}

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// Scientific notation from 1e6 upward.
std::string format_objective(double v) {
  return std::abs(v) >= 1e6 ? fmt("%.6E", v) : fmt("%.3f", v);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

const std::vector<std::string> kColumns = {
    "num_variables", "num_constraints", "solver", "objective", "running_time_s",
    "mip_gap",       "instance_seed",   "feasible", "note"};

std::vector<std::string> row(const BenchRecord& r, const ReportOptions& options) {
  return {std::to_string(r.num_variables),
          std::to_string(r.num_constraints),
          r.solver_name,
          format_objective(r.objective),
          options.timings ? fmt("%.3f", r.wall_time) : "NA",
          fmt("%.6f", r.gap),
          std::to_string(r.instance_seed),
          r.feasible ? "1" : "0",
          r.note};
}

}  // namespace

std::string emit_report(const std::vector<BenchRecord>& records, ReportFormat format,
                        const ReportOptions& options) {
  std::ostringstream os;
  switch (format) {
    case ReportFormat::csv: {
      for (std::size_t c = 0; c < kColumns.size(); ++c) os << (c ? "," : "") << kColumns[c];
      os << '\n';
      for (const auto& r : records) {
        const auto cells = row(r, options);
        for (std::size_t c = 0; c < cells.size(); ++c) os << (c ? "," : "") << csv_field(cells[c]);
        os << '\n';
      }
      break;
    }
    case ReportFormat::table: {
      std::vector<std::vector<std::string>> rows{kColumns};
      for (const auto& r : records) rows.push_back(row(r, options));
      std::vector<std::size_t> width(kColumns.size(), 0);
      for (const auto& cells : rows)
        for (std::size_t c = 0; c < cells.size(); ++c) width[c] = std::max(width[c], cells[c].size());
      for (const auto& cells : rows) {
        std::string line;
        for (std::size_t c = 0; c < cells.size(); ++c) {
          if (c) line += "  ";
          // numbers right-aligned, text left-aligned
          const bool text = c == 2 || c == 8;
          const std::string pad(width[c] - cells[c].size(), ' ');
          line += text ? cells[c] + pad : pad + cells[c];
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        os << line << '\n';
      }
      break;
    }
    case ReportFormat::plotdata: {
      std::vector<std::string> solvers;
      for (const auto& r : records)
        if (std::find(solvers.begin(), solvers.end(), r.solver_name) == solvers.end())
          solvers.push_back(r.solver_name);
      bool first = true;
      for (const auto& s : solvers) {
        for (const char* metric : {"wall_time", "objective"}) {
          if (!first) os << '\n';
          first = false;
          os << "# solver=" << s << " metric=" << metric << '\n';
          os << "num_variables " << metric << '\n';
          for (const auto& r : records) {
            if (r.solver_name != s) continue;
            const bool time = metric == std::string_view("wall_time");
            os << r.num_variables << ' '
               << (time ? (options.timings ? fmt("%.6f", r.wall_time) : "NA")
                        : fmt("%.6f", r.objective))
               << '\n';
          }
        }
      }
      break;
    }
  }
  return os.str();
}

}  // namespace mcnf
