#include "gvi/trace_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace gvi {
namespace {

void put(std::ostream& out, double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  out << buf;
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string trace_csv_header(Eigen::Index n) {
  std::string h = "t";
  for (Eigen::Index i = 0; i < n; ++i) h += ",q_" + std::to_string(i);
  for (Eigen::Index i = 0; i < n; ++i) h += ",p_" + std::to_string(i);
  return h + ",H,H_mod,J,g_min,f_max,event";
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  const Eigen::Index n = trace.empty() ? 0 : trace.states().front().q.size();
  out << trace_csv_header(n) << '\n';
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const PhaseState& s = trace.states()[k];
    const DiagnosticRecord& r = trace.records()[k];
    put(out, s.t);
    for (Eigen::Index i = 0; i < n; ++i) out << ',', put(out, s.q[i]);
    for (Eigen::Index i = 0; i < n; ++i) out << ',', put(out, s.p[i]);
    out << ',';
    put(out, r.H);
    out << ',';
    put(out, r.H_modified.value_or(nan));
    out << ',';
    put(out, r.angular_momentum_scalar());
    out << ',';
    put(out, r.g_min);
    out << ',';
    put(out, r.f_max_abs);
    out << ',' << static_cast<int>(r.event) << '\n';
  }
}

TraceTable read_trace_csv(std::istream& in, const std::string& source) {
  TraceTable table;
  table.source = source;
  std::string line;
  if (!std::getline(in, line)) throw ParseError(source + ": empty trace", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_commas(line);
  if (header.size() < 7 || (header.size() - 7) % 2 != 0) {
    throw ParseError(source + ": malformed header", 1);
  }
  table.n = static_cast<Eigen::Index>((header.size() - 7) / 2);
  if (line != trace_csv_header(table.n)) throw ParseError(source + ": malformed header", 1);

  const std::size_t cols = header.size();
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != cols) {
      throw ParseError(source + ": expected " + std::to_string(cols) + " columns, found " +
                           std::to_string(cells.size()),
                       lineno);
    }
    std::vector<double> v(cols);
    for (std::size_t c = 0; c < cols; ++c) {
      const char* begin = cells[c].c_str();
      char* end = nullptr;
      v[c] = std::strtod(begin, &end);
      if (cells[c].empty() || *end != '\0') {
        throw ParseError(source + ": non-numeric field '" + cells[c] + "'", lineno);
      }
    }
    const std::size_t base = 1 + 2 * static_cast<std::size_t>(table.n);
    table.t.push_back(v[0]);
    table.H.push_back(v[base]);
    table.H_mod.push_back(v[base + 1]);
    table.J.push_back(v[base + 2]);
    table.g_min.push_back(v[base + 3]);
    table.f_max.push_back(v[base + 4]);
    const double ev = v[base + 5];
    if (ev != std::floor(ev) || ev < 0 || ev > 3) {
      throw ParseError(source + ": invalid event code", lineno);
    }
    table.event.push_back(static_cast<int>(ev));
  }
  if (table.t.empty()) throw ParseError(source + ": trace has no rows", lineno);
  return table;
}

SummaryRow summarize(const TraceTable& table) {
  SummaryRow row;
  row.source = table.source;
  row.rows = table.t.size();
  row.energy = envelope_stats(std::span<const double>(table.H));
  row.angular_momentum = envelope_stats(std::span<const double>(table.J));
  for (std::size_t k = 0; k < table.t.size(); ++k) {
    if (std::isfinite(table.g_min[k])) row.max_violation = std::max(row.max_violation, -table.g_min[k]);
    row.max_violation = std::max(row.max_violation, table.f_max[k]);
    if (table.event[k] == 3 && !row.failed) {
      row.failed = true;
      row.failure_time = table.t[k];
    }
  }
  return row;
}

void write_summary_text(std::ostream& out, const std::vector<SummaryRow>& rows) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-40s %8s %12s %12s %12s %12s %12s %s\n", "trace", "rows",
                "H_drift", "H_env", "J_drift", "J_env", "violation", "failure");
  out << buf;
  for (const auto& r : rows) {
    const std::string failure = r.failed ? "t=" + std::to_string(r.failure_time) : "-";
    std::snprintf(buf, sizeof buf, "%-40s %8zu %12.4e %12.4e %12.4e %12.4e %12.4e %s\n",
                  r.source.c_str(), r.rows, r.energy.max_drift, r.energy.relative_envelope,
                  r.angular_momentum.max_drift, r.angular_momentum.relative_envelope,
                  r.max_violation, failure.c_str());
    out << buf;
  }
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "source,rows,H_drift,H_mean,H_envelope,H_relative,J_drift,J_mean,J_envelope,"
         "J_relative,max_violation,failed,failure_time\n";
  for (const auto& r : rows) {
    out << r.source << ',' << r.rows << ',';
    put(out, r.energy.max_drift);
    out << ',';
    put(out, r.energy.mean);
    out << ',';
    put(out, r.energy.relative_envelope);
    out << ',' << (r.energy.relative ? 1 : 0) << ',';
    put(out, r.angular_momentum.max_drift);
    out << ',';
    put(out, r.angular_momentum.mean);
    out << ',';
    put(out, r.angular_momentum.relative_envelope);
    out << ',' << (r.angular_momentum.relative ? 1 : 0) << ',';
    put(out, r.max_violation);
    out << ',' << (r.failed ? 1 : 0) << ',';
    put(out, r.failure_time);
    out << '\n';
  }
}

}  // namespace gvi
