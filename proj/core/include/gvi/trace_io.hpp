#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gvi/diagnostics.hpp"

namespace gvi {

/// Malformed trace input; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line) : Error(what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

/// Header `t,q_0..q_{n-1},p_0..p_{n-1},H,H_mod,J,g_min,f_max,event`.
std::string trace_csv_header(Eigen::Index n);

/// One row per trace entry, floats with 17 significant digits, event as its
/// integer code.
void write_trace_csv(std::ostream& out, const Trace& trace);

/// Columns of a trace CSV needed for summaries.
struct TraceTable {
  std::string source;
  Eigen::Index n = 0;
  std::vector<double> t, H, H_mod, J, g_min, f_max;
  std::vector<int> event;
};

/// Throws ParseError for a bad header, wrong column count or a non-numeric field.
TraceTable read_trace_csv(std::istream& in, const std::string& source = "<stream>");

struct SummaryRow {
  std::string source;
  std::size_t rows = 0;
  EnvelopeStats energy;
  EnvelopeStats angular_momentum;
  double max_violation = 0.0;  ///< max(0, −g_min, f_max)
  bool failed = false;
  double failure_time = 0.0;
};

SummaryRow summarize(const TraceTable& table);

void write_summary_text(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);

}  // namespace gvi
