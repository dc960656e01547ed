#pragma once

// CSV with header "t,x1,...,xn[,d1,...,dn]", rows sorted by t, shortest
// round-trip decimal representation.

#include <iosfwd>
#include <string>

#include "fdeflow/history.hpp"

namespace fdeflow {

std::string format_double(double x);

struct CsvOptions {
  /// Base-history rows are emitted for sample times in [-history_depth, 0).
  double history_depth = 0.0;
  bool derivs = true;
  /// Added to every printed time (process runs start at t0, not 0).
  double time_offset = 0.0;
};

void write_csv(std::ostream& os, const Trajectory& x, const CsvOptions& opts = {});
void write_csv(std::ostream& os, const ForwardPath& path);

/// Reads a history from CSV; the last row must have t = 0. Derivative
/// columns, when present, enable cubic interpolation.
HistoryFunction read_history_csv(std::istream& is);
HistoryFunction read_history_csv(const std::string& path);

}  // namespace fdeflow
