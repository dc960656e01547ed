#include "fdeflow/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>
#include <vector>

#include "fdeflow/errors.hpp"

namespace fdeflow {

std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

void header(std::ostream& os, int n, bool derivs) {
  os << 't';
  for (int k = 1; k <= n; ++k) os << ",x" << k;
  if (derivs) {
    for (int k = 1; k <= n; ++k) os << ",d" << k;
  }
  os << '\n';
}

void row(std::ostream& os, double t, const Vec& x, const Vec* d, bool derivs) {
  os << format_double(t);
  for (int k = 0; k < x.size(); ++k) os << ',' << format_double(x[k]);
  if (derivs) {
    for (int k = 0; k < x.size(); ++k) {
      os << ',';
      if (d) os << format_double((*d)[k]);
    }
  }
  os << '\n';
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  while (first < last && *first == ' ') ++first;
  while (last > first && (last[-1] == ' ' || last[-1] == '\r')) --last;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw InvariantError("CSV line " + std::to_string(line) + ": cannot parse '" + s + "'");
  }
  return v;
}

}  // namespace

void write_csv(std::ostream& os, const Trajectory& x, const CsvOptions& opts) {
  const int n = x.dim();
  header(os, n, opts.derivs);
  if (opts.history_depth > 0.0) {
    std::vector<double> s;
    x.base().breakpoints(-opts.history_depth, s);
    s.push_back(-opts.history_depth);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (double u : s) {
      if (u < 0.0) row(os, opts.time_offset + u, x.base().evaluate(u), nullptr, opts.derivs);
    }
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Vec d = x.deriv(i);
    row(os, opts.time_offset + x.nodes()[i], x.value(i), x.has_derivs() ? &d : nullptr,
        opts.derivs);
  }
}

void write_csv(std::ostream& os, const ForwardPath& path) {
  header(os, path.dim(), false);
  for (std::size_t i = 0; i < path.size(); ++i) {
    row(os, path.nodes()[i], path.value(i), nullptr, false);
  }
}

HistoryFunction read_history_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InvariantError("CSV: empty input");
  const auto head = split(line);
  if (head.empty() || head.front() != "t") throw InvariantError("CSV: header must start with t");
  const int cols = static_cast<int>(head.size()) - 1;
  int n = cols;
  bool derivs = false;
  if (cols >= 2 && cols % 2 == 0 && head[1 + cols / 2] == "d1") {
    n = cols / 2;
    derivs = true;
  }
  if (n < 1) throw InvariantError("CSV: no value columns");

  std::vector<double> t;
  std::vector<Vec> values;
  std::vector<Vec> ders;
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto cells = split(line);
    if (static_cast<int>(cells.size()) != cols + 1) {
      throw InvariantError("CSV line " + std::to_string(lineno) + ": wrong column count");
    }
    t.push_back(parse_double(cells[0], lineno));
    Vec v(n);
    for (int k = 0; k < n; ++k) v[k] = parse_double(cells[1 + k], lineno);
    values.push_back(v);
    if (derivs) {
      Vec d(n);
      for (int k = 0; k < n; ++k) d[k] = parse_double(cells[1 + n + k], lineno);
      ders.push_back(d);
    }
  }
  if (t.empty()) throw InvariantError("CSV: no data rows");
  return HistoryFunction(std::move(t), values, ders);
}

HistoryFunction read_history_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvariantError("cannot open '" + path + "'");
  return read_history_csv(in);
}

}  // namespace fdeflow
