#include "riskgap/stl/trace.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "riskgap/errors.hpp"

namespace riskgap::stl {

Trace::Trace(double dt, std::size_t dim) : dt_(dt), dim_(dim) {
  if (!(dt > 0.0)) throw InvalidArgument("trace dt must be positive");
  if (dim == 0) throw InvalidArgument("trace dimension must be positive");
}

Trace::Trace(double dt, const std::vector<std::vector<double>>& states)
    : Trace(dt, states.empty() ? 0 : states.front().size()) {
  data_.reserve(states.size() * dim_);
  for (const auto& s : states) push_back(s);
}

void Trace::push_back(std::span<const double> state) {
  if (state.size() != dim_) throw DimensionMismatch(dim_, state.size());
  data_.insert(data_.end(), state.begin(), state.end());
}

std::size_t Trace::last() const {
  if (empty()) throw InvalidArgument("empty trace");
  return size() - 1;
}

std::span<const double> Trace::at(std::size_t t) const {
  if (t >= size()) throw TraceTooShort(t, empty() ? 0 : last());
  return (*this)[t];
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << 't';
  for (std::size_t i = 0; i < trace.dim(); ++i) out << ",s" << i;
  out << '\n';
  char buf[64];
  for (std::size_t t = 0; t < trace.size(); ++t) {
    out << t;
    for (double v : trace[t]) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

Trace read_trace_csv(std::istream& in, double dt) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("trace file is empty");
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');  // step index
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidArgument("trace file has no rows");
  return Trace(dt, rows);
}

}  // namespace riskgap::stl
