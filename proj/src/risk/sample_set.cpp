#include "riskgap/risk/sample_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "riskgap/errors.hpp"

namespace riskgap::risk {

SampleSet::SampleSet(std::vector<double> values, std::optional<double> support_bound)
    : values_(std::move(values)), support_bound_(support_bound) {
  if (values_.empty()) throw InvalidArgument("sample set must contain at least one sample");
  for (double v : values_)
    if (std::isnan(v)) throw InvalidArgument("sample set contains NaN");
  if (support_bound_) {
    if (std::isnan(*support_bound_)) throw InvalidArgument("support bound is NaN");
    for (double v : values_)
      if (v > *support_bound_) throw InvalidArgument("sample exceeds the support bound");
  }
  sorted_ = values_;
  std::stable_sort(sorted_.begin(), sorted_.end());
}

double SampleSet::order_statistic(std::size_t k) const {
  if (k == 0 || k > sorted_.size()) throw InvalidArgument("order statistic index out of range");
  return sorted_[k - 1];
}

SampleSet SampleSet::with_support_bound(double b) const { return SampleSet(values_, b); }

SampleSet read_samples_csv(std::istream& in, std::optional<double> support_bound) {
  std::vector<double> values;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first && line == "z") {
      first = false;
      continue;
    }
    first = false;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(line, &used);
    } catch (const std::exception&) {
      throw InvalidArgument("bad sample line '" + line + "'");
    }
    if (used != line.size()) throw InvalidArgument("bad sample line '" + line + "'");
    values.push_back(v);
  }
  return SampleSet(std::move(values), support_bound);
}

void write_samples_csv(std::ostream& out, const SampleSet& s) {
  out << "z\n";
  char buf[64];
  for (double v : s.values()) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf << '\n';
  }
}

}  // namespace riskgap::risk
