#include "cexplain/Discretization.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cexplain/Errors.h"

namespace cexplain {

namespace {

constexpr double kEndTolerance = 1e-12;       // absolute overshoot at the range ends
constexpr double kBoundarySnap = 1e-9;        // relative to the range width

std::vector<double> equalWidthBoundaries(const std::string& name, double lo, double hi,
                                         int bins) {
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw InputError("variable '" + name + "': non-finite range");
  if (!(lo < hi))
    throw InputError("variable '" + name + "': range low must be below range high");
  if (bins < 1) throw InputError("variable '" + name + "': bin count must be >= 1");
  std::vector<double> b(bins + 1);
  const double width = (hi - lo) / bins;
  for (int k = 0; k <= bins; ++k) b[k] = lo + k * width;
  b.front() = lo;
  b.back() = hi;
  return b;
}

}  // namespace

bool DiscretizationScheme::has(const std::string& variable) const {
  return boundaries.contains(variable);
}

int DiscretizationScheme::bins(const std::string& variable) const {
  const auto it = boundaries.find(variable);
  if (it == boundaries.end())
    throw InputError("no discretization for variable '" + variable + "'");
  return static_cast<int>(it->second.size()) - 1;
}

int DiscretizationScheme::intervalIndex(const std::string& variable, double value) const {
  const auto it = boundaries.find(variable);
  if (it == boundaries.end())
    throw InputError("no discretization for variable '" + variable + "'");
  const std::vector<double>& b = it->second;
  if (!std::isfinite(value))
    throw InputError("variable '" + variable + "': non-finite value");
  if (value < b.front() - kEndTolerance || value > b.back() + kEndTolerance)
    throw InputError("variable '" + variable + "': value " + std::to_string(value) +
                     " outside range [" + std::to_string(b.front()) + ", " +
                     std::to_string(b.back()) + "]");
  const double v = std::clamp(value, b.front(), b.back());
  const double snap = kBoundarySnap * (b.back() - b.front());
  const int bins = static_cast<int>(b.size()) - 1;
  for (int k = 0; k < bins; ++k) {
    if (v <= b[k + 1] + snap) return k;
  }
  return bins - 1;
}

std::pair<double, double> DiscretizationScheme::interval(const std::string& variable,
                                                         int index) const {
  const auto it = boundaries.find(variable);
  if (it == boundaries.end())
    throw InputError("no discretization for variable '" + variable + "'");
  const std::vector<double>& b = it->second;
  if (index < 0 || index + 1 >= static_cast<int>(b.size()))
    throw InputError("variable '" + variable + "': interval " + std::to_string(index) +
                     " out of range");
  return {b[index], b[index + 1]};
}

DiscretizationScheme buildScheme(const Dataset& ds) {
  DiscretizationScheme scheme;
  for (std::size_t i = 0; i < ds.variables.size(); ++i) {
    const VariableSpec& spec = ds.variables[i];
    if (!spec.isContinuous()) continue;
    double lo = spec.lo;
    double hi = spec.hi;
    if (!spec.explicitRange) {
      const std::vector<double>& column = ds.numeric[i];
      if (column.empty())
        throw InputError("variable '" + spec.name +
                         "': cannot infer a range from an empty dataset");
      lo = *std::min_element(column.begin(), column.end());
      hi = *std::max_element(column.begin(), column.end());
      if (!(lo < hi))
        throw InputError("variable '" + spec.name +
                         "': observed values are constant; cannot infer a range");
    }
    scheme.boundaries[spec.name] = equalWidthBoundaries(spec.name, lo, hi, spec.bins);
  }
  return scheme;
}

DiscretizationScheme buildScheme(const std::vector<VariableSpec>& specs) {
  DiscretizationScheme scheme;
  for (const VariableSpec& spec : specs) {
    if (!spec.isContinuous()) continue;
    if (!spec.explicitRange)
      throw InputError("variable '" + spec.name +
                       "': range must be explicit when building without data");
    scheme.boundaries[spec.name] = equalWidthBoundaries(spec.name, spec.lo, spec.hi, spec.bins);
  }
  return scheme;
}

int discretizeValue(const DiscretizationScheme& scheme, const std::string& variable,
                    double value) {
  return scheme.intervalIndex(variable, value);
}

Dataset discretizeDataset(const Dataset& ds, const DiscretizationScheme& scheme) {
  Dataset out = ds;
  for (std::size_t i = 0; i < out.variables.size(); ++i) {
    const VariableSpec& spec = out.variables[i];
    if (!spec.isContinuous()) continue;
    if (scheme.bins(spec.name) != spec.bins)
      throw InputError("variable '" + spec.name + "': scheme has " +
                       std::to_string(scheme.bins(spec.name)) + " bins, spec declares " +
                       std::to_string(spec.bins));
    std::vector<int>& column = out.codes[i];
    column.clear();
    column.reserve(out.numeric[i].size());
    for (double v : out.numeric[i]) {
      column.push_back(scheme.intervalIndex(spec.name, v));
    }
  }
  out.discretized = true;
  return out;
}

}  // namespace cexplain
