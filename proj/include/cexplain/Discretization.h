#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cexplain/Dataset.h"

namespace cexplain {

// Equal-width interval partition per continuous variable. Interval 0 is closed
// [b0, b1]; every later interval k is half-open (bk, bk+1], so a value sitting
// exactly on an interior boundary belongs to the lower interval. Values within
// 1e-9 of the range width of a boundary snap to it; the range ends tolerate an
// absolute overshoot of 1e-12 before the value counts as out of range.
struct DiscretizationScheme {
  std::map<std::string, std::vector<double>> boundaries;

  bool has(const std::string& variable) const;
  int bins(const std::string& variable) const;
  int intervalIndex(const std::string& variable, double value) const;
  std::pair<double, double> interval(const std::string& variable, int index) const;
};

// Ranges: an explicit spec range wins; otherwise observed data min/max.
DiscretizationScheme buildScheme(const Dataset& ds);
// All ranges must be explicit; no data needed.
DiscretizationScheme buildScheme(const std::vector<VariableSpec>& specs);

int discretizeValue(const DiscretizationScheme&, const std::string& variable, double value);

// Copy of the dataset with interval codes filled for continuous columns.
Dataset discretizeDataset(const Dataset&, const DiscretizationScheme&);

}  // namespace cexplain
