#pragma once

#include <string>
#include <vector>

namespace cexplain {

enum class VariableKind { ContinuousCause, CategoricalCause, Outcome };

// Declared schema for one dataset column. Continuous causes carry a bin count
// and optionally an explicit range for equal-width discretization; categorical
// causes and the outcome carry their label set.
struct VariableSpec {
  std::string name;
  VariableKind kind = VariableKind::ContinuousCause;
  double lo = 0.0;
  double hi = 0.0;
  int bins = 0;
  bool explicitRange = false;  // false: infer the range from observed data
  std::vector<std::string> labels;

  static VariableSpec continuous(std::string name, int bins);
  static VariableSpec continuous(std::string name, int bins, double lo, double hi);
  static VariableSpec categorical(std::string name, std::vector<std::string> labels);
  static VariableSpec outcome(std::string name, std::vector<std::string> labels);

  bool isContinuous() const { return kind == VariableKind::ContinuousCause; }
  int labelIndex(const std::string& label) const;  // -1 when unknown
  void validate() const;                           // throws InputError
};

// The question a model answers: which labels of the outcome count as success.
struct GoalCondition {
  std::string outcome;
  std::vector<std::string> successLabels;
};

}  // namespace cexplain
