#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cexplain {

// Invalid caller input: malformed files, unknown variables or labels,
// out-of-range values, contract violations.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A conditional-independence question was asked about a variable with fewer
// than two observed levels; any verdict would be meaningless.
class DegenerateTestError : public std::runtime_error {
 public:
  DegenerateTestError(std::string variable, const std::string& detail)
      : std::runtime_error(detail), variable_(std::move(variable)) {}
  const std::string& variable() const { return variable_; }

 private:
  std::string variable_;
};

// The transition search exhausted the assignment space without clearing the
// success threshold. Carries the best assignment seen so callers can report it.
class NoSolutionError : public std::runtime_error {
 public:
  NoSolutionError(std::vector<int> bestValues, double bestProbability,
                  const std::string& detail)
      : std::runtime_error(detail),
        bestValues_(std::move(bestValues)),
        bestProbability_(bestProbability) {}
  const std::vector<int>& bestValues() const { return bestValues_; }
  double bestProbability() const { return bestProbability_; }

 private:
  std::vector<int> bestValues_;
  double bestProbability_;
};

}  // namespace cexplain
