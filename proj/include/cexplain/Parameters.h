#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cexplain/Discretization.h"
#include "cexplain/Structure.h"

namespace cexplain {

// Values for the outcome's parents, aligned with the CPT's parent order:
// interval indices for discretized continuous parents, label indices for
// categorical ones.
struct Assignment {
  std::vector<int> values;
  bool operator==(const Assignment&) const = default;
};

// Conditional probability table. Tuples enumerate the Cartesian product of
// parent levels in mixed-radix order with the first parent most significant.
struct Cpt {
  std::string child;
  std::vector<std::string> parents;
  std::vector<int> parentLevels;
  int childLevels = 0;
  std::vector<std::vector<double>> table;         // [tuple][child level]
  std::vector<std::vector<std::int64_t>> counts;  // same shape
  std::vector<char> zeroSupport;                  // per tuple

  std::size_t tupleCount() const;
  std::size_t tupleIndex(const std::vector<int>& parentValues) const;
};

struct BayesNet {
  std::vector<VariableSpec> variables;
  DiscretizationScheme scheme;
  Dag dag;
  std::vector<Cpt> cpts;  // one per variable, declaration order
  GoalCondition goal;
  std::int64_t fitSamples = 0;
  std::optional<std::uint64_t> fitSeed;
  std::optional<double> fitAlpha;

  const VariableSpec& spec(const std::string& name) const;
  const Cpt& cptOf(const std::string& name) const;
  void validate() const;  // throws InputError on broken invariants
};

// Maximum-likelihood CPTs from a discretized dataset. Tuples that never occur
// get an explicit uniform vector and a zero-support flag; counts are never
// smoothed.
BayesNet fitMle(const Dataset& ds, const Dag& dag, const DiscretizationScheme& scheme,
                const GoalCondition& goal);

struct SuccessProbability {
  double value = 0.0;
  bool zeroSupport = false;
};

// P(outcome in success labels | parents = assignment). The assignment must
// cover exactly the outcome's parents; anything else is an InputError.
SuccessProbability querySuccessProb(const BayesNet&, const Assignment&);

}  // namespace cexplain
