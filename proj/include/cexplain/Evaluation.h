#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cexplain/Parameters.h"

namespace cexplain {

// Mean over entries of 1 - |a - b|; symmetric, 1 exactly when the tables agree
// everywhere. Both vectors must be equally long and nonempty.
double agreementScore(const std::vector<double>& a, const std::vector<double>& b);

struct EmpiricalEntry {
  Assignment assignment;
  std::int64_t successes = 0;
  std::int64_t trials = 0;
};

struct EmpiricalTable {
  std::vector<EmpiricalEntry> entries;  // ascending tuple order
};

// Success frequencies per observed parent tuple of a discretized dataset.
EmpiricalTable empiricalTable(const Dataset& ds, const BayesNet&);

// Model-vs-frequency agreement over the table's assignments.
double agreementScore(const BayesNet&, const EmpiricalTable&);

struct MonotonicityViolation {
  std::string axis;
  int fromBin = 0;
  int toBin = 0;
  double delta = 0.0;        // how much the success probability rose
  std::vector<int> context;  // the other parents' values, declaration order
};

// Success probability is expected to fall along each ordinal parent axis
// moving away from the bin containing zero (or from the first bin when the
// range excludes zero), holding the other parents fixed. Pairs touching
// zero-support cells are skipped.
std::vector<MonotonicityViolation> monotonicityReport(const BayesNet&,
                                                      double tolerance = 0.0);

struct CvOptions {
  int folds = 10;
  double alpha = 0.05;
  std::uint64_t seed = 0;
};

struct EvalReport {
  std::vector<double> foldLosses;
  double meanLoss = 0.0;
  double stdLoss = 0.0;
  std::vector<int> flaggedFolds;  // training split had a single outcome class
  std::optional<double> agreement;
  std::vector<MonotonicityViolation> violations;
};

// Stratified k-fold cross-validation. The discretization scheme is built once
// from the full dataset; structure and parameters are relearned per fold. Loss
// is the mean negative log-likelihood of the observed outcome given its
// learned parents, probabilities floored at 1e-6. Folds whose training split
// collapses to a single outcome class are flagged and scored with an arc-free
// fallback net.
EvalReport crossValidate(const Dataset& raw, const GoalCondition& goal,
                         const CvOptions& options);

}  // namespace cexplain
