#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cexplain/Dataset.h"

namespace cexplain {

struct CiTestResult {
  double g2 = 0.0;
  int df = 0;
  double pValue = 1.0;
  bool dependent = false;
};

// G-squared likelihood-ratio test of x against y given the conditioning set.
// Degrees of freedom accumulate per observed conditioning stratum as
// (nonzero rows - 1) * (nonzero columns - 1); strata that were never observed
// contribute nothing. Throws DegenerateTestError when x or y has fewer than
// two observed levels overall. Requires a discretized dataset.
CiTestResult g2Test(const Dataset& ds, const std::string& x, const std::string& y,
                    const std::vector<std::string>& given, double alpha);

// Grow-Shrink Markov blanket of x. Candidates are visited in declaration
// order; candidates with fewer than two observed levels are skipped (a
// constant cannot be dependent on anything). Throws DegenerateTestError when x
// itself is degenerate.
std::vector<std::string> learnMarkovBlanket(const Dataset& ds, const std::string& x,
                                            double alpha);

struct Dag {
  std::vector<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> arcs;

  bool hasNode(const std::string&) const;
  bool hasArc(const std::string& from, const std::string& to) const;
  void addArc(const std::string& from, const std::string& to);  // throws InputError
  std::vector<std::string> parentsOf(const std::string&) const;  // declaration order
  std::vector<std::string> neighborsOf(const std::string&) const;
  bool isAcyclic() const;
};

// Blankets -> DAG: symmetric intersection, adjacency by exhaustive separating
// subsets of the smaller blanket, collider orientation, weakest-evidence cycle
// removal, then outcome/declaration-order fallback for undirected edges.
Dag blanketsToDag(const Dataset& ds,
                  const std::map<std::string, std::vector<std::string>>& blankets,
                  double alpha, const std::optional<std::string>& outcome);

// Blankets for every variable plus blanketsToDag. Degenerate non-outcome
// variables get empty blankets; a degenerate outcome throws.
Dag learnStructure(const Dataset& ds, double alpha,
                   const std::optional<std::string>& outcome);

namespace detail {
// Removes arcs until acyclic, dropping the arc with the largest evidence
// p-value on some cycle first. Exposed for direct testing.
void breakCycles(Dag& dag, const std::map<std::pair<std::string, std::string>, double>& evidence);
}  // namespace detail

}  // namespace cexplain
