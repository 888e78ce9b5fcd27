#pragma once

#include <map>
#include <string>
#include <vector>

#include "cexplain/Parameters.h"

namespace cexplain {

enum class MoveDirection { Decrease, Increase, Relabel };

std::string moveDirectionName(MoveDirection);

struct Change {
  std::string variable;
  int from = 0;
  int to = 0;
  MoveDirection direction = MoveDirection::Relabel;
};

// The outcome's parents with their level structure, in CPT parent order.
struct ParentSpace {
  std::vector<std::string> names;
  std::vector<int> levels;
  std::vector<bool> ordinal;                     // discretized continuous
  std::vector<std::vector<std::string>> labels;  // categorical only
};

ParentSpace outcomeParentSpace(const BayesNet&);

// Single-variable transitions: ordinal parents move one interval down then up;
// categorical parents move to every other label in declaration order. Emission
// follows the parent declaration order.
std::vector<Assignment> neighbors(const ParentSpace&, const Assignment&);

struct ExplanationResult {
  Assignment failure;
  Assignment solution;
  double pFailure = 0.0;
  double pSolution = 0.0;
  int depth = 0;
  std::vector<Change> changes;  // parent declaration order
  bool failureZeroSupport = false;
  bool solutionZeroSupport = false;
  bool noFailure = false;  // the queried state already clears the threshold
  std::string text;
};

// Breadth-first search over single-variable transitions for the nearest
// assignment whose success probability exceeds epsilon. Ties resolve to the
// first assignment found under the fixed emission order. Zero-support cells
// stay candidates but are flagged in the result. Throws NoSolutionError with
// the best assignment seen when the whole space stays at or below epsilon.
ExplanationResult explainFromAssignment(const BayesNet&, const Assignment& start,
                                        double epsilon);
// Same, from raw values for exactly the outcome's parents.
ExplanationResult explainFailure(const BayesNet&, const Sample& failureValues,
                                 double epsilon);

struct LexiconPhrase {
  std::string text;
  bool locative = false;  // takes the trailing locative suffix
};

struct Lexicon {
  std::string prefix;
  std::string joiner;
  std::string locativeSuffix;
  std::string noFailureText;
  std::map<std::pair<std::string, std::string>, LexiconPhrase> phrases;  // (variable, direction)
};

Lexicon defaultStackingLexicon();

// One sentence: prefix + phrases joined, with the locative suffix appended
// when any phrase is locative. A missing (variable, direction) entry is an
// InputError naming the pair.
std::string renderExplanation(const ExplanationResult&, const Lexicon&);

}  // namespace cexplain
