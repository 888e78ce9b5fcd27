#include "cexplain/Explanation.h"

#include <cstdio>
#include <queue>
#include <set>
#include <utility>

#include "cexplain/Errors.h"

namespace cexplain {

namespace {

std::string formatProbability(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

Assignment withValue(const Assignment& a, std::size_t i, int v) {
  Assignment out = a;
  out.values[i] = v;
  return out;
}

std::vector<Change> diffAssignments(const ParentSpace& space, const Assignment& from,
                                    const Assignment& to) {
  std::vector<Change> changes;
  for (std::size_t i = 0; i < space.names.size(); ++i) {
    if (from.values[i] == to.values[i]) continue;
    Change c;
    c.variable = space.names[i];
    c.from = from.values[i];
    c.to = to.values[i];
    if (!space.ordinal[i]) {
      c.direction = MoveDirection::Relabel;
    } else {
      c.direction = to.values[i] < from.values[i] ? MoveDirection::Decrease
                                                  : MoveDirection::Increase;
    }
    changes.push_back(std::move(c));
  }
  return changes;
}

}  // namespace

std::string moveDirectionName(MoveDirection d) {
  switch (d) {
    case MoveDirection::Decrease: return "decrease";
    case MoveDirection::Increase: return "increase";
    case MoveDirection::Relabel: return "relabel";
  }
  throw InputError("unknown move direction");
}

ParentSpace outcomeParentSpace(const BayesNet& net) {
  const Cpt& cpt = net.cptOf(net.goal.outcome);
  ParentSpace space;
  space.names = cpt.parents;
  space.levels = cpt.parentLevels;
  for (const auto& name : cpt.parents) {
    const VariableSpec& s = net.spec(name);
    space.ordinal.push_back(s.isContinuous());
    space.labels.push_back(s.isContinuous() ? std::vector<std::string>{} : s.labels);
  }
  return space;
}

std::vector<Assignment> neighbors(const ParentSpace& space, const Assignment& a) {
  if (a.values.size() != space.names.size()) {
    throw InputError("assignment must cover exactly the " +
                     std::to_string(space.names.size()) + " outcome parents");
  }
  for (std::size_t i = 0; i < space.names.size(); ++i) {
    if (a.values[i] < 0 || a.values[i] >= space.levels[i]) {
      throw InputError("value for '" + space.names[i] + "' is outside [0, " +
                       std::to_string(space.levels[i]) + ")");
    }
  }
  std::vector<Assignment> out;
  for (std::size_t i = 0; i < space.names.size(); ++i) {
    const int v = a.values[i];
    if (space.ordinal[i]) {
      if (v - 1 >= 0) out.push_back(withValue(a, i, v - 1));
      if (v + 1 < space.levels[i]) out.push_back(withValue(a, i, v + 1));
    } else {
      for (int label = 0; label < space.levels[i]; ++label) {
        if (label != v) out.push_back(withValue(a, i, label));
      }
    }
  }
  return out;
}

ExplanationResult explainFromAssignment(const BayesNet& net, const Assignment& start,
                                        double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw InputError("success threshold must lie in (0, 1)");
  }
  const ParentSpace space = outcomeParentSpace(net);
  const SuccessProbability pStart = querySuccessProb(net, start);

  ExplanationResult result;
  result.failure = start;
  result.pFailure = pStart.value;
  result.failureZeroSupport = pStart.zeroSupport;

  if (pStart.value > epsilon) {
    result.noFailure = true;
    result.solution = start;
    result.pSolution = pStart.value;
    result.solutionZeroSupport = pStart.zeroSupport;
    result.depth = 0;
    return result;
  }

  std::set<std::vector<int>> visited;
  std::queue<std::pair<Assignment, int>> frontier;
  visited.insert(start.values);
  frontier.emplace(start, 0);
  Assignment best = start;
  double bestP = pStart.value;

  while (!frontier.empty()) {
    const auto [node, depth] = frontier.front();
    frontier.pop();
    for (const Assignment& child : neighbors(space, node)) {
      if (!visited.insert(child.values).second) continue;
      const SuccessProbability p = querySuccessProb(net, child);
      if (p.value > bestP) {
        best = child;
        bestP = p.value;
      }
      if (p.value > epsilon) {
        result.solution = child;
        result.pSolution = p.value;
        result.solutionZeroSupport = p.zeroSupport;
        result.depth = depth + 1;
        result.changes = diffAssignments(space, start, child);
        return result;
      }
      frontier.emplace(child, depth + 1);
    }
  }

  throw NoSolutionError(best.values, bestP,
                        "no parent assignment clears the success threshold " +
                            formatProbability(epsilon) + "; best probability found was " +
                            formatProbability(bestP));
}

ExplanationResult explainFailure(const BayesNet& net, const Sample& failureValues,
                                 double epsilon) {
  const ParentSpace space = outcomeParentSpace(net);

  for (const auto& [name, value] : failureValues.values) {
    (void)value;
    bool known = false;
    for (const auto& parent : space.names) {
      if (parent == name) known = true;
    }
    if (!known) {
      throw InputError("'" + name + "' is not a parent of '" + net.goal.outcome + "'");
    }
  }

  Assignment start;
  for (std::size_t i = 0; i < space.names.size(); ++i) {
    const std::string& name = space.names[i];
    const SampleValue* value = failureValues.find(name);
    if (!value) throw InputError("missing value for parent '" + name + "'");
    if (space.ordinal[i]) {
      if (!std::holds_alternative<double>(*value)) {
        throw InputError("parent '" + name + "' needs a numeric value");
      }
      start.values.push_back(net.scheme.intervalIndex(name, std::get<double>(*value)));
    } else {
      if (!std::holds_alternative<std::string>(*value)) {
        throw InputError("parent '" + name + "' needs a label");
      }
      const int li = net.spec(name).labelIndex(std::get<std::string>(*value));
      if (li < 0) {
        throw InputError("unknown label '" + std::get<std::string>(*value) + "' for parent '" +
                         name + "'");
      }
      start.values.push_back(li);
    }
  }
  return explainFromAssignment(net, start, epsilon);
}

Lexicon defaultStackingLexicon() {
  Lexicon lex;
  lex.prefix = "The upper cube was dropped ";
  lex.joiner = " and ";
  lex.locativeSuffix = " of the lower cube";
  lex.noFailureText = "no failure detected";
  lex.phrases[{"xOff", "increase"}] = {"too far to the left", true};
  lex.phrases[{"xOff", "decrease"}] = {"too far to the right", true};
  lex.phrases[{"yOff", "decrease"}] = {"too far to the front", true};
  lex.phrases[{"yOff", "increase"}] = {"too far to the back", true};
  lex.phrases[{"dropOff", "decrease"}] = {"too high", false};
  lex.phrases[{"dropOff", "increase"}] = {"too low", false};
  return lex;
}

std::string renderExplanation(const ExplanationResult& result, const Lexicon& lexicon) {
  if (result.noFailure || result.changes.empty()) return lexicon.noFailureText;
  std::string body;
  bool anyLocative = false;
  for (std::size_t i = 0; i < result.changes.size(); ++i) {
    const Change& change = result.changes[i];
    const std::string direction = moveDirectionName(change.direction);
    const auto it = lexicon.phrases.find({change.variable, direction});
    if (it == lexicon.phrases.end()) {
      throw InputError("lexicon has no phrase for (" + change.variable + ", " + direction + ")");
    }
    if (i > 0) body += lexicon.joiner;
    body += it->second.text;
    anyLocative = anyLocative || it->second.locative;
  }
  std::string sentence = lexicon.prefix + body;
  if (anyLocative) sentence += lexicon.locativeSuffix;
  sentence += ".";
  return sentence;
}

}  // namespace cexplain
