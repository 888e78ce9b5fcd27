#include "cexplain/Parameters.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "cexplain/Errors.h"

namespace cexplain {

std::size_t Cpt::tupleCount() const {
  std::size_t n = 1;
  for (const int levels : parentLevels) n *= static_cast<std::size_t>(levels);
  return n;
}

std::size_t Cpt::tupleIndex(const std::vector<int>& parentValues) const {
  if (parentValues.size() != parents.size()) {
    throw InputError("assignment for '" + child + "' must cover exactly its " +
                     std::to_string(parents.size()) + " parents");
  }
  std::size_t index = 0;
  for (std::size_t i = 0; i < parents.size(); ++i) {
    const int v = parentValues[i];
    if (v < 0 || v >= parentLevels[i]) {
      throw InputError("value " + std::to_string(v) + " for parent '" + parents[i] +
                       "' is outside [0, " + std::to_string(parentLevels[i]) + ")");
    }
    index = index * static_cast<std::size_t>(parentLevels[i]) + static_cast<std::size_t>(v);
  }
  return index;
}

const VariableSpec& BayesNet::spec(const std::string& name) const {
  for (const auto& v : variables) {
    if (v.name == name) return v;
  }
  throw InputError("unknown variable '" + name + "'");
}

const Cpt& BayesNet::cptOf(const std::string& name) const {
  for (const auto& c : cpts) {
    if (c.child == name) return c;
  }
  throw InputError("no probability table for variable '" + name + "'");
}

void BayesNet::validate() const {
  if (variables.empty()) throw InputError("model has no variables");
  std::set<std::string> names;
  for (const auto& v : variables) {
    v.validate();
    if (!names.insert(v.name).second) {
      throw InputError("duplicate variable name '" + v.name + "'");
    }
  }

  if (dag.nodes.size() != variables.size()) {
    throw InputError("graph nodes do not match the variable list");
  }
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (dag.nodes[i] != variables[i].name) {
      throw InputError("graph nodes do not match the variable list");
    }
  }
  for (const auto& [from, to] : dag.arcs) {
    if (!names.count(from) || !names.count(to)) {
      throw InputError("arc " + from + " -> " + to + " references an unknown node");
    }
    if (from == to) throw InputError("self-loop arc '" + from + "'");
  }
  if (!dag.isAcyclic()) throw InputError("graph contains a directed cycle");

  for (const auto& v : variables) {
    if (v.isContinuous()) {
      if (!scheme.has(v.name)) {
        throw InputError("no interval partition for continuous variable '" + v.name + "'");
      }
      if (scheme.bins(v.name) != v.bins) {
        throw InputError("interval partition for '" + v.name +
                         "' does not match the declared bin count");
      }
    }
  }

  const auto levelsOf = [this](const std::string& name) {
    const VariableSpec& s = spec(name);
    return s.isContinuous() ? s.bins : static_cast<int>(s.labels.size());
  };

  if (cpts.size() != variables.size()) {
    throw InputError("expected one probability table per variable");
  }
  for (std::size_t i = 0; i < variables.size(); ++i) {
    const Cpt& cpt = cpts[i];
    if (cpt.child != variables[i].name) {
      throw InputError("probability tables must follow variable declaration order");
    }
    std::vector<std::string> declared = dag.parentsOf(cpt.child);
    std::vector<std::string> listed = cpt.parents;
    std::sort(declared.begin(), declared.end());
    std::sort(listed.begin(), listed.end());
    if (declared != listed) {
      throw InputError("parents of '" + cpt.child + "' do not match the graph");
    }
    if (cpt.parentLevels.size() != cpt.parents.size()) {
      throw InputError("parent level counts of '" + cpt.child + "' are malformed");
    }
    for (std::size_t p = 0; p < cpt.parents.size(); ++p) {
      if (cpt.parentLevels[p] != levelsOf(cpt.parents[p])) {
        throw InputError("level count of parent '" + cpt.parents[p] + "' in table for '" +
                         cpt.child + "' does not match its declaration");
      }
    }
    if (cpt.childLevels != levelsOf(cpt.child)) {
      throw InputError("child level count of '" + cpt.child + "' does not match its declaration");
    }
    const std::size_t tuples = cpt.tupleCount();
    if (cpt.table.size() != tuples || cpt.counts.size() != tuples ||
        cpt.zeroSupport.size() != tuples) {
      throw InputError("table for '" + cpt.child + "' does not cover every parent tuple");
    }
    for (std::size_t t = 0; t < tuples; ++t) {
      if (cpt.table[t].size() != static_cast<std::size_t>(cpt.childLevels) ||
          cpt.counts[t].size() != static_cast<std::size_t>(cpt.childLevels)) {
        throw InputError("table row for '" + cpt.child + "' has the wrong width");
      }
      double sum = 0.0;
      for (const double p : cpt.table[t]) {
        if (!(p >= 0.0 && p <= 1.0)) {
          throw InputError("probability outside [0, 1] in table for '" + cpt.child + "'");
        }
        sum += p;
      }
      if (std::fabs(sum - 1.0) > 1e-9) {
        throw InputError("probability row for '" + cpt.child + "' does not sum to 1");
      }
      for (const std::int64_t c : cpt.counts[t]) {
        if (c < 0) throw InputError("negative count in table for '" + cpt.child + "'");
      }
    }
  }

  const VariableSpec& outcomeSpec = spec(goal.outcome);
  if (outcomeSpec.isContinuous()) {
    throw InputError("goal variable '" + goal.outcome + "' must be categorical");
  }
  if (goal.successLabels.empty()) throw InputError("goal needs at least one success label");
  std::set<std::string> seenLabels;
  for (const auto& label : goal.successLabels) {
    if (outcomeSpec.labelIndex(label) < 0) {
      throw InputError("goal label '" + label + "' is not a level of '" + goal.outcome + "'");
    }
    if (!seenLabels.insert(label).second) {
      throw InputError("duplicate goal label '" + label + "'");
    }
  }
  if (fitSamples < 0) throw InputError("negative sample count");
}

BayesNet fitMle(const Dataset& ds, const Dag& dag, const DiscretizationScheme& scheme,
                const GoalCondition& goal) {
  if (!ds.discretized) throw InputError("parameter fitting needs a discretized dataset");
  if (ds.rowCount() == 0) throw InputError("parameter fitting needs a non-empty dataset");
  if (dag.nodes.size() != ds.variables.size()) {
    throw InputError("graph nodes do not match the dataset variables");
  }
  for (std::size_t i = 0; i < ds.variables.size(); ++i) {
    if (dag.nodes[i] != ds.variables[i].name) {
      throw InputError("graph nodes do not match the dataset variables");
    }
  }

  BayesNet net;
  net.variables = ds.variables;
  net.scheme = scheme;
  net.dag = dag;
  net.goal = goal;
  net.fitSamples = static_cast<std::int64_t>(ds.rowCount());

  const std::size_t rows = ds.rowCount();
  for (std::size_t i = 0; i < ds.variables.size(); ++i) {
    const std::string& child = ds.variables[i].name;
    Cpt cpt;
    cpt.child = child;
    cpt.parents = dag.parentsOf(child);
    cpt.childLevels = ds.levelCount(static_cast<int>(i));
    std::vector<int> parentIdx;
    for (const auto& p : cpt.parents) {
      const int pi = ds.variableIndexOrThrow(p);
      parentIdx.push_back(pi);
      cpt.parentLevels.push_back(ds.levelCount(pi));
    }

    const std::size_t tuples = cpt.tupleCount();
    cpt.counts.assign(tuples, std::vector<std::int64_t>(cpt.childLevels, 0));
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<int> parentValues;
      parentValues.reserve(parentIdx.size());
      for (const int pi : parentIdx) parentValues.push_back(ds.codes[pi][r]);
      cpt.counts[cpt.tupleIndex(parentValues)][ds.codes[i][r]] += 1;
    }

    cpt.table.assign(tuples, std::vector<double>(cpt.childLevels, 0.0));
    cpt.zeroSupport.assign(tuples, 0);
    for (std::size_t t = 0; t < tuples; ++t) {
      std::int64_t total = 0;
      for (const std::int64_t c : cpt.counts[t]) total += c;
      if (total == 0) {
        cpt.zeroSupport[t] = 1;
        const double uniform = 1.0 / cpt.childLevels;
        for (int k = 0; k < cpt.childLevels; ++k) cpt.table[t][k] = uniform;
      } else {
        for (int k = 0; k < cpt.childLevels; ++k) {
          cpt.table[t][k] = static_cast<double>(cpt.counts[t][k]) / static_cast<double>(total);
        }
      }
    }
    net.cpts.push_back(std::move(cpt));
  }

  net.validate();
  return net;
}

SuccessProbability querySuccessProb(const BayesNet& net, const Assignment& assignment) {
  const Cpt& cpt = net.cptOf(net.goal.outcome);
  const std::size_t t = cpt.tupleIndex(assignment.values);
  const VariableSpec& outcomeSpec = net.spec(net.goal.outcome);
  double p = 0.0;
  for (const auto& label : net.goal.successLabels) {
    const int li = outcomeSpec.labelIndex(label);
    if (li < 0) throw InputError("goal label '" + label + "' is not a level of '" +
                                 net.goal.outcome + "'");
    p += cpt.table[t][li];
  }
  SuccessProbability result;
  result.value = p;
  result.zeroSupport = cpt.zeroSupport[t] != 0;
  return result;
}

}  // namespace cexplain
