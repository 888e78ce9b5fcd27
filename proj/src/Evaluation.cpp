#include "cexplain/Evaluation.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "cexplain/Discretization.h"
#include "cexplain/Errors.h"
#include "cexplain/Explanation.h"
#include "cexplain/Random.h"
#include "cexplain/Structure.h"

namespace cexplain {

namespace {

constexpr double kLossFloor = 1e-6;

Dataset subsetRows(const Dataset& ds, const std::vector<std::size_t>& rows) {
  Dataset out = ds;
  for (std::size_t v = 0; v < ds.variables.size(); ++v) {
    if (!out.numeric[v].empty()) {
      std::vector<double> column;
      column.reserve(rows.size());
      for (const std::size_t r : rows) column.push_back(ds.numeric[v][r]);
      out.numeric[v] = std::move(column);
    }
    if (!out.codes[v].empty()) {
      std::vector<int> column;
      column.reserve(rows.size());
      for (const std::size_t r : rows) column.push_back(ds.codes[v][r]);
      out.codes[v] = std::move(column);
    }
  }
  return out;
}

Dag arcFreeDag(const Dataset& ds) {
  Dag dag;
  for (const auto& v : ds.variables) dag.nodes.push_back(v.name);
  return dag;
}

}  // namespace

double agreementScore(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || a.size() != b.size()) {
    throw InputError("agreement needs two equally long, non-empty probability lists");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] >= 0.0 && a[i] <= 1.0) || !(b[i] >= 0.0 && b[i] <= 1.0)) {
      throw InputError("agreement needs probabilities in [0, 1]");
    }
    sum += 1.0 - std::fabs(a[i] - b[i]);
  }
  return sum / static_cast<double>(a.size());
}

EmpiricalTable empiricalTable(const Dataset& ds, const BayesNet& net) {
  const Dataset coded = ds.discretized ? ds : discretizeDataset(ds, net.scheme);
  const Cpt& cpt = net.cptOf(net.goal.outcome);

  std::vector<int> parentIdx;
  for (const auto& p : cpt.parents) {
    const int pi = coded.variableIndexOrThrow(p);
    if (coded.levelCount(pi) != net.spec(p).bins &&
        coded.levelCount(pi) != static_cast<int>(net.spec(p).labels.size())) {
      throw InputError("level count of '" + p + "' does not match the model");
    }
    parentIdx.push_back(pi);
  }
  const int oi = coded.variableIndexOrThrow(net.goal.outcome);

  std::set<int> successCodes;
  const VariableSpec& outcomeSpec = net.spec(net.goal.outcome);
  for (const auto& label : net.goal.successLabels) {
    const int li = outcomeSpec.labelIndex(label);
    if (li < 0) throw InputError("goal label '" + label + "' is not a level of the outcome");
    successCodes.insert(li);
  }

  std::map<std::size_t, EmpiricalEntry> byTuple;
  for (std::size_t r = 0; r < coded.rowCount(); ++r) {
    Assignment a;
    for (const int pi : parentIdx) a.values.push_back(coded.codes[pi][r]);
    const std::size_t t = cpt.tupleIndex(a.values);
    EmpiricalEntry& entry = byTuple[t];
    entry.assignment = std::move(a);
    entry.trials += 1;
    if (successCodes.count(coded.codes[oi][r])) entry.successes += 1;
  }

  EmpiricalTable table;
  table.entries.reserve(byTuple.size());
  for (auto& [t, entry] : byTuple) {
    (void)t;
    table.entries.push_back(std::move(entry));
  }
  return table;
}

double agreementScore(const BayesNet& net, const EmpiricalTable& table) {
  if (table.entries.empty()) throw InputError("agreement needs a non-empty grid");
  std::vector<double> model;
  std::vector<double> empirical;
  for (const auto& entry : table.entries) {
    if (entry.trials <= 0) throw InputError("empirical entry with no trials");
    model.push_back(querySuccessProb(net, entry.assignment).value);
    empirical.push_back(static_cast<double>(entry.successes) /
                        static_cast<double>(entry.trials));
  }
  return agreementScore(model, empirical);
}

std::vector<MonotonicityViolation> monotonicityReport(const BayesNet& net,
                                                      double tolerance) {
  const ParentSpace space = outcomeParentSpace(net);
  const Cpt& cpt = net.cptOf(net.goal.outcome);
  std::vector<MonotonicityViolation> violations;

  for (std::size_t axis = 0; axis < space.names.size(); ++axis) {
    if (!space.ordinal[axis]) continue;
    const std::string& name = space.names[axis];
    const auto& bounds = net.scheme.boundaries.at(name);
    int center = 0;
    if (bounds.front() < 0.0 && bounds.back() > 0.0) {
      center = net.scheme.intervalIndex(name, 0.0);
    }

    // Every combination of the other parents, ascending tuple order.
    std::vector<std::size_t> others;
    for (std::size_t i = 0; i < space.names.size(); ++i) {
      if (i != axis) others.push_back(i);
    }
    std::vector<int> context(others.size(), 0);
    bool done = false;  // an empty context still yields the one all-zero tuple
    while (!done) {
      Assignment a;
      a.values.assign(space.names.size(), 0);
      for (std::size_t k = 0; k < others.size(); ++k) a.values[others[k]] = context[k];

      const auto probeAt = [&](int bin) {
        Assignment q = a;
        q.values[axis] = bin;
        const std::size_t t = cpt.tupleIndex(q.values);
        return std::make_pair(querySuccessProb(net, q).value, cpt.zeroSupport[t] != 0);
      };
      const auto check = [&](int nearBin, int farBin) {
        const auto [pNear, nearZero] = probeAt(nearBin);
        const auto [pFar, farZero] = probeAt(farBin);
        if (nearZero || farZero) return;  // no data backing the comparison
        if (pFar > pNear + tolerance) {
          MonotonicityViolation v;
          v.axis = name;
          v.fromBin = nearBin;
          v.toBin = farBin;
          v.delta = pFar - pNear;
          v.context = context;
          violations.push_back(std::move(v));
        }
      };
      for (int bin = center; bin + 1 < space.levels[axis]; ++bin) check(bin, bin + 1);
      for (int bin = center; bin - 1 >= 0; --bin) check(bin, bin - 1);

      // next context tuple (last position least significant)
      done = true;
      for (std::size_t k = others.size(); k-- > 0;) {
        if (++context[k] < space.levels[others[k]]) {
          done = false;
          break;
        }
        context[k] = 0;
      }
    }
  }
  return violations;
}

EvalReport crossValidate(const Dataset& raw, const GoalCondition& goal,
                         const CvOptions& options) {
  if (options.folds < 2) throw InputError("cross-validation needs at least 2 folds");
  if (raw.rowCount() < static_cast<std::size_t>(options.folds)) {
    throw InputError("cross-validation needs at least one row per fold");
  }
  const int oi = raw.variableIndexOrThrow(goal.outcome);
  if (raw.variables[oi].isContinuous()) {
    throw InputError("outcome '" + goal.outcome + "' must be categorical");
  }

  // Intervals come from the full dataset once; folds only relearn the graph
  // and the probabilities.
  const DiscretizationScheme scheme = buildScheme(raw);
  const Dataset coded = discretizeDataset(raw, scheme);

  // Stratified assignment: shuffle each outcome class, then deal rows to folds
  // with one running counter so every fold ends up within one row of even.
  std::map<int, std::vector<std::size_t>> byClass;
  for (std::size_t r = 0; r < raw.rowCount(); ++r) byClass[raw.codes[oi][r]].push_back(r);
  SplitMix64 rng(options.seed);
  std::vector<std::vector<std::size_t>> folds(options.folds);
  std::size_t dealt = 0;
  for (auto& [cls, rows] : byClass) {
    (void)cls;
    shuffleInPlace(rows, rng);
    for (const std::size_t r : rows) {
      folds[dealt % options.folds].push_back(r);
      ++dealt;
    }
  }

  EvalReport report;
  for (int f = 0; f < options.folds; ++f) {
    std::vector<char> inTest(raw.rowCount(), 0);
    for (const std::size_t r : folds[f]) inTest[r] = 1;
    std::vector<std::size_t> trainRows;
    trainRows.reserve(raw.rowCount() - folds[f].size());
    for (std::size_t r = 0; r < raw.rowCount(); ++r) {
      if (!inTest[r]) trainRows.push_back(r);
    }

    const Dataset train = subsetRows(coded, trainRows);
    std::set<int> trainClasses;
    for (const std::size_t r : trainRows) trainClasses.insert(coded.codes[oi][r]);

    BayesNet net;
    if (trainClasses.size() < 2) {
      report.flaggedFolds.push_back(f);
      net = fitMle(train, arcFreeDag(train), scheme, goal);
    } else {
      const Dag dag = learnStructure(train, options.alpha, goal.outcome);
      net = fitMle(train, dag, scheme, goal);
    }

    const Cpt& cpt = net.cptOf(goal.outcome);
    std::vector<int> parentIdx;
    for (const auto& p : cpt.parents) parentIdx.push_back(coded.variableIndexOrThrow(p));

    double sum = 0.0;
    for (const std::size_t r : folds[f]) {
      std::vector<int> parentValues;
      parentValues.reserve(parentIdx.size());
      for (const int pi : parentIdx) parentValues.push_back(coded.codes[pi][r]);
      const std::size_t t = cpt.tupleIndex(parentValues);
      const double p = std::max(cpt.table[t][coded.codes[oi][r]], kLossFloor);
      sum += -std::log(p);
    }
    report.foldLosses.push_back(sum / static_cast<double>(folds[f].size()));
  }

  double mean = 0.0;
  for (const double loss : report.foldLosses) mean += loss;
  mean /= static_cast<double>(report.foldLosses.size());
  double var = 0.0;
  for (const double loss : report.foldLosses) var += (loss - mean) * (loss - mean);
  var /= static_cast<double>(report.foldLosses.size() - 1);
  report.meanLoss = mean;
  report.stdLoss = std::sqrt(var);
  return report;
}

}  // namespace cexplain
