#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "cexplain/Discretization.h"
#include "cexplain/Errors.h"
#include "cexplain/Evaluation.h"
#include "cexplain/Parameters.h"
#include "cexplain/Structure.h"

using namespace cexplain;

namespace {

// Outcome o(F, S) with one ordinal parent v over [lo, hi]; success
// probabilities supplied per interval.
BayesNet ordinalNet(const std::vector<double>& successProbs, double lo, double hi) {
  const int bins = static_cast<int>(successProbs.size());
  std::vector<VariableSpec> specs = {VariableSpec::continuous("v", bins, lo, hi),
                                     VariableSpec::outcome("o", {"F", "S"})};
  Dataset raw = makeDataset(specs);
  for (int b = 0; b < bins; ++b) {
    Sample s;
    s.set("v", lo + (hi - lo) * (b + 0.5) / bins);
    s.set("o", std::string(b % 2 ? "S" : "F"));
    raw.appendSample(s);
  }
  const DiscretizationScheme scheme = buildScheme(raw);
  Dataset ds = discretizeDataset(raw, scheme);
  Dag dag;
  dag.nodes = {"v", "o"};
  dag.addArc("v", "o");
  BayesNet net = fitMle(ds, dag, scheme, GoalCondition{"o", {"S"}});
  Cpt& cpt = net.cpts[1];
  for (int b = 0; b < bins; ++b) {
    cpt.table[b] = {1.0 - successProbs[b], successProbs[b]};
    cpt.counts[b] = {8, 8};
    cpt.zeroSupport[b] = 0;
  }
  return net;
}

Dataset outcomeOnlyDataset(int successes, int failures) {
  std::vector<VariableSpec> specs = {VariableSpec::outcome("o", {"F", "S"})};
  Dataset ds = makeDataset(specs);
  for (int i = 0; i < failures; ++i) {
    Sample s;
    s.set("o", std::string("F"));
    ds.appendSample(s);
  }
  for (int i = 0; i < successes; ++i) {
    Sample s;
    s.set("o", std::string("S"));
    ds.appendSample(s);
  }
  return ds;
}

}  // namespace

TEST_CASE("agreement averages one minus the absolute probability gap") {
  const std::vector<double> a = {0.31, 0.5, 0.69};
  CHECK(agreementScore(a, a) == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<double> b = {0.0, 0.19, 0.38};
  CHECK(agreementScore(a, b) == doctest::Approx(0.69).epsilon(1e-12));
  CHECK(agreementScore(b, a) == doctest::Approx(agreementScore(a, b)).epsilon(1e-15));

  CHECK_THROWS_AS(agreementScore(a, {0.1, 0.2}), InputError);
  CHECK_THROWS_AS(agreementScore(std::vector<double>{}, std::vector<double>{}), InputError);
  CHECK_THROWS_AS(agreementScore({1.2}, {0.5}), InputError);
  CHECK_THROWS_AS(agreementScore({0.5}, {-0.1}), InputError);
}

TEST_CASE("frequency tables count successes per parent tuple in ascending order") {
  std::vector<VariableSpec> specs = {VariableSpec::continuous("v", 2, 0.0, 2.0),
                                     VariableSpec::outcome("o", {"F", "S"})};
  Dataset raw = makeDataset(specs);
  const double vs[] = {0.5, 0.5, 0.5, 1.5};
  const char* os[] = {"S", "F", "S", "F"};
  for (int i = 0; i < 4; ++i) {
    Sample s;
    s.set("v", vs[i]);
    s.set("o", std::string(os[i]));
    raw.appendSample(s);
  }
  const DiscretizationScheme scheme = buildScheme(raw);
  Dataset ds = discretizeDataset(raw, scheme);
  Dag dag;
  dag.nodes = {"v", "o"};
  dag.addArc("v", "o");
  const BayesNet net = fitMle(ds, dag, scheme, GoalCondition{"o", {"S"}});

  // Raw and discretized inputs must produce the same table.
  for (const Dataset* input : {&raw, &ds}) {
    const EmpiricalTable table = empiricalTable(*input, net);
    REQUIRE(table.entries.size() == 2);
    CHECK(table.entries[0].assignment.values == std::vector<int>{0});
    CHECK(table.entries[0].successes == 2);
    CHECK(table.entries[0].trials == 3);
    CHECK(table.entries[1].assignment.values == std::vector<int>{1});
    CHECK(table.entries[1].successes == 0);
    CHECK(table.entries[1].trials == 1);
  }

  // The net was fitted on exactly these rows, so it matches its own
  // frequencies perfectly.
  CHECK(agreementScore(net, empiricalTable(ds, net)) == doctest::Approx(1.0).epsilon(1e-12));

  EmpiricalTable broken;
  broken.entries.push_back(EmpiricalEntry{Assignment{{0}}, 0, 0});
  CHECK_THROWS_AS(agreementScore(net, broken), InputError);
  CHECK_THROWS_AS(agreementScore(net, EmpiricalTable{}), InputError);
}

TEST_CASE("success probability must not rise while moving away from zero") {
  // Range [0, 4]: the walk starts at interval 0 and only moves up.
  const BayesNet net = ordinalNet({0.9, 0.7, 0.9, 0.5}, 0.0, 4.0);
  const std::vector<MonotonicityViolation> violations = monotonicityReport(net);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].axis == "v");
  CHECK(violations[0].fromBin == 1);
  CHECK(violations[0].toBin == 2);
  CHECK(violations[0].delta == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(violations[0].context.empty());

  CHECK(monotonicityReport(net, 0.15).size() == 1);
  CHECK(monotonicityReport(net, 0.25).empty());
}

TEST_CASE("the walk starts from the interval containing zero") {
  // Range [-2, 2] with 4 intervals: zero sits on the interior boundary and
  // belongs to the lower interval, so the walk fans out from interval 1.
  const BayesNet net = ordinalNet({0.5, 0.9, 0.8, 0.9}, -2.0, 2.0);
  const std::vector<MonotonicityViolation> violations = monotonicityReport(net);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].axis == "v");
  CHECK(violations[0].fromBin == 2);
  CHECK(violations[0].toBin == 3);
  CHECK(violations[0].delta == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("comparisons touching unobserved cells are skipped") {
  BayesNet net = ordinalNet({0.9, 0.7, 0.9, 0.5}, 0.0, 4.0);
  net.cpts[1].zeroSupport[2] = 1;  // hides the one rising pair
  net.cpts[1].counts[2] = {0, 0};
  CHECK(monotonicityReport(net).empty());
}

TEST_CASE("categorical parents have no direction to check") {
  std::vector<VariableSpec> specs = {VariableSpec::categorical("c", {"a", "b"}),
                                     VariableSpec::outcome("o", {"F", "S"})};
  Dataset ds = makeDataset(specs);
  const char* cs[] = {"a", "a", "b", "b"};
  const char* os[] = {"F", "S", "S", "F"};
  for (int i = 0; i < 4; ++i) {
    Sample s;
    s.set("c", std::string(cs[i]));
    s.set("o", std::string(os[i]));
    ds.appendSample(s);
  }
  ds.discretized = true;
  Dag dag;
  dag.nodes = {"c", "o"};
  dag.addArc("c", "o");
  const BayesNet net = fitMle(ds, dag, DiscretizationScheme{}, GoalCondition{"o", {"S"}});
  CHECK(monotonicityReport(net).empty());
}

TEST_CASE("violations report the fixed values of the other parents") {
  std::vector<VariableSpec> specs = {VariableSpec::continuous("v", 3, 0.0, 3.0),
                                     VariableSpec::categorical("c", {"a", "b"}),
                                     VariableSpec::outcome("o", {"F", "S"})};
  Dataset raw = makeDataset(specs);
  for (int b = 0; b < 3; ++b) {
    for (int l = 0; l < 2; ++l) {
      Sample s;
      s.set("v", 0.5 + b);
      s.set("c", std::string(l ? "b" : "a"));
      s.set("o", std::string((b + l) % 2 ? "S" : "F"));
      raw.appendSample(s);
    }
  }
  const DiscretizationScheme scheme = buildScheme(raw);
  Dataset ds = discretizeDataset(raw, scheme);
  Dag dag;
  dag.nodes = {"v", "c", "o"};
  dag.addArc("v", "o");
  dag.addArc("c", "o");
  BayesNet net = fitMle(ds, dag, scheme, GoalCondition{"o", {"S"}});
  // Tuples in (v, c) mixed-radix order; falling along v for c=a, one rise
  // between intervals 1 and 2 for c=b.
  const double probs[6] = {0.9, 0.9, 0.8, 0.7, 0.7, 0.8};
  Cpt& cpt = net.cpts[2];
  for (int t = 0; t < 6; ++t) {
    cpt.table[t] = {1.0 - probs[t], probs[t]};
    cpt.counts[t] = {4, 4};
    cpt.zeroSupport[t] = 0;
  }

  const std::vector<MonotonicityViolation> violations = monotonicityReport(net);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].axis == "v");
  CHECK(violations[0].fromBin == 1);
  CHECK(violations[0].toBin == 2);
  CHECK(violations[0].delta == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(violations[0].context == std::vector<int>{1});
}

TEST_CASE("cross-validation is deterministic for a fixed seed") {
  std::vector<VariableSpec> specs = {VariableSpec::continuous("v", 2, 0.0, 2.0),
                                     VariableSpec::outcome("o", {"F", "S"})};
  Dataset raw = makeDataset(specs);
  for (int i = 0; i < 40; ++i) {
    Sample s;
    s.set("v", i % 2 ? 1.5 : 0.5);
    s.set("o", std::string((i * 7) % 3 ? "S" : "F"));
    raw.appendSample(s);
  }
  const GoalCondition goal{"o", {"S"}};
  CvOptions options;
  options.folds = 4;
  options.seed = 9;
  const EvalReport first = crossValidate(raw, goal, options);
  const EvalReport second = crossValidate(raw, goal, options);
  CHECK(first.foldLosses == second.foldLosses);
  CHECK(first.meanLoss == second.meanLoss);
  CHECK(first.stdLoss == second.stdLoss);
  CHECK(first.flaggedFolds == second.flaggedFolds);
  REQUIRE(first.foldLosses.size() == 4);
  for (const double loss : first.foldLosses) {
    CHECK(std::isfinite(loss));
    CHECK(loss >= 0.0);
  }

  double mean = 0.0;
  for (const double loss : first.foldLosses) mean += loss;
  mean /= 4.0;
  double var = 0.0;
  for (const double loss : first.foldLosses) var += (loss - mean) * (loss - mean);
  var /= 3.0;
  CHECK(first.meanLoss == doctest::Approx(mean).epsilon(1e-12));
  CHECK(first.stdLoss == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
}

TEST_CASE("cross-validation rejects degenerate fold counts") {
  Dataset raw = outcomeOnlyDataset(5, 5);
  const GoalCondition goal{"o", {"S"}};
  CvOptions one;
  one.folds = 1;
  CHECK_THROWS_AS(crossValidate(raw, goal, one), InputError);
  CvOptions tooMany;
  tooMany.folds = 11;
  CHECK_THROWS_AS(crossValidate(raw, goal, tooMany), InputError);
}

TEST_CASE("tiny datasets still produce finite losses") {
  std::vector<VariableSpec> specs = {VariableSpec::continuous("v", 2, 0.0, 2.0),
                                     VariableSpec::outcome("o", {"F", "S"})};
  Dataset raw = makeDataset(specs);
  const double vs[] = {0.5, 1.5, 0.5, 1.5};
  const char* os[] = {"F", "S", "F", "S"};
  for (int i = 0; i < 4; ++i) {
    Sample s;
    s.set("v", vs[i]);
    s.set("o", std::string(os[i]));
    raw.appendSample(s);
  }
  CvOptions options;
  options.folds = 2;
  const EvalReport report = crossValidate(raw, GoalCondition{"o", {"S"}}, options);
  REQUIRE(report.foldLosses.size() == 2);
  for (const double loss : report.foldLosses) CHECK(std::isfinite(loss));
  CHECK(report.flaggedFolds.empty());
}

TEST_CASE("folds whose training rows share one outcome class are flagged") {
  // One failure among ten rows: the failure lands in fold 0, so fold 0's test
  // run trains on successes only.
  Dataset raw = outcomeOnlyDataset(9, 1);
  CvOptions options;
  options.folds = 2;
  options.seed = 5;
  const EvalReport report = crossValidate(raw, GoalCondition{"o", {"S"}}, options);
  CHECK(report.flaggedFolds == std::vector<int>{0});
  REQUIRE(report.foldLosses.size() == 2);
  // Flagged fold: the fallback net says P(S) = 1, and the held-out failure
  // row is floored at 1e-6 among five test rows.
  CHECK(report.foldLosses[0] == doctest::Approx(-std::log(1e-6) / 5.0).epsilon(1e-9));
  // Other fold: training split has 4 successes and the failure.
  CHECK(report.foldLosses[1] == doctest::Approx(-std::log(0.8)).epsilon(1e-9));
}

TEST_CASE("a deterministic outcome yields near-zero loss everywhere") {
  std::vector<VariableSpec> specs = {VariableSpec::continuous("v", 2, 0.0, 2.0),
                                     VariableSpec::outcome("o", {"F", "S"})};
  Dataset raw = makeDataset(specs);
  for (int i = 0; i < 100; ++i) {
    Sample s;
    const bool high = i % 2 == 1;
    s.set("v", high ? 1.5 : 0.5);
    s.set("o", std::string(high ? "S" : "F"));
    raw.appendSample(s);
  }
  CvOptions options;
  options.folds = 4;
  options.seed = 2;
  const EvalReport report = crossValidate(raw, GoalCondition{"o", {"S"}}, options);
  CHECK(report.flaggedFolds.empty());
  for (const double loss : report.foldLosses) CHECK(loss < 1e-4);
  CHECK(report.meanLoss < 1e-4);
}
