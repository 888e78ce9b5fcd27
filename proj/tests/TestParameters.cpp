#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "cexplain/Discretization.h"
#include "cexplain/Errors.h"
#include "cexplain/Parameters.h"
#include "cexplain/Simulator.h"
#include "cexplain/Structure.h"

using namespace cexplain;

namespace {

// parent p in {P0, P1}, outcome o in {F, S}; rows (P0,F)x3, (P0,S)x1, (P1,S)x2.
Dataset handDataset() {
  std::vector<VariableSpec> specs = {VariableSpec::categorical("p", {"P0", "P1"}),
                                     VariableSpec::outcome("o", {"F", "S"})};
  Dataset ds = makeDataset(specs);
  const char* ps[] = {"P0", "P0", "P0", "P0", "P1", "P1"};
  const char* os[] = {"F", "F", "F", "S", "S", "S"};
  for (int i = 0; i < 6; ++i) {
    Sample s;
    s.set("p", std::string(ps[i]));
    s.set("o", std::string(os[i]));
    ds.appendSample(s);
  }
  ds.discretized = true;  // categorical-only data needs no interval codes
  return ds;
}

BayesNet handNet() {
  const Dataset ds = handDataset();
  Dag dag;
  dag.nodes = {"p", "o"};
  dag.addArc("p", "o");
  return fitMle(ds, dag, DiscretizationScheme{}, GoalCondition{"o", {"S"}});
}

}  // namespace

TEST_CASE("tuple enumeration is mixed-radix with the first parent most significant") {
  Cpt cpt;
  cpt.child = "o";
  cpt.parents = {"a", "b"};
  cpt.parentLevels = {2, 3};
  cpt.childLevels = 2;
  CHECK(cpt.tupleCount() == 6);
  CHECK(cpt.tupleIndex({0, 0}) == 0);
  CHECK(cpt.tupleIndex({0, 2}) == 2);
  CHECK(cpt.tupleIndex({1, 0}) == 3);
  CHECK(cpt.tupleIndex({1, 2}) == 5);
  CHECK_THROWS_AS(cpt.tupleIndex({2, 0}), InputError);
  CHECK_THROWS_AS(cpt.tupleIndex({0}), InputError);
}

TEST_CASE("maximum-likelihood fitting reproduces hand counts") {
  const BayesNet net = handNet();
  CHECK(net.fitSamples == 6);

  const Cpt& root = net.cptOf("p");
  CHECK(root.parents.empty());
  REQUIRE(root.table.size() == 1);
  CHECK(root.table[0][0] == doctest::Approx(4.0 / 6.0).epsilon(1e-15));
  CHECK(root.table[0][1] == doctest::Approx(2.0 / 6.0).epsilon(1e-15));
  CHECK(root.counts[0] == std::vector<std::int64_t>{4, 2});

  const Cpt& out = net.cptOf("o");
  CHECK(out.parents == std::vector<std::string>{"p"});
  REQUIRE(out.table.size() == 2);
  CHECK(out.table[0][0] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(out.table[0][1] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(out.table[1][0] == 0.0);
  CHECK(out.table[1][1] == 1.0);
  CHECK(out.counts[0] == std::vector<std::int64_t>{3, 1});
  CHECK(out.counts[1] == std::vector<std::int64_t>{0, 2});
  CHECK(out.zeroSupport == std::vector<char>{0, 0});

  CHECK_NOTHROW(net.validate());
  CHECK_THROWS_AS(net.cptOf("nope"), InputError);
  CHECK_THROWS_AS(net.spec("nope"), InputError);
}

TEST_CASE("unseen parent tuples become flagged uniform rows, never smoothed") {
  std::vector<VariableSpec> specs = {VariableSpec::categorical("p", {"a", "b", "c"}),
                                     VariableSpec::outcome("o", {"F", "S"})};
  Dataset ds = makeDataset(specs);
  const char* ps[] = {"a", "a", "b"};
  const char* os[] = {"F", "S", "S"};
  for (int i = 0; i < 3; ++i) {
    Sample s;
    s.set("p", std::string(ps[i]));
    s.set("o", std::string(os[i]));
    ds.appendSample(s);
  }
  ds.discretized = true;
  Dag dag;
  dag.nodes = {"p", "o"};
  dag.addArc("p", "o");
  const BayesNet net = fitMle(ds, dag, DiscretizationScheme{}, GoalCondition{"o", {"S"}});
  const Cpt& out = net.cptOf("o");
  REQUIRE(out.table.size() == 3);
  CHECK(out.zeroSupport == std::vector<char>{0, 0, 1});
  CHECK(out.table[2] == std::vector<double>{0.5, 0.5});
  CHECK(out.counts[2] == std::vector<std::int64_t>{0, 0});
  // Observed rows stay exact ratios: no pseudo-counts anywhere.
  CHECK(out.table[0] == std::vector<double>{0.5, 0.5});
  CHECK(out.counts[0] == std::vector<std::int64_t>{1, 1});
}

TEST_CASE("every fitted row is a probability vector") {
  StackingConfig cfg;
  cfg.seed = 31;
  const Dataset raw = generateDataset(cfg, 3000);
  const DiscretizationScheme scheme = buildScheme(raw.variables);
  const Dataset ds = discretizeDataset(raw, scheme);
  Dag dag;
  for (const auto& v : ds.variables) dag.nodes.push_back(v.name);
  dag.addArc("xOff", "onTop");
  dag.addArc("yOff", "onTop");
  dag.addArc("dropOff", "onTop");
  const BayesNet net = fitMle(ds, dag, scheme, stackingGoal());
  CHECK_NOTHROW(net.validate());
  for (const Cpt& cpt : net.cpts) {
    REQUIRE(cpt.table.size() == cpt.tupleCount());
    for (const auto& row : cpt.table) {
      double sum = 0.0;
      for (double v : row) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        sum += v;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("fitted cells track the generator's success surface") {
  // With 50,000 trials the central cell (≈ 2,850 rows) pins its
  // near-certain success probability tightly.
  StackingConfig cfg;
  cfg.seed = 3;
  const Dataset raw = generateDataset(cfg, 50000);
  const DiscretizationScheme scheme = buildScheme(raw.variables);
  const Dataset ds = discretizeDataset(raw, scheme);
  Dag dag;
  for (const auto& v : ds.variables) dag.nodes.push_back(v.name);
  dag.addArc("xOff", "onTop");
  dag.addArc("yOff", "onTop");
  dag.addArc("dropOff", "onTop");
  const BayesNet net = fitMle(ds, dag, scheme, stackingGoal());

  // True cell mean of the central cell (x bin 2, y bin 2, drop bin 0),
  // computed by numeric integration of the closed-form landing probability.
  const double wantCentral = 0.99979652;
  Assignment central;
  const Cpt& cpt = net.cptOf("onTop");
  for (const auto& p : cpt.parents) central.values.push_back(p == "dropOff" ? 0 : 2);
  const SuccessProbability got = querySuccessProb(net, central);
  CHECK_FALSE(got.zeroSupport);
  CHECK(std::fabs(got.value - wantCentral) < 0.01);
}

TEST_CASE("success probability queries validate their assignment") {
  const BayesNet net = handNet();
  Assignment a;
  a.values = {1};
  const SuccessProbability p1 = querySuccessProb(net, a);
  CHECK(p1.value == 1.0);
  CHECK_FALSE(p1.zeroSupport);
  a.values = {0};
  CHECK(querySuccessProb(net, a).value == doctest::Approx(0.25).epsilon(1e-15));

  Assignment wrongArity;
  wrongArity.values = {0, 1};
  CHECK_THROWS_AS(querySuccessProb(net, wrongArity), InputError);
  Assignment outOfRange;
  outOfRange.values = {2};
  CHECK_THROWS_AS(querySuccessProb(net, outOfRange), InputError);
}

TEST_CASE("fitting rejects inconsistent inputs") {
  Dataset ds = handDataset();
  Dag dag;
  dag.nodes = {"p", "o"};
  dag.addArc("p", "o");

  Dataset raw = handDataset();
  raw.discretized = false;
  CHECK_THROWS_AS(fitMle(raw, dag, DiscretizationScheme{}, GoalCondition{"o", {"S"}}),
                  InputError);

  Dag mismatched;
  mismatched.nodes = {"p"};
  CHECK_THROWS_AS(fitMle(ds, mismatched, DiscretizationScheme{}, GoalCondition{"o", {"S"}}),
                  InputError);

  CHECK_THROWS_AS(fitMle(ds, dag, DiscretizationScheme{}, GoalCondition{"o", {"nope"}}),
                  InputError);
  CHECK_THROWS_AS(fitMle(ds, dag, DiscretizationScheme{}, GoalCondition{"nope", {"S"}}),
                  InputError);
}

TEST_CASE("validation catches corrupted tables") {
  BayesNet net = handNet();
  net.cpts[1].table[0] = {0.7, 0.7};  // no longer sums to one
  CHECK_THROWS_AS(net.validate(), InputError);

  BayesNet net2 = handNet();
  net2.cpts[1].counts[0] = {-1, 4};
  CHECK_THROWS_AS(net2.validate(), InputError);

  BayesNet net3 = handNet();
  net3.goal.successLabels = {"S", "S"};
  CHECK_THROWS_AS(net3.validate(), InputError);

  BayesNet net4 = handNet();
  net4.cpts[1].parents = {};  // disagrees with the arc p -> o
  CHECK_THROWS_AS(net4.validate(), InputError);
}
