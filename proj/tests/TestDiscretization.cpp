#include <doctest.h>

#include "cexplain/Discretization.h"
#include "cexplain/Errors.h"
#include "cexplain/Simulator.h"

using namespace cexplain;

TEST_CASE("equal-width boundaries for the stacking variables") {
  const DiscretizationScheme scheme = buildScheme(stackingVariables(StackingConfig{}));

  REQUIRE(scheme.has("xOff"));
  REQUIRE(scheme.has("yOff"));
  REQUIRE(scheme.has("dropOff"));
  CHECK_FALSE(scheme.has("colorUp"));
  CHECK(scheme.bins("xOff") == 5);
  CHECK(scheme.bins("dropOff") == 7);

  const std::vector<double> wantX = {-0.03, -0.018, -0.006, 0.006, 0.018, 0.03};
  const std::vector<double> wantDrop = {0.004,
                                        0.017714285714285717,
                                        0.03142857142857143,
                                        0.04514285714285715,
                                        0.05885714285714286,
                                        0.07257142857142858,
                                        0.0862857142857143,
                                        0.1};
  const auto& gotX = scheme.boundaries.at("xOff");
  REQUIRE(gotX.size() == wantX.size());
  for (std::size_t i = 0; i < wantX.size(); ++i) {
    CHECK(gotX[i] == doctest::Approx(wantX[i]).epsilon(1e-14));
  }
  CHECK(scheme.boundaries.at("yOff") == gotX);
  const auto& gotDrop = scheme.boundaries.at("dropOff");
  REQUIRE(gotDrop.size() == wantDrop.size());
  for (std::size_t i = 0; i < wantDrop.size(); ++i) {
    CHECK(gotDrop[i] == doctest::Approx(wantDrop[i]).epsilon(1e-14));
  }
  // The range ends are pinned exactly.
  CHECK(gotDrop.front() == 0.004);
  CHECK(gotDrop.back() == 0.1);
}

TEST_CASE("interval index: interior boundaries belong to the lower interval") {
  const DiscretizationScheme scheme = buildScheme(stackingVariables(StackingConfig{}));

  CHECK(scheme.intervalIndex("xOff", -0.03) == 0);
  CHECK(scheme.intervalIndex("xOff", -0.018) == 0);   // boundary -> lower side
  CHECK(scheme.intervalIndex("xOff", -0.0179) == 1);
  CHECK(scheme.intervalIndex("xOff", 0.0) == 2);
  CHECK(scheme.intervalIndex("xOff", 0.006) == 2);
  CHECK(scheme.intervalIndex("xOff", 0.0061) == 3);
  CHECK(scheme.intervalIndex("xOff", 0.03) == 4);
  CHECK(scheme.intervalIndex("dropOff", 0.08) == 5);
  CHECK(scheme.intervalIndex("dropOff", 0.05) == 3);
  CHECK(scheme.intervalIndex("dropOff", 0.02) == 1);

  // Values within 1e-9 of the range width of a boundary snap onto it.
  CHECK(scheme.intervalIndex("xOff", -0.018 + 1e-12) == 0);
  CHECK(scheme.intervalIndex("xOff", -0.018 + 1e-6) == 1);

  // The range ends tolerate a 1e-12 absolute overshoot, nothing more.
  CHECK(scheme.intervalIndex("xOff", 0.03 + 5e-13) == 4);
  CHECK(scheme.intervalIndex("xOff", -0.03 - 5e-13) == 0);
  CHECK_THROWS_AS(scheme.intervalIndex("xOff", 0.031), InputError);
  CHECK_THROWS_AS(scheme.intervalIndex("xOff", -0.0301), InputError);

  CHECK_THROWS_AS(scheme.intervalIndex("nope", 0.0), InputError);
}

TEST_CASE("interval lookup round-trips the boundaries") {
  const DiscretizationScheme scheme = buildScheme(stackingVariables(StackingConfig{}));
  const auto [lo, hi] = scheme.interval("xOff", 1);
  CHECK(lo == doctest::Approx(-0.018).epsilon(1e-14));
  CHECK(hi == doctest::Approx(-0.006).epsilon(1e-14));
  CHECK_THROWS_AS(scheme.interval("xOff", -1), InputError);
  CHECK_THROWS_AS(scheme.interval("xOff", 5), InputError);

  // Every in-range value lands in the interval that contains it.
  for (double v : {-0.029, -0.0131, -0.001, 0.0, 0.0177, 0.0299}) {
    const int k = scheme.intervalIndex("xOff", v);
    const auto [a, b] = scheme.interval("xOff", k);
    CHECK(v >= a - 1e-12);
    CHECK(v <= b + 1e-12);
  }
}

TEST_CASE("buildScheme infers missing ranges from the data") {
  std::vector<VariableSpec> specs = {VariableSpec::continuous("v", 2),
                                     VariableSpec::outcome("o", {"0", "1"})};
  Dataset ds = makeDataset(specs);
  for (double v : {1.0, 2.0, 4.0, 3.0}) {
    Sample s;
    s.set("v", v);
    s.set("o", std::string(v < 2.5 ? "0" : "1"));
    ds.appendSample(s);
  }
  const DiscretizationScheme scheme = buildScheme(ds);
  const std::vector<double> want = {1.0, 2.5, 4.0};
  CHECK(scheme.boundaries.at("v") == want);

  // Explicit ranges win over observed data.
  std::vector<VariableSpec> explicitSpecs = {VariableSpec::continuous("v", 2, 0.0, 8.0),
                                             VariableSpec::outcome("o", {"0", "1"})};
  Dataset ds2 = makeDataset(explicitSpecs);
  Sample s;
  s.set("v", 1.0);
  s.set("o", std::string("0"));
  ds2.appendSample(s);
  CHECK(buildScheme(ds2).boundaries.at("v") == std::vector<double>{0.0, 4.0, 8.0});
}

TEST_CASE("buildScheme rejects ranges it cannot infer") {
  std::vector<VariableSpec> specs = {VariableSpec::continuous("v", 2),
                                     VariableSpec::outcome("o", {"0", "1"})};
  Dataset empty = makeDataset(specs);
  CHECK_THROWS_AS(buildScheme(empty), InputError);

  Dataset constant = makeDataset(specs);
  for (int i = 0; i < 3; ++i) {
    Sample s;
    s.set("v", 2.0);
    s.set("o", std::string("0"));
    constant.appendSample(s);
  }
  CHECK_THROWS_AS(buildScheme(constant), InputError);

  // Building from specs alone requires explicit ranges everywhere.
  CHECK_THROWS_AS(buildScheme(std::vector<VariableSpec>{VariableSpec::continuous("v", 2)}),
                  InputError);
}

TEST_CASE("discretizeDataset fills interval codes and flips the flag") {
  std::vector<VariableSpec> specs = {VariableSpec::continuous("v", 2, 0.0, 4.0),
                                     VariableSpec::categorical("c", {"a", "b"}),
                                     VariableSpec::outcome("o", {"0", "1"})};
  Dataset ds = makeDataset(specs);
  const double values[] = {0.5, 2.0, 3.9};
  const char* cs[] = {"a", "b", "a"};
  for (int i = 0; i < 3; ++i) {
    Sample s;
    s.set("v", values[i]);
    s.set("c", std::string(cs[i]));
    s.set("o", std::string("1"));
    ds.appendSample(s);
  }
  CHECK_FALSE(ds.discretized);
  const Dataset coded = discretizeDataset(ds, buildScheme(ds));
  CHECK(coded.discretized);
  CHECK(coded.codes[0] == std::vector<int>{0, 0, 1});  // 2.0 sits on the midpoint boundary
  CHECK(coded.codes[1] == std::vector<int>{0, 1, 0});  // categorical codes untouched
  CHECK(coded.numeric[0] == ds.numeric[0]);            // raw values kept alongside

  // A scheme with the wrong bin count is rejected.
  DiscretizationScheme bad;
  bad.boundaries["v"] = {0.0, 1.0, 2.0, 4.0};
  CHECK_THROWS_AS(discretizeDataset(ds, bad), InputError);
}
