#include <cmath>

#include <doctest.h>

#include "cexplain/Errors.h"
#include "cexplain/Stats.h"

using cexplain::chiSquareSurvival;

namespace {

double relativeError(double got, double want) {
  return std::fabs(got - want) / std::fabs(want);
}

}  // namespace

TEST_CASE("chi-square survival matches reference values to 1e-8") {
  // Reference survival probabilities computed independently with two
  // arbitrary-precision implementations that agree to 14+ digits.
  struct Ref {
    double x;
    double df;
    double sf;
  };
  const Ref refs[] = {
      {0.5, 1, 0.47950012218695337},
      {1.0, 1, 0.31731050786291115},
      {3.841458820694124, 1, 0.05},
      {20.9299257506, 1, 4.7639384795204905e-06},
      {2.3, 2, 0.3166367693790532},
      {10.0, 4, 0.04042768199451279},
      {5.0, 10, 0.8911780189141513},
      {30.0, 15, 0.011921495938159686},
      {100.0, 50, 3.454931382984871e-05},
      {0.001, 3, 0.9999915920809419},
      {75.0, 2, 5.175555005801876e-17},
  };
  for (const Ref& r : refs) {
    CAPTURE(r.x);
    CAPTURE(r.df);
    CHECK(relativeError(chiSquareSurvival(r.x, r.df), r.sf) < 1e-8);
  }
}

TEST_CASE("chi-square survival edge behavior") {
  CHECK(chiSquareSurvival(0.0, 1) == 1.0);
  CHECK(chiSquareSurvival(-3.0, 5) == 1.0);
  CHECK(chiSquareSurvival(1e-300, 2) == doctest::Approx(1.0));
  CHECK_THROWS_AS(chiSquareSurvival(1.0, 0.0), cexplain::InputError);
  CHECK_THROWS_AS(chiSquareSurvival(1.0, -2.0), cexplain::InputError);
}

TEST_CASE("chi-square survival is monotone") {
  // Decreasing in x for fixed df; increasing in df for fixed x.
  CHECK(chiSquareSurvival(5.0, 3) > chiSquareSurvival(6.0, 3));
  CHECK(chiSquareSurvival(8.0, 4) < chiSquareSurvival(8.0, 6));
  // Bounded in [0, 1] over a sweep.
  for (double x : {0.01, 0.5, 2.0, 9.0, 40.0, 300.0}) {
    for (double df : {1.0, 2.0, 7.0, 31.0}) {
      const double p = chiSquareSurvival(x, df);
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
  }
}
