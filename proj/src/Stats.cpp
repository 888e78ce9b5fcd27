#include "cexplain/Stats.h"

#include <cmath>
#include <limits>

#include "cexplain/Errors.h"

namespace cexplain {

namespace {

constexpr int kMaxIterations = 500;
constexpr double kEps = 1e-15;

// Regularized lower incomplete gamma P(a, x) by series expansion; valid for
// x < a + 1.
double gammaPSeries(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < kMaxIterations; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by Lentz continued fraction;
// valid for x >= a + 1.
double gammaQContinuedFraction(double a, double x) {
  const double tiny = std::numeric_limits<double>::min() / kEps;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double chiSquareSurvival(double x, double df) {
  if (!(df > 0.0)) throw InputError("chi-square survival needs df > 0");
  if (!std::isfinite(x)) throw InputError("chi-square survival needs a finite statistic");
  if (x <= 0.0) return 1.0;
  const double a = 0.5 * df;
  const double half = 0.5 * x;
  if (half < a + 1.0) return 1.0 - gammaPSeries(a, half);
  return gammaQContinuedFraction(a, half);
}

}  // namespace cexplain
