#include "cexplain/Simulator.h"

#include <cmath>
#include <set>
#include <string>

#include "cexplain/Errors.h"

namespace cexplain {

void StackingConfig::validate() const {
  if (!(edge > 0.0)) throw InputError("cube edge length must be positive");
  if (!(stabilityFraction > 0.0 && stabilityFraction <= 1.0)) {
    throw InputError("stability fraction must lie in (0, 1]");
  }
  if (!(sigma0 >= 0.0)) throw InputError("baseline jitter must be non-negative");
  if (!(heightGain >= 0.0)) throw InputError("jitter height gain must be non-negative");
  if (!(xLo < xHi)) throw InputError("x offset range must satisfy lo < hi");
  if (!(yLo < yHi)) throw InputError("y offset range must satisfy lo < hi");
  if (!(dropLo < dropHi)) throw InputError("drop height range must satisfy lo < hi");
  if (!(dropLo >= 0.0)) throw InputError("drop heights must be non-negative");
  if (colors.size() < 2) throw InputError("need at least two colors");
  std::set<std::string> seen;
  for (const auto& c : colors) {
    if (c.empty()) throw InputError("color labels must be non-empty");
    if (!seen.insert(c).second) throw InputError("duplicate color label '" + c + "'");
  }
}

std::vector<VariableSpec> stackingVariables(const StackingConfig& cfg, int xBins,
                                            int yBins, int dropBins) {
  cfg.validate();
  std::vector<VariableSpec> specs;
  specs.push_back(VariableSpec::continuous("xOff", xBins, cfg.xLo, cfg.xHi));
  specs.push_back(VariableSpec::continuous("yOff", yBins, cfg.yLo, cfg.yHi));
  specs.push_back(VariableSpec::continuous("dropOff", dropBins, cfg.dropLo, cfg.dropHi));
  specs.push_back(VariableSpec::categorical("colorUp", cfg.colors));
  specs.push_back(VariableSpec::categorical("colorDown", cfg.colors));
  specs.push_back(VariableSpec::outcome("onTop", {"0", "1"}));
  return specs;
}

GoalCondition stackingGoal() { return GoalCondition{"onTop", {"1"}}; }

bool landsOnTop(const StackingConfig& cfg, double x, double y, double drop,
                SplitMix64& rng) {
  const double sigma = cfg.jitterSigma(drop);
  const auto [gx, gy] = gaussianPair(rng);
  const double landX = x + sigma * gx;
  const double landY = y + sigma * gy;
  const double margin = cfg.stabilityFraction * cfg.edge / 2.0;
  return std::fabs(landX) <= margin && std::fabs(landY) <= margin;
}

Sample sampleTrial(const StackingConfig& cfg, std::uint64_t row) {
  SplitMix64 rng = rowStream(cfg.seed, row);
  const double x = uniformReal(rng, cfg.xLo, cfg.xHi);
  const double y = uniformReal(rng, cfg.yLo, cfg.yHi);
  const double drop = uniformReal(rng, cfg.dropLo, cfg.dropHi);
  const bool onTop = landsOnTop(cfg, x, y, drop, rng);
  const std::size_t up = uniformIndex(rng, cfg.colors.size());
  const std::size_t down = uniformIndex(rng, cfg.colors.size());

  Sample s;
  s.set("xOff", x);
  s.set("yOff", y);
  s.set("dropOff", drop);
  s.set("colorUp", cfg.colors[up]);
  s.set("colorDown", cfg.colors[down]);
  s.set("onTop", std::string(onTop ? "1" : "0"));
  return s;
}

Dataset generateDataset(const StackingConfig& cfg, std::size_t samples, int xBins,
                        int yBins, int dropBins) {
  cfg.validate();
  Dataset ds = makeDataset(stackingVariables(cfg, xBins, yBins, dropBins));
  for (std::size_t row = 0; row < samples; ++row) {
    ds.appendSample(sampleTrial(cfg, static_cast<std::uint64_t>(row)));
  }
  return ds;
}

}  // namespace cexplain
