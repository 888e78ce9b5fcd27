#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cexplain/Dataset.h"
#include "cexplain/Random.h"

namespace cexplain {

// Geometry and noise of the cube-drop surrogate. The upper cube is released
// above the lower one with a planar offset and a drop height; impact jitter is
// Gaussian per axis with a standard deviation that grows linearly with the
// height. The cube stays on top when both landing offsets remain inside the
// stable fraction of the lower face's half-width.
struct StackingConfig {
  double edge = 0.05;
  double stabilityFraction = 0.9;
  double sigma0 = 0.004;
  double heightGain = 0.08;
  double xLo = -0.03, xHi = 0.03;
  double yLo = -0.03, yHi = 0.03;
  double dropLo = 0.004, dropHi = 0.1;
  std::vector<std::string> colors = {"red", "green", "blue", "yellow"};
  std::uint64_t seed = 0;

  double jitterSigma(double drop) const { return sigma0 + heightGain * drop; }
  void validate() const;  // throws InputError
};

// Column order is the declaration order everywhere downstream.
std::vector<VariableSpec> stackingVariables(const StackingConfig&, int xBins = 5,
                                            int yBins = 5, int dropBins = 7);
GoalCondition stackingGoal();

// One landing at a fixed pose; consumes exactly one Gaussian pair from rng.
bool landsOnTop(const StackingConfig&, double xOff, double yOff, double dropOff,
                SplitMix64& rng);

// Row draws come from an independent per-row stream of the config seed, so any
// subset of rows can be generated in any order with identical results.
Sample sampleTrial(const StackingConfig&, std::uint64_t row);
Dataset generateDataset(const StackingConfig&, std::size_t samples, int xBins = 5,
                        int yBins = 5, int dropBins = 7);

}  // namespace cexplain
