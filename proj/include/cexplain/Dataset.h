#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cexplain/Variables.h"

namespace cexplain {

using SampleValue = std::variant<double, std::string>;

// One trial as name/value pairs in schema order.
struct Sample {
  std::vector<std::pair<std::string, SampleValue>> values;

  void set(std::string name, double v) { values.emplace_back(std::move(name), v); }
  void set(std::string name, std::string v) { values.emplace_back(std::move(name), std::move(v)); }
  const SampleValue* find(const std::string& name) const;
};

// Column-oriented trial table. Categorical columns always carry label codes;
// continuous columns gain interval codes once discretized.
struct Dataset {
  std::vector<VariableSpec> variables;
  std::vector<std::vector<double>> numeric;  // per variable, continuous only
  std::vector<std::vector<int>> codes;       // label codes / interval codes
  bool discretized = false;

  std::size_t rowCount() const;
  int indexOf(const std::string& name) const;  // -1 when absent
  int variableIndexOrThrow(const std::string& name) const;
  int levelCount(int variable) const;          // bins or label count
  int observedLevelCount(int variable) const;  // distinct codes present
  void appendSample(const Sample&);            // rejects discretized datasets
  Sample row(std::size_t index) const;
};

Dataset makeDataset(std::vector<VariableSpec> specs);

// CSV: header in declaration order, continuous values printed with nine
// significant digits, categorical values as bare labels.
void writeCsv(const Dataset&, const std::filesystem::path&);
Dataset readCsv(const std::filesystem::path&, const std::vector<VariableSpec>& specs);

// Header plus raw cells, for callers that infer the schema from data.
struct RawCsv {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
RawCsv readCsvRaw(const std::filesystem::path&);

}  // namespace cexplain
