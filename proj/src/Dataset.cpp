#include "cexplain/Dataset.h"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "cexplain/Errors.h"

namespace cexplain {

namespace {

std::string formatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::vector<std::string> splitLine(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  cells.push_back(cell);
  return cells;
}

double parseDouble(const std::string& text, const std::string& column, std::size_t lineNo) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InputError("line " + std::to_string(lineNo) + ", column '" + column +
                     "': '" + text + "' is not a number");
  }
}

}  // namespace

const SampleValue* Sample::find(const std::string& name) const {
  for (const auto& [key, value] : values) {
    if (key == name) return &value;
  }
  return nullptr;
}

std::size_t Dataset::rowCount() const {
  if (variables.empty()) return 0;
  return variables.front().isContinuous() ? numeric.front().size() : codes.front().size();
}

int Dataset::indexOf(const std::string& name) const {
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

int Dataset::variableIndexOrThrow(const std::string& name) const {
  const int i = indexOf(name);
  if (i < 0) throw InputError("unknown variable '" + name + "'");
  return i;
}

int Dataset::levelCount(int variable) const {
  const VariableSpec& spec = variables.at(variable);
  return spec.isContinuous() ? spec.bins : static_cast<int>(spec.labels.size());
}

int Dataset::observedLevelCount(int variable) const {
  const VariableSpec& spec = variables.at(variable);
  if (spec.isContinuous() && !discretized)
    throw InputError("variable '" + spec.name + "': observed levels need a discretized dataset");
  std::set<int> seen(codes.at(variable).begin(), codes.at(variable).end());
  return static_cast<int>(seen.size());
}

void Dataset::appendSample(const Sample& sample) {
  if (discretized) throw InputError("cannot append to a discretized dataset");
  if (sample.values.size() != variables.size())
    throw InputError("sample has " + std::to_string(sample.values.size()) +
                     " values, schema has " + std::to_string(variables.size()));
  for (std::size_t i = 0; i < variables.size(); ++i) {
    const auto& [name, value] = sample.values[i];
    const VariableSpec& spec = variables[i];
    if (name != spec.name)
      throw InputError("sample value " + std::to_string(i) + " is '" + name +
                       "', expected '" + spec.name + "'");
    if (spec.isContinuous()) {
      const double* v = std::get_if<double>(&value);
      if (v == nullptr) throw InputError("variable '" + name + "' expects a number");
      numeric[i].push_back(*v);
    } else {
      const std::string* label = std::get_if<std::string>(&value);
      if (label == nullptr) throw InputError("variable '" + name + "' expects a label");
      const int code = spec.labelIndex(*label);
      if (code < 0)
        throw InputError("variable '" + name + "': unknown label '" + *label + "'");
      codes[i].push_back(code);
    }
  }
}

Sample Dataset::row(std::size_t index) const {
  if (index >= rowCount()) throw InputError("row index out of range");
  Sample s;
  for (std::size_t i = 0; i < variables.size(); ++i) {
    const VariableSpec& spec = variables[i];
    if (spec.isContinuous()) {
      s.set(spec.name, numeric[i][index]);
    } else {
      s.set(spec.name, spec.labels[codes[i][index]]);
    }
  }
  return s;
}

Dataset makeDataset(std::vector<VariableSpec> specs) {
  if (specs.empty()) throw InputError("dataset needs at least one variable");
  std::set<std::string> names;
  for (const auto& spec : specs) {
    spec.validate();
    if (!names.insert(spec.name).second)
      throw InputError("duplicate variable '" + spec.name + "'");
  }
  Dataset ds;
  ds.variables = std::move(specs);
  ds.numeric.resize(ds.variables.size());
  ds.codes.resize(ds.variables.size());
  return ds;
}

void writeCsv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  for (std::size_t i = 0; i < ds.variables.size(); ++i) {
    if (i > 0) out << ',';
    out << ds.variables[i].name;
  }
  out << '\n';
  const std::size_t rows = ds.rowCount();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < ds.variables.size(); ++i) {
      if (i > 0) out << ',';
      const VariableSpec& spec = ds.variables[i];
      if (spec.isContinuous()) {
        out << formatDouble(ds.numeric[i][r]);
      } else {
        out << spec.labels[ds.codes[i][r]];
      }
    }
    out << '\n';
  }
  if (!out) throw InputError("write failed for '" + path.string() + "'");
}

RawCsv readCsvRaw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  RawCsv raw;
  std::string line;
  if (!std::getline(in, line)) throw InputError("'" + path.string() + "' is empty");
  raw.header = splitLine(line);
  std::size_t lineNo = 1;
  while (std::getline(in, line)) {
    ++lineNo;
    if (line.empty()) continue;
    auto cells = splitLine(line);
    if (cells.size() != raw.header.size())
      throw InputError("line " + std::to_string(lineNo) + ": expected " +
                       std::to_string(raw.header.size()) + " cells, got " +
                       std::to_string(cells.size()));
    raw.rows.push_back(std::move(cells));
  }
  return raw;
}

Dataset readCsv(const std::filesystem::path& path, const std::vector<VariableSpec>& specs) {
  const RawCsv raw = readCsvRaw(path);
  Dataset ds = makeDataset(specs);
  if (raw.header.size() != specs.size())
    throw InputError("'" + path.string() + "': expected " + std::to_string(specs.size()) +
                     " columns, got " + std::to_string(raw.header.size()));
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (raw.header[i] != specs[i].name)
      throw InputError("'" + path.string() + "': column " + std::to_string(i) + " is '" +
                       raw.header[i] + "', expected '" + specs[i].name + "'");
  }
  std::size_t lineNo = 1;
  for (const auto& cells : raw.rows) {
    ++lineNo;
    Sample s;
    for (std::size_t i = 0; i < specs.size(); ++i) {
      if (specs[i].isContinuous()) {
        s.set(specs[i].name, parseDouble(cells[i], specs[i].name, lineNo));
      } else {
        s.set(specs[i].name, cells[i]);
      }
    }
    try {
      ds.appendSample(s);
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(lineNo) + ": " + e.what());
    }
  }
  return ds;
}

}  // namespace cexplain
