#include "cexplain/Variables.h"

#include <set>

#include "cexplain/Errors.h"

namespace cexplain {

VariableSpec VariableSpec::continuous(std::string name, int bins) {
  VariableSpec s;
  s.name = std::move(name);
  s.kind = VariableKind::ContinuousCause;
  s.bins = bins;
  s.explicitRange = false;
  return s;
}

VariableSpec VariableSpec::continuous(std::string name, int bins, double lo, double hi) {
  VariableSpec s = continuous(std::move(name), bins);
  s.lo = lo;
  s.hi = hi;
  s.explicitRange = true;
  return s;
}

VariableSpec VariableSpec::categorical(std::string name, std::vector<std::string> labels) {
  VariableSpec s;
  s.name = std::move(name);
  s.kind = VariableKind::CategoricalCause;
  s.labels = std::move(labels);
  return s;
}

VariableSpec VariableSpec::outcome(std::string name, std::vector<std::string> labels) {
  VariableSpec s = categorical(std::move(name), std::move(labels));
  s.kind = VariableKind::Outcome;
  return s;
}

int VariableSpec::labelIndex(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<int>(i);
  }
  return -1;
}

void VariableSpec::validate() const {
  if (name.empty()) throw InputError("variable with empty name");
  if (isContinuous()) {
    if (bins < 1) throw InputError("variable '" + name + "': bin count must be >= 1");
    if (explicitRange && !(lo < hi))
      throw InputError("variable '" + name + "': range low must be below range high");
  } else {
    if (labels.size() < 2)
      throw InputError("variable '" + name + "': needs at least two labels");
    std::set<std::string> seen;
    for (const auto& label : labels) {
      if (label.empty()) throw InputError("variable '" + name + "': empty label");
      if (label.find_first_of(",\n\r") != std::string::npos)
        throw InputError("variable '" + name + "': label '" + label +
                         "' contains a separator character");
      if (!seen.insert(label).second)
        throw InputError("variable '" + name + "': duplicate label '" + label + "'");
    }
  }
}

}  // namespace cexplain
