#pragma once

#include <filesystem>

#include <json.hpp>

#include "cexplain/Evaluation.h"
#include "cexplain/Explanation.h"
#include "cexplain/Parameters.h"

namespace cexplain {

inline constexpr int kSchemaVersion = 1;

// Model files carry the schema, discretization boundaries, DAG, CPTs as nested
// arrays in declared level order, the goal, and fit metadata. Serialization is
// bit-stable for identical input.
nlohmann::ordered_json modelToJson(const BayesNet&);
BayesNet modelFromJson(const nlohmann::ordered_json&);
void saveModel(const BayesNet&, const std::filesystem::path&);
BayesNet loadModel(const std::filesystem::path&);

nlohmann::ordered_json explanationToJson(const ExplanationResult&, const BayesNet&);

Lexicon lexiconFromJson(const nlohmann::ordered_json&);
Lexicon loadLexicon(const std::filesystem::path&);

nlohmann::ordered_json evalReportToJson(const EvalReport&, const BayesNet&);

// Empirical tables as CSV: one column per outcome parent (raw values for
// continuous parents, labels for categorical ones), then successes,trials.
// Rows mapping to the same tuple aggregate.
EmpiricalTable readEmpiricalCsv(const std::filesystem::path&, const BayesNet&);
void writeEmpiricalCsv(const EmpiricalTable&, const BayesNet&, const std::filesystem::path&);

}  // namespace cexplain
