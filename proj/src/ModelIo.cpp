#include "cexplain/ModelIo.h"

#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cexplain/Errors.h"

namespace cexplain {

namespace {

using nlohmann::ordered_json;

std::string formatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void checkSchemaVersion(const ordered_json& j, const std::string& what) {
  if (!j.is_object()) throw InputError(what + ": expected a JSON object");
  if (j.contains("schema_version") && j.at("schema_version") != kSchemaVersion) {
    throw InputError(what + ": unsupported schema_version (expected " +
                     std::to_string(kSchemaVersion) + ")");
  }
}

ordered_json readJsonFile(const std::filesystem::path& path, const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + what + " file '" + path.string() + "'");
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void writeTextFile(const std::filesystem::path& path, const std::string& content,
                   const std::string& what) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + what + " file '" + path.string() + "'");
  out << content;
  if (!out) throw InputError("failed while writing '" + path.string() + "'");
}

std::string kindName(VariableKind kind) {
  switch (kind) {
    case VariableKind::ContinuousCause: return "continuous";
    case VariableKind::CategoricalCause: return "categorical";
    case VariableKind::Outcome: return "outcome";
  }
  throw InputError("unknown variable kind");
}

// Assignment values as a name -> value object: interval index for ordinal
// parents, label text for categorical ones.
ordered_json assignmentJson(const ParentSpace& space, const Assignment& a) {
  ordered_json out = ordered_json::object();
  for (std::size_t i = 0; i < space.names.size(); ++i) {
    if (space.ordinal[i]) {
      out[space.names[i]] = a.values[i];
    } else {
      out[space.names[i]] = space.labels[i].at(static_cast<std::size_t>(a.values[i]));
    }
  }
  return out;
}

}  // namespace

ordered_json modelToJson(const BayesNet& net) {
  net.validate();
  ordered_json j;
  j["schema_version"] = kSchemaVersion;

  j["variables"] = ordered_json::array();
  for (const auto& v : net.variables) {
    ordered_json var;
    var["name"] = v.name;
    var["kind"] = kindName(v.kind);
    if (v.isContinuous()) {
      var["bins"] = v.bins;
      if (v.explicitRange) {
        var["range"] = ordered_json::array({v.lo, v.hi});
      } else {
        var["range"] = nullptr;
      }
    } else {
      var["labels"] = v.labels;
    }
    j["variables"].push_back(std::move(var));
  }

  j["scheme"] = ordered_json::object();
  for (const auto& [name, bounds] : net.scheme.boundaries) {
    j["scheme"][name] = bounds;
  }

  j["dag"]["nodes"] = net.dag.nodes;
  j["dag"]["arcs"] = ordered_json::array();
  for (const auto& [from, to] : net.dag.arcs) {
    j["dag"]["arcs"].push_back(ordered_json::array({from, to}));
  }

  j["cpts"] = ordered_json::array();
  for (const auto& cpt : net.cpts) {
    ordered_json c;
    c["child"] = cpt.child;
    c["parents"] = cpt.parents;
    c["parent_levels"] = cpt.parentLevels;
    c["child_levels"] = cpt.childLevels;
    c["table"] = cpt.table;
    c["counts"] = cpt.counts;
    ordered_json flags = ordered_json::array();
    for (const char z : cpt.zeroSupport) flags.push_back(z != 0);
    c["zero_support"] = std::move(flags);
    j["cpts"].push_back(std::move(c));
  }

  j["goal"]["outcome"] = net.goal.outcome;
  j["goal"]["success"] = net.goal.successLabels;

  j["fit"]["samples"] = net.fitSamples;
  j["fit"]["seed"] = net.fitSeed ? ordered_json(*net.fitSeed) : ordered_json(nullptr);
  j["fit"]["alpha"] = net.fitAlpha ? ordered_json(*net.fitAlpha) : ordered_json(nullptr);
  return j;
}

BayesNet modelFromJson(const ordered_json& j) {
  checkSchemaVersion(j, "model");
  BayesNet net;
  try {
    for (const auto& var : j.at("variables")) {
      const std::string name = var.at("name").get<std::string>();
      const std::string kind = var.at("kind").get<std::string>();
      if (kind == "continuous") {
        const int bins = var.at("bins").get<int>();
        if (var.contains("range") && !var.at("range").is_null()) {
          const auto& range = var.at("range");
          net.variables.push_back(VariableSpec::continuous(
              name, bins, range.at(0).get<double>(), range.at(1).get<double>()));
        } else {
          net.variables.push_back(VariableSpec::continuous(name, bins));
        }
      } else if (kind == "categorical" || kind == "outcome") {
        const auto labels = var.at("labels").get<std::vector<std::string>>();
        net.variables.push_back(kind == "outcome" ? VariableSpec::outcome(name, labels)
                                                  : VariableSpec::categorical(name, labels));
      } else {
        throw InputError("variable '" + name + "' has unknown kind '" + kind + "'");
      }
    }

    for (const auto& [name, bounds] : j.at("scheme").items()) {
      net.scheme.boundaries[name] = bounds.get<std::vector<double>>();
    }

    net.dag.nodes = j.at("dag").at("nodes").get<std::vector<std::string>>();
    for (const auto& arc : j.at("dag").at("arcs")) {
      net.dag.arcs.emplace_back(arc.at(0).get<std::string>(), arc.at(1).get<std::string>());
    }

    for (const auto& c : j.at("cpts")) {
      Cpt cpt;
      cpt.child = c.at("child").get<std::string>();
      cpt.parents = c.at("parents").get<std::vector<std::string>>();
      cpt.parentLevels = c.at("parent_levels").get<std::vector<int>>();
      cpt.childLevels = c.at("child_levels").get<int>();
      cpt.table = c.at("table").get<std::vector<std::vector<double>>>();
      cpt.counts = c.at("counts").get<std::vector<std::vector<std::int64_t>>>();
      for (const auto& flag : c.at("zero_support")) {
        cpt.zeroSupport.push_back(flag.get<bool>() ? 1 : 0);
      }
      net.cpts.push_back(std::move(cpt));
    }

    net.goal.outcome = j.at("goal").at("outcome").get<std::string>();
    net.goal.successLabels = j.at("goal").at("success").get<std::vector<std::string>>();

    const auto& fit = j.at("fit");
    net.fitSamples = fit.at("samples").get<std::int64_t>();
    if (!fit.at("seed").is_null()) net.fitSeed = fit.at("seed").get<std::uint64_t>();
    if (!fit.at("alpha").is_null()) net.fitAlpha = fit.at("alpha").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed model JSON: ") + e.what());
  }
  net.validate();
  return net;
}

void saveModel(const BayesNet& net, const std::filesystem::path& path) {
  writeTextFile(path, modelToJson(net).dump(2) + "\n", "model");
}

BayesNet loadModel(const std::filesystem::path& path) {
  return modelFromJson(readJsonFile(path, "model"));
}

ordered_json explanationToJson(const ExplanationResult& result, const BayesNet& net) {
  const ParentSpace space = outcomeParentSpace(net);
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["failure"] = assignmentJson(space, result.failure);
  j["solution"] = assignmentJson(space, result.solution);
  j["p_failure"] = result.pFailure;
  j["p_solution"] = result.pSolution;
  j["depth"] = result.depth;
  j["no_failure"] = result.noFailure;
  j["changes"] = ordered_json::array();
  for (const auto& change : result.changes) {
    ordered_json c;
    c["var"] = change.variable;
    std::size_t i = 0;
    while (i < space.names.size() && space.names[i] != change.variable) ++i;
    if (i < space.names.size() && !space.ordinal[i]) {
      c["from"] = space.labels[i].at(static_cast<std::size_t>(change.from));
      c["to"] = space.labels[i].at(static_cast<std::size_t>(change.to));
    } else {
      c["from"] = change.from;
      c["to"] = change.to;
    }
    c["direction"] = moveDirectionName(change.direction);
    j["changes"].push_back(std::move(c));
  }
  j["zero_support"]["failure"] = result.failureZeroSupport;
  j["zero_support"]["solution"] = result.solutionZeroSupport;
  j["text"] = result.text;
  return j;
}

Lexicon lexiconFromJson(const ordered_json& j) {
  checkSchemaVersion(j, "lexicon");
  Lexicon lex = defaultStackingLexicon();
  lex.phrases.clear();
  try {
    if (j.contains("prefix")) lex.prefix = j.at("prefix").get<std::string>();
    if (j.contains("joiner")) lex.joiner = j.at("joiner").get<std::string>();
    if (j.contains("locative_suffix")) {
      lex.locativeSuffix = j.at("locative_suffix").get<std::string>();
    }
    if (j.contains("no_failure_text")) {
      lex.noFailureText = j.at("no_failure_text").get<std::string>();
    }
    for (const auto& entry : j.at("phrases")) {
      const std::string variable = entry.at("variable").get<std::string>();
      const std::string direction = entry.at("direction").get<std::string>();
      if (direction != "decrease" && direction != "increase" && direction != "relabel") {
        throw InputError("lexicon direction '" + direction +
                         "' must be decrease, increase, or relabel");
      }
      LexiconPhrase phrase;
      phrase.text = entry.at("text").get<std::string>();
      phrase.locative = entry.value("locative", false);
      if (!lex.phrases.emplace(std::make_pair(variable, direction), phrase).second) {
        throw InputError("duplicate lexicon entry (" + variable + ", " + direction + ")");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed lexicon JSON: ") + e.what());
  }
  return lex;
}

Lexicon loadLexicon(const std::filesystem::path& path) {
  return lexiconFromJson(readJsonFile(path, "lexicon"));
}

ordered_json evalReportToJson(const EvalReport& report, const BayesNet& net) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  if (report.foldLosses.empty()) {
    j["cv"] = nullptr;
  } else {
    j["cv"]["folds"] = report.foldLosses.size();
    j["cv"]["losses"] = report.foldLosses;
    j["cv"]["mean_loss"] = report.meanLoss;
    j["cv"]["std_loss"] = report.stdLoss;
    j["cv"]["flagged_folds"] = report.flaggedFolds;
  }
  j["agreement"] = report.agreement ? ordered_json(*report.agreement) : ordered_json(nullptr);

  const ParentSpace space = outcomeParentSpace(net);
  j["monotonicity_violations"] = ordered_json::array();
  for (const auto& v : report.violations) {
    ordered_json item;
    item["axis"] = v.axis;
    item["from_bin"] = v.fromBin;
    item["to_bin"] = v.toBin;
    item["delta"] = v.delta;
    ordered_json context = ordered_json::object();
    std::size_t k = 0;
    for (std::size_t i = 0; i < space.names.size(); ++i) {
      if (space.names[i] == v.axis) continue;
      if (k < v.context.size()) {
        if (space.ordinal[i]) {
          context[space.names[i]] = v.context[k];
        } else {
          context[space.names[i]] =
              space.labels[i].at(static_cast<std::size_t>(v.context[k]));
        }
      }
      ++k;
    }
    item["context"] = std::move(context);
    j["monotonicity_violations"].push_back(std::move(item));
  }
  return j;
}

EmpiricalTable readEmpiricalCsv(const std::filesystem::path& path, const BayesNet& net) {
  const RawCsv raw = readCsvRaw(path);
  const Cpt& cpt = net.cptOf(net.goal.outcome);

  std::vector<std::string> expected = cpt.parents;
  expected.push_back("successes");
  expected.push_back("trials");
  if (raw.header != expected) {
    std::string want;
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) want += ",";
      want += expected[i];
    }
    throw InputError("empirical table header must be exactly '" + want + "'");
  }

  const ParentSpace space = outcomeParentSpace(net);
  const auto parseCount = [](const std::string& text, const std::string& column,
                             std::size_t lineNo) {
    try {
      std::size_t used = 0;
      const long long v = std::stoll(text, &used);
      if (used != text.size() || v < 0) throw std::invalid_argument(text);
      return static_cast<std::int64_t>(v);
    } catch (const std::exception&) {
      throw InputError("line " + std::to_string(lineNo) + ", column '" + column + "': '" +
                       text + "' is not a non-negative integer");
    }
  };

  std::map<std::size_t, EmpiricalEntry> byTuple;
  for (std::size_t r = 0; r < raw.rows.size(); ++r) {
    const auto& cells = raw.rows[r];
    const std::size_t lineNo = r + 2;
    Assignment a;
    for (std::size_t i = 0; i < space.names.size(); ++i) {
      const std::string& cell = cells[i];
      if (space.ordinal[i]) {
        double value = 0.0;
        try {
          std::size_t used = 0;
          value = std::stod(cell, &used);
          if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
          throw InputError("line " + std::to_string(lineNo) + ", column '" + space.names[i] +
                           "': '" + cell + "' is not a number");
        }
        a.values.push_back(net.scheme.intervalIndex(space.names[i], value));
      } else {
        const int li = net.spec(space.names[i]).labelIndex(cell);
        if (li < 0) {
          throw InputError("line " + std::to_string(lineNo) + ", column '" + space.names[i] +
                           "': unknown label '" + cell + "'");
        }
        a.values.push_back(li);
      }
    }
    const std::int64_t successes = parseCount(cells[space.names.size()], "successes", lineNo);
    const std::int64_t trials = parseCount(cells[space.names.size() + 1], "trials", lineNo);
    if (trials < 1) {
      throw InputError("line " + std::to_string(lineNo) + ": trials must be at least 1");
    }
    if (successes > trials) {
      throw InputError("line " + std::to_string(lineNo) + ": successes exceed trials");
    }
    const std::size_t t = cpt.tupleIndex(a.values);
    EmpiricalEntry& entry = byTuple[t];
    entry.assignment = std::move(a);
    entry.successes += successes;
    entry.trials += trials;
  }

  EmpiricalTable table;
  table.entries.reserve(byTuple.size());
  for (auto& [t, entry] : byTuple) {
    (void)t;
    table.entries.push_back(std::move(entry));
  }
  return table;
}

void writeEmpiricalCsv(const EmpiricalTable& table, const BayesNet& net,
                       const std::filesystem::path& path) {
  const Cpt& cpt = net.cptOf(net.goal.outcome);
  const ParentSpace space = outcomeParentSpace(net);
  std::ostringstream out;
  for (const auto& p : cpt.parents) out << p << ",";
  out << "successes,trials\n";
  for (const auto& entry : table.entries) {
    for (std::size_t i = 0; i < space.names.size(); ++i) {
      if (space.ordinal[i]) {
        const auto [lo, hi] = net.scheme.interval(space.names[i], entry.assignment.values[i]);
        out << formatDouble((lo + hi) / 2.0) << ",";
      } else {
        out << space.labels[i].at(static_cast<std::size_t>(entry.assignment.values[i])) << ",";
      }
    }
    out << entry.successes << "," << entry.trials << "\n";
  }
  writeTextFile(path, out.str(), "empirical table");
}

}  // namespace cexplain
