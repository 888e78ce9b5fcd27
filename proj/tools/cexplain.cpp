// Command-line workflow: simulate trials, learn a model, explain failures,
// evaluate fit. Exit codes: 0 success, 2 bad input, 3 degenerate independence
// test, 4 no solution above the threshold.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cexplain/Dataset.h"
#include "cexplain/Discretization.h"
#include "cexplain/Errors.h"
#include "cexplain/Evaluation.h"
#include "cexplain/Explanation.h"
#include "cexplain/ModelIo.h"
#include "cexplain/Parameters.h"
#include "cexplain/Simulator.h"
#include "cexplain/Structure.h"

namespace {

using nlohmann::ordered_json;

std::string formatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

double parseDoubleArg(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw cexplain::InputError(what + ": '" + text + "' is not a number");
  }
}

int parsePositiveIntArg(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used != text.size() || v < 1) throw std::invalid_argument(text);
    return static_cast<int>(v);
  } catch (const std::exception&) {
    throw cexplain::InputError(what + ": '" + text + "' is not a positive integer");
  }
}

std::vector<std::string> splitList(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  for (const auto& arg : args) {
    std::string item;
    for (const char c : arg) {
      if (c == ',') {
        if (!item.empty()) out.push_back(item);
        item.clear();
      } else {
        item.push_back(c);
      }
    }
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::pair<std::string, std::string> splitAssignment(const std::string& text,
                                                    const std::string& what) {
  const auto pos = text.find('=');
  if (pos == std::string::npos || pos == 0 || pos + 1 > text.size()) {
    throw cexplain::InputError(what + " '" + text + "' must look like NAME=VALUE");
  }
  return {text.substr(0, pos), text.substr(pos + 1)};
}

// ---- configuration file + environment ----------------------------------

const std::set<std::string>& knownConfigKeys() {
  static const std::set<std::string> keys = {
      "samples", "seed",        "alpha",      "folds",   "epsilon",
      "edge",    "stability_fraction", "sigma0", "height_gain",
      "x_range", "y_range",     "drop_range", "colors"};
  return keys;
}

ordered_json loadConfigFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw cexplain::InputError("cannot read config file '" + path + "'");
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw cexplain::InputError("'" + path + "' is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw cexplain::InputError("config file must hold a JSON object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!knownConfigKeys().count(key)) {
      throw cexplain::InputError("unknown config key '" + key + "'");
    }
  }
  return j;
}

template <typename T>
std::optional<T> configValue(const ordered_json& cfg, const std::string& key) {
  if (!cfg.contains(key)) return std::nullopt;
  try {
    return cfg.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw cexplain::InputError("config key '" + key + "' has the wrong type");
  }
}

std::optional<std::uint64_t> envSeed() {
  const char* v = std::getenv("CE_SEED");
  if (!v) return std::nullopt;
  const std::string text(v);
  try {
    std::size_t used = 0;
    const unsigned long long s = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return static_cast<std::uint64_t>(s);
  } catch (const std::exception&) {
    throw cexplain::InputError("environment variable CE_SEED='" + text +
                               "' is not an unsigned integer");
  }
}

std::optional<double> envAlpha() {
  const char* v = std::getenv("CE_ALPHA");
  if (!v) return std::nullopt;
  return parseDoubleArg(v, "environment variable CE_ALPHA");
}

// ---- simulate ------------------------------------------------------------

struct SimulateArgs {
  std::uint64_t seed = 0;
  bool seedGiven = false;
  std::uint64_t samples = 0;
  bool samplesGiven = false;
  std::string out;
  std::string config;
};

int cmdSimulate(const SimulateArgs& args) {
  ordered_json cfgFile = ordered_json::object();
  if (!args.config.empty()) cfgFile = loadConfigFile(args.config);

  cexplain::StackingConfig cfg;
  if (const auto v = configValue<double>(cfgFile, "edge")) cfg.edge = *v;
  if (const auto v = configValue<double>(cfgFile, "stability_fraction")) {
    cfg.stabilityFraction = *v;
  }
  if (const auto v = configValue<double>(cfgFile, "sigma0")) cfg.sigma0 = *v;
  if (const auto v = configValue<double>(cfgFile, "height_gain")) cfg.heightGain = *v;
  if (const auto v = configValue<std::vector<double>>(cfgFile, "x_range")) {
    if (v->size() != 2) throw cexplain::InputError("config x_range needs [lo, hi]");
    cfg.xLo = (*v)[0];
    cfg.xHi = (*v)[1];
  }
  if (const auto v = configValue<std::vector<double>>(cfgFile, "y_range")) {
    if (v->size() != 2) throw cexplain::InputError("config y_range needs [lo, hi]");
    cfg.yLo = (*v)[0];
    cfg.yHi = (*v)[1];
  }
  if (const auto v = configValue<std::vector<double>>(cfgFile, "drop_range")) {
    if (v->size() != 2) throw cexplain::InputError("config drop_range needs [lo, hi]");
    cfg.dropLo = (*v)[0];
    cfg.dropHi = (*v)[1];
  }
  if (const auto v = configValue<std::vector<std::string>>(cfgFile, "colors")) {
    cfg.colors = *v;
  }

  if (args.seedGiven) {
    cfg.seed = args.seed;
  } else if (const auto v = configValue<std::uint64_t>(cfgFile, "seed")) {
    cfg.seed = *v;
  } else if (const auto v = envSeed()) {
    cfg.seed = *v;
  }

  std::uint64_t samples = 0;
  if (args.samplesGiven) {
    samples = args.samples;
  } else if (const auto v = configValue<std::uint64_t>(cfgFile, "samples")) {
    samples = *v;
  } else {
    throw cexplain::InputError("simulate needs --samples (or a config 'samples' entry)");
  }

  const cexplain::Dataset ds = cexplain::generateDataset(cfg, static_cast<std::size_t>(samples));
  cexplain::writeCsv(ds, args.out);
  std::cout << "wrote " << ds.rowCount() << " rows to " << args.out << "\n";
  return 0;
}

// ---- learn ---------------------------------------------------------------

struct LearnArgs {
  std::string data;
  double alpha = 0.05;
  bool alphaGiven = false;
  std::vector<std::string> bins;
  std::vector<std::string> ranges;
  std::string outcome;
  std::vector<std::string> success;
  std::string out;
  std::string config;
};

bool cellIsNumeric(const std::string& text) {
  if (text.empty()) return false;
  try {
    std::size_t used = 0;
    (void)std::stod(text, &used);
    return used == text.size();
  } catch (const std::exception&) {
    return false;
  }
}

int cmdLearn(const LearnArgs& args) {
  ordered_json cfgFile = ordered_json::object();
  if (!args.config.empty()) cfgFile = loadConfigFile(args.config);

  double alpha = 0.05;
  if (args.alphaGiven) {
    alpha = args.alpha;
  } else if (const auto v = configValue<double>(cfgFile, "alpha")) {
    alpha = *v;
  } else if (const auto v = envAlpha()) {
    alpha = *v;
  }

  std::map<std::string, int> binsByName;
  for (const auto& entry : splitList(args.bins)) {
    const auto [name, value] = splitAssignment(entry, "--bins entry");
    if (!binsByName.emplace(name, parsePositiveIntArg(value, "--bins " + name)).second) {
      throw cexplain::InputError("duplicate --bins entry for '" + name + "'");
    }
  }
  std::map<std::string, std::pair<double, double>> rangeByName;
  for (const auto& entry : splitList(args.ranges)) {
    const auto [name, value] = splitAssignment(entry, "--range entry");
    const auto colon = value.find(':');
    if (colon == std::string::npos) {
      throw cexplain::InputError("--range '" + entry + "' must look like NAME=LO:HI");
    }
    const double lo = parseDoubleArg(value.substr(0, colon), "--range " + name + " low end");
    const double hi = parseDoubleArg(value.substr(colon + 1), "--range " + name + " high end");
    if (!rangeByName.emplace(name, std::make_pair(lo, hi)).second) {
      throw cexplain::InputError("duplicate --range entry for '" + name + "'");
    }
  }
  const std::vector<std::string> successLabels = splitList(args.success);
  if (successLabels.empty()) {
    throw cexplain::InputError("learn needs at least one --success label");
  }

  // Schema inference: the outcome column is categorical by definition; any
  // other column whose every cell parses as a number is continuous.
  const cexplain::RawCsv raw = cexplain::readCsvRaw(args.data);
  bool outcomeSeen = false;
  std::vector<cexplain::VariableSpec> specs;
  for (std::size_t c = 0; c < raw.header.size(); ++c) {
    const std::string& name = raw.header[c];
    bool numeric = name != args.outcome;
    if (numeric) {
      for (const auto& row : raw.rows) {
        if (!cellIsNumeric(row[c])) {
          numeric = false;
          break;
        }
      }
    }
    if (numeric) {
      const auto binsIt = binsByName.find(name);
      if (binsIt == binsByName.end()) {
        throw cexplain::InputError("continuous column '" + name +
                                   "' needs a --bins entry (e.g. --bins " + name + "=5)");
      }
      const auto rangeIt = rangeByName.find(name);
      if (rangeIt != rangeByName.end()) {
        specs.push_back(cexplain::VariableSpec::continuous(
            name, binsIt->second, rangeIt->second.first, rangeIt->second.second));
      } else {
        specs.push_back(cexplain::VariableSpec::continuous(name, binsIt->second));
      }
    } else {
      std::vector<std::string> labels;  // first-appearance order
      for (const auto& row : raw.rows) {
        if (std::find(labels.begin(), labels.end(), row[c]) == labels.end()) {
          labels.push_back(row[c]);
        }
      }
      if (name == args.outcome) {
        outcomeSeen = true;
        specs.push_back(cexplain::VariableSpec::outcome(name, labels));
      } else {
        specs.push_back(cexplain::VariableSpec::categorical(name, labels));
      }
    }
  }
  if (!outcomeSeen) {
    throw cexplain::InputError("outcome column '" + args.outcome + "' is not in the data");
  }
  for (const auto& [name, bins] : binsByName) {
    (void)bins;
    bool found = false;
    for (const auto& s : specs) {
      if (s.name == name && s.isContinuous()) found = true;
    }
    if (!found) {
      throw cexplain::InputError("--bins names '" + name + "', which is not a continuous column");
    }
  }

  const cexplain::Dataset ds = cexplain::readCsv(args.data, specs);
  const cexplain::DiscretizationScheme scheme = cexplain::buildScheme(ds);
  const cexplain::Dataset coded = cexplain::discretizeDataset(ds, scheme);
  const cexplain::GoalCondition goal{args.outcome, successLabels};

  const cexplain::Dag dag = cexplain::learnStructure(coded, alpha, args.outcome);
  cexplain::BayesNet net = cexplain::fitMle(coded, dag, scheme, goal);
  net.fitAlpha = alpha;
  cexplain::saveModel(net, args.out);

  std::cout << "learned " << net.dag.arcs.size() << " arcs:\n";
  for (const auto& [from, to] : net.dag.arcs) {
    std::cout << "  " << from << " -> " << to << "\n";
  }
  std::size_t zeroTuples = 0;
  std::size_t totalTuples = 0;
  for (const auto& cpt : net.cpts) {
    totalTuples += cpt.zeroSupport.size();
    for (const char z : cpt.zeroSupport) zeroTuples += z != 0;
  }
  std::cout << "zero-support parent tuples: " << zeroTuples << " of " << totalTuples << "\n";
  std::cout << "model written to " << args.out << "\n";
  return 0;
}

// ---- explain ---------------------------------------------------------------

struct ExplainArgs {
  std::string model;
  std::vector<std::string> sets;
  double epsilon = 0.8;
  bool epsilonGiven = false;
  std::string lexicon;
  bool json = false;
  std::string config;
};

int cmdExplain(const ExplainArgs& args) {
  ordered_json cfgFile = ordered_json::object();
  if (!args.config.empty()) cfgFile = loadConfigFile(args.config);

  double epsilon = 0.8;
  if (args.epsilonGiven) {
    epsilon = args.epsilon;
  } else if (const auto v = configValue<double>(cfgFile, "epsilon")) {
    epsilon = *v;
  }

  const cexplain::BayesNet net = cexplain::loadModel(args.model);
  const cexplain::Lexicon lexicon = args.lexicon.empty()
                                        ? cexplain::defaultStackingLexicon()
                                        : cexplain::loadLexicon(args.lexicon);
  const cexplain::ParentSpace space = cexplain::outcomeParentSpace(net);

  cexplain::Sample sample;
  std::set<std::string> seen;
  for (const auto& entry : args.sets) {
    const auto [name, value] = splitAssignment(entry, "--set entry");
    if (!seen.insert(name).second) {
      throw cexplain::InputError("duplicate --set entry for '" + name + "'");
    }
    bool ordinal = false;
    for (std::size_t i = 0; i < space.names.size(); ++i) {
      if (space.names[i] == name) ordinal = space.ordinal[i];
    }
    if (ordinal) {
      sample.set(name, parseDoubleArg(value, "--set " + name));
    } else {
      sample.set(name, value);
    }
  }

  try {
    cexplain::ExplanationResult result = cexplain::explainFailure(net, sample, epsilon);
    result.text = cexplain::renderExplanation(result, lexicon);
    std::cout << result.text << "\n";
    if (args.json) {
      std::cout << cexplain::explanationToJson(result, net).dump(2) << "\n";
    }
    return 0;
  } catch (const cexplain::NoSolutionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cerr << "best assignment:";
    for (std::size_t i = 0; i < space.names.size(); ++i) {
      const int v = e.bestValues().at(i);
      std::cerr << (i == 0 ? " " : ", ") << space.names[i] << "=";
      if (space.ordinal[i]) {
        const auto [lo, hi] = net.scheme.interval(space.names[i], v);
        std::cerr << v << " [" << formatDouble(lo) << ", " << formatDouble(hi) << "]";
      } else {
        std::cerr << space.labels[i].at(static_cast<std::size_t>(v));
      }
    }
    std::cerr << "\n";
    return 4;
  }
}

// ---- evaluate ---------------------------------------------------------------

struct EvaluateArgs {
  std::string model;
  std::string data;
  int folds = 10;
  bool foldsGiven = false;
  std::string empirical;
  std::string out;
  std::uint64_t seed = 0;
  bool seedGiven = false;
  double alpha = 0.05;
  bool alphaGiven = false;
  std::string config;
};

int cmdEvaluate(const EvaluateArgs& args) {
  ordered_json cfgFile = ordered_json::object();
  if (!args.config.empty()) cfgFile = loadConfigFile(args.config);

  cexplain::CvOptions options;
  if (args.foldsGiven) {
    options.folds = args.folds;
  } else if (const auto v = configValue<int>(cfgFile, "folds")) {
    options.folds = *v;
  }
  if (args.seedGiven) {
    options.seed = args.seed;
  } else if (const auto v = configValue<std::uint64_t>(cfgFile, "seed")) {
    options.seed = *v;
  } else if (const auto v = envSeed()) {
    options.seed = *v;
  }
  if (args.alphaGiven) {
    options.alpha = args.alpha;
  } else if (const auto v = configValue<double>(cfgFile, "alpha")) {
    options.alpha = *v;
  } else if (const auto v = envAlpha()) {
    options.alpha = *v;
  }

  const cexplain::BayesNet net = cexplain::loadModel(args.model);
  const cexplain::Dataset ds = cexplain::readCsv(args.data, net.variables);

  cexplain::EvalReport report = cexplain::crossValidate(ds, net.goal, options);
  report.violations = cexplain::monotonicityReport(net);
  if (!args.empirical.empty()) {
    const cexplain::EmpiricalTable table = cexplain::readEmpiricalCsv(args.empirical, net);
    report.agreement = cexplain::agreementScore(net, table);
  }

  const ordered_json json = cexplain::evalReportToJson(report, net);

  std::string summary;
  {
    char line[160];
    std::snprintf(line, sizeof(line),
                  "cross-validation: %d folds, mean loss %.6f, std %.6f\n", options.folds,
                  report.meanLoss, report.stdLoss);
    summary += line;
    summary += "flagged folds:";
    if (report.flaggedFolds.empty()) {
      summary += " none";
    } else {
      for (const int f : report.flaggedFolds) summary += " " + std::to_string(f);
    }
    summary += "\n";
    if (report.agreement) {
      std::snprintf(line, sizeof(line), "agreement: %.4f\n", *report.agreement);
      summary += line;
    } else {
      summary += "agreement: not computed (pass --empirical)\n";
    }
    summary += "monotonicity violations: " + std::to_string(report.violations.size()) + "\n";
  }

  if (!args.out.empty()) {
    std::ofstream outFile(args.out, std::ios::binary);
    if (!outFile) throw cexplain::InputError("cannot write report file '" + args.out + "'");
    outFile << json.dump(2) << "\n";
    if (!outFile) throw cexplain::InputError("failed while writing '" + args.out + "'");
    std::cout << summary;
    std::cout << "report written to " << args.out << "\n";
  } else {
    std::cout << json.dump(2) << "\n";
    std::cerr << summary;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cube-stacking trials: simulate, learn a causal model, explain failures"};
  app.require_subcommand(1);

  SimulateArgs simArgs;
  CLI::App* sim = app.add_subcommand("simulate", "generate a seeded trial dataset as CSV");
  CLI::Option* simSeed = sim->add_option("--seed", simArgs.seed, "RNG seed");
  CLI::Option* simSamples = sim->add_option("--samples", simArgs.samples, "number of trials");
  sim->add_option("--out", simArgs.out, "output CSV path")->required();
  sim->add_option("--config", simArgs.config, "JSON config file");

  LearnArgs learnArgs;
  CLI::App* learn = app.add_subcommand("learn", "learn structure and probabilities from CSV");
  learn->add_option("--data", learnArgs.data, "input CSV path")->required();
  CLI::Option* learnAlpha =
      learn->add_option("--alpha", learnArgs.alpha, "independence test level");
  learn->add_option("--bins", learnArgs.bins,
                    "interval counts, e.g. xOff=5,yOff=5,dropOff=7");
  learn->add_option("--range", learnArgs.ranges,
                    "explicit ranges, e.g. xOff=-0.03:0.03 (default: observed min/max)");
  learn->add_option("--outcome", learnArgs.outcome, "outcome column name")->required();
  learn->add_option("--success", learnArgs.success, "outcome labels counting as success")
      ->required();
  learn->add_option("--out", learnArgs.out, "output model JSON path")->required();
  learn->add_option("--config", learnArgs.config, "JSON config file");

  ExplainArgs explainArgs;
  CLI::App* explain = app.add_subcommand("explain", "explain a failed trial");
  explain->add_option("--model", explainArgs.model, "model JSON path")->required();
  explain->add_option("--set", explainArgs.sets, "parent value, e.g. xOff=0.02 (repeat)")
      ->required();
  CLI::Option* explainEps =
      explain->add_option("--epsilon", explainArgs.epsilon, "success threshold (default 0.8)");
  explain->add_option("--lexicon", explainArgs.lexicon, "lexicon JSON path");
  explain->add_flag("--json", explainArgs.json, "also print the result as JSON");
  explain->add_option("--config", explainArgs.config, "JSON config file");

  EvaluateArgs evalArgs;
  CLI::App* evaluate = app.add_subcommand("evaluate", "cross-validate and score a model");
  evaluate->add_option("--model", evalArgs.model, "model JSON path")->required();
  evaluate->add_option("--data", evalArgs.data, "dataset CSV path")->required();
  CLI::Option* evalFolds = evaluate->add_option("--folds", evalArgs.folds, "fold count");
  evaluate->add_option("--empirical", evalArgs.empirical,
                       "empirical success table CSV for the agreement score");
  evaluate->add_option("--out", evalArgs.out, "report JSON path (default: stdout)");
  CLI::Option* evalSeed = evaluate->add_option("--seed", evalArgs.seed, "fold shuffle seed");
  CLI::Option* evalAlpha =
      evaluate->add_option("--alpha", evalArgs.alpha, "independence test level");
  evaluate->add_option("--config", evalArgs.config, "JSON config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);  // --help and friends
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  simArgs.seedGiven = simSeed->count() > 0;
  simArgs.samplesGiven = simSamples->count() > 0;
  learnArgs.alphaGiven = learnAlpha->count() > 0;
  explainArgs.epsilonGiven = explainEps->count() > 0;
  evalArgs.foldsGiven = evalFolds->count() > 0;
  evalArgs.seedGiven = evalSeed->count() > 0;
  evalArgs.alphaGiven = evalAlpha->count() > 0;

  try {
    if (sim->parsed()) return cmdSimulate(simArgs);
    if (learn->parsed()) return cmdLearn(learnArgs);
    if (explain->parsed()) return cmdExplain(explainArgs);
    if (evaluate->parsed()) return cmdEvaluate(evalArgs);
    std::cerr << "error: no command given\n";
    return 2;
  } catch (const cexplain::DegenerateTestError& e) {
    std::cerr << "error: degenerate independence test on '" << e.variable() << "': " << e.what()
              << "\n";
    return 3;
  } catch (const cexplain::NoSolutionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
