#include "cexplain/Structure.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>

#include "cexplain/Errors.h"
#include "cexplain/Stats.h"

namespace cexplain {

namespace {

int declarationIndex(const std::vector<std::string>& order, const std::string& name) {
  const auto it = std::find(order.begin(), order.end(), name);
  return it == order.end() ? -1 : static_cast<int>(it - order.begin());
}

void sortByDeclaration(std::vector<std::string>& names,
                       const std::vector<std::string>& order) {
  std::sort(names.begin(), names.end(), [&](const std::string& a, const std::string& b) {
    return declarationIndex(order, a) < declarationIndex(order, b);
  });
}

std::vector<std::string> variableNames(const Dataset& ds) {
  std::vector<std::string> names;
  names.reserve(ds.variables.size());
  for (const auto& v : ds.variables) names.push_back(v.name);
  return names;
}

std::vector<std::string> without(const std::vector<std::string>& set,
                                 const std::vector<std::string>& drop) {
  std::vector<std::string> out;
  for (const auto& s : set) {
    if (std::find(drop.begin(), drop.end(), s) == drop.end()) out.push_back(s);
  }
  return out;
}

// Subsets of `base` in bitmask order (empty set first), preserving the order
// of `base` within each subset.
std::vector<std::vector<std::string>> allSubsets(const std::vector<std::string>& base) {
  std::vector<std::vector<std::string>> subsets;
  const std::size_t n = base.size();
  subsets.reserve(std::size_t{1} << n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::string> s;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) s.push_back(base[i]);
    }
    subsets.push_back(std::move(s));
  }
  return subsets;
}

}  // namespace

CiTestResult g2Test(const Dataset& ds, const std::string& x, const std::string& y,
                    const std::vector<std::string>& given, double alpha) {
  if (!ds.discretized) throw InputError("independence tests need a discretized dataset");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must lie in (0, 1)");
  const int xi = ds.variableIndexOrThrow(x);
  const int yi = ds.variableIndexOrThrow(y);
  if (xi == yi) throw InputError("independence test needs two distinct variables");

  std::vector<int> condIdx;
  condIdx.reserve(given.size());
  for (const auto& g : given) {
    const int gi = ds.variableIndexOrThrow(g);
    if (gi == xi || gi == yi) {
      throw InputError("conditioning set must not contain the tested variables");
    }
    if (std::find(condIdx.begin(), condIdx.end(), gi) != condIdx.end()) {
      throw InputError("duplicate variable '" + g + "' in conditioning set");
    }
    condIdx.push_back(gi);
  }

  if (ds.observedLevelCount(xi) < 2) {
    throw DegenerateTestError(x, "variable '" + x + "' has fewer than two observed levels");
  }
  if (ds.observedLevelCount(yi) < 2) {
    throw DegenerateTestError(y, "variable '" + y + "' has fewer than two observed levels");
  }

  const int xLevels = ds.levelCount(xi);
  const int yLevels = ds.levelCount(yi);
  const std::size_t rows = ds.rowCount();

  // Counts per conditioning stratum, as a flattened x-by-y table.
  std::map<std::vector<int>, std::vector<double>> strata;
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<int> key;
    key.reserve(condIdx.size());
    for (const int ci : condIdx) key.push_back(ds.codes[ci][r]);
    auto& table = strata[key];
    if (table.empty()) table.assign(static_cast<std::size_t>(xLevels) * yLevels, 0.0);
    table[static_cast<std::size_t>(ds.codes[xi][r]) * yLevels + ds.codes[yi][r]] += 1.0;
  }

  double g2 = 0.0;
  long df = 0;
  for (const auto& [key, table] : strata) {
    std::vector<double> rowSum(xLevels, 0.0);
    std::vector<double> colSum(yLevels, 0.0);
    double n = 0.0;
    for (int i = 0; i < xLevels; ++i) {
      for (int j = 0; j < yLevels; ++j) {
        const double o = table[static_cast<std::size_t>(i) * yLevels + j];
        rowSum[i] += o;
        colSum[j] += o;
        n += o;
      }
    }
    const long nonzeroRows = std::count_if(rowSum.begin(), rowSum.end(),
                                           [](double v) { return v > 0.0; });
    const long nonzeroCols = std::count_if(colSum.begin(), colSum.end(),
                                           [](double v) { return v > 0.0; });
    if (nonzeroRows >= 2 && nonzeroCols >= 2) {
      df += (nonzeroRows - 1) * (nonzeroCols - 1);
    }
    for (int i = 0; i < xLevels; ++i) {
      for (int j = 0; j < yLevels; ++j) {
        const double o = table[static_cast<std::size_t>(i) * yLevels + j];
        if (o <= 0.0) continue;
        const double expected = rowSum[i] * colSum[j] / n;
        g2 += 2.0 * o * std::log(o / expected);
      }
    }
  }

  CiTestResult result;
  result.g2 = g2;
  result.df = static_cast<int>(df);
  if (df <= 0) {
    // Every stratum pinned one of the variables to a single level; the data
    // carry no information about the association.
    result.pValue = 1.0;
    result.dependent = false;
    return result;
  }
  result.pValue = chiSquareSurvival(g2, static_cast<double>(df));
  result.dependent = result.pValue < alpha;
  return result;
}

std::vector<std::string> learnMarkovBlanket(const Dataset& ds, const std::string& x,
                                            double alpha) {
  if (!ds.discretized) throw InputError("blanket learning needs a discretized dataset");
  const int xi = ds.variableIndexOrThrow(x);
  if (ds.observedLevelCount(xi) < 2) {
    throw DegenerateTestError(x, "variable '" + x + "' has fewer than two observed levels");
  }

  std::vector<std::string> candidates;
  for (std::size_t i = 0; i < ds.variables.size(); ++i) {
    if (static_cast<int>(i) == xi) continue;
    if (ds.observedLevelCount(static_cast<int>(i)) < 2) continue;  // constant column
    candidates.push_back(ds.variables[i].name);
  }

  std::vector<std::string> blanket;  // in the order added
  bool changed = true;
  while (changed) {  // grow to fixpoint
    changed = false;
    for (const auto& cand : candidates) {
      if (std::find(blanket.begin(), blanket.end(), cand) != blanket.end()) continue;
      if (g2Test(ds, x, cand, blanket, alpha).dependent) {
        blanket.push_back(cand);
        changed = true;
      }
    }
  }

  changed = true;
  while (changed) {  // shrink to fixpoint
    changed = false;
    for (std::size_t i = 0; i < blanket.size(); ++i) {
      std::vector<std::string> rest = blanket;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      if (!g2Test(ds, x, blanket[i], rest, alpha).dependent) {
        blanket.erase(blanket.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        break;  // restart the pass over the shrunk blanket
      }
    }
  }

  sortByDeclaration(blanket, variableNames(ds));
  return blanket;
}

bool Dag::hasNode(const std::string& name) const {
  return std::find(nodes.begin(), nodes.end(), name) != nodes.end();
}

bool Dag::hasArc(const std::string& from, const std::string& to) const {
  return std::find(arcs.begin(), arcs.end(), std::make_pair(from, to)) != arcs.end();
}

void Dag::addArc(const std::string& from, const std::string& to) {
  if (!hasNode(from) || !hasNode(to)) throw InputError("arc references an unknown node");
  if (from == to) throw InputError("self-loop arc '" + from + "' is not allowed");
  if (hasArc(from, to)) throw InputError("duplicate arc " + from + " -> " + to);
  arcs.emplace_back(from, to);
}

std::vector<std::string> Dag::parentsOf(const std::string& node) const {
  std::vector<std::string> parents;
  for (const auto& [from, to] : arcs) {
    if (to == node) parents.push_back(from);
  }
  sortByDeclaration(parents, nodes);
  return parents;
}

std::vector<std::string> Dag::neighborsOf(const std::string& node) const {
  std::vector<std::string> out;
  for (const auto& [from, to] : arcs) {
    const std::string* other = nullptr;
    if (from == node) other = &to;
    if (to == node) other = &from;
    if (other && std::find(out.begin(), out.end(), *other) == out.end()) {
      out.push_back(*other);
    }
  }
  sortByDeclaration(out, nodes);
  return out;
}

bool Dag::isAcyclic() const {
  std::map<std::string, int> inDegree;
  for (const auto& n : nodes) inDegree[n] = 0;
  for (const auto& [from, to] : arcs) {
    (void)from;
    ++inDegree[to];
  }
  std::queue<std::string> ready;
  for (const auto& n : nodes) {
    if (inDegree[n] == 0) ready.push(n);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    const std::string n = ready.front();
    ready.pop();
    ++visited;
    for (const auto& [from, to] : arcs) {
      if (from == n && --inDegree[to] == 0) ready.push(to);
    }
  }
  return visited == nodes.size();
}

namespace detail {

void breakCycles(Dag& dag,
                 const std::map<std::pair<std::string, std::string>, double>& evidence) {
  const auto reaches = [&dag](const std::string& from, const std::string& to) {
    std::queue<std::string> frontier;
    std::set<std::string> seen;
    frontier.push(from);
    seen.insert(from);
    while (!frontier.empty()) {
      const std::string n = frontier.front();
      frontier.pop();
      if (n == to) return true;
      for (const auto& [a, b] : dag.arcs) {
        if (a == n && seen.insert(b).second) frontier.push(b);
      }
    }
    return false;
  };

  while (!dag.isAcyclic()) {
    std::ptrdiff_t weakest = -1;
    double weakestP = -1.0;
    for (std::size_t i = 0; i < dag.arcs.size(); ++i) {
      const auto& arc = dag.arcs[i];
      if (!reaches(arc.second, arc.first)) continue;  // not on any cycle
      const auto it = evidence.find(arc);
      const double p = it == evidence.end() ? 1.0 : it->second;
      if (p > weakestP) {
        weakestP = p;
        weakest = static_cast<std::ptrdiff_t>(i);
      }
    }
    dag.arcs.erase(dag.arcs.begin() + weakest);
  }
}

}  // namespace detail

Dag blanketsToDag(const Dataset& ds,
                  const std::map<std::string, std::vector<std::string>>& blankets,
                  double alpha, const std::optional<std::string>& outcome) {
  if (!ds.discretized) throw InputError("structure learning needs a discretized dataset");
  const std::vector<std::string> names = variableNames(ds);
  for (const auto& [var, blanket] : blankets) {
    if (declarationIndex(names, var) < 0) {
      throw InputError("blanket for unknown variable '" + var + "'");
    }
    for (const auto& member : blanket) {
      if (declarationIndex(names, member) < 0) {
        throw InputError("blanket of '" + var + "' names unknown variable '" + member + "'");
      }
    }
  }
  if (outcome && declarationIndex(names, *outcome) < 0) {
    throw InputError("unknown outcome variable '" + *outcome + "'");
  }

  const auto blanketOf = [&](const std::string& v) -> std::vector<std::string> {
    const auto it = blankets.find(v);
    return it == blankets.end() ? std::vector<std::string>{} : it->second;
  };
  const auto inBlanket = [&](const std::string& v, const std::string& member) {
    const auto b = blanketOf(v);
    return std::find(b.begin(), b.end(), member) != b.end();
  };

  // Symmetric closure by intersection, kept in declaration order.
  std::map<std::string, std::vector<std::string>> closed;
  for (const auto& v : names) {
    std::vector<std::string> members;
    for (const auto& other : names) {
      if (other == v) continue;
      if (inBlanket(v, other) && inBlanket(other, v)) members.push_back(other);
    }
    closed[v] = std::move(members);
  }

  // Adjacency: x and y stay neighbors only when no subset of the smaller
  // reduced blanket separates them. Evidence per edge = the weakest (largest)
  // p-value among the tests that all had to come out dependent.
  std::map<std::pair<std::string, std::string>, double> edgeEvidence;  // x declared first
  std::set<std::pair<std::string, std::string>> adjacent;              // both orders
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      const std::string& x = names[i];
      const std::string& y = names[j];
      const auto& cx = closed[x];
      if (std::find(cx.begin(), cx.end(), y) == cx.end()) continue;
      const std::vector<std::string> bx = without(closed[x], {y});
      const std::vector<std::string> by = without(closed[y], {x});
      const std::vector<std::string>& base = by.size() < bx.size() ? by : bx;
      bool separated = false;
      double worst = 0.0;
      for (const auto& subset : allSubsets(base)) {
        const CiTestResult r = g2Test(ds, x, y, subset, alpha);
        worst = std::max(worst, r.pValue);
        if (!r.dependent) {
          separated = true;
          break;
        }
      }
      if (!separated) {
        edgeEvidence[{x, y}] = worst;
        adjacent.insert({x, y});
        adjacent.insert({y, x});
      }
    }
  }

  const auto neighborsOf = [&](const std::string& v) {
    std::vector<std::string> out;
    for (const auto& other : names) {
      if (adjacent.count({v, other})) out.push_back(other);
    }
    return out;
  };

  // Orientation by explaining-away: x -> y when some z, adjacent to y but not
  // to x, becomes dependent on x under every conditioning set that includes y.
  std::map<std::pair<std::string, std::string>, double> orientEvidence;
  for (const auto& x : names) {
    for (const auto& y : names) {
      if (!adjacent.count({x, y})) continue;
      double best = std::numeric_limits<double>::infinity();
      bool oriented = false;
      for (const auto& z : neighborsOf(y)) {
        if (z == x || adjacent.count({x, z})) continue;
        const std::vector<std::string> bx = without(closed[x], {y, z});
        const std::vector<std::string> bz = without(closed[z], {x, y});
        const std::vector<std::string>& base = bz.size() < bx.size() ? bz : bx;
        bool allDependent = true;
        double worst = 0.0;
        for (const auto& subset : allSubsets(base)) {
          std::vector<std::string> cond = subset;
          cond.push_back(y);
          const CiTestResult r = g2Test(ds, x, z, cond, alpha);
          worst = std::max(worst, r.pValue);
          if (!r.dependent) {
            allDependent = false;
            break;
          }
        }
        if (allDependent) {
          oriented = true;
          best = std::min(best, worst);
        }
      }
      if (oriented) orientEvidence[{x, y}] = best;
    }
  }

  // Opposite orientations cancel out; the edge falls through to the fallback.
  std::set<std::pair<std::string, std::string>> conflicted;
  for (const auto& [arc, p] : orientEvidence) {
    (void)p;
    if (orientEvidence.count({arc.second, arc.first})) conflicted.insert(arc);
  }
  for (const auto& arc : conflicted) orientEvidence.erase(arc);

  Dag dag;
  dag.nodes = names;
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = 0; j < names.size(); ++j) {
      const auto it = orientEvidence.find({names[i], names[j]});
      if (it != orientEvidence.end()) dag.addArc(names[i], names[j]);
    }
  }
  detail::breakCycles(dag, orientEvidence);

  // Surviving oriented edges are settled; everything else still adjacent gets
  // the fallback direction: into the declared outcome when one endpoint is the
  // outcome, declaration order otherwise.
  std::map<std::pair<std::string, std::string>, double> allEvidence = orientEvidence;
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i + 1; j < names.size(); ++j) {
      const std::string& x = names[i];
      const std::string& y = names[j];
      if (!adjacent.count({x, y})) continue;
      if (orientEvidence.count({x, y}) || orientEvidence.count({y, x})) continue;
      std::string from = x;
      std::string to = y;
      if (outcome && x == *outcome) {
        from = y;
        to = x;
      }
      dag.addArc(from, to);
      allEvidence[{from, to}] = 1.0;  // weakest: dropped first if a cycle appears
    }
  }
  detail::breakCycles(dag, allEvidence);
  return dag;
}

Dag learnStructure(const Dataset& ds, double alpha,
                   const std::optional<std::string>& outcome) {
  if (!ds.discretized) throw InputError("structure learning needs a discretized dataset");
  if (ds.variables.empty()) throw InputError("structure learning needs at least one variable");
  if (outcome && ds.indexOf(*outcome) < 0) {
    throw InputError("unknown outcome variable '" + *outcome + "'");
  }
  std::map<std::string, std::vector<std::string>> blankets;
  for (std::size_t i = 0; i < ds.variables.size(); ++i) {
    const std::string& name = ds.variables[i].name;
    if (ds.observedLevelCount(static_cast<int>(i)) < 2) {
      if (outcome && name == *outcome) {
        throw DegenerateTestError(name,
                                  "outcome '" + name + "' has fewer than two observed levels");
      }
      blankets[name] = {};
      continue;
    }
    blankets[name] = learnMarkovBlanket(ds, name, alpha);
  }
  return blanketsToDag(ds, blankets, alpha, outcome);
}

}  // namespace cexplain
