// Independent reference implementations used to check the library: brute
// force over small inputs, naive loops instead of matrix algebra, and plain
// set algebra.

#ifndef EUD_TESTS_SUPPORT_ORACLES_H_
#define EUD_TESTS_SUPPORT_ORACLES_H_

#include <functional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "eud/graph.h"
#include "eud/scorer.h"

namespace eud::testing {

// Every head assignment over 0..n, keeping acyclic ones (and, if asked, those
// with exactly one root child). Returns the best total score and its heads.
struct BruteForceTree {
  double score = -1e300;
  std::vector<int> heads;
};
BruteForceTree BruteForceMst(const ArcScores& scores, bool single_root = false);

double TreeScore(const ArcScores& scores, const std::vector<int>& heads);

// Acyclicity by following head pointers, written without the library.
bool HeadsFormTree(const std::vector<int>& heads);

// Loop-based DBF score straight from the definition.
double NaiveDbfScore(const DbfParams& p, const EncoderOutput& encoded, int i, int j);

ArcScores RandomScores(int n, std::mt19937_64& rng, double scale = 1.0);

// Root-reachable nodes by repeated relaxation over the edge list.
std::set<int> ReachableByRelaxation(const std::vector<Edge>& edges);

// All head-to-dependent paths through empty nodes, as (head, dep, label)
// triples with '>'-joined labels, enumerated by depth-first search.
std::set<std::tuple<int, int, std::string>> EnumerateCollapsedPaths(
    const EnhancedGraph& graph);

using Triple = std::tuple<std::string, std::string, std::string>;
// Surface-only triples (head id, dep id, label) of a collapsed view.
std::multiset<Triple> EdgeTriples(const std::vector<Edge>& edges);

// Central finite differences of f at x, perturbing each coordinate.
std::vector<double> NumericGradient(const std::function<double(const std::vector<double>&)>& f,
                                    std::vector<double> x, double step);

}  // namespace eud::testing

#endif  // EUD_TESTS_SUPPORT_ORACLES_H_
