#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hhnet/contraction.hpp"
#include "hhnet/graph.hpp"
#include "hhnet/rng.hpp"

namespace hhnet {

// Topology metrics over the undirected simple skeleton: n nodes, distinct
// pairs (i, j) with i < j. Correlation-style metrics return nullopt when the
// defining correlation has a zero-variance coordinate (detected exactly on
// the integer degrees, not via an epsilon) and throw DegeneracyError when
// there are no edges at all.

// Pearson correlation of end degrees over oriented edges.
std::optional<double> degree_assortativity(int n, std::span<const std::pair<int, int>> pairs);

// Mean local clustering over all nodes; nodes of degree < 2 contribute 0.
double average_clustering(int n, std::span<const std::pair<int, int>> pairs);

// Pearson correlation of (deg(i), 1 / deg(j)) over oriented edges (i, j);
// each undirected edge contributes both orientations. Positive values mean
// high-degree nodes attach to low-degree ones. This is the only metric here
// without a single canonical textbook definition; see the README note.
std::optional<double> inversity(int n, std::span<const std::pair<int, int>> pairs);

std::optional<double> degree_assortativity(const IndividualNetwork& network);
std::optional<double> degree_assortativity(const HouseholdNetwork& network);
double average_clustering(const IndividualNetwork& network);
double average_clustering(const HouseholdNetwork& network);
std::optional<double> inversity(const IndividualNetwork& network);
std::optional<double> inversity(const HouseholdNetwork& network);

// Share of distinct connected node pairs that lie within one household.
// Throws DegeneracyError when the network has no edges.
double intrahousehold_edge_proportion(const AdjacencyDecomposition& decomposition);

struct SweepConfig {
    std::vector<double> p_grid;  // removal proportions, each in [0, 1]
    int replications = 200;
    std::uint64_t seed = 0;
};

struct SweepPoint {
    double p = 0.0;
    double mean_inversity = 0.0;  // NaN when every replicate was undefined
    double q05 = 0.0;
    double q95 = 0.0;
    int undefined_replicates = 0;
};

// For each p, repeatedly deletes each intra-household edge of the simple
// skeleton independently with probability p and records the inversity of
// what remains. Replicates are coupled across p values: one uniform per
// intra edge per replicate index, so the kept set shrinks as p grows.
// Deterministic in (seed, p index, replicate); the parallel path reproduces
// the serial one bitwise.
std::vector<SweepPoint> inversity_removal_sweep(const IndividualNetwork& network,
                                                const HouseholdPartition& partition,
                                                const SweepConfig& config,
                                                Exec exec = Exec::serial);

}  // namespace hhnet
