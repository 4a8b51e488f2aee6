#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hhnet/contraction.hpp"
#include "hhnet/graph.hpp"
#include "hhnet/rng.hpp"

namespace hhnet {

// ---------------------------------------------------------------------------
// Independent cascade
// ---------------------------------------------------------------------------

struct CascadeConfig {
    double extra_prob = 0.05;  // transmission across households
    double intra_prob = 0.7;   // transmission within a household
    int replications = 1000;
    std::uint64_t seed = 0;
};

// One directed transmission opportunity. Undirected edges appear as two arcs
// sharing a draw key: within a replication at most one direction is ever
// attempted against an inactive target, so one uniform per key reproduces
// per-edge independent draws exactly (the live-edge view of the process).
struct Arc {
    int to = 0;
    double prob = 0.0;
    std::uint64_t key = 0;
};

struct CascadeGraph {
    int n = 0;
    bool directed = false;
    std::vector<std::vector<Arc>> adj;
    std::vector<std::string> labels;  // node ids, index-aligned

    // -1 when absent
    int index_of(std::string_view label) const;
};

// Individual-level cascade graph: each connected pair gets transmission
// probability clamp(rate * weight, 0, 1) with rate chosen by whether the
// pair crosses households. Draw keys are base-adjacency entry indices.
CascadeGraph cascade_graph(const AdjacencyDecomposition& decomposition, double extra_prob,
                           double intra_prob);

// Household-level cascade graph with probability clamp(rate * weight, 0, 1)
// per contracted edge. Draw keys are household-edge indices.
CascadeGraph cascade_graph(const HouseholdNetwork& network, double rate);

struct CascadeSummary {
    double mean_reach = 0.0;      // mean proportion of nodes activated
    double std_reach = 0.0;       // sample standard deviation of the proportions
    std::vector<double> reaches;  // per replication: activated count / node count
};

// Runs config.replications cascades from the given seed nodes. Arc (u, v)
// fires in replication r iff uniform_at(stream, r, key) < prob, with the
// stream derived from config.seed alone. Two runs on the same graph and
// seed therefore share every edge draw: enlarging the seed set, or raising
// a probability, can only grow each replication's activated set.
CascadeSummary independent_cascade(const CascadeGraph& graph, std::span<const int> seeds,
                                   const CascadeConfig& config, Exec exec = Exec::serial);

// ---------------------------------------------------------------------------
// Influence maximization
// ---------------------------------------------------------------------------

// Connected components of each replication's live-edge graph (undirected
// graphs only). Reach of a seed set is the total size of the distinct
// components it touches; these sketches make greedy selection cheap.
struct ReachSketches {
    int n = 0;
    int replications = 0;
    std::vector<std::vector<int>> component;     // [rep][node] -> component id
    std::vector<std::vector<int>> component_size;  // [rep][component id] -> size
};

ReachSketches build_reach_sketches(const CascadeGraph& graph, const CascadeConfig& config,
                                   Exec exec = Exec::serial);

// Equals independent_cascade(graph, seeds, config).mean_reach exactly for
// the same graph and config: both read the same per-edge uniforms.
double estimate_reach(const ReachSketches& sketches, std::span<const int> seeds);

struct GreedyResult {
    std::vector<int> seeds;           // in pick order
    std::vector<double> reach_after;  // estimated reach proportion after each pick
};

// Lazy-free greedy maximization of estimated reach under the cascade model.
// All candidate evaluations across all rounds reuse one fixed set of edge
// draws (the classic common-random-numbers scheme behind the (1 - 1/e)
// guarantee on the estimated objective). Ties break toward the smallest
// node index. Undirected graphs use component sketches; directed graphs
// fall back to per-candidate traversal.
GreedyResult greedy_seed_selection(const CascadeGraph& graph, int k, const CascadeConfig& config,
                                   Exec exec = Exec::serial);

struct SeedComparison {
    std::vector<std::string> individual_seeds;   // person ids, pick order
    std::vector<std::string> household_seeds;    // household ids, pick order
    std::vector<std::string> mapped_households;  // households of the person seeds
    double overlap = 0.0;  // |mapped ∩ household_seeds| / |household_seeds|
};

// Greedy seed sets of size k at both levels plus their agreement after
// mapping the person picks up to households.
SeedComparison compare_seed_sets(const NetworkBundle& bundle, int k, const CascadeConfig& config,
                                 Exec exec = Exec::serial);

// All four reaches are mean proportions of their own network's node set.
struct CrossEvaluation {
    double individual_reach = 0.0;  // person seeds on the individual network
    double household_reach = 0.0;   // household seeds on the household network
    double mapped_up_reach = 0.0;   // person seeds mapped up, household network
    double mapped_down_reach = 0.0;  // household seeds mapped down, individual network
    double mean_empty_households = 0.0;  // mapped-down households contributing no one
    int replications = 0;
};

// Evaluates both seed sets on both representations. The two arms on one
// network share their edge draws, so handing in seed sets that map onto
// each other isolates the representation effect. Mapping households down
// to persons redraws members each replication with the given activation
// probability.
CrossEvaluation cross_evaluate(const NetworkBundle& bundle,
                               const std::vector<std::string>& person_seeds,
                               const std::vector<std::string>& household_seeds,
                               const CascadeConfig& config, double activation_probability,
                               Exec exec = Exec::serial);

// ---------------------------------------------------------------------------
// Diffusion centrality
// ---------------------------------------------------------------------------

struct DiffusionCentralityConfig {
    double passing_probability = 1.0;  // scales every adjacency entry
    int horizon = 0;                   // 0 -> auto (see below)
};

struct DiffusionCentralityResult {
    std::vector<double> scores;
    int horizon_used = 0;
};

// scores = sum over t = 1..T of (q A)^t applied to the all-ones vector,
// accumulated by repeated sparse products. With T = 1 this is exactly the
// scaled row-sum vector. Auto horizon: the diameter of the largest
// connected component, or the node count when that diameter is zero. The
// horizon actually used is always echoed back.
DiffusionCentralityResult diffusion_centrality(const SparseAdjacency& adjacency,
                                               const DiffusionCentralityConfig& config);

struct RankCorrelation {
    std::optional<double> spearman;  // nullopt when fewer than 3 shared nodes
                                     // or a zero-variance score vector
    int overlap = 0;                 // shared nodes compared
};

struct GenderedDcReport {
    int horizon_used = 0;  // one horizon for all three networks
    RankCorrelation base_vs_a;
    RankCorrelation base_vs_b;
    RankCorrelation a_vs_b;
};

// Compares household diffusion-centrality rankings between the ungendered
// contraction and two gendered ones. Scores are restricted to pairwise
// intersections of the largest connected components before rank
// correlation; an empty intersection is an error, a tiny one comes back
// undefined. The auto horizon is taken from the base network and reused
// for the gendered pair so the three runs are comparable.
GenderedDcReport gendered_dc_correlation(const HouseholdNetwork& base, const HouseholdNetwork& a,
                                         const HouseholdNetwork& b,
                                         const DiffusionCentralityConfig& config);

}  // namespace hhnet
