#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hhnet/graph.hpp"
#include "hhnet/rng.hpp"

namespace hhnet {

struct ErConfig {
    int n = 0;
    double p = 0.0;
    std::uint64_t seed = 0;
};

// G(n, p) with zero-padded numeric node ids, so lexicographic id order is
// numeric order. Edge (i, j) is drawn from a counter-based uniform indexed
// by the pair, independent of iteration order.
IndividualNetwork generate_er(const ErConfig& config);

struct HouseholdSizeSpec {
    std::vector<int> sizes;

    static HouseholdSizeSpec equal(int households, int size);
    int total() const;
};

// Random partition into households of the given sizes: node order is
// shuffled once, then consecutive blocks are cut. Household h (id "h<h>",
// zero-padded) has exactly spec.sizes[h] members.
HouseholdPartition random_partition(const std::vector<std::string>& node_ids,
                                    const HouseholdSizeSpec& spec, std::uint64_t seed);

// Probability that two households of the given sizes are adjacent after
// basic contraction of G(n, p): 1 - (1 - p)^(size_q * size_r).
double contracted_edge_probability(double p, int size_q, int size_r);

// Expected contracted degree of household k (0-based into sizes): the sum
// of contracted_edge_probability over all other households.
double expected_household_degree(double p, std::span<const int> sizes, int k);

struct VerifyConfig {
    int n = 0;
    double p = 0.0;
    std::vector<int> sizes;  // must sum to n
    int draws = 1000;
    double z_threshold = 4.0;
    std::uint64_t seed = 0;
};

struct PairCheck {
    int q = 0, r = 0;
    double theoretical = 0.0;
    double empirical = 0.0;
    double z = 0.0;
};

struct DegreeCheck {
    int household = 0;
    double theoretical = 0.0;
    double empirical = 0.0;
    double z = 0.0;
};

// One household-size class (lo <= hi): chi-square test that all pairs in
// the class share one edge probability, which is what contraction of a
// homogeneous G(n, p) predicts.
struct SizeClassCheck {
    int size_lo = 0, size_hi = 0;
    int pair_count = 0;
    double pooled_rate = 0.0;
    double chi_square = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

struct VerifyReport {
    std::vector<PairCheck> pairs;
    std::vector<DegreeCheck> degrees;
    std::vector<SizeClassCheck> size_classes;
    int draws = 0;
    double z_threshold = 0.0;
    double max_abs_z = 0.0;
    bool pass = false;
    std::string note;  // multiple-comparison context for the threshold
};

// Repeatedly draws G(n, p), contracts over one fixed random partition, and
// tallies household-pair edges and degrees through the same code paths the
// library exposes (no closed-form shortcut on the empirical side). A pair's
// z compares its hit rate to the predicted Bernoulli rate; a degree's z
// uses the exact variance of the sum of independent pair indicators. The
// parallel path merges integer tallies and matches the serial one bitwise.
VerifyReport verify_contraction_distribution(const VerifyConfig& config,
                                             Exec exec = Exec::serial);

}  // namespace hhnet
