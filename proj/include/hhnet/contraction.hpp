#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hhnet/graph.hpp"

namespace hhnet {

// Records which rule produced a household network. Every contraction output
// carries one; downstream consumers can refuse mixed-rule comparisons.
struct ContractionProvenance {
    std::string rule;                   // basic | weighted | gendered | layered
    bool normalized = false;            // weighted rule only
    std::optional<std::string> gender;  // gendered rule only
    std::vector<std::string> layers;    // layers the rule considered
};

struct HouseholdEdge {
    int src = 0;
    int dst = 0;
    double weight = 1.0;
};

// Contracted graph over households. Keeps every household of the partition
// as a node, connected or not, so node indices line up with the partition.
struct HouseholdNetwork {
    std::vector<std::string> household_ids;  // sorted, mirrors the partition
    bool directed = false;
    std::vector<HouseholdEdge> edges;  // sorted by (src, dst); src < dst when undirected
    ContractionProvenance provenance;

    int household_count() const { return static_cast<int>(household_ids.size()); }
    // -1 when absent
    int index_of(std::string_view id) const;

    std::vector<std::pair<int, int>> simple_pairs() const;
    std::vector<int> simple_degrees() const;

    // View as a plain network over household ids; the single layer is named
    // after the contraction rule. Lets graph metrics run unchanged.
    IndividualNetwork as_network() const;
};

// Households q != r are adjacent iff some member of q and some member of r
// share an edge in any layer. Intra-household edges vanish (no self-loops).
HouseholdNetwork contract_basic(const IndividualNetwork& network,
                                const HouseholdPartition& partition);

// Summed rule: the contracted weight is the total weight of member-to-member
// edges between the two households, all layers included. Normalized rule:
// the proportion of a household's members with at least one connection into
// the other household; for undirected input the two directions are averaged.
HouseholdNetwork contract_weighted(const IndividualNetwork& network,
                                   const HouseholdPartition& partition,
                                   bool normalized = false);

// Restricts to member pairs where both endpoints carry the given gender
// label, then applies the basic (or summed-weight) rule. Households without
// such members stay as isolated nodes.
HouseholdNetwork contract_gendered(const IndividualNetwork& network,
                                   const HouseholdPartition& partition,
                                   const NodeAttributes& attributes,
                                   const std::string& gender,
                                   bool weighted = false);

// Basic rule over the union of the selected layers only. Unknown layer
// names are rejected. Selecting every layer reproduces contract_basic.
HouseholdNetwork contract_layered(const IndividualNetwork& network,
                                  const HouseholdPartition& partition,
                                  const std::vector<std::string>& layers);

// Seed-set translation between the two levels. Person ids map to the sorted
// set of distinct households containing them.
std::vector<std::string> map_individuals_to_households(const std::vector<std::string>& person_ids,
                                                       const HouseholdPartition& partition);

// Household-to-person mapping draws each member independently with the given
// activation probability. A household may contribute no one; callers that
// care count the empties. Deterministic in (seed, household, member).
std::vector<std::string> map_households_to_individuals(
    const std::vector<std::string>& household_ids, const HouseholdPartition& partition,
    double activation_probability, std::uint64_t seed);

}  // namespace hhnet
