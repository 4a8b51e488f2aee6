#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace hhnet {

// ---------------------------------------------------------------------------
// Input records (one row of the node / edge CSV schemas)
// ---------------------------------------------------------------------------

struct NodeRecord {
    std::string person_id;
    std::string household_id;
    std::string gender;                // may be empty; gendered operations then reject the node
    std::vector<std::string> roles;    // role flags that are set for this person
};

struct EdgeRecord {
    std::string source;
    std::string target;
    std::string layer = "default";
    double weight = 1.0;
};

// ---------------------------------------------------------------------------
// Individual network
// ---------------------------------------------------------------------------

// Edge between dense node indices. Undirected edges are stored once with
// src < dst. (src, dst, layer) triples are unique.
struct Edge {
    int src = 0;
    int dst = 0;
    int layer = 0;
    double weight = 1.0;
};

class IndividualNetwork;

// Assembles a network from already-canonical parts: ids sorted and unique,
// edges sorted by (src, dst, layer) with src < dst when undirected, layer
// indices in range. No validation. For generator and algorithm internals.
IndividualNetwork make_network_unchecked(std::vector<std::string> ids,
                                         std::vector<Edge> edges,
                                         std::vector<std::string> layers,
                                         bool directed);

// Attributed, optionally layered/weighted/directed graph over persons.
// Immutable after construction; node ids map to dense indices in sorted id
// order so index assignment is reproducible across runs.
class IndividualNetwork {
public:
    IndividualNetwork() = default;

    // Validates and canonicalizes. Aggregates all problems into one
    // ValidationError instead of failing on the first.
    static IndividualNetwork from_records(std::vector<std::string> node_ids,
                                          const std::vector<EdgeRecord>& edges,
                                          bool directed = false);

    int node_count() const { return static_cast<int>(ids_.size()); }
    const std::vector<std::string>& node_ids() const { return ids_; }
    const std::string& node_id(int idx) const { return ids_[static_cast<size_t>(idx)]; }
    // -1 when absent
    int index_of(std::string_view id) const;

    bool directed() const { return directed_; }
    const std::vector<Edge>& edges() const { return edges_; }

    const std::vector<std::string>& layer_names() const { return layers_; }
    int layer_index(std::string_view name) const;

    // Union of the layers: every distinct (src,dst) pair once, weight 1,
    // single layer "default".
    IndividualNetwork flatten() const;

    // Distinct node pairs ignoring layers and direction, src < dst.
    std::vector<std::pair<int, int>> simple_pairs() const;

    // Degrees of the undirected simple skeleton.
    std::vector<int> simple_degrees() const;

private:
    std::vector<std::string> ids_;   // sorted
    std::unordered_map<std::string, int> index_;
    std::vector<Edge> edges_;        // sorted by (src, dst, layer)
    std::vector<std::string> layers_;
    std::unordered_map<std::string, int> layer_index_;
    bool directed_ = false;

    friend IndividualNetwork make_network_unchecked(std::vector<std::string> ids,
                                                    std::vector<Edge> edges,
                                                    std::vector<std::string> layers,
                                                    bool directed);
};

// Per-node attributes, index-aligned with the network's node order.
struct NodeAttributes {
    std::vector<std::string> household;
    std::vector<std::string> gender;
    std::vector<std::vector<std::string>> roles;
    std::vector<std::string> gender_categories;  // sorted distinct non-empty labels

    bool has_role(int node, std::string_view role) const;
};

// Non-overlapping covering partition of the node set into households.
class HouseholdPartition {
public:
    HouseholdPartition() = default;

    // node_households[i] = household id of node i (ids_ aligned with the
    // network's node order). Every node must carry a household id.
    static HouseholdPartition from_assignment(std::vector<std::string> node_ids,
                                              const std::vector<std::string>& node_households);

    int household_count() const { return static_cast<int>(household_ids_.size()); }
    const std::vector<std::string>& household_ids() const { return household_ids_; }
    const std::string& household_id(int h) const { return household_ids_[static_cast<size_t>(h)]; }
    // -1 when absent
    int index_of_household(std::string_view id) const;

    int node_count() const { return static_cast<int>(node_ids_.size()); }
    const std::vector<std::string>& node_ids() const { return node_ids_; }
    // -1 when absent
    int index_of_node(std::string_view id) const;

    // household index of node index
    int household_of(int node) const { return household_of_[static_cast<size_t>(node)]; }
    const std::vector<std::vector<int>>& members() const { return members_; }
    std::vector<int> sizes() const;

private:
    std::vector<std::string> node_ids_;
    std::unordered_map<std::string, int> node_index_;
    std::vector<std::string> household_ids_;  // sorted
    std::unordered_map<std::string, int> household_index_;
    std::vector<int> household_of_;
    std::vector<std::vector<int>> members_;  // sorted node indices per household
};

struct NetworkBundle {
    IndividualNetwork network;
    NodeAttributes attributes;
    HouseholdPartition partition;
};

// Builds the three structures together; the partition is derived from the
// household attribute. Validation errors are aggregated, not fail-fast.
NetworkBundle build_network(const std::vector<NodeRecord>& nodes,
                            const std::vector<EdgeRecord>& edges,
                            bool directed = false);

// ---------------------------------------------------------------------------
// Adjacency decomposition  A = A_extra + A_intra
// ---------------------------------------------------------------------------

struct WeightedEntry {
    int src = 0;
    int dst = 0;
    double weight = 1.0;
};

// Sparse square adjacency over n nodes. Undirected entries stored once with
// src < dst; entries sorted by (src, dst).
struct SparseAdjacency {
    int n = 0;
    bool directed = false;
    std::vector<WeightedEntry> entries;

    // Neighbor lists with weights; undirected entries expanded both ways.
    std::vector<std::vector<std::pair<int, double>>> rows() const;
};

// Adjacency of the network with parallel (multi-layer) edge weights summed.
SparseAdjacency adjacency_of(const IndividualNetwork& network);

struct AdjacencyDecomposition {
    SparseAdjacency base;   // A
    SparseAdjacency extra;  // entries between different households
    SparseAdjacency intra;  // entries within one household
    std::vector<int> household_of;   // node index -> household index
    std::vector<std::string> node_ids;  // index-aligned with the network
};

// Throws ValidationError unless the partition covers exactly the network's
// node set in the same index order.
void require_partition_alignment(const IndividualNetwork& network,
                                 const HouseholdPartition& partition);

// Splits the adjacency by household membership. Elementwise
// extra + intra = base holds exactly (no entry is split).
AdjacencyDecomposition decompose(const IndividualNetwork& network,
                                 const HouseholdPartition& partition);

// A*_p = A_extra + (1-p) A_intra. Entries that become exactly zero are
// dropped, so p = 1 returns A_extra itself.
SparseAdjacency reweight_intra(const AdjacencyDecomposition& decomposition, double p);

// ---------------------------------------------------------------------------
// Small shared graph utilities
// ---------------------------------------------------------------------------

// Connected components over nodes 0..n-1 given undirected pairs; each
// component's nodes sorted, components ordered by smallest member.
std::vector<std::vector<int>> connected_components(int n,
                                                   std::span<const std::pair<int, int>> pairs);

// ---------------------------------------------------------------------------
// CSV ingestion (schemas: person_id,household_id,gender[,role...] and
// source,target[,layer[,weight]])
// ---------------------------------------------------------------------------

std::vector<NodeRecord> load_nodes_csv(const std::string& path);
std::vector<EdgeRecord> load_edges_csv(const std::string& path);

void write_edges_csv(std::ostream& out, const IndividualNetwork& network);

}  // namespace hhnet
