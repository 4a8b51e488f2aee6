#include "hhnet/contraction.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "hhnet/errors.hpp"
#include "hhnet/rng.hpp"

namespace hhnet {

namespace {

// Ordered household pair (u's household first). Callers canonicalize for
// undirected outputs.
std::vector<HouseholdEdge> sorted_edges(std::map<std::pair<int, int>, double>&& acc) {
    std::vector<HouseholdEdge> edges;
    edges.reserve(acc.size());
    for (const auto& [key, w] : acc) edges.push_back(HouseholdEdge{key.first, key.second, w});
    return edges;
}

std::pair<int, int> canonical(int q, int r, bool directed) {
    if (!directed && q > r) std::swap(q, r);
    return {q, r};
}

HouseholdNetwork shell(const IndividualNetwork& network, const HouseholdPartition& partition) {
    require_partition_alignment(network, partition);
    HouseholdNetwork hh;
    hh.household_ids = partition.household_ids();
    hh.directed = network.directed();
    return hh;
}

}  // namespace

int HouseholdNetwork::index_of(std::string_view id) const {
    auto it = std::lower_bound(household_ids.begin(), household_ids.end(), id);
    if (it == household_ids.end() || *it != id) return -1;
    return static_cast<int>(it - household_ids.begin());
}

std::vector<std::pair<int, int>> HouseholdNetwork::simple_pairs() const {
    std::set<std::pair<int, int>> pairs;
    for (const auto& e : edges) {
        int s = e.src, t = e.dst;
        if (s > t) std::swap(s, t);
        pairs.insert({s, t});
    }
    return {pairs.begin(), pairs.end()};
}

std::vector<int> HouseholdNetwork::simple_degrees() const {
    std::vector<int> deg(household_ids.size(), 0);
    for (auto [s, t] : simple_pairs()) {
        ++deg[static_cast<size_t>(s)];
        ++deg[static_cast<size_t>(t)];
    }
    return deg;
}

IndividualNetwork HouseholdNetwork::as_network() const {
    std::vector<Edge> es;
    es.reserve(edges.size());
    for (const auto& e : edges) es.push_back(Edge{e.src, e.dst, 0, e.weight});
    return make_network_unchecked(household_ids, std::move(es), {provenance.rule}, directed);
}

HouseholdNetwork contract_basic(const IndividualNetwork& network,
                                const HouseholdPartition& partition) {
    HouseholdNetwork hh = shell(network, partition);
    std::set<std::pair<int, int>> pairs;
    for (const auto& e : network.edges()) {
        int q = partition.household_of(e.src);
        int r = partition.household_of(e.dst);
        if (q == r) continue;
        pairs.insert(canonical(q, r, hh.directed));
    }
    for (auto [q, r] : pairs) hh.edges.push_back(HouseholdEdge{q, r, 1.0});
    hh.provenance = {"basic", false, std::nullopt, network.layer_names()};
    return hh;
}

HouseholdNetwork contract_weighted(const IndividualNetwork& network,
                                   const HouseholdPartition& partition, bool normalized) {
    HouseholdNetwork hh = shell(network, partition);
    if (!normalized) {
        std::map<std::pair<int, int>, double> acc;
        for (const auto& e : adjacency_of(network).entries) {
            int q = partition.household_of(e.src);
            int r = partition.household_of(e.dst);
            if (q == r) continue;
            acc[canonical(q, r, hh.directed)] += e.weight;
        }
        hh.edges = sorted_edges(std::move(acc));
    } else {
        // connectors[(q, r)] = members of q with at least one tie into r
        std::map<std::pair<int, int>, std::set<int>> connectors;
        for (const auto& e : network.edges()) {
            int q = partition.household_of(e.src);
            int r = partition.household_of(e.dst);
            if (q == r) continue;
            connectors[{q, r}].insert(e.src);
            if (!hh.directed) connectors[{r, q}].insert(e.dst);
        }
        const auto sizes = partition.sizes();
        std::map<std::pair<int, int>, double> acc;
        for (const auto& [qr, members] : connectors) {
            double prop = static_cast<double>(members.size()) /
                          static_cast<double>(sizes[static_cast<size_t>(qr.first)]);
            if (hh.directed) {
                acc[qr] = prop;
            } else {
                // both orientations contribute; the edge carries their mean
                acc[canonical(qr.first, qr.second, false)] += 0.5 * prop;
            }
        }
        hh.edges = sorted_edges(std::move(acc));
    }
    hh.provenance = {"weighted", normalized, std::nullopt, network.layer_names()};
    return hh;
}

HouseholdNetwork contract_gendered(const IndividualNetwork& network,
                                   const HouseholdPartition& partition,
                                   const NodeAttributes& attributes, const std::string& gender,
                                   bool weighted) {
    if (static_cast<int>(attributes.gender.size()) != network.node_count())
        throw ValidationError({"gender attributes do not cover the network's node set"});
    const auto& cats = attributes.gender_categories;
    if (!std::binary_search(cats.begin(), cats.end(), gender))
        throw ValidationError({"unknown gender category '" + gender + "'"});

    HouseholdNetwork hh = shell(network, partition);
    auto matches = [&](int v) { return attributes.gender[static_cast<size_t>(v)] == gender; };

    std::map<std::pair<int, int>, double> acc;
    std::set<std::pair<int, int>> pairs;
    if (weighted) {
        for (const auto& e : adjacency_of(network).entries) {
            if (!matches(e.src) || !matches(e.dst)) continue;
            int q = partition.household_of(e.src);
            int r = partition.household_of(e.dst);
            if (q == r) continue;
            acc[canonical(q, r, hh.directed)] += e.weight;
        }
        hh.edges = sorted_edges(std::move(acc));
    } else {
        for (const auto& e : network.edges()) {
            if (!matches(e.src) || !matches(e.dst)) continue;
            int q = partition.household_of(e.src);
            int r = partition.household_of(e.dst);
            if (q == r) continue;
            pairs.insert(canonical(q, r, hh.directed));
        }
        for (auto [q, r] : pairs) hh.edges.push_back(HouseholdEdge{q, r, 1.0});
    }
    hh.provenance = {"gendered", false, gender, network.layer_names()};
    return hh;
}

HouseholdNetwork contract_layered(const IndividualNetwork& network,
                                  const HouseholdPartition& partition,
                                  const std::vector<std::string>& layers) {
    std::vector<std::string> issues;
    std::set<int> selected;
    std::set<std::string> requested(layers.begin(), layers.end());
    if (requested.empty()) issues.push_back("layer selection is empty");
    for (const auto& name : requested) {
        int l = network.layer_index(name);
        if (l < 0)
            issues.push_back("unknown layer '" + name + "'");
        else
            selected.insert(l);
    }
    if (!issues.empty()) throw ValidationError(issues);

    HouseholdNetwork hh = shell(network, partition);
    std::set<std::pair<int, int>> pairs;
    for (const auto& e : network.edges()) {
        if (!selected.count(e.layer)) continue;
        int q = partition.household_of(e.src);
        int r = partition.household_of(e.dst);
        if (q == r) continue;
        pairs.insert(canonical(q, r, hh.directed));
    }
    for (auto [q, r] : pairs) hh.edges.push_back(HouseholdEdge{q, r, 1.0});
    hh.provenance = {"layered", false, std::nullopt,
                     std::vector<std::string>(requested.begin(), requested.end())};
    return hh;
}

std::vector<std::string> map_individuals_to_households(const std::vector<std::string>& person_ids,
                                                       const HouseholdPartition& partition) {
    std::vector<std::string> issues;
    std::set<std::string> households;
    for (const auto& pid : person_ids) {
        int v = partition.index_of_node(pid);
        if (v < 0) {
            issues.push_back("unknown person id '" + pid + "'");
            continue;
        }
        households.insert(partition.household_id(partition.household_of(v)));
    }
    if (!issues.empty()) throw ValidationError(issues);
    return {households.begin(), households.end()};
}

std::vector<std::string> map_households_to_individuals(
    const std::vector<std::string>& household_ids, const HouseholdPartition& partition,
    double activation_probability, std::uint64_t seed) {
    if (!(activation_probability >= 0.0 && activation_probability <= 1.0))
        throw ValidationError({"activation probability must lie in [0, 1]"});

    std::vector<std::string> issues;
    std::set<int> selected_households;
    for (const auto& hid : household_ids) {
        int h = partition.index_of_household(hid);
        if (h < 0) {
            issues.push_back("unknown household id '" + hid + "'");
            continue;
        }
        selected_households.insert(h);
    }
    if (!issues.empty()) throw ValidationError(issues);

    std::set<std::string> persons;
    for (int h : selected_households) {
        std::uint64_t stream =
            derive_stream(seed, salt::seed_mapping, static_cast<std::uint64_t>(h));
        for (int m : partition.members()[static_cast<size_t>(h)]) {
            if (uniform_at(stream, static_cast<std::uint64_t>(m)) < activation_probability)
                persons.insert(partition.node_ids()[static_cast<size_t>(m)]);
        }
    }
    return {persons.begin(), persons.end()};
}

}  // namespace hhnet
