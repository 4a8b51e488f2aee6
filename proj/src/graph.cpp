#include "hhnet/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include "hhnet/csv.hpp"
#include "hhnet/errors.hpp"

namespace hhnet {

namespace {

std::string edge_label(const EdgeRecord& e) {
    return e.source + " -> " + e.target + " [" + e.layer + "]";
}

}  // namespace

// Internal constructor bypassing validation, for use by algorithms that
// produce already-canonical edges (flatten, generators).
IndividualNetwork make_network_unchecked(std::vector<std::string> ids,
                                         std::vector<Edge> edges,
                                         std::vector<std::string> layers,
                                         bool directed) {
    IndividualNetwork net;
    net.ids_ = std::move(ids);
    net.edges_ = std::move(edges);
    net.layers_ = std::move(layers);
    net.directed_ = directed;
    net.index_.reserve(net.ids_.size());
    for (size_t i = 0; i < net.ids_.size(); ++i)
        net.index_.emplace(net.ids_[i], static_cast<int>(i));
    for (size_t l = 0; l < net.layers_.size(); ++l)
        net.layer_index_.emplace(net.layers_[l], static_cast<int>(l));
    return net;
}

IndividualNetwork IndividualNetwork::from_records(std::vector<std::string> node_ids,
                                                  const std::vector<EdgeRecord>& edges,
                                                  bool directed) {
    std::vector<std::string> issues;

    std::sort(node_ids.begin(), node_ids.end());
    for (size_t i = 0; i + 1 < node_ids.size(); ++i)
        if (node_ids[i] == node_ids[i + 1])
            issues.push_back("duplicate node id '" + node_ids[i] + "'");
    node_ids.erase(std::unique(node_ids.begin(), node_ids.end()), node_ids.end());

    std::unordered_map<std::string, int> index;
    index.reserve(node_ids.size());
    for (size_t i = 0; i < node_ids.size(); ++i)
        index.emplace(node_ids[i], static_cast<int>(i));

    std::set<std::string> layer_set;
    for (const auto& e : edges) layer_set.insert(e.layer);
    std::vector<std::string> layers(layer_set.begin(), layer_set.end());
    std::unordered_map<std::string, int> layer_index;
    for (size_t l = 0; l < layers.size(); ++l)
        layer_index.emplace(layers[l], static_cast<int>(l));

    std::vector<Edge> canonical;
    canonical.reserve(edges.size());
    std::set<std::tuple<int, int, int>> seen;
    for (const auto& e : edges) {
        auto si = index.find(e.source);
        auto ti = index.find(e.target);
        bool ok = true;
        if (si == index.end()) {
            issues.push_back("edge " + edge_label(e) + ": unknown source node");
            ok = false;
        }
        if (ti == index.end()) {
            issues.push_back("edge " + edge_label(e) + ": unknown target node");
            ok = false;
        }
        if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
            issues.push_back("edge " + edge_label(e) + ": weight must be finite and positive");
            ok = false;
        }
        if (!ok) continue;
        int s = si->second, t = ti->second;
        if (s == t) {
            issues.push_back("edge " + edge_label(e) + ": self-loop");
            continue;
        }
        if (!directed && s > t) std::swap(s, t);
        int l = layer_index.at(e.layer);
        if (!seen.insert({s, t, l}).second) {
            issues.push_back("duplicate edge " + edge_label(e));
            continue;
        }
        canonical.push_back(Edge{s, t, l, e.weight});
    }

    if (!issues.empty()) throw ValidationError(issues);

    std::sort(canonical.begin(), canonical.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.src, a.dst, a.layer) < std::tie(b.src, b.dst, b.layer);
    });
    return make_network_unchecked(std::move(node_ids), std::move(canonical),
                                  std::move(layers), directed);
}

int IndividualNetwork::index_of(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? -1 : it->second;
}

int IndividualNetwork::layer_index(std::string_view name) const {
    auto it = layer_index_.find(std::string(name));
    return it == layer_index_.end() ? -1 : it->second;
}

IndividualNetwork IndividualNetwork::flatten() const {
    std::set<std::pair<int, int>> pairs;
    for (const auto& e : edges_) pairs.insert({e.src, e.dst});
    std::vector<Edge> flat;
    flat.reserve(pairs.size());
    for (auto [s, t] : pairs) flat.push_back(Edge{s, t, 0, 1.0});
    return make_network_unchecked(ids_, std::move(flat), {"default"}, directed_);
}

std::vector<std::pair<int, int>> IndividualNetwork::simple_pairs() const {
    std::set<std::pair<int, int>> pairs;
    for (const auto& e : edges_) {
        int s = e.src, t = e.dst;
        if (s > t) std::swap(s, t);
        pairs.insert({s, t});
    }
    return {pairs.begin(), pairs.end()};
}

std::vector<int> IndividualNetwork::simple_degrees() const {
    std::vector<int> deg(static_cast<size_t>(node_count()), 0);
    for (auto [s, t] : simple_pairs()) {
        ++deg[static_cast<size_t>(s)];
        ++deg[static_cast<size_t>(t)];
    }
    return deg;
}

bool NodeAttributes::has_role(int node, std::string_view role) const {
    const auto& r = roles[static_cast<size_t>(node)];
    return std::find(r.begin(), r.end(), role) != r.end();
}

HouseholdPartition HouseholdPartition::from_assignment(
    std::vector<std::string> node_ids, const std::vector<std::string>& node_households) {
    if (node_ids.size() != node_households.size())
        throw ValidationError({"household assignment length does not match node count"});

    std::vector<std::string> issues;
    for (size_t i = 0; i < node_ids.size(); ++i)
        if (node_households[i].empty())
            issues.push_back("node '" + node_ids[i] + "': missing household id");
    if (!issues.empty()) throw ValidationError(issues);

    HouseholdPartition part;
    part.node_ids_ = std::move(node_ids);
    part.node_index_.reserve(part.node_ids_.size());
    for (size_t i = 0; i < part.node_ids_.size(); ++i)
        part.node_index_.emplace(part.node_ids_[i], static_cast<int>(i));

    std::set<std::string> hh_set(node_households.begin(), node_households.end());
    part.household_ids_.assign(hh_set.begin(), hh_set.end());
    for (size_t h = 0; h < part.household_ids_.size(); ++h)
        part.household_index_.emplace(part.household_ids_[h], static_cast<int>(h));

    part.household_of_.resize(part.node_ids_.size());
    part.members_.resize(part.household_ids_.size());
    for (size_t i = 0; i < part.node_ids_.size(); ++i) {
        int h = part.household_index_.at(node_households[i]);
        part.household_of_[i] = h;
        part.members_[static_cast<size_t>(h)].push_back(static_cast<int>(i));
    }
    return part;
}

int HouseholdPartition::index_of_household(std::string_view id) const {
    auto it = household_index_.find(std::string(id));
    return it == household_index_.end() ? -1 : it->second;
}

int HouseholdPartition::index_of_node(std::string_view id) const {
    auto it = node_index_.find(std::string(id));
    return it == node_index_.end() ? -1 : it->second;
}

std::vector<int> HouseholdPartition::sizes() const {
    std::vector<int> s(members_.size());
    for (size_t h = 0; h < members_.size(); ++h)
        s[h] = static_cast<int>(members_[h].size());
    return s;
}

NetworkBundle build_network(const std::vector<NodeRecord>& nodes,
                            const std::vector<EdgeRecord>& edges, bool directed) {
    std::vector<std::string> issues;

    std::vector<std::string> ids;
    ids.reserve(nodes.size());
    for (const auto& n : nodes) {
        if (n.person_id.empty()) {
            issues.push_back("node record with empty person_id");
            continue;
        }
        ids.push_back(n.person_id);
    }

    NetworkBundle bundle;
    try {
        bundle.network = IndividualNetwork::from_records(ids, edges, directed);
    } catch (const ValidationError& e) {
        issues.insert(issues.end(), e.issues().begin(), e.issues().end());
    }

    // Attribute rows keyed by person id; the network reordered nodes.
    std::unordered_map<std::string, const NodeRecord*> by_id;
    for (const auto& n : nodes) {
        if (n.person_id.empty()) continue;
        if (!by_id.emplace(n.person_id, &n).second) {
            // duplicate ids already reported by from_records
        }
    }

    if (issues.empty()) {
        int n = bundle.network.node_count();
        bundle.attributes.household.resize(static_cast<size_t>(n));
        bundle.attributes.gender.resize(static_cast<size_t>(n));
        bundle.attributes.roles.resize(static_cast<size_t>(n));
        std::set<std::string> genders;
        std::vector<std::string> households(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) {
            const NodeRecord& rec = *by_id.at(bundle.network.node_id(i));
            if (rec.household_id.empty())
                issues.push_back("node '" + rec.person_id + "': missing household id");
            bundle.attributes.household[static_cast<size_t>(i)] = rec.household_id;
            bundle.attributes.gender[static_cast<size_t>(i)] = rec.gender;
            bundle.attributes.roles[static_cast<size_t>(i)] = rec.roles;
            households[static_cast<size_t>(i)] = rec.household_id;
            if (!rec.gender.empty()) genders.insert(rec.gender);
        }
        bundle.attributes.gender_categories.assign(genders.begin(), genders.end());
        if (issues.empty())
            bundle.partition =
                HouseholdPartition::from_assignment(bundle.network.node_ids(), households);
    }

    if (!issues.empty()) throw ValidationError(issues);
    return bundle;
}

std::vector<std::vector<std::pair<int, double>>> SparseAdjacency::rows() const {
    std::vector<std::vector<std::pair<int, double>>> r(static_cast<size_t>(n));
    for (const auto& e : entries) {
        r[static_cast<size_t>(e.src)].emplace_back(e.dst, e.weight);
        if (!directed) r[static_cast<size_t>(e.dst)].emplace_back(e.src, e.weight);
    }
    for (auto& row : r) std::sort(row.begin(), row.end());
    return r;
}

SparseAdjacency adjacency_of(const IndividualNetwork& network) {
    std::map<std::pair<int, int>, double> acc;
    for (const auto& e : network.edges()) acc[{e.src, e.dst}] += e.weight;
    SparseAdjacency adj;
    adj.n = network.node_count();
    adj.directed = network.directed();
    adj.entries.reserve(acc.size());
    for (const auto& [key, w] : acc) adj.entries.push_back(WeightedEntry{key.first, key.second, w});
    return adj;
}

void require_partition_alignment(const IndividualNetwork& network,
                                 const HouseholdPartition& partition) {
    if (partition.node_count() != network.node_count())
        throw ValidationError({"partition does not cover the network's node set"});
    for (int i = 0; i < network.node_count(); ++i)
        if (partition.index_of_node(network.node_id(i)) != i)
            throw ValidationError({"partition node order does not match the network"});
}

AdjacencyDecomposition decompose(const IndividualNetwork& network,
                                 const HouseholdPartition& partition) {
    require_partition_alignment(network, partition);

    AdjacencyDecomposition d;
    d.base = adjacency_of(network);
    d.extra.n = d.intra.n = d.base.n;
    d.extra.directed = d.intra.directed = d.base.directed;
    d.household_of.resize(static_cast<size_t>(network.node_count()));
    for (int i = 0; i < network.node_count(); ++i)
        d.household_of[static_cast<size_t>(i)] = partition.household_of(i);
    d.node_ids = network.node_ids();
    for (const auto& e : d.base.entries) {
        bool same = d.household_of[static_cast<size_t>(e.src)] ==
                    d.household_of[static_cast<size_t>(e.dst)];
        (same ? d.intra : d.extra).entries.push_back(e);
    }
    return d;
}

SparseAdjacency reweight_intra(const AdjacencyDecomposition& decomposition, double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw ValidationError({"intra-household removal proportion must lie in [0, 1]"});
    SparseAdjacency out;
    out.n = decomposition.base.n;
    out.directed = decomposition.base.directed;
    out.entries = decomposition.extra.entries;
    if (p < 1.0) {
        for (const auto& e : decomposition.intra.entries)
            out.entries.push_back(WeightedEntry{e.src, e.dst, (1.0 - p) * e.weight});
    }
    std::sort(out.entries.begin(), out.entries.end(),
              [](const WeightedEntry& a, const WeightedEntry& b) {
                  return std::tie(a.src, a.dst) < std::tie(b.src, b.dst);
              });
    return out;
}

std::vector<std::vector<int>> connected_components(
    int n, std::span<const std::pair<int, int>> pairs) {
    std::vector<int> parent(static_cast<size_t>(n));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] =
                parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    };
    for (auto [a, b] : pairs) {
        int ra = find(a), rb = find(b);
        if (ra != rb) parent[static_cast<size_t>(std::max(ra, rb))] = std::min(ra, rb);
    }
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<int>> comps;
    comps.reserve(groups.size());
    for (auto& [root, members] : groups) comps.push_back(std::move(members));
    return comps;
}

std::vector<NodeRecord> load_nodes_csv(const std::string& path) {
    auto rows = csv::parse_file(path);
    if (rows.empty()) throw ValidationError({path + ": empty node file"});

    const auto& header = rows.front();
    if (header.size() < 2 || header[0] != "person_id" || header[1] != "household_id")
        throw ValidationError({path + ": node header must start with person_id,household_id"});
    bool has_gender = header.size() >= 3 && header[2] == "gender";
    size_t role_start = has_gender ? 3 : 2;
    std::vector<std::string> role_names(header.begin() + static_cast<long>(role_start),
                                        header.end());

    std::vector<std::string> issues;
    std::vector<NodeRecord> records;
    records.reserve(rows.size() - 1);
    for (size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != header.size()) {
            issues.push_back(path + " row " + std::to_string(r + 1) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(row.size()));
            continue;
        }
        NodeRecord rec;
        rec.person_id = row[0];
        rec.household_id = row[1];
        if (has_gender) rec.gender = row[2];
        for (size_t c = role_start; c < row.size(); ++c) {
            const std::string& v = row[c];
            if (v == "1" || v == "true" || v == "yes")
                rec.roles.push_back(role_names[c - role_start]);
            else if (!(v.empty() || v == "0" || v == "false" || v == "no"))
                issues.push_back(path + " row " + std::to_string(r + 1) + ": role column '" +
                                 role_names[c - role_start] + "' must be boolean, got '" + v +
                                 "'");
        }
        records.push_back(std::move(rec));
    }
    if (!issues.empty()) throw ValidationError(issues);
    return records;
}

std::vector<EdgeRecord> load_edges_csv(const std::string& path) {
    auto rows = csv::parse_file(path);
    if (rows.empty()) throw ValidationError({path + ": empty edge file"});

    const auto& header = rows.front();
    if (header.size() < 2 || header.size() > 4 || header[0] != "source" || header[1] != "target" ||
        (header.size() >= 3 && header[2] != "layer") ||
        (header.size() == 4 && header[3] != "weight"))
        throw ValidationError({path + ": edge header must be source,target[,layer[,weight]]"});
    bool has_layer = header.size() >= 3;
    bool has_weight = header.size() == 4;

    std::vector<std::string> issues;
    std::vector<EdgeRecord> records;
    records.reserve(rows.size() - 1);
    for (size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() != header.size()) {
            issues.push_back(path + " row " + std::to_string(r + 1) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(row.size()));
            continue;
        }
        EdgeRecord rec;
        rec.source = row[0];
        rec.target = row[1];
        if (has_layer && !row[2].empty()) rec.layer = row[2];
        if (has_weight && !row[3].empty()) {
            try {
                size_t pos = 0;
                rec.weight = std::stod(row[3], &pos);
                if (pos != row[3].size()) throw std::invalid_argument(row[3]);
            } catch (const std::exception&) {
                issues.push_back(path + " row " + std::to_string(r + 1) +
                                 ": weight is not a number: '" + row[3] + "'");
                continue;
            }
        }
        records.push_back(std::move(rec));
    }
    if (!issues.empty()) throw ValidationError(issues);
    return records;
}

void write_edges_csv(std::ostream& out, const IndividualNetwork& network) {
    csv::write_row(out, {"source", "target", "layer", "weight"});
    std::ostringstream num;
    for (const auto& e : network.edges()) {
        num.str("");
        num << e.weight;
        csv::write_row(out, {network.node_id(e.src), network.node_id(e.dst),
                             network.layer_names()[static_cast<size_t>(e.layer)], num.str()});
    }
}

}  // namespace hhnet
