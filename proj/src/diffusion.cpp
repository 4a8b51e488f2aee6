#include "hhnet/diffusion.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <set>

#include "hhnet/errors.hpp"
#include "hhnet/stats.hpp"

namespace hhnet {

namespace {

void require_probability(double value, const char* what) {
    if (!(value >= 0.0 && value <= 1.0))
        throw ValidationError({std::string(what) + " must lie in [0, 1]"});
}

double clamp_prob(double x) { return std::min(1.0, std::max(0.0, x)); }

std::vector<int> checked_seed_indices(const CascadeGraph& graph, std::span<const int> seeds) {
    std::vector<int> s(seeds.begin(), seeds.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (int v : s)
        if (v < 0 || v >= graph.n) throw ValidationError({"seed index out of range"});
    return s;
}

// Activated-node count of one replication, by traversal over arcs whose
// uniform clears the transmission probability.
int cascade_once(const CascadeGraph& graph, std::span<const int> seeds, std::uint64_t edge_stream,
                 std::uint64_t rep, std::vector<char>& active, std::vector<int>& queue) {
    std::fill(active.begin(), active.end(), 0);
    queue.clear();
    for (int v : seeds) {
        if (!active[static_cast<size_t>(v)]) {
            active[static_cast<size_t>(v)] = 1;
            queue.push_back(v);
        }
    }
    size_t head = 0;
    int reached = static_cast<int>(queue.size());
    while (head < queue.size()) {
        int u = queue[head++];
        for (const Arc& a : graph.adj[static_cast<size_t>(u)]) {
            if (active[static_cast<size_t>(a.to)]) continue;
            if (uniform_at(edge_stream, rep, a.key) < a.prob) {
                active[static_cast<size_t>(a.to)] = 1;
                queue.push_back(a.to);
                ++reached;
            }
        }
    }
    return reached;
}

}  // namespace

int CascadeGraph::index_of(std::string_view label) const {
    // labels come out of the builders sorted (node ids and household ids are)
    auto it = std::lower_bound(labels.begin(), labels.end(), label);
    if (it == labels.end() || *it != label) return -1;
    return static_cast<int>(it - labels.begin());
}

CascadeGraph cascade_graph(const AdjacencyDecomposition& decomposition, double extra_prob,
                           double intra_prob) {
    require_probability(extra_prob, "extra-household transmission probability");
    require_probability(intra_prob, "intra-household transmission probability");

    CascadeGraph g;
    g.n = decomposition.base.n;
    g.directed = decomposition.base.directed;
    g.labels = decomposition.node_ids;
    g.adj.resize(static_cast<size_t>(g.n));
    for (size_t k = 0; k < decomposition.base.entries.size(); ++k) {
        const auto& e = decomposition.base.entries[k];
        bool same = decomposition.household_of[static_cast<size_t>(e.src)] ==
                    decomposition.household_of[static_cast<size_t>(e.dst)];
        double prob = clamp_prob((same ? intra_prob : extra_prob) * e.weight);
        g.adj[static_cast<size_t>(e.src)].push_back(Arc{e.dst, prob, k});
        if (!g.directed) g.adj[static_cast<size_t>(e.dst)].push_back(Arc{e.src, prob, k});
    }
    return g;
}

CascadeGraph cascade_graph(const HouseholdNetwork& network, double rate) {
    require_probability(rate, "transmission probability");

    CascadeGraph g;
    g.n = network.household_count();
    g.directed = network.directed;
    g.labels = network.household_ids;
    g.adj.resize(static_cast<size_t>(g.n));
    for (size_t k = 0; k < network.edges.size(); ++k) {
        const auto& e = network.edges[k];
        double prob = clamp_prob(rate * e.weight);
        g.adj[static_cast<size_t>(e.src)].push_back(Arc{e.dst, prob, k});
        if (!g.directed) g.adj[static_cast<size_t>(e.dst)].push_back(Arc{e.src, prob, k});
    }
    return g;
}

CascadeSummary independent_cascade(const CascadeGraph& graph, std::span<const int> seeds,
                                   const CascadeConfig& config, Exec exec) {
    if (config.replications < 1) throw ValidationError({"need at least one replication"});
    if (graph.n < 1) throw ValidationError({"cascade graph has no nodes"});
    auto s = checked_seed_indices(graph, seeds);
    const std::uint64_t edge_stream = derive_stream(config.seed, salt::cascade_edge);

    std::vector<int> counts(static_cast<size_t>(config.replications));

    auto run_range = [&](int lo, int hi) {
        std::vector<char> active(static_cast<size_t>(graph.n));
        std::vector<int> queue;
        queue.reserve(static_cast<size_t>(graph.n));
        for (int r = lo; r < hi; ++r)
            counts[static_cast<size_t>(r)] =
                cascade_once(graph, s, edge_stream, static_cast<std::uint64_t>(r), active, queue);
    };

    if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel
        {
            std::vector<char> active(static_cast<size_t>(graph.n));
            std::vector<int> queue;
            queue.reserve(static_cast<size_t>(graph.n));
#pragma omp for schedule(static)
            for (int r = 0; r < config.replications; ++r)
                counts[static_cast<size_t>(r)] = cascade_once(
                    graph, s, edge_stream, static_cast<std::uint64_t>(r), active, queue);
        }
#else
        run_range(0, config.replications);
#endif
    } else {
        run_range(0, config.replications);
    }

    CascadeSummary summary;
    summary.reaches.resize(counts.size());
    long long total = 0;
    for (size_t r = 0; r < counts.size(); ++r) {
        total += counts[r];
        summary.reaches[r] = static_cast<double>(counts[r]) / static_cast<double>(graph.n);
    }
    // same expression as estimate_reach, so the two agree bitwise
    summary.mean_reach = static_cast<double>(total) /
                         (static_cast<double>(config.replications) * static_cast<double>(graph.n));
    summary.std_reach = summary.reaches.size() > 1 ? sample_std(summary.reaches) : 0.0;
    return summary;
}

ReachSketches build_reach_sketches(const CascadeGraph& graph, const CascadeConfig& config,
                                   Exec exec) {
    if (graph.directed)
        throw ValidationError({"reach sketches require an undirected cascade graph"});
    if (config.replications < 1) throw ValidationError({"need at least one replication"});
    const std::uint64_t edge_stream = derive_stream(config.seed, salt::cascade_edge);

    ReachSketches sk;
    sk.n = graph.n;
    sk.replications = config.replications;
    sk.component.assign(static_cast<size_t>(config.replications), {});
    sk.component_size.assign(static_cast<size_t>(config.replications), {});

    auto build_rep = [&](int r) {
        std::vector<int> parent(static_cast<size_t>(graph.n));
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[static_cast<size_t>(x)] != x) {
                parent[static_cast<size_t>(x)] =
                    parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
                x = parent[static_cast<size_t>(x)];
            }
            return x;
        };
        for (int u = 0; u < graph.n; ++u)
            for (const Arc& a : graph.adj[static_cast<size_t>(u)]) {
                if (a.to < u) continue;  // each undirected edge once
                if (uniform_at(edge_stream, static_cast<std::uint64_t>(r), a.key) < a.prob) {
                    int ru = find(u), rv = find(a.to);
                    if (ru != rv) parent[static_cast<size_t>(std::max(ru, rv))] = std::min(ru, rv);
                }
            }
        auto& comp = sk.component[static_cast<size_t>(r)];
        auto& size = sk.component_size[static_cast<size_t>(r)];
        comp.assign(static_cast<size_t>(graph.n), -1);
        std::vector<int> id_of_root(static_cast<size_t>(graph.n), -1);
        for (int v = 0; v < graph.n; ++v) {
            int root = find(v);
            if (id_of_root[static_cast<size_t>(root)] < 0) {
                id_of_root[static_cast<size_t>(root)] = static_cast<int>(size.size());
                size.push_back(0);
            }
            comp[static_cast<size_t>(v)] = id_of_root[static_cast<size_t>(root)];
            ++size[static_cast<size_t>(id_of_root[static_cast<size_t>(root)])];
        }
    };

    if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
        for (int r = 0; r < config.replications; ++r) build_rep(r);
    } else {
        for (int r = 0; r < config.replications; ++r) build_rep(r);
    }
    return sk;
}

double estimate_reach(const ReachSketches& sketches, std::span<const int> seeds) {
    std::vector<int> s(seeds.begin(), seeds.end());
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (int v : s)
        if (v < 0 || v >= sketches.n) throw ValidationError({"seed index out of range"});

    std::vector<int> stamp(static_cast<size_t>(sketches.n), -1);
    long long total = 0;
    for (int r = 0; r < sketches.replications; ++r) {
        const auto& comp = sketches.component[static_cast<size_t>(r)];
        const auto& size = sketches.component_size[static_cast<size_t>(r)];
        for (int v : s) {
            int c = comp[static_cast<size_t>(v)];
            if (stamp[static_cast<size_t>(c)] != r) {
                stamp[static_cast<size_t>(c)] = r;
                total += size[static_cast<size_t>(c)];
            }
        }
    }
    return static_cast<double>(total) /
           (static_cast<double>(sketches.replications) * static_cast<double>(sketches.n));
}

namespace {

GreedyResult greedy_by_sketches(const CascadeGraph& graph, int k, const CascadeConfig& config,
                                Exec exec) {
    ReachSketches sk = build_reach_sketches(graph, config, exec);
    const int reps = sk.replications;

    // covered[r][c] = component c of replication r already counted
    std::vector<std::vector<char>> covered(static_cast<size_t>(reps));
    for (int r = 0; r < reps; ++r)
        covered[static_cast<size_t>(r)].assign(sk.component_size[static_cast<size_t>(r)].size(), 0);

    GreedyResult out;
    long long covered_total = 0;
    std::vector<char> chosen(static_cast<size_t>(graph.n), 0);
    std::vector<long long> gain(static_cast<size_t>(graph.n));

    for (int round = 0; round < k; ++round) {
        auto eval = [&](int c) {
            if (chosen[static_cast<size_t>(c)]) {
                gain[static_cast<size_t>(c)] = -1;
                return;
            }
            long long g = 0;
            for (int r = 0; r < reps; ++r) {
                int comp = sk.component[static_cast<size_t>(r)][static_cast<size_t>(c)];
                if (!covered[static_cast<size_t>(r)][static_cast<size_t>(comp)])
                    g += sk.component_size[static_cast<size_t>(r)][static_cast<size_t>(comp)];
            }
            gain[static_cast<size_t>(c)] = g;
        };
        if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
            for (int c = 0; c < graph.n; ++c) eval(c);
        } else {
            for (int c = 0; c < graph.n; ++c) eval(c);
        }

        int best = -1;
        long long best_gain = -1;
        for (int c = 0; c < graph.n; ++c)
            if (gain[static_cast<size_t>(c)] > best_gain) {
                best_gain = gain[static_cast<size_t>(c)];
                best = c;
            }

        chosen[static_cast<size_t>(best)] = 1;
        covered_total += best_gain;
        for (int r = 0; r < reps; ++r) {
            int comp = sk.component[static_cast<size_t>(r)][static_cast<size_t>(best)];
            covered[static_cast<size_t>(r)][static_cast<size_t>(comp)] = 1;
        }
        out.seeds.push_back(best);
        out.reach_after.push_back(static_cast<double>(covered_total) /
                                  (static_cast<double>(reps) * static_cast<double>(graph.n)));
    }
    return out;
}

GreedyResult greedy_by_traversal(const CascadeGraph& graph, int k, const CascadeConfig& config,
                                 Exec exec) {
    GreedyResult out;
    std::vector<int> current;
    double current_reach = 0.0;
    for (int round = 0; round < k; ++round) {
        int best = -1;
        double best_reach = -1.0;
        for (int c = 0; c < graph.n; ++c) {
            if (std::find(current.begin(), current.end(), c) != current.end()) continue;
            std::vector<int> trial = current;
            trial.push_back(c);
            double reach = independent_cascade(graph, trial, config, exec).mean_reach;
            if (reach > best_reach) {
                best_reach = reach;
                best = c;
            }
        }
        current.push_back(best);
        current_reach = best_reach;
        out.seeds.push_back(best);
        out.reach_after.push_back(current_reach);
    }
    return out;
}

}  // namespace

GreedyResult greedy_seed_selection(const CascadeGraph& graph, int k, const CascadeConfig& config,
                                   Exec exec) {
    if (k < 1) throw ValidationError({"seed budget must be positive"});
    if (k > graph.n)
        throw ValidationError({"seed budget exceeds the number of nodes"});
    return graph.directed ? greedy_by_traversal(graph, k, config, exec)
                          : greedy_by_sketches(graph, k, config, exec);
}

SeedComparison compare_seed_sets(const NetworkBundle& bundle, int k, const CascadeConfig& config,
                                 Exec exec) {
    auto decomposition = decompose(bundle.network, bundle.partition);
    CascadeGraph gi = cascade_graph(decomposition, config.extra_prob, config.intra_prob);
    HouseholdNetwork hh = contract_basic(bundle.network, bundle.partition);
    CascadeGraph gh = cascade_graph(hh, config.extra_prob);

    GreedyResult ri = greedy_seed_selection(gi, k, config, exec);
    GreedyResult rh = greedy_seed_selection(gh, k, config, exec);

    SeedComparison cmp;
    for (int v : ri.seeds) cmp.individual_seeds.push_back(gi.labels[static_cast<size_t>(v)]);
    for (int h : rh.seeds) cmp.household_seeds.push_back(gh.labels[static_cast<size_t>(h)]);
    cmp.mapped_households = map_individuals_to_households(cmp.individual_seeds, bundle.partition);

    std::set<std::string> hh_set(cmp.household_seeds.begin(), cmp.household_seeds.end());
    int shared = 0;
    for (const auto& h : cmp.mapped_households)
        if (hh_set.count(h)) ++shared;
    cmp.overlap = static_cast<double>(shared) / static_cast<double>(hh_set.size());
    return cmp;
}

CrossEvaluation cross_evaluate(const NetworkBundle& bundle,
                               const std::vector<std::string>& person_seeds,
                               const std::vector<std::string>& household_seeds,
                               const CascadeConfig& config, double activation_probability,
                               Exec exec) {
    require_probability(activation_probability, "activation probability");
    if (config.replications < 1) throw ValidationError({"need at least one replication"});

    auto decomposition = decompose(bundle.network, bundle.partition);
    CascadeGraph gi = cascade_graph(decomposition, config.extra_prob, config.intra_prob);
    HouseholdNetwork hh = contract_basic(bundle.network, bundle.partition);
    CascadeGraph gh = cascade_graph(hh, config.extra_prob);

    std::vector<std::string> issues;
    std::vector<int> si, sh;
    for (const auto& id : person_seeds) {
        int v = gi.index_of(id);
        if (v < 0)
            issues.push_back("unknown person id '" + id + "'");
        else
            si.push_back(v);
    }
    for (const auto& id : household_seeds) {
        int h = gh.index_of(id);
        if (h < 0)
            issues.push_back("unknown household id '" + id + "'");
        else
            sh.push_back(h);
    }
    if (!issues.empty()) throw ValidationError(issues);

    CrossEvaluation ev;
    ev.replications = config.replications;
    ev.individual_reach = independent_cascade(gi, si, config, exec).mean_reach;
    ev.household_reach = independent_cascade(gh, sh, config, exec).mean_reach;

    auto mapped_up = map_individuals_to_households(person_seeds, bundle.partition);
    std::vector<int> sh_up;
    for (const auto& id : mapped_up) sh_up.push_back(gh.index_of(id));
    ev.mapped_up_reach = independent_cascade(gh, sh_up, config, exec).mean_reach;

    // Mapped-down arm: the member draw repeats every replication, so the
    // evaluation integrates over the mapping, not one realization of it.
    std::sort(sh.begin(), sh.end());
    sh.erase(std::unique(sh.begin(), sh.end()), sh.end());
    const std::uint64_t edge_stream = derive_stream(config.seed, salt::cascade_edge);
    std::vector<int> reaches(static_cast<size_t>(config.replications));
    std::vector<int> empties(static_cast<size_t>(config.replications));

    auto run_rep = [&](int r, std::vector<char>& active, std::vector<int>& queue,
                       std::vector<int>& members) {
        members.clear();
        int empty_households = 0;
        std::uint64_t draw_stream =
            derive_stream(config.seed, salt::seed_mapping, static_cast<std::uint64_t>(r));
        for (int h : sh) {
            bool any = false;
            for (int m : bundle.partition.members()[static_cast<size_t>(h)]) {
                if (uniform_at(draw_stream, static_cast<std::uint64_t>(h),
                               static_cast<std::uint64_t>(m)) < activation_probability) {
                    members.push_back(m);
                    any = true;
                }
            }
            if (!any) ++empty_households;
        }
        reaches[static_cast<size_t>(r)] = cascade_once(gi, members, edge_stream,
                                                       static_cast<std::uint64_t>(r), active, queue);
        empties[static_cast<size_t>(r)] = empty_households;
    };

    if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel
        {
            std::vector<char> active(static_cast<size_t>(gi.n));
            std::vector<int> queue, members;
#pragma omp for schedule(static)
            for (int r = 0; r < config.replications; ++r) run_rep(r, active, queue, members);
        }
#else
        std::vector<char> active(static_cast<size_t>(gi.n));
        std::vector<int> queue, members;
        for (int r = 0; r < config.replications; ++r) run_rep(r, active, queue, members);
#endif
    } else {
        std::vector<char> active(static_cast<size_t>(gi.n));
        std::vector<int> queue, members;
        for (int r = 0; r < config.replications; ++r) run_rep(r, active, queue, members);
    }

    long long reach_total = std::accumulate(reaches.begin(), reaches.end(), 0LL);
    long long empty_total = std::accumulate(empties.begin(), empties.end(), 0LL);
    ev.mapped_down_reach =
        static_cast<double>(reach_total) /
        (static_cast<double>(config.replications) * static_cast<double>(gi.n));
    ev.mean_empty_households =
        static_cast<double>(empty_total) / static_cast<double>(config.replications);
    return ev;
}

namespace {

// Eccentricity scan of the largest connected component.
int largest_component_diameter(const SparseAdjacency& adjacency) {
    std::vector<std::pair<int, int>> pairs;
    pairs.reserve(adjacency.entries.size());
    for (const auto& e : adjacency.entries) {
        int s = e.src, t = e.dst;
        if (s > t) std::swap(s, t);
        pairs.push_back({s, t});
    }
    auto comps = connected_components(adjacency.n, pairs);
    const std::vector<int>* largest = nullptr;
    for (const auto& c : comps)
        if (!largest || c.size() > largest->size()) largest = &c;
    if (!largest || largest->size() < 2) return 0;

    auto rows = adjacency.rows();
    std::vector<int> dist(static_cast<size_t>(adjacency.n));
    int diameter = 0;
    for (int source : *largest) {
        std::fill(dist.begin(), dist.end(), -1);
        std::deque<int> queue{source};
        dist[static_cast<size_t>(source)] = 0;
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            diameter = std::max(diameter, dist[static_cast<size_t>(u)]);
            for (const auto& [v, w] : rows[static_cast<size_t>(u)]) {
                if (dist[static_cast<size_t>(v)] < 0) {
                    dist[static_cast<size_t>(v)] = dist[static_cast<size_t>(u)] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    return diameter;
}

}  // namespace

DiffusionCentralityResult diffusion_centrality(const SparseAdjacency& adjacency,
                                               const DiffusionCentralityConfig& config) {
    require_probability(config.passing_probability, "passing probability");
    if (config.horizon < 0) throw ValidationError({"horizon must be non-negative"});
    if (adjacency.n <= 0) throw DegeneracyError("diffusion centrality undefined on an empty graph");

    DiffusionCentralityResult result;
    if (config.horizon > 0) {
        result.horizon_used = config.horizon;
    } else {
        int d = largest_component_diameter(adjacency);
        result.horizon_used = d >= 1 ? d : adjacency.n;
    }

    const double q = config.passing_probability;
    std::vector<double> u(static_cast<size_t>(adjacency.n), 1.0);
    std::vector<double> v(static_cast<size_t>(adjacency.n));
    result.scores.assign(static_cast<size_t>(adjacency.n), 0.0);
    for (int t = 0; t < result.horizon_used; ++t) {
        std::fill(v.begin(), v.end(), 0.0);
        for (const auto& e : adjacency.entries) {
            v[static_cast<size_t>(e.src)] += q * e.weight * u[static_cast<size_t>(e.dst)];
            if (!adjacency.directed)
                v[static_cast<size_t>(e.dst)] += q * e.weight * u[static_cast<size_t>(e.src)];
        }
        for (int i = 0; i < adjacency.n; ++i)
            result.scores[static_cast<size_t>(i)] += v[static_cast<size_t>(i)];
        std::swap(u, v);
    }
    return result;
}

namespace {

std::vector<int> largest_component_members(const HouseholdNetwork& network) {
    auto pairs = network.simple_pairs();
    auto comps = connected_components(network.household_count(), pairs);
    const std::vector<int>* largest = nullptr;
    for (const auto& c : comps)
        if (!largest || c.size() > largest->size()) largest = &c;
    return largest ? *largest : std::vector<int>{};
}

RankCorrelation correlate_over(const std::vector<int>& lhs_comp, const std::vector<int>& rhs_comp,
                               const std::vector<double>& lhs_scores,
                               const std::vector<double>& rhs_scores, const char* label) {
    std::vector<int> shared;
    std::set_intersection(lhs_comp.begin(), lhs_comp.end(), rhs_comp.begin(), rhs_comp.end(),
                          std::back_inserter(shared));
    if (shared.empty())
        throw DegeneracyError(std::string("no shared households between the largest components (") +
                              label + ")");
    RankCorrelation rc;
    rc.overlap = static_cast<int>(shared.size());
    if (shared.size() < 3) return rc;
    std::vector<double> xs, ys;
    xs.reserve(shared.size());
    ys.reserve(shared.size());
    for (int h : shared) {
        xs.push_back(lhs_scores[static_cast<size_t>(h)]);
        ys.push_back(rhs_scores[static_cast<size_t>(h)]);
    }
    rc.spearman = spearman(xs, ys);
    return rc;
}

}  // namespace

GenderedDcReport gendered_dc_correlation(const HouseholdNetwork& base, const HouseholdNetwork& a,
                                         const HouseholdNetwork& b,
                                         const DiffusionCentralityConfig& config) {
    if (a.household_ids != base.household_ids || b.household_ids != base.household_ids)
        throw ValidationError({"gendered networks must share the base household set"});

    DiffusionCentralityConfig local = config;
    SparseAdjacency adj_base = adjacency_of(base.as_network());
    if (local.horizon == 0) {
        int d = largest_component_diameter(adj_base);
        local.horizon = d >= 1 ? d : adj_base.n;
    }

    auto dc_base = diffusion_centrality(adj_base, local);
    auto dc_a = diffusion_centrality(adjacency_of(a.as_network()), local);
    auto dc_b = diffusion_centrality(adjacency_of(b.as_network()), local);

    auto comp_base = largest_component_members(base);
    auto comp_a = largest_component_members(a);
    auto comp_b = largest_component_members(b);

    GenderedDcReport report;
    report.horizon_used = local.horizon;
    report.base_vs_a =
        correlate_over(comp_base, comp_a, dc_base.scores, dc_a.scores, "base vs first group");
    report.base_vs_b =
        correlate_over(comp_base, comp_b, dc_base.scores, dc_b.scores, "base vs second group");
    report.a_vs_b = correlate_over(comp_a, comp_b, dc_a.scores, dc_b.scores, "between groups");
    return report;
}

}  // namespace hhnet
