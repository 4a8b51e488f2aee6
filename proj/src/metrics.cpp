#include "hhnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hhnet/errors.hpp"
#include "hhnet/stats.hpp"

namespace hhnet {

namespace {

std::vector<int> pair_degrees(int n, std::span<const std::pair<int, int>> pairs) {
    std::vector<int> deg(static_cast<size_t>(n), 0);
    for (auto [s, t] : pairs) {
        ++deg[static_cast<size_t>(s)];
        ++deg[static_cast<size_t>(t)];
    }
    return deg;
}

// Pearson over both orientations of every edge, with f applied to the
// trailing endpoint's degree. Exact zero-variance detection happens on the
// integer degrees so regular graphs come out undefined, not almost-zero.
template <typename F>
std::optional<double> oriented_edge_correlation(int n, std::span<const std::pair<int, int>> pairs,
                                                F&& f) {
    if (pairs.empty()) throw DegeneracyError("metric undefined: the graph has no edges");
    auto deg = pair_degrees(n, pairs);
    int lo_x = std::numeric_limits<int>::max(), hi_x = std::numeric_limits<int>::min();
    int lo_y = lo_x, hi_y = hi_x;
    std::vector<double> xs, ys;
    xs.reserve(pairs.size() * 2);
    ys.reserve(pairs.size() * 2);
    for (auto [s, t] : pairs) {
        int ds = deg[static_cast<size_t>(s)], dt = deg[static_cast<size_t>(t)];
        xs.push_back(ds);
        ys.push_back(f(dt));
        xs.push_back(dt);
        ys.push_back(f(ds));
        lo_x = std::min({lo_x, ds, dt});
        hi_x = std::max({hi_x, ds, dt});
        lo_y = std::min({lo_y, ds, dt});
        hi_y = std::max({hi_y, ds, dt});
    }
    if (lo_x == hi_x || lo_y == hi_y) return std::nullopt;
    return pearson(xs, ys);
}

}  // namespace

std::optional<double> degree_assortativity(int n, std::span<const std::pair<int, int>> pairs) {
    return oriented_edge_correlation(n, pairs, [](int d) { return static_cast<double>(d); });
}

double average_clustering(int n, std::span<const std::pair<int, int>> pairs) {
    if (n <= 0) throw DegeneracyError("clustering undefined: the graph has no nodes");
    std::vector<std::vector<int>> nbr(static_cast<size_t>(n));
    for (auto [s, t] : pairs) {
        nbr[static_cast<size_t>(s)].push_back(t);
        nbr[static_cast<size_t>(t)].push_back(s);
    }
    for (auto& row : nbr) std::sort(row.begin(), row.end());

    double total = 0.0;
    for (int v = 0; v < n; ++v) {
        const auto& nv = nbr[static_cast<size_t>(v)];
        size_t d = nv.size();
        if (d < 2) continue;
        long long wedges_closed = 0;
        for (size_t a = 0; a + 1 < d; ++a)
            for (size_t b = a + 1; b < d; ++b) {
                const auto& na = nbr[static_cast<size_t>(nv[a])];
                if (std::binary_search(na.begin(), na.end(), nv[b])) ++wedges_closed;
            }
        total += 2.0 * static_cast<double>(wedges_closed) /
                 (static_cast<double>(d) * static_cast<double>(d - 1));
    }
    return total / static_cast<double>(n);
}

std::optional<double> inversity(int n, std::span<const std::pair<int, int>> pairs) {
    return oriented_edge_correlation(n, pairs, [](int d) { return 1.0 / static_cast<double>(d); });
}

std::optional<double> degree_assortativity(const IndividualNetwork& network) {
    auto pairs = network.simple_pairs();
    return degree_assortativity(network.node_count(), pairs);
}

std::optional<double> degree_assortativity(const HouseholdNetwork& network) {
    auto pairs = network.simple_pairs();
    return degree_assortativity(network.household_count(), pairs);
}

double average_clustering(const IndividualNetwork& network) {
    auto pairs = network.simple_pairs();
    return average_clustering(network.node_count(), pairs);
}

double average_clustering(const HouseholdNetwork& network) {
    auto pairs = network.simple_pairs();
    return average_clustering(network.household_count(), pairs);
}

std::optional<double> inversity(const IndividualNetwork& network) {
    auto pairs = network.simple_pairs();
    return inversity(network.node_count(), pairs);
}

std::optional<double> inversity(const HouseholdNetwork& network) {
    auto pairs = network.simple_pairs();
    return inversity(network.household_count(), pairs);
}

double intrahousehold_edge_proportion(const AdjacencyDecomposition& decomposition) {
    if (decomposition.base.entries.empty())
        throw DegeneracyError("edge proportion undefined: the graph has no edges");
    return static_cast<double>(decomposition.intra.entries.size()) /
           static_cast<double>(decomposition.base.entries.size());
}

namespace {

std::optional<double> sweep_cell(int n, const std::vector<std::pair<int, int>>& extra_pairs,
                                 const std::vector<std::pair<int, int>>& intra_pairs, double p,
                                 std::uint64_t replicate_stream) {
    std::vector<std::pair<int, int>> kept = extra_pairs;
    for (size_t k = 0; k < intra_pairs.size(); ++k)
        if (!(uniform_at(replicate_stream, k) < p)) kept.push_back(intra_pairs[k]);
    if (kept.empty()) return std::nullopt;
    return inversity(n, kept);
}

}  // namespace

std::vector<SweepPoint> inversity_removal_sweep(const IndividualNetwork& network,
                                                const HouseholdPartition& partition,
                                                const SweepConfig& config, Exec exec) {
    if (config.p_grid.empty()) throw ValidationError({"sweep grid is empty"});
    for (double p : config.p_grid)
        if (!(p >= 0.0 && p <= 1.0))
            throw ValidationError({"sweep grid values must lie in [0, 1]"});
    if (config.replications < 1) throw ValidationError({"sweep needs at least one replication"});
    require_partition_alignment(network, partition);

    const int n = network.node_count();
    std::vector<std::pair<int, int>> extra_pairs, intra_pairs;
    for (auto [s, t] : network.simple_pairs()) {
        if (partition.household_of(s) == partition.household_of(t))
            intra_pairs.push_back({s, t});
        else
            extra_pairs.push_back({s, t});
    }

    const int np = static_cast<int>(config.p_grid.size());
    const int reps = config.replications;
    // one slot per (p, replicate) cell; cells are independent, so the
    // parallel path fills the same slots the serial one does
    std::vector<std::optional<double>> values(static_cast<size_t>(np) * static_cast<size_t>(reps));

    auto run_cell = [&](int flat) {
        int pi = flat / reps;
        int ri = flat % reps;
        std::uint64_t stream =
            derive_stream(config.seed, salt::sweep_cell, static_cast<std::uint64_t>(ri));
        values[static_cast<size_t>(flat)] =
            sweep_cell(n, extra_pairs, intra_pairs, config.p_grid[static_cast<size_t>(pi)], stream);
    };

    const int total = np * reps;
    if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 4)
#endif
        for (int flat = 0; flat < total; ++flat) run_cell(flat);
    } else {
        for (int flat = 0; flat < total; ++flat) run_cell(flat);
    }

    std::vector<SweepPoint> points;
    points.reserve(static_cast<size_t>(np));
    for (int pi = 0; pi < np; ++pi) {
        SweepPoint pt;
        pt.p = config.p_grid[static_cast<size_t>(pi)];
        std::vector<double> defined;
        defined.reserve(static_cast<size_t>(reps));
        for (int ri = 0; ri < reps; ++ri) {
            const auto& v = values[static_cast<size_t>(pi) * static_cast<size_t>(reps) +
                                   static_cast<size_t>(ri)];
            if (v.has_value())
                defined.push_back(*v);
            else
                ++pt.undefined_replicates;
        }
        if (defined.empty()) {
            pt.mean_inversity = pt.q05 = pt.q95 = std::numeric_limits<double>::quiet_NaN();
        } else {
            pt.mean_inversity = mean(defined);
            pt.q05 = quantile(defined, 0.05);
            pt.q95 = quantile(defined, 0.95);
        }
        points.push_back(pt);
    }
    return points;
}

}  // namespace hhnet
