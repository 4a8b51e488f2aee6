// Times the OpenMP kernels against their serial reference paths and checks
// that both produce identical results. Build with -DHHNET_OPENMP=ON to see a
// speedup; the equality column must read "match" either way.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hhnet/contraction.hpp"
#include "hhnet/diffusion.hpp"
#include "hhnet/graph.hpp"
#include "hhnet/metrics.hpp"
#include "hhnet/randgraph.hpp"

using namespace hhnet;

namespace {

NetworkBundle synth_bundle(int n, double p, std::uint64_t seed) {
    auto er = generate_er({n, p, seed});
    std::vector<int> sizes;
    for (int total = 0, k = 0; total < n; ++k) {
        int s = std::min(1 + k % 5, n - total);
        sizes.push_back(s);
        total += s;
    }
    auto partition = random_partition(er.node_ids(), {sizes}, seed + 1);

    std::vector<NodeRecord> nodes;
    for (const auto& id : er.node_ids()) {
        int h = partition.household_of(partition.index_of_node(id));
        nodes.push_back({id, partition.household_id(h), nodes.size() % 2 ? "F" : "M", {}});
    }
    std::vector<EdgeRecord> edges;
    for (const auto& e : er.edges())
        edges.push_back({er.node_id(e.src), er.node_id(e.dst), "default", e.weight});
    return build_network(nodes, edges);
}

template <typename F>
double time_ms(F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    f();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, double serial_ms, double parallel_ms, bool match) {
    std::printf("%-22s %10.1f %10.1f %8.2fx   %s\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms, match ? "match" : "MISMATCH");
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled; both columns run the serial path\n");
#endif
    std::printf("%-22s %10s %10s %9s   %s\n", "kernel", "serial ms", "parallel ms", "speedup",
                "equal");

    auto bundle = synth_bundle(260, 0.04, 11);
    const auto& net = bundle.network;
    const auto& part = bundle.partition;

    {
        SweepConfig cfg;
        cfg.p_grid = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
        cfg.replications = 60;
        cfg.seed = 21;
        std::vector<SweepPoint> a, b;
        double ts = time_ms([&] { a = inversity_removal_sweep(net, part, cfg, Exec::serial); });
        double tp = time_ms([&] { b = inversity_removal_sweep(net, part, cfg, Exec::parallel); });
        bool ok = a.size() == b.size();
        for (size_t i = 0; ok && i < a.size(); ++i)
            ok = a[i].mean_inversity == b[i].mean_inversity && a[i].q05 == b[i].q05 &&
                 a[i].q95 == b[i].q95 && a[i].undefined_replicates == b[i].undefined_replicates;
        report("inversity sweep", ts, tp, ok);
    }

    CascadeConfig cfg;
    cfg.extra_prob = 0.08;
    cfg.intra_prob = 0.6;
    cfg.replications = 5000;
    cfg.seed = 22;
    auto graph = cascade_graph(decompose(net, part), cfg.extra_prob, cfg.intra_prob);
    std::vector<int> seeds = {0, 5, 9};

    {
        CascadeSummary a, b;
        double ts = time_ms([&] { a = independent_cascade(graph, seeds, cfg, Exec::serial); });
        double tp = time_ms([&] { b = independent_cascade(graph, seeds, cfg, Exec::parallel); });
        report("independent cascade", ts, tp,
               a.mean_reach == b.mean_reach && a.std_reach == b.std_reach);
    }

    {
        CascadeConfig sk = cfg;
        sk.replications = 3000;
        ReachSketches a, b;
        double ts = time_ms([&] { a = build_reach_sketches(graph, sk, Exec::serial); });
        double tp = time_ms([&] { b = build_reach_sketches(graph, sk, Exec::parallel); });
        report("reach sketches", ts, tp,
               a.component == b.component && a.component_size == b.component_size);
    }

    {
        CascadeConfig gr = cfg;
        gr.replications = 1500;
        GreedyResult a, b;
        double ts = time_ms([&] { a = greedy_seed_selection(graph, 8, gr, Exec::serial); });
        double tp = time_ms([&] { b = greedy_seed_selection(graph, 8, gr, Exec::parallel); });
        report("greedy seeds", ts, tp, a.seeds == b.seeds && a.reach_after == b.reach_after);
    }

    {
        CascadeConfig xe = cfg;
        xe.replications = 3000;
        std::vector<std::string> persons = {net.node_id(0), net.node_id(3)};
        std::vector<std::string> households = {part.household_ids()[0], part.household_ids()[1]};
        CrossEvaluation a, b;
        double ts =
            time_ms([&] { a = cross_evaluate(bundle, persons, households, xe, 0.7, Exec::serial); });
        double tp = time_ms(
            [&] { b = cross_evaluate(bundle, persons, households, xe, 0.7, Exec::parallel); });
        report("cross evaluate", ts, tp,
               a.individual_reach == b.individual_reach &&
                   a.household_reach == b.household_reach &&
                   a.mapped_up_reach == b.mapped_up_reach &&
                   a.mapped_down_reach == b.mapped_down_reach &&
                   a.mean_empty_households == b.mean_empty_households);
    }

    {
        VerifyConfig vc;
        vc.n = 60;
        vc.p = 0.1;
        vc.sizes = {1, 2, 3, 4, 1, 2, 3, 4, 1, 2, 3, 4, 1, 2, 3, 4, 1, 2, 3, 4, 1, 2, 3, 4};
        vc.draws = 1200;
        vc.seed = 23;
        VerifyReport a, b;
        double ts = time_ms([&] { a = verify_contraction_distribution(vc, Exec::serial); });
        double tp = time_ms([&] { b = verify_contraction_distribution(vc, Exec::parallel); });
        bool ok = a.max_abs_z == b.max_abs_z && a.pass == b.pass &&
                  a.pairs.size() == b.pairs.size();
        for (size_t i = 0; ok && i < a.pairs.size(); ++i)
            ok = a.pairs[i].empirical == b.pairs[i].empirical;
        report("er verification", ts, tp, ok);
    }

    return 0;
}
