#include "hhnet/randgraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "hhnet/contraction.hpp"
#include "hhnet/errors.hpp"
#include "hhnet/stats.hpp"

namespace hhnet {

namespace {

std::vector<std::string> numeric_ids(int n, char prefix = '\0') {
    int width = 1;
    for (int v = n - 1; v >= 10; v /= 10) ++width;
    std::vector<std::string> ids;
    ids.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::ostringstream os;
        if (prefix) os << prefix;
        std::string digits = std::to_string(i);
        os << std::string(static_cast<size_t>(width) - digits.size(), '0') << digits;
        ids.push_back(os.str());
    }
    return ids;
}

}  // namespace

IndividualNetwork generate_er(const ErConfig& config) {
    if (config.n < 1) throw ValidationError({"node count must be positive"});
    if (!(config.p >= 0.0 && config.p <= 1.0))
        throw ValidationError({"edge probability must lie in [0, 1]"});

    const std::uint64_t stream = derive_stream(config.seed, salt::er_draw);
    std::vector<Edge> edges;
    for (int i = 0; i < config.n; ++i)
        for (int j = i + 1; j < config.n; ++j)
            if (uniform_at(stream, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)) <
                config.p)
                edges.push_back(Edge{i, j, 0, 1.0});
    return make_network_unchecked(numeric_ids(config.n), std::move(edges), {"default"}, false);
}

HouseholdSizeSpec HouseholdSizeSpec::equal(int households, int size) {
    if (households < 1 || size < 1)
        throw ValidationError({"household count and size must be positive"});
    return HouseholdSizeSpec{std::vector<int>(static_cast<size_t>(households), size)};
}

int HouseholdSizeSpec::total() const {
    return std::accumulate(sizes.begin(), sizes.end(), 0);
}

HouseholdPartition random_partition(const std::vector<std::string>& node_ids,
                                    const HouseholdSizeSpec& spec, std::uint64_t seed) {
    for (int s : spec.sizes)
        if (s < 1) throw ValidationError({"household sizes must be positive"});
    if (spec.total() != static_cast<int>(node_ids.size()))
        throw ValidationError({"household sizes must sum to the node count"});

    std::vector<int> order(node_ids.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(derive_stream(seed, salt::er_partition));
    rng.shuffle(order);

    auto hh_ids = numeric_ids(static_cast<int>(spec.sizes.size()), 'h');
    std::vector<std::string> assignment(node_ids.size());
    size_t cursor = 0;
    for (size_t h = 0; h < spec.sizes.size(); ++h)
        for (int k = 0; k < spec.sizes[h]; ++k)
            assignment[static_cast<size_t>(order[cursor++])] = hh_ids[h];
    return HouseholdPartition::from_assignment(node_ids, assignment);
}

double contracted_edge_probability(double p, int size_q, int size_r) {
    if (!(p >= 0.0 && p <= 1.0))
        throw ValidationError({"edge probability must lie in [0, 1]"});
    if (size_q < 1 || size_r < 1) throw ValidationError({"household sizes must be positive"});
    return 1.0 - std::pow(1.0 - p, static_cast<double>(size_q) * static_cast<double>(size_r));
}

double expected_household_degree(double p, std::span<const int> sizes, int k) {
    if (k < 0 || k >= static_cast<int>(sizes.size()))
        throw ValidationError({"household index out of range"});
    double expected = 0.0;
    for (size_t j = 0; j < sizes.size(); ++j) {
        if (static_cast<int>(j) == k) continue;
        expected += contracted_edge_probability(p, sizes[static_cast<size_t>(k)], sizes[j]);
    }
    return expected;
}

namespace {

// flat index of household pair (q < r) among all R-choose-2 pairs
size_t pair_slot(int q, int r, int R) {
    return static_cast<size_t>(q) * static_cast<size_t>(R) -
           static_cast<size_t>(q) * static_cast<size_t>(q + 1) / 2 +
           static_cast<size_t>(r - q - 1);
}

double z_score(double empirical, double theoretical, double sd) {
    if (sd > 0.0) return (empirical - theoretical) / sd;
    if (empirical == theoretical) return 0.0;
    return empirical > theoretical ? std::numeric_limits<double>::infinity()
                                   : -std::numeric_limits<double>::infinity();
}

}  // namespace

VerifyReport verify_contraction_distribution(const VerifyConfig& config, Exec exec) {
    if (config.draws < 1) throw ValidationError({"need at least one draw"});
    if (!(config.z_threshold > 0.0)) throw ValidationError({"z threshold must be positive"});
    HouseholdSizeSpec spec{config.sizes};
    if (spec.total() != config.n)
        throw ValidationError({"household sizes must sum to the node count"});

    // one partition for the whole experiment; only the graph is redrawn
    auto node_ids = numeric_ids(config.n);
    HouseholdPartition partition = random_partition(node_ids, spec, config.seed);
    const int R = partition.household_count();
    const auto sizes = partition.sizes();
    const size_t pair_total = static_cast<size_t>(R) * static_cast<size_t>(R - 1) / 2;

    std::vector<long long> pair_hits(pair_total, 0);
    std::vector<long long> degree_sum(static_cast<size_t>(R), 0);

    auto tally_draw = [&](int d, std::vector<long long>& hits, std::vector<long long>& degs) {
        ErConfig er{config.n, config.p, derive_stream(config.seed, salt::er_draw,
                                                      static_cast<std::uint64_t>(d))};
        IndividualNetwork net = generate_er(er);
        HouseholdNetwork hh = contract_basic(net, partition);
        for (const auto& e : hh.edges) {
            ++hits[pair_slot(e.src, e.dst, R)];
            ++degs[static_cast<size_t>(e.src)];
            ++degs[static_cast<size_t>(e.dst)];
        }
    };

    if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel
        {
            std::vector<long long> hits(pair_total, 0);
            std::vector<long long> degs(static_cast<size_t>(R), 0);
#pragma omp for schedule(dynamic, 16)
            for (int d = 0; d < config.draws; ++d) tally_draw(d, hits, degs);
#pragma omp critical
            {
                for (size_t i = 0; i < pair_total; ++i) pair_hits[i] += hits[i];
                for (size_t h = 0; h < degree_sum.size(); ++h) degree_sum[h] += degs[h];
            }
        }
#else
        for (int d = 0; d < config.draws; ++d) tally_draw(d, pair_hits, degree_sum);
#endif
    } else {
        for (int d = 0; d < config.draws; ++d) tally_draw(d, pair_hits, degree_sum);
    }

    VerifyReport report;
    report.draws = config.draws;
    report.z_threshold = config.z_threshold;
    const double D = static_cast<double>(config.draws);

    for (int q = 0; q < R; ++q)
        for (int r = q + 1; r < R; ++r) {
            double pi = contracted_edge_probability(config.p, sizes[static_cast<size_t>(q)],
                                                    sizes[static_cast<size_t>(r)]);
            double emp = static_cast<double>(pair_hits[pair_slot(q, r, R)]) / D;
            double sd = std::sqrt(pi * (1.0 - pi) / D);
            report.pairs.push_back(PairCheck{q, r, pi, emp, z_score(emp, pi, sd)});
        }

    for (int k = 0; k < R; ++k) {
        double theory = expected_household_degree(config.p, sizes, k);
        double var_one = 0.0;
        for (int j = 0; j < R; ++j) {
            if (j == k) continue;
            double pi = contracted_edge_probability(config.p, sizes[static_cast<size_t>(k)],
                                                    sizes[static_cast<size_t>(j)]);
            var_one += pi * (1.0 - pi);
        }
        double emp = static_cast<double>(degree_sum[static_cast<size_t>(k)]) / D;
        double sd = std::sqrt(var_one / D);
        report.degrees.push_back(DegreeCheck{k, theory, emp, z_score(emp, theory, sd)});
    }

    // homogeneity within size classes: observed pair counts vs one pooled rate
    std::map<std::pair<int, int>, std::vector<long long>> classes;
    {
        size_t slot = 0;
        for (int q = 0; q < R; ++q)
            for (int r = q + 1; r < R; ++r, ++slot) {
                int lo = std::min(sizes[static_cast<size_t>(q)], sizes[static_cast<size_t>(r)]);
                int hi = std::max(sizes[static_cast<size_t>(q)], sizes[static_cast<size_t>(r)]);
                classes[{lo, hi}].push_back(pair_hits[slot]);
            }
    }
    for (const auto& [key, hits] : classes) {
        if (hits.size() < 2) continue;
        SizeClassCheck check;
        check.size_lo = key.first;
        check.size_hi = key.second;
        check.pair_count = static_cast<int>(hits.size());
        long long total = std::accumulate(hits.begin(), hits.end(), 0LL);
        double pooled =
            static_cast<double>(total) / (D * static_cast<double>(hits.size()));
        check.pooled_rate = pooled;
        check.dof = static_cast<int>(hits.size()) - 1;
        if (pooled <= 0.0 || pooled >= 1.0) {
            bool all_equal =
                std::all_of(hits.begin(), hits.end(), [&](long long h) { return h == hits[0]; });
            check.chi_square = all_equal ? 0.0 : std::numeric_limits<double>::infinity();
            check.p_value = all_equal ? 1.0 : 0.0;
        } else {
            double stat = 0.0;
            for (long long h : hits) {
                double succ = static_cast<double>(h);
                double exp_succ = D * pooled;
                double exp_fail = D * (1.0 - pooled);
                stat += (succ - exp_succ) * (succ - exp_succ) / exp_succ;
                stat += ((D - succ) - exp_fail) * ((D - succ) - exp_fail) / exp_fail;
            }
            check.chi_square = stat;
            check.p_value = 1.0 - chi_square_cdf(stat, check.dof);
        }
        report.size_classes.push_back(check);
    }

    report.max_abs_z = 0.0;
    for (const auto& c : report.pairs)
        report.max_abs_z = std::max(report.max_abs_z, std::abs(c.z));
    for (const auto& c : report.degrees)
        report.max_abs_z = std::max(report.max_abs_z, std::abs(c.z));
    report.pass = report.max_abs_z < config.z_threshold;

    size_t comparisons = report.pairs.size() + report.degrees.size();
    std::ostringstream note;
    note << comparisons << " simultaneous z comparisons; a per-comparison threshold of "
         << config.z_threshold
         << " keeps the expected number of false alarms near "
         << static_cast<double>(comparisons) * 6.4e-5
         << " (two-sided normal tail). Tighten the threshold if you add many more pairs.";
    report.note = note.str();
    return report;
}

}  // namespace hhnet
