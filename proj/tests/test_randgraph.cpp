#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <set>

#include "hhnet/errors.hpp"
#include "hhnet/randgraph.hpp"

using namespace hhnet;

TEST_CASE("er generator is deterministic and seed-sensitive") {
    ErConfig cfg{30, 0.3, 42};
    auto a = generate_er(cfg);
    auto b = generate_er(cfg);
    REQUIRE(a.edges().size() == b.edges().size());
    for (size_t i = 0; i < a.edges().size(); ++i) {
        CHECK(a.edges()[i].src == b.edges()[i].src);
        CHECK(a.edges()[i].dst == b.edges()[i].dst);
    }

    cfg.seed = 43;
    auto c = generate_er(cfg);
    bool differs = a.edges().size() != c.edges().size();
    for (size_t i = 0; !differs && i < a.edges().size(); ++i)
        differs = a.edges()[i].src != c.edges()[i].src || a.edges()[i].dst != c.edges()[i].dst;
    CHECK(differs);
}

TEST_CASE("er endpoints: empty at p = 0, complete at p = 1") {
    CHECK(generate_er({12, 0.0, 1}).edges().empty());
    CHECK(generate_er({12, 1.0, 1}).edges().size() == 66);
}

TEST_CASE("er node ids zero-pad to a fixed width") {
    auto net = generate_er({11, 0.0, 1});
    CHECK(net.node_id(0) == "00");
    CHECK(net.node_id(10) == "10");
    auto ten = generate_er({10, 0.0, 1});
    CHECK(ten.node_id(9) == "9");  // single digit suffices below 11 nodes
}

TEST_CASE("er edge count lands in the plausible band") {
    auto net = generate_er({100, 0.1, 7});
    auto m = net.edges().size();
    // mean 495, sd about 21
    CHECK(m > 410);
    CHECK(m < 580);
}

TEST_CASE("er generator validates n and p") {
    CHECK_THROWS_AS(generate_er({0, 0.5, 1}), ValidationError);
    CHECK_THROWS_AS(generate_er({5, 1.5, 1}), ValidationError);
    CHECK_THROWS_AS(generate_er({5, -0.1, 1}), ValidationError);
}

TEST_CASE("size specs build and validate") {
    auto spec = HouseholdSizeSpec::equal(4, 3);
    CHECK(spec.sizes == std::vector<int>{3, 3, 3, 3});
    CHECK(spec.total() == 12);
    CHECK_THROWS_AS(HouseholdSizeSpec::equal(0, 3), ValidationError);
    CHECK_THROWS_AS(HouseholdSizeSpec::equal(3, 0), ValidationError);
}

TEST_CASE("random partition cuts shuffled blocks of the requested sizes") {
    auto net = generate_er({10, 0.0, 3});
    HouseholdSizeSpec spec{{1, 2, 3, 4}};
    auto part = random_partition(net.node_ids(), spec, 5);
    CHECK(part.household_count() == 4);
    CHECK(part.household_ids() == std::vector<std::string>{"h0", "h1", "h2", "h3"});
    CHECK(part.sizes() == std::vector<int>{1, 2, 3, 4});

    auto again = random_partition(net.node_ids(), spec, 5);
    for (int v = 0; v < 10; ++v) CHECK(part.household_of(v) == again.household_of(v));

    bool moved = false;
    for (std::uint64_t s = 6; s < 20 && !moved; ++s) {
        auto other = random_partition(net.node_ids(), spec, s);
        for (int v = 0; v < 10 && !moved; ++v)
            moved = other.household_of(v) != part.household_of(v);
    }
    CHECK(moved);

    CHECK_THROWS_AS(random_partition(net.node_ids(), HouseholdSizeSpec{{5, 4}}, 1),
                    ValidationError);
    CHECK_THROWS_AS(random_partition(net.node_ids(), HouseholdSizeSpec{{10, 0}}, 1),
                    ValidationError);
}

TEST_CASE("contracted edge probability follows the complement power law") {
    CHECK(contracted_edge_probability(0.0, 3, 4) == 0.0);
    CHECK(contracted_edge_probability(1.0, 3, 4) == 1.0);
    CHECK(contracted_edge_probability(0.1, 2, 3) ==
          doctest::Approx(1.0 - std::pow(0.9, 6.0)).epsilon(1e-15));
    CHECK(contracted_edge_probability(0.1, 2, 3) == doctest::Approx(0.468559).epsilon(1e-6));
    CHECK_THROWS_AS(contracted_edge_probability(1.2, 2, 2), ValidationError);
    CHECK_THROWS_AS(contracted_edge_probability(0.5, 0, 2), ValidationError);
}

TEST_CASE("expected household degree sums the pairwise probabilities") {
    std::vector<int> sizes = {1, 2, 3};
    double expected = (1.0 - std::pow(0.9, 2.0)) + (1.0 - std::pow(0.9, 3.0));
    CHECK(expected_household_degree(0.1, sizes, 0) == doctest::Approx(expected).epsilon(1e-15));
    CHECK_THROWS_AS(expected_household_degree(0.1, sizes, 3), ValidationError);
}

TEST_CASE("verification at p = 0 and p = 1 is exact") {
    VerifyConfig cfg;
    cfg.n = 8;
    cfg.sizes = {2, 2, 2, 2};
    cfg.draws = 50;
    cfg.seed = 11;

    cfg.p = 0.0;
    auto zero = verify_contraction_distribution(cfg);
    CHECK(zero.pass);
    CHECK(zero.max_abs_z == 0.0);
    for (const auto& c : zero.pairs) {
        CHECK(c.theoretical == 0.0);
        CHECK(c.empirical == 0.0);
    }

    cfg.p = 1.0;
    auto one = verify_contraction_distribution(cfg);
    CHECK(one.pass);
    for (const auto& c : one.pairs) {
        CHECK(c.theoretical == 1.0);
        CHECK(c.empirical == 1.0);
    }
    for (const auto& c : one.size_classes) {
        CHECK(c.chi_square == 0.0);
        CHECK(c.p_value == 1.0);
    }
}

TEST_CASE("verification report covers every pair, degree, and usable class") {
    VerifyConfig cfg;
    cfg.n = 12;
    cfg.p = 0.2;
    cfg.sizes = {1, 1, 2, 2, 3, 3};
    cfg.draws = 400;
    cfg.z_threshold = 5.0;
    cfg.seed = 13;
    auto rep = verify_contraction_distribution(cfg);

    CHECK(rep.pairs.size() == 15);
    CHECK(rep.degrees.size() == 6);
    CHECK(rep.draws == 400);
    CHECK(rep.z_threshold == 5.0);
    CHECK_FALSE(rep.note.empty());

    // classes with a single pair carry no homogeneity information
    std::set<std::pair<int, int>> seen;
    for (const auto& c : rep.size_classes) {
        CHECK(c.pair_count >= 2);
        CHECK(c.dof == c.pair_count - 1);
        CHECK(c.p_value >= 0.0);
        CHECK(c.p_value <= 1.0);
        seen.insert({c.size_lo, c.size_hi});
    }
    CHECK_FALSE(seen.count({1, 1}));  // only one such pair exists
    CHECK(seen.count({1, 2}));
    CHECK(seen.count({2, 3}));

    // a healthy run at these sample sizes stays far from threshold
    CHECK(rep.pass);
    CHECK(rep.max_abs_z < 5.0);
}

TEST_CASE("equal sizes predict one shared rate for every pair") {
    VerifyConfig cfg;
    cfg.n = 8;
    cfg.p = 0.3;
    cfg.sizes = {2, 2, 2, 2};
    cfg.draws = 2000;
    cfg.z_threshold = 4.5;
    cfg.seed = 17;
    auto rep = verify_contraction_distribution(cfg);
    REQUIRE_FALSE(rep.pairs.empty());
    for (const auto& c : rep.pairs) CHECK(c.theoretical == rep.pairs[0].theoretical);
    REQUIRE(rep.size_classes.size() == 1);
    CHECK(rep.size_classes[0].pair_count == 6);
    CHECK(rep.pass);
}

TEST_CASE("verification validates its configuration") {
    VerifyConfig cfg;
    cfg.n = 6;
    cfg.p = 0.2;
    cfg.sizes = {2, 2, 2};
    cfg.draws = 0;
    CHECK_THROWS_AS(verify_contraction_distribution(cfg), ValidationError);
    cfg.draws = 10;
    cfg.sizes = {2, 2};
    CHECK_THROWS_AS(verify_contraction_distribution(cfg), ValidationError);
    cfg.sizes = {2, 2, 2};
    cfg.z_threshold = 0.0;
    CHECK_THROWS_AS(verify_contraction_distribution(cfg), ValidationError);
}
