#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "hhnet/contraction.hpp"
#include "hhnet/errors.hpp"
#include "hhnet/graph.hpp"
#include "hhnet/rng.hpp"
#include "oracles.hpp"

using namespace hhnet;

namespace {

NodeRecord N(std::string p, std::string h, std::string g = "") {
    return NodeRecord{std::move(p), std::move(h), std::move(g), {}};
}

EdgeRecord E(std::string s, std::string t, std::string layer = "default", double w = 1.0) {
    return EdgeRecord{std::move(s), std::move(t), std::move(layer), w};
}

// Household edges keyed by id pairs, for comparing against the oracles.
oracle::WeightMap as_weight_map(const HouseholdNetwork& hh) {
    oracle::WeightMap out;
    for (const auto& e : hh.edges)
        out[{hh.household_ids[static_cast<size_t>(e.src)],
             hh.household_ids[static_cast<size_t>(e.dst)]}] = e.weight;
    return out;
}

oracle::EdgeSet as_edge_set(const HouseholdNetwork& hh) {
    oracle::EdgeSet out;
    for (const auto& e : hh.edges)
        out.insert({hh.household_ids[static_cast<size_t>(e.src)],
                    hh.household_ids[static_cast<size_t>(e.dst)]});
    return out;
}

NetworkBundle bundle_of(const oracle::RawInstance& inst) {
    return build_network(inst.nodes, inst.edges, inst.directed);
}

}  // namespace

TEST_CASE("basic rule: one cross-pair edge, intra edges vanish, all households kept") {
    auto b = build_network({N("a", "h1"), N("b", "h1"), N("c", "h2"), N("d", "h2"),
                            N("e", "h3")},  // h3 never touches anyone
                           {E("a", "b"), E("b", "c"), E("c", "d"), E("a", "c")});
    auto hh = contract_basic(b.network, b.partition);
    CHECK(hh.household_count() == 3);
    CHECK(hh.household_ids == std::vector<std::string>{"h1", "h2", "h3"});
    REQUIRE(hh.edges.size() == 1);
    CHECK(hh.edges[0].src == 0);
    CHECK(hh.edges[0].dst == 1);
    CHECK(hh.edges[0].weight == 1.0);
    CHECK(hh.simple_degrees() == std::vector<int>{1, 1, 0});
    CHECK(hh.provenance.rule == "basic");
    CHECK_FALSE(hh.directed);
}

TEST_CASE("basic rule counts any layer") {
    auto b = build_network({N("a", "h1"), N("c", "h2")}, {E("a", "c", "kerosene")});
    auto hh = contract_basic(b.network, b.partition);
    REQUIRE(hh.edges.size() == 1);
}

TEST_CASE("basic rule keeps direction for directed input") {
    auto b = build_network({N("a", "h1"), N("c", "h2")}, {E("c", "a")}, true);
    auto hh = contract_basic(b.network, b.partition);
    CHECK(hh.directed);
    REQUIRE(hh.edges.size() == 1);
    CHECK(hh.edges[0].src == 1);
    CHECK(hh.edges[0].dst == 0);
}

TEST_CASE("summed rule adds member-to-member weights across layers") {
    auto b = build_network(
        {N("a", "h1"), N("b", "h1"), N("c", "h2")},
        {E("a", "c", "advice", 2.0), E("b", "c", "advice", 1.5), E("a", "c", "rice", 4.0),
         E("a", "b", "advice", 10.0)});  // intra weight never leaks out
    auto hh = contract_weighted(b.network, b.partition);
    REQUIRE(hh.edges.size() == 1);
    CHECK(hh.edges[0].weight == 7.5);
    CHECK(hh.provenance.rule == "weighted");
    CHECK_FALSE(hh.provenance.normalized);
}

TEST_CASE("normalized rule averages the two member proportions") {
    // h1 = {a, b}, h2 = {c}; only a touches c.
    // proportion h1 -> h2 is 1/2, h2 -> h1 is 1/1, mean 0.75.
    auto b = build_network({N("a", "h1"), N("b", "h1"), N("c", "h2")}, {E("a", "c")});
    auto hh = contract_weighted(b.network, b.partition, true);
    REQUIRE(hh.edges.size() == 1);
    CHECK(hh.edges[0].weight == 0.75);
    CHECK(hh.provenance.normalized);
}

TEST_CASE("normalized rule keeps the two directed proportions apart") {
    auto b = build_network({N("a", "h1"), N("b", "h1"), N("c", "h2")}, {E("a", "c")}, true);
    auto hh = contract_weighted(b.network, b.partition, true);
    REQUIRE(hh.edges.size() == 1);
    CHECK(hh.edges[0].src == 0);
    CHECK(hh.edges[0].dst == 1);
    CHECK(hh.edges[0].weight == 0.5);  // only the a -> c orientation exists
}

TEST_CASE("normalized weights stay within (0, 1]") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        auto inst = oracle::random_instance(rng, 10, 0.4, 4);
        auto b = bundle_of(inst);
        auto hh = contract_weighted(b.network, b.partition, true);
        for (const auto& e : hh.edges) {
            CHECK(e.weight > 0.0);
            CHECK(e.weight <= 1.0);
        }
    }
}

TEST_CASE("gendered rule keeps only same-gender cross edges") {
    auto b = build_network(
        {N("a", "h1", "F"), N("b", "h1", "M"), N("c", "h2", "F"), N("d", "h2", "M"),
         N("e", "h3", "F")},
        {E("a", "c"), E("b", "d"), E("a", "d"), E("e", "b")});
    auto f = contract_gendered(b.network, b.partition, b.attributes, "F");
    REQUIRE(f.edges.size() == 1);  // only a-c is F-F
    CHECK(f.edges[0].src == 0);
    CHECK(f.edges[0].dst == 1);
    CHECK(f.household_count() == 3);
    CHECK(f.provenance.rule == "gendered");
    REQUIRE(f.provenance.gender.has_value());
    CHECK(*f.provenance.gender == "F");

    auto m = contract_gendered(b.network, b.partition, b.attributes, "M");
    REQUIRE(m.edges.size() == 1);  // only b-d is M-M
}

TEST_CASE("gendered rule can also sum weights") {
    auto b = build_network({N("a", "h1", "F"), N("b", "h1", "F"), N("c", "h2", "F")},
                           {E("a", "c", "x", 2.0), E("b", "c", "x", 3.0)});
    auto hh = contract_gendered(b.network, b.partition, b.attributes, "F", true);
    REQUIRE(hh.edges.size() == 1);
    CHECK(hh.edges[0].weight == 5.0);
}

TEST_CASE("gendered rule rejects labels nobody carries") {
    auto b = build_network({N("a", "h1", "F"), N("c", "h2", "F")}, {E("a", "c")});
    CHECK_THROWS_AS(contract_gendered(b.network, b.partition, b.attributes, "X"),
                    ValidationError);
}

TEST_CASE("layered rule restricts to the requested union") {
    auto b = build_network(
        {N("a", "h1"), N("b", "h2"), N("c", "h3")},
        {E("a", "b", "advice"), E("b", "c", "rice"), E("a", "c", "kerosene")});
    auto hh = contract_layered(b.network, b.partition, {"advice", "rice"});
    CHECK(as_edge_set(hh) == oracle::EdgeSet{{"h1", "h2"}, {"h2", "h3"}});
    CHECK(hh.provenance.rule == "layered");
    CHECK(hh.provenance.layers == std::vector<std::string>{"advice", "rice"});
}

TEST_CASE("layered rule rejects unknown and empty selections") {
    auto b = build_network({N("a", "h1"), N("b", "h2")}, {E("a", "b", "advice")});
    CHECK_THROWS_AS(contract_layered(b.network, b.partition, {"gossip"}), ValidationError);
    CHECK_THROWS_AS(contract_layered(b.network, b.partition, {}), ValidationError);
}

TEST_CASE("selecting every layer reproduces the basic rule") {
    Rng rng(21);
    for (int trial = 0; trial < 30; ++trial) {
        auto inst = oracle::random_instance(rng, 9, 0.3, 4, 3);
        auto b = bundle_of(inst);
        auto all = contract_layered(b.network, b.partition, b.network.layer_names());
        auto basic = contract_basic(b.network, b.partition);
        CHECK(as_edge_set(all) == as_edge_set(basic));
    }
}

TEST_CASE("contraction rejects a foreign partition") {
    auto b = build_network({N("a", "h1"), N("b", "h2")}, {E("a", "b")});
    auto other = HouseholdPartition::from_assignment({"x", "y"}, {"h1", "h2"});
    CHECK_THROWS_AS(contract_basic(b.network, other), ValidationError);
}

TEST_CASE("as_network names its single layer after the rule") {
    auto b = build_network({N("a", "h1"), N("b", "h2")}, {E("a", "b")});
    auto view = contract_basic(b.network, b.partition).as_network();
    CHECK(view.node_ids() == std::vector<std::string>{"h1", "h2"});
    CHECK(view.layer_names() == std::vector<std::string>{"basic"});
    REQUIRE(view.edges().size() == 1);
}

TEST_CASE("random instances match the set-comprehension oracles") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        bool directed = trial % 4 == 0;
        auto inst = oracle::random_instance(rng, 12, 0.3, 5, 1 + static_cast<int>(rng.below(3)),
                                            true);
        inst.directed = directed;
        auto b = bundle_of(inst);
        CAPTURE(trial);

        CHECK(as_edge_set(contract_basic(b.network, b.partition)) ==
              oracle::contract_basic(inst));

        CHECK(as_weight_map(contract_weighted(b.network, b.partition)) ==
              oracle::contract_weighted_sum(inst));

        CHECK(as_weight_map(contract_weighted(b.network, b.partition, true)) ==
              oracle::contract_normalized(inst));

        std::string gender = b.attributes.gender[0];
        CHECK(as_edge_set(contract_gendered(b.network, b.partition, b.attributes, gender)) ==
              oracle::contract_basic(inst, nullptr, &gender));
        CHECK(as_weight_map(
                  contract_gendered(b.network, b.partition, b.attributes, gender, true)) ==
              oracle::contract_weighted_sum(inst, &gender));

        if (b.network.layer_names().size() > 1) {
            std::set<std::string> pick = {b.network.layer_names()[0]};
            CHECK(as_edge_set(contract_layered(b.network, b.partition,
                                               {b.network.layer_names()[0]})) ==
                  oracle::contract_basic(inst, &pick));
        }
    }
}

TEST_CASE("person seeds map up to sorted distinct households") {
    auto b = build_network({N("a", "h2"), N("b", "h2"), N("c", "h1")}, {E("a", "c")});
    auto up = map_individuals_to_households({"b", "a", "c"}, b.partition);
    CHECK(up == std::vector<std::string>{"h1", "h2"});
    CHECK_THROWS_AS(map_individuals_to_households({"ghost"}, b.partition), ValidationError);
}

TEST_CASE("household seeds map down by independent member draws") {
    std::vector<NodeRecord> nodes;
    for (int i = 0; i < 8; ++i)
        nodes.push_back(N("p" + std::to_string(i), i < 4 ? "h1" : "h2"));
    auto b = build_network(nodes, {E("p0", "p4")});

    auto all = map_households_to_individuals({"h1"}, b.partition, 1.0, 7);
    CHECK(all == std::vector<std::string>{"p0", "p1", "p2", "p3"});

    auto none = map_households_to_individuals({"h1"}, b.partition, 0.0, 7);
    CHECK(none.empty());

    auto first = map_households_to_individuals({"h1", "h2"}, b.partition, 0.5, 7);
    auto again = map_households_to_individuals({"h2", "h1"}, b.partition, 0.5, 7);
    CHECK(first == again);  // deterministic, order-insensitive

    // different seeds eventually disagree
    bool differs = false;
    for (std::uint64_t s = 8; s < 40 && !differs; ++s)
        differs = map_households_to_individuals({"h1", "h2"}, b.partition, 0.5, s) != first;
    CHECK(differs);

    CHECK_THROWS_AS(map_households_to_individuals({"h9"}, b.partition, 0.5, 7),
                    ValidationError);
    CHECK_THROWS_AS(map_households_to_individuals({"h1"}, b.partition, 1.5, 7),
                    ValidationError);
}

TEST_CASE("empty cross traffic leaves the household network edgeless") {
    auto b = build_network({N("a", "h1"), N("b", "h1")}, {E("a", "b")});
    auto hh = contract_basic(b.network, b.partition);
    CHECK(hh.household_count() == 1);
    CHECK(hh.edges.empty());
}
