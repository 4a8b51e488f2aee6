#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hhnet/errors.hpp"
#include "hhnet/graph.hpp"

using namespace hhnet;

namespace {

NodeRecord N(std::string p, std::string h, std::string g = "",
             std::vector<std::string> roles = {}) {
    return NodeRecord{std::move(p), std::move(h), std::move(g), std::move(roles)};
}

EdgeRecord E(std::string s, std::string t, std::string layer = "default", double w = 1.0) {
    return EdgeRecord{std::move(s), std::move(t), std::move(layer), w};
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("node ids are sorted into dense indices and edges canonicalized") {
    auto net = IndividualNetwork::from_records({"carol", "alice", "bob"},
                                               {E("carol", "alice"), E("carol", "bob")}, false);
    REQUIRE(net.node_count() == 3);
    CHECK(net.node_id(0) == "alice");
    CHECK(net.node_id(1) == "bob");
    CHECK(net.node_id(2) == "carol");
    CHECK(net.index_of("bob") == 1);
    CHECK(net.index_of("dave") == -1);
    REQUIRE(net.edges().size() == 2);
    // stored with src < dst and sorted
    CHECK(net.edges()[0].src == 0);
    CHECK(net.edges()[0].dst == 2);
    CHECK(net.edges()[1].src == 1);
    CHECK(net.edges()[1].dst == 2);
}

TEST_CASE("directed networks keep edge orientation") {
    auto net = IndividualNetwork::from_records({"a", "b"}, {E("b", "a")}, true);
    REQUIRE(net.edges().size() == 1);
    CHECK(net.edges()[0].src == 1);
    CHECK(net.edges()[0].dst == 0);
    CHECK(net.directed());
}

TEST_CASE("validation aggregates every problem") {
    std::vector<EdgeRecord> edges = {
        E("a", "ghost"),        // unknown endpoint
        E("a", "a"),            // self loop
        E("a", "b"), E("a", "b"),  // duplicate
        E("b", "a", "default", -2.0),  // bad weight
    };
    try {
        IndividualNetwork::from_records({"a", "b", "a"}, edges, false);
        FAIL("expected ValidationError");
    } catch (const ValidationError& err) {
        const auto& issues = err.issues();
        auto has = [&](const char* frag) {
            for (const auto& s : issues)
                if (s.find(frag) != std::string::npos) return true;
            return false;
        };
        CHECK(has("duplicate node id 'a'"));
        CHECK(has("unknown target node"));
        CHECK(has("self-loop"));
        CHECK(has("duplicate edge"));
        CHECK(has("weight must be finite and positive"));
        CHECK(issues.size() >= 5);
    }
}

TEST_CASE("parallel edges live in distinct layers; flatten unions them") {
    auto net = IndividualNetwork::from_records(
        {"a", "b", "c"}, {E("a", "b", "kerosene"), E("a", "b", "advice"), E("b", "c", "advice")},
        false);
    REQUIRE(net.layer_names().size() == 2);
    CHECK(net.layer_index("advice") == 0);
    CHECK(net.layer_index("kerosene") == 1);
    CHECK(net.edges().size() == 3);

    auto flat = net.flatten();
    CHECK(flat.edges().size() == 2);
    CHECK(flat.layer_names() == std::vector<std::string>{"default"});

    auto pairs = net.simple_pairs();
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[0] == std::pair<int, int>{0, 1});
    CHECK(pairs[1] == std::pair<int, int>{1, 2});
    CHECK(net.simple_degrees() == std::vector<int>{1, 2, 1});
}

TEST_CASE("same pair may not repeat within one layer") {
    CHECK_THROWS_AS(IndividualNetwork::from_records(
                        {"a", "b"}, {E("a", "b", "L"), E("b", "a", "L")}, false),
                    ValidationError);
}

TEST_CASE("build_network aligns attributes with sorted node order") {
    auto bundle = build_network({N("p2", "h1", "F", {"head"}), N("p1", "h2", "M")},
                                {E("p1", "p2")});
    CHECK(bundle.network.node_id(0) == "p1");
    CHECK(bundle.attributes.household == std::vector<std::string>{"h2", "h1"});
    CHECK(bundle.attributes.gender == std::vector<std::string>{"M", "F"});
    CHECK(bundle.attributes.gender_categories == std::vector<std::string>{"F", "M"});
    CHECK(bundle.attributes.has_role(1, "head"));
    CHECK_FALSE(bundle.attributes.has_role(0, "head"));

    CHECK(bundle.partition.household_count() == 2);
    CHECK(bundle.partition.household_id(0) == "h1");
    CHECK(bundle.partition.household_of(0) == 1);  // p1 in h2
    CHECK(bundle.partition.sizes() == std::vector<int>{1, 1});
}

TEST_CASE("build_network rejects missing household ids") {
    CHECK_THROWS_AS(build_network({N("p1", ""), N("p2", "h1")}, {E("p1", "p2")}),
                    ValidationError);
}

TEST_CASE("partition members are sorted node indices") {
    auto bundle = build_network(
        {N("d", "h1"), N("a", "h1"), N("c", "h2"), N("b", "h1")}, {E("a", "c")});
    const auto& members = bundle.partition.members();
    REQUIRE(members.size() == 2);
    CHECK(members[0] == std::vector<int>{0, 1, 3});  // a, b, d
    CHECK(members[1] == std::vector<int>{2});
    CHECK(bundle.partition.index_of_household("h2") == 1);
    CHECK(bundle.partition.index_of_household("h9") == -1);
}

TEST_CASE("decompose splits adjacency exactly") {
    auto bundle = build_network(
        {N("a", "h1"), N("b", "h1"), N("c", "h2"), N("d", "h2")},
        {E("a", "b", "x", 2.0), E("a", "c", "x", 1.5), E("c", "d", "y", 3.0), E("b", "d", "y")});
    auto d = decompose(bundle.network, bundle.partition);
    CHECK(d.base.entries.size() == 4);
    CHECK(d.intra.entries.size() == 2);
    CHECK(d.extra.entries.size() == 2);
    CHECK(d.node_ids == bundle.network.node_ids());

    // elementwise reassembly
    std::map<std::pair<int, int>, double> sum;
    for (const auto& e : d.extra.entries) sum[{e.src, e.dst}] += e.weight;
    for (const auto& e : d.intra.entries) sum[{e.src, e.dst}] += e.weight;
    for (const auto& e : d.base.entries) {
        REQUIRE(sum.count({e.src, e.dst}) == 1);
        CHECK(sum[{e.src, e.dst}] == e.weight);
    }
}

TEST_CASE("decompose sums parallel layer weights into one entry") {
    auto bundle = build_network({N("a", "h1"), N("b", "h2")},
                                {E("a", "b", "x", 2.0), E("a", "b", "y", 0.5)});
    auto d = decompose(bundle.network, bundle.partition);
    REQUIRE(d.base.entries.size() == 1);
    CHECK(d.base.entries[0].weight == 2.5);
    CHECK(d.intra.entries.empty());
}

TEST_CASE("decompose rejects a partition over a different node set") {
    auto bundle = build_network({N("a", "h1"), N("b", "h1")}, {E("a", "b")});
    auto other = HouseholdPartition::from_assignment({"x", "y"}, {"h1", "h1"});
    CHECK_THROWS_AS(decompose(bundle.network, other), ValidationError);
}

TEST_CASE("reweight_intra interpolates and drops exact zeros") {
    auto bundle = build_network({N("a", "h1"), N("b", "h1"), N("c", "h2")},
                                {E("a", "b", "d", 2.0), E("b", "c", "d", 1.0)});
    auto d = decompose(bundle.network, bundle.partition);

    auto full = reweight_intra(d, 0.0);
    CHECK(full.entries.size() == 2);

    auto half = reweight_intra(d, 0.5);
    REQUIRE(half.entries.size() == 2);
    for (const auto& e : half.entries) {
        if (e.src == 0 && e.dst == 1) CHECK(e.weight == 1.0);  // intra halved
        if (e.src == 1 && e.dst == 2) CHECK(e.weight == 1.0);  // extra untouched
    }

    auto none = reweight_intra(d, 1.0);
    REQUIRE(none.entries.size() == 1);
    CHECK(none.entries[0].src == 1);
    CHECK(none.entries[0].dst == 2);

    CHECK_THROWS_AS(reweight_intra(d, -0.1), ValidationError);
    CHECK_THROWS_AS(reweight_intra(d, 1.1), ValidationError);
}

TEST_CASE("sparse adjacency expands undirected rows both ways") {
    SparseAdjacency adj;
    adj.n = 3;
    adj.directed = false;
    adj.entries = {{0, 1, 2.0}, {1, 2, 1.0}};
    auto rows = adj.rows();
    CHECK(rows[0] == std::vector<std::pair<int, double>>{{1, 2.0}});
    CHECK(rows[1] == std::vector<std::pair<int, double>>{{0, 2.0}, {2, 1.0}});
    CHECK(rows[2] == std::vector<std::pair<int, double>>{{1, 1.0}});
}

TEST_CASE("connected components order by smallest member") {
    std::vector<std::pair<int, int>> pairs = {{3, 4}, {0, 1}};
    auto comps = connected_components(5, pairs);
    REQUIRE(comps.size() == 3);
    CHECK(comps[0] == std::vector<int>{0, 1});
    CHECK(comps[1] == std::vector<int>{2});
    CHECK(comps[2] == std::vector<int>{3, 4});
}

TEST_CASE("node CSV loader reads genders and role flags") {
    auto path = temp_file("hhnet_nodes_ok.csv",
                          "person_id,household_id,gender,head,buyer\n"
                          "p1,h1,F,1,0\n"
                          "p2,h1,M,,yes\n");
    auto nodes = load_nodes_csv(path.string());
    REQUIRE(nodes.size() == 2);
    CHECK(nodes[0].gender == "F");
    CHECK(nodes[0].roles == std::vector<std::string>{"head"});
    CHECK(nodes[1].roles == std::vector<std::string>{"buyer"});
    std::filesystem::remove(path);
}

TEST_CASE("node CSV loader reports bad rows with line numbers") {
    auto path = temp_file("hhnet_nodes_bad.csv",
                          "person_id,household_id,gender,head\n"
                          "p1,h1,F\n"
                          "p2,h1,M,maybe\n");
    try {
        load_nodes_csv(path.string());
        FAIL("expected ValidationError");
    } catch (const ValidationError& err) {
        REQUIRE(err.issues().size() == 2);
        CHECK(err.issues()[0].find("row 2") != std::string::npos);
        CHECK(err.issues()[1].find("row 3") != std::string::npos);
    }
    std::filesystem::remove(path);
}

TEST_CASE("edge CSV loader applies layer and weight defaults") {
    auto path = temp_file("hhnet_edges_ok.csv",
                          "source,target,layer,weight\n"
                          "p1,p2,advice,2.5\n"
                          "p2,p3,,\n");
    auto edges = load_edges_csv(path.string());
    REQUIRE(edges.size() == 2);
    CHECK(edges[0].layer == "advice");
    CHECK(edges[0].weight == 2.5);
    CHECK(edges[1].layer == "default");
    CHECK(edges[1].weight == 1.0);
    std::filesystem::remove(path);
}

TEST_CASE("edge CSV loader accepts the two-column form") {
    auto path = temp_file("hhnet_edges_two.csv", "source,target\np1,p2\n");
    auto edges = load_edges_csv(path.string());
    REQUIRE(edges.size() == 1);
    CHECK(edges[0].layer == "default");
    std::filesystem::remove(path);
}

TEST_CASE("edge CSV loader rejects unknown headers and bad numbers") {
    auto bad_header = temp_file("hhnet_edges_h.csv", "from,to\np1,p2\n");
    CHECK_THROWS_AS(load_edges_csv(bad_header.string()), ValidationError);
    std::filesystem::remove(bad_header);

    auto bad_weight = temp_file("hhnet_edges_w.csv",
                                "source,target,layer,weight\np1,p2,x,heavy\n");
    try {
        load_edges_csv(bad_weight.string());
        FAIL("expected ValidationError");
    } catch (const ValidationError& err) {
        CHECK(err.issues()[0].find("row 2") != std::string::npos);
        CHECK(err.issues()[0].find("heavy") != std::string::npos);
    }
    std::filesystem::remove(bad_weight);
}

TEST_CASE("missing file raises IoError") {
    CHECK_THROWS_AS(load_edges_csv("/nonexistent/hhnet.csv"), IoError);
}

TEST_CASE("edge CSV writer round-trips through the loader") {
    auto bundle = build_network({N("a", "h1"), N("b", "h2")}, {E("a", "b", "advice", 2.0)});
    std::ostringstream out;
    write_edges_csv(out, bundle.network);
    auto path = temp_file("hhnet_roundtrip.csv", out.str());
    auto edges = load_edges_csv(path.string());
    REQUIRE(edges.size() == 1);
    CHECK(edges[0].source == "a");
    CHECK(edges[0].target == "b");
    CHECK(edges[0].layer == "advice");
    CHECK(edges[0].weight == 2.0);
    std::filesystem::remove(path);
}
