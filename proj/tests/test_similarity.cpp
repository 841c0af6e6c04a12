#include <doctest.h>

#include <cmath>

#include "ddikit/similarity.hpp"
#include "oracles.hpp"

using namespace ddikit;

namespace {

// nodes {A,B,C,D}, edges {A-B, A-C, B-C, C-D}
InteractionGraph fixture_g1() {
    InteractionGraph::Builder b;
    b.add_edge("A", "B");
    b.add_edge("A", "C");
    b.add_edge("B", "C");
    b.add_edge("C", "D");
    return b.build();
}

constexpr NodeId A = 0, B = 1, C = 2, D = 3;

}  // namespace

TEST_CASE("common neighbors on the fixture graph") {
    InteractionGraph g = fixture_g1();
    CHECK(common_neighbors(g, A, B) == 1);  // only C
    CHECK(common_neighbors(g, A, D) == 1);  // only C
}

TEST_CASE("common neighbors with an isolated node") {
    InteractionGraph::Builder b;
    b.add_edge("A", "B");
    b.add_node("Z");
    InteractionGraph g = b.build();
    CHECK(common_neighbors(g, *g.find_node("Z"), *g.find_node("A")) == 0);
}

TEST_CASE("average common neighbors") {
    InteractionGraph g = fixture_g1();
    CHECK(avg_common_neighbors(g, A, D) == doctest::Approx(0.75));
    CHECK(avg_common_neighbors(g, D, A) == doctest::Approx(0.75));
}

TEST_CASE("jaccard values and the 0/0 convention") {
    InteractionGraph g = fixture_g1();
    CHECK(jaccard(g, A, B) == doctest::Approx(1.0 / 3.0));
    CHECK(jaccard(g, A, D) == doctest::Approx(0.5));

    InteractionGraph::Builder b;
    b.add_edge("A", "B");
    b.add_node("Y");
    b.add_node("Z");
    InteractionGraph g2 = b.build();
    CHECK(jaccard(g2, *g2.find_node("Y"), *g2.find_node("Z")) == 0.0);
}

TEST_CASE("adamic adar") {
    InteractionGraph g = fixture_g1();
    CHECK(adamic_adar(g, A, D) == doctest::Approx(1.0 / std::log(3.0)));
    CHECK(adamic_adar(g, B, D) == doctest::Approx(1.0 / std::log(3.0)));
    // no common neighbors
    InteractionGraph::Builder b;
    b.add_edge("A", "B");
    b.add_edge("C", "D");
    InteractionGraph g2 = b.build();
    CHECK(adamic_adar(g2, 0, 2) == 0.0);
}

TEST_CASE("katz on the fixture graph") {
    InteractionGraph g = fixture_g1();
    CHECK(katz(g, A, D, 0.1, 3) == doctest::Approx(0.011));
    // b=1 reduces to damped adjacency
    CHECK(katz(g, A, B, 0.1, 1) == doctest::Approx(0.1));
    CHECK(katz(g, A, D, 0.1, 1) == 0.0);
    CHECK_THROWS(katz(g, A, D, 1.5, 3));
    CHECK_THROWS(katz(g, A, D, 0.1, 0));
}

TEST_CASE("katz short walks dominate for small beta") {
    // path graphs: X at distance 2 vs Y at distance 3
    InteractionGraph::Builder b;
    b.add_edge("u", "m1");
    b.add_edge("m1", "x");   // u..x distance 2
    b.add_edge("u", "m2");
    b.add_edge("m2", "m3");
    b.add_edge("m3", "y");   // u..y distance 3
    InteractionGraph g = b.build();
    NodeId u = *g.find_node("u"), x = *g.find_node("x"), y = *g.find_node("y");
    CHECK(katz(g, u, x, 0.01, 3) > katz(g, u, y, 0.01, 3));
}

TEST_CASE("katz truncation consistency") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        InteractionGraph g = oracle::random_graph(8, 0.3, rng);
        for (NodeId u = 0; u < g.node_count(); ++u)
            for (NodeId v = u + 1; v < g.node_count(); ++v)
                CHECK(katz(g, u, v, 0.05, 2) <= katz(g, u, v, 0.05, 3));
    }
}

TEST_CASE("ipf baseline") {
    InteractionGraph g = fixture_g1();
    CHECK(ipf_baseline(g, A, D) == doctest::Approx(0.5));
    CHECK(ipf_baseline(g, D, A) == doctest::Approx(0.5));

    InteractionGraph::Builder b;
    b.add_edge("A", "B");
    b.add_node("Y");
    b.add_node("Z");
    InteractionGraph g2 = b.build();
    // both isolated
    CHECK(ipf_baseline(g2, *g2.find_node("Y"), *g2.find_node("Z")) == 0.0);
    // one isolated: only the other side contributes
    CHECK(ipf_baseline(g2, *g2.find_node("Y"), *g2.find_node("A")) >= 0.0);
}

TEST_CASE("every measure is symmetric on random graphs") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 25; ++trial) {
        InteractionGraph g = oracle::random_graph(9, 0.35, rng);
        for (NodeId u = 0; u < g.node_count(); ++u) {
            for (NodeId v = u + 1; v < g.node_count(); ++v) {
                CHECK(common_neighbors(g, u, v) == common_neighbors(g, v, u));
                CHECK(avg_common_neighbors(g, u, v) ==
                      avg_common_neighbors(g, v, u));
                CHECK(jaccard(g, u, v) == jaccard(g, v, u));
                CHECK(avg_jaccard(g, u, v) == avg_jaccard(g, v, u));
                CHECK(adamic_adar(g, u, v) == adamic_adar(g, v, u));
                CHECK(katz(g, u, v, 0.05, 3) ==
                      doctest::Approx(katz(g, v, u, 0.05, 3)).epsilon(1e-12));
                CHECK(ipf_baseline(g, u, v) == ipf_baseline(g, v, u));
            }
        }
    }
}

TEST_CASE("adding a shared edge never decreases common neighbors") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        InteractionGraph g = oracle::random_graph(8, 0.3, rng);
        // pick u,v,w with edge (v,w) and no edge (u,w); add (u,w)
        for (NodeId u = 0; u < g.node_count(); ++u) {
            for (NodeId v = 0; v < g.node_count(); ++v) {
                if (u == v) continue;
                for (NodeId w : g.neighbors(v)) {
                    if (w == u || g.has_edge(u, w)) continue;
                    double before = common_neighbors(g, u, v);
                    InteractionGraph::Builder b;
                    for (const auto& name : g.node_names()) b.add_node(name);
                    for (const NodePair& e : g.edges()) b.add_edge_ids(e.a, e.b);
                    b.add_edge_ids(u, w);
                    InteractionGraph g2 = b.build();
                    CHECK(common_neighbors(g2, u, v) >= before);
                }
            }
        }
    }
}

TEST_CASE("score_all matches per-pair calls and preserves order") {
    InteractionGraph g = fixture_g1();
    std::vector<NodePair> pairs{{A, D}, {A, D}, {B, D}, {A, B}};
    auto scores = score_all(g, Measure::CommonNeighbors, pairs);
    REQUIRE(scores.size() == 4);
    CHECK(scores[0] == scores[1]);  // duplicate pairs score identically
    for (std::size_t i = 0; i < pairs.size(); ++i)
        CHECK(scores[i] == common_neighbors(g, pairs[i].a, pairs[i].b));

    auto empty = score_all(g, Measure::Katz, std::vector<NodePair>{});
    CHECK(empty.empty());

    auto katz_scores = score_all(g, Measure::Katz, pairs, {0.1, 3}, 2);
    for (std::size_t i = 0; i < pairs.size(); ++i)
        CHECK(katz_scores[i] ==
              doctest::Approx(katz(g, pairs[i].a, pairs[i].b, 0.1, 3)));
    CHECK_THROWS(measure_from_name("nope"));
}
