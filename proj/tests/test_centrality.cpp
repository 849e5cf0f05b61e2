#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coplay/centrality.hpp"
#include "coplay/rng.hpp"
#include "oracles.hpp"

using namespace coplay;

namespace {

PlayerGraph path3() { return PlayerGraph::from_edges(3, {{{0, 1}, {1, 2}}}); }

PlayerGraph cycle(std::size_t n) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return PlayerGraph::from_edges(n, edges);
}

PlayerGraph star(std::size_t leaves) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
    return PlayerGraph::from_edges(leaves + 1, edges);
}

PlayerGraph complete(std::size_t n) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return PlayerGraph::from_edges(n, edges);
}

}  // namespace

TEST_CASE("degree: isolated node, star center, triangle") {
    const auto iso = PlayerGraph::from_edges(1, {});
    CHECK(degree_centrality(iso)[0] == doctest::Approx(0));
    const auto st = star(5);
    CHECK(degree_centrality(st)[0] == doctest::Approx(5));
    for (const auto d : degree_centrality(complete(3))) CHECK(d == doctest::Approx(2));
}

TEST_CASE("closeness: complete graph, path ends, components") {
    for (const auto c : closeness_centrality(complete(3))) CHECK(c == doctest::Approx(1.0));

    const auto p = closeness_centrality(path3());
    CHECK(p[1] == doctest::Approx(1.0));
    CHECK(p[0] == doctest::Approx(2.0 / 3.0));
    CHECK(p[2] == doctest::Approx(2.0 / 3.0));

    // Two components: scores computed within components, scaled by reach.
    const auto g = PlayerGraph::from_edges(5, {{{0, 1}, {2, 3}, {3, 4}}});
    const auto c = closeness_centrality(g);
    CHECK(c[0] == doctest::Approx((1.0 / 4.0) * (1.0 / 1.0)));
    CHECK(c[3] == doctest::Approx((2.0 / 4.0) * (2.0 / 2.0)));
}

TEST_CASE("betweenness: path middle, cycle C4, complete graph") {
    const auto p = betweenness_centrality(path3());
    CHECK(p[1] == doctest::Approx(1.0));
    CHECK(p[0] == doctest::Approx(0.0));

    for (const auto b : betweenness_centrality(cycle(4))) CHECK(b == doctest::Approx(0.5));
    for (const auto b : betweenness_centrality(complete(5))) CHECK(b == doctest::Approx(0.0));
}

TEST_CASE("eigenvector: cycle is uniform, star center dominates, path shape") {
    for (const auto e : eigenvector_centrality(cycle(6))) CHECK(e == doctest::Approx(1.0));

    const auto st = eigenvector_centrality(star(4));
    for (std::size_t leaf = 1; leaf <= 4; ++leaf) CHECK(st[0] > st[leaf]);

    const auto p = eigenvector_centrality(path3());
    CHECK(p[1] == doctest::Approx(1.0));
    CHECK(p[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));
    CHECK(p[2] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-6));

    CHECK_THROWS_AS(eigenvector_centrality(PlayerGraph::from_edges(0, {})),
                    std::invalid_argument);
}

TEST_CASE("pagerank: triangle, isolated pair, 4-node star fixed point") {
    for (const auto s : pagerank(complete(3))) CHECK(s == doctest::Approx(1.0 / 3.0));

    const auto iso = pagerank(PlayerGraph::from_edges(2, {}));
    CHECK(iso[0] == doctest::Approx(0.5));
    CHECK(iso[1] == doctest::Approx(0.5));

    // Star with 3 leaves: solve the 2-unknown fixed point directly.
    //   c = (1-d)/4 + d * 3l,  l = (1-d)/4 + d * c / 3.
    const double d = 0.85;
    const double base = (1.0 - d) / 4.0;
    const double center = (base + 3.0 * d * base) / (1.0 - d * d);
    const double leaf = base + d * center / 3.0;
    const auto pr = pagerank(star(3));
    CHECK(pr[0] == doctest::Approx(center).epsilon(1e-6));
    CHECK(pr[1] == doctest::Approx(leaf).epsilon(1e-6));
    CHECK(pr[0] > pr[1]);
    CHECK(std::accumulate(pr.begin(), pr.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("all five measures match the brute-force oracles on random graphs") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto g = oracles::random_graph(seed);
        CAPTURE(seed);
        CAPTURE(g.node_count());

        const auto deg = degree_centrality(g);
        for (std::uint32_t v = 0; v < g.node_count(); ++v)
            CHECK(deg[v] == doctest::Approx(g.degree(v)));

        const auto clo = closeness_centrality(g);
        const auto clo_ref = oracles::closeness(g);
        const auto bet = betweenness_centrality(g);
        const auto bet_ref = oracles::betweenness(g);
        const auto eig = eigenvector_centrality(g);
        const auto eig_ref = oracles::eigenvector(g);
        const auto pr = pagerank(g);
        const auto pr_ref = oracles::pagerank(g);
        for (std::uint32_t v = 0; v < g.node_count(); ++v) {
            CHECK(clo[v] == doctest::Approx(clo_ref[v]).epsilon(1e-6));
            CHECK(bet[v] == doctest::Approx(bet_ref[v]).epsilon(1e-6));
            CHECK(std::abs(eig[v] - eig_ref[v]) < 1e-6);
            CHECK(std::abs(pr[v] - pr_ref[v]) < 1e-6);
        }
    }
}

TEST_CASE("scores are label-invariant") {
    Rng rng(404);
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const auto g = oracles::random_graph(seed);
        const auto n = static_cast<std::uint32_t>(g.node_count());
        std::vector<std::uint32_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0u);
        rng.shuffle(perm);
        std::vector<std::pair<std::uint32_t, std::uint32_t>> relabelled;
        for (const auto& e : g.edges()) relabelled.emplace_back(perm[e.a], perm[e.b]);
        const auto h = PlayerGraph::from_edges(n, relabelled);

        const auto sg = all_centralities(g);
        const auto sh = all_centralities(h);
        for (std::uint32_t v = 0; v < n; ++v) {
            CHECK(sg.degree[v] == doctest::Approx(sh.degree[perm[v]]));
            CHECK(sg.closeness[v] == doctest::Approx(sh.closeness[perm[v]]).epsilon(1e-9));
            CHECK(sg.betweenness[v] == doctest::Approx(sh.betweenness[perm[v]]).epsilon(1e-9));
            CHECK(std::abs(sg.eigenvector[v] - sh.eigenvector[perm[v]]) < 1e-6);
            CHECK(std::abs(sg.pagerank[v] - sh.pagerank[perm[v]]) < 1e-9);
        }
    }
}

TEST_CASE("pagerank sums to one and everything is nonnegative") {
    for (std::uint64_t seed = 200; seed < 230; ++seed) {
        const auto g = oracles::random_graph(seed);
        const auto s = all_centralities(g);
        const double sum = std::accumulate(s.pagerank.begin(), s.pagerank.end(), 0.0);
        CHECK(std::abs(sum - 1.0) < 1e-9);
        for (std::uint32_t v = 0; v < g.node_count(); ++v) {
            CHECK(s.degree[v] >= 0);
            CHECK(s.closeness[v] >= 0);
            CHECK(s.betweenness[v] >= -1e-12);
            CHECK(s.eigenvector[v] >= -1e-12);
            CHECK(s.pagerank[v] >= 0);
        }
    }
}

TEST_CASE("select_central_players") {
    SUBCASE("identical scores select everyone") {
        const auto g = cycle(6);  // vertex-transitive: every measure is constant
        const auto sel = select_central_players(g, all_centralities(g), 0.9);
        CHECK(sel.players.size() == 6);
    }
    SUBCASE("planted hub beats every threshold") {
        // A hub wired to every node of a sparse ring.
        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
        const std::uint32_t n = 20;
        for (std::uint32_t i = 1; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
        for (std::uint32_t i = 1; i < n; ++i) edges.emplace_back(0, i);
        const auto g = PlayerGraph::from_edges(n, edges);
        const auto sel = select_central_players(g, all_centralities(g), 0.9);
        CHECK(sel.players.contains(g.players()[0]));
    }
    SUBCASE("monotone in the quantile") {
        for (std::uint64_t seed = 300; seed < 310; ++seed) {
            const auto g = oracles::random_graph(seed);
            const auto scores = all_centralities(g);
            const auto s80 = select_central_players(g, scores, 0.80).players;
            const auto s90 = select_central_players(g, scores, 0.90).players;
            const auto s99 = select_central_players(g, scores, 0.99).players;
            CHECK(std::includes(s80.begin(), s80.end(), s90.begin(), s90.end()));
            CHECK(std::includes(s90.begin(), s90.end(), s99.begin(), s99.end()));
        }
    }
    SUBCASE("disjoint per-measure maxima give an empty intersection") {
        // Build scores by hand: each measure's unique maximum sits on a
        // different node.
        const auto g = complete(5);  // graph only supplies the node ids
        CentralityScores s;
        const std::size_t n = 5;
        s.degree = s.closeness = s.betweenness = s.eigenvector = s.pagerank =
            std::vector<double>(n, 0.0);
        s.degree[0] = 1;
        s.closeness[1] = 1;
        s.betweenness[2] = 1;
        s.eigenvector[3] = 1;
        s.pagerank[4] = 1;
        const auto sel = select_central_players(g, s, 0.999);
        CHECK(sel.players.empty());
    }
    SUBCASE("quantile bounds are enforced") {
        const auto g = complete(3);
        const auto scores = all_centralities(g);
        CHECK_THROWS_AS(select_central_players(g, scores, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(select_central_players(g, scores, 1.0), std::invalid_argument);
    }
}
