#include "doctest.h"

#include <cmath>

#include "coplay/influence.hpp"
#include "coplay/rng.hpp"
#include "oracles.hpp"

using namespace coplay;

namespace {

constexpr std::int64_t kWeek = 7 * 24 * 3600;

const FeatureScaler kUnitScaler{};  // p95 = 1 everywhere: vectors pass through

ParticipationVector pv(double m, double gap, double secs, double comp) {
    return ParticipationVector{m, gap, secs, comp};
}

MatchRecord coplay_match(std::string id, const std::string& a, const std::string& b,
                         std::int64_t start, std::int64_t seconds_a, std::int64_t seconds_b,
                         const std::string& opponent) {
    MatchRecord r;
    r.match_id = std::move(id);
    r.start_time = start;
    r.duration = std::max(seconds_a, seconds_b);
    r.team_a.push_back({a, seconds_a, true});
    r.team_a.push_back({b, seconds_b, true});
    r.team_b.push_back({opponent, 1, false});
    return r;
}

MatchRecord versus(std::string id, const std::string& a, const std::string& b, std::int64_t start,
                   std::int64_t seconds_a, std::int64_t seconds_b) {
    MatchRecord r;
    r.match_id = std::move(id);
    r.start_time = start;
    r.duration = std::max(seconds_a, seconds_b);
    r.team_a.push_back({a, seconds_a, true});
    r.team_b.push_back({b, seconds_b, false});
    return r;
}

}  // namespace

TEST_CASE("behavior_changed") {
    CHECK_FALSE(behavior_changed(pv(1, 0, 0.5, 1), pv(1, 0, 0.5, 1), kUnitScaler, 0.1));
    // Active -> fully absent is a maximal change for a vector at the cap.
    CHECK(behavior_changed(pv(1, 0, 0, 0), pv(0, 0, 0, 0), kUnitScaler, 0.99));
    // A 1% wiggle in one scaled feature stays below epsilon 0.1.
    CHECK_FALSE(behavior_changed(pv(0.50, 0, 0, 0), pv(0.51, 0, 0, 0), kUnitScaler, 0.1));
}

TEST_CASE("cosine conventions") {
    CHECK(cosine({1, 0, 0, 0}, {1, 0, 0, 0}) == doctest::Approx(1.0));
    CHECK(cosine({1, 0, 0, 0}, {0, 1, 0, 0}) == doctest::Approx(0.0));
    CHECK(cosine({0, 0, 0, 0}, {1, 1, 1, 1}) == doctest::Approx(0.0));  // zero vector rule
}

TEST_CASE("edge_influence") {
    const auto i_vec = pv(1, 0, 0, 0);
    SUBCASE("j converges from orthogonal to identical: +1 credited to i") {
        const auto r = edge_influence(i_vec, i_vec, pv(0, 1, 0, 0), i_vec, kUnitScaler, 0.1);
        CHECK(r.value == doctest::Approx(1.0));
        CHECK(r.credited == Credit::first);
    }
    SUBCASE("neither changed: zero, no credit") {
        const auto r = edge_influence(i_vec, i_vec, pv(0, 1, 0, 0), pv(0, 1, 0, 0), kUnitScaler, 0.1);
        CHECK(r.value == doctest::Approx(0.0));
        CHECK(r.credited == Credit::none);
    }
    SUBCASE("both changed: zero, no credit") {
        const auto r = edge_influence(i_vec, pv(0, 0, 1, 0), pv(0, 1, 0, 0), pv(0, 0, 0, 1),
                                      kUnitScaler, 0.1);
        CHECK(r.credited == Credit::none);
    }
    SUBCASE("j diverges from identical to orthogonal: -1 credited to i") {
        const auto r = edge_influence(i_vec, i_vec, i_vec, pv(0, 1, 0, 0), kUnitScaler, 0.1);
        CHECK(r.value == doctest::Approx(-1.0));
        CHECK(r.credited == Credit::first);
    }
    SUBCASE("symmetric roles: i changing credits j") {
        const auto r = edge_influence(pv(0, 1, 0, 0), i_vec, i_vec, i_vec, kUnitScaler, 0.1);
        CHECK(r.value == doctest::Approx(1.0));
        CHECK(r.credited == Credit::second);
    }
}

TEST_CASE("influence_adjust") {
    CHECK(influence_adjust(0.7, 10, 10.0) == doctest::Approx(0.7));  // saturation at w0
    CHECK(influence_adjust(0.7, 25, 10.0) == doctest::Approx(0.7));  // capped above w0
    CHECK(influence_adjust(0.9, 0, 10.0) == doctest::Approx(0.0));   // no shared match
    CHECK(influence_adjust(0.8, 3, 10.0) ==
          doctest::Approx(0.8 * std::log(4.0) / std::log(11.0)));  // ~0.4625
    CHECK(influence_adjust(0.8, 3, 10.0) == doctest::Approx(0.4625).epsilon(1e-3));
}

TEST_CASE("compute_ledger: two-player convergence produces one positive entry") {
    // Week 0: i and j play on opposite sides with very different playtimes.
    // Week 1: they co-play and j now matches i's profile; i stayed constant.
    std::vector<MatchRecord> records{versus("m0", "i", "j", 0, 600, 30),
                                     coplay_match("m1", "i", "j", kWeek, 600, 600, "z"),
                                     versus("mz", "z", "zz", 10, 600, 600)};
    const auto series = SnapshotSeries::build(records, Granularity::week);
    const auto ledger = compute_ledger(series, 0.1, 10.0);

    const auto ii = *series.index_of("i"), jj = *series.index_of("j");
    double i_total = 0;
    std::size_t ij_entries = 0;
    for (const auto& e : ledger.entries()) {
        if ((e.a == ii && e.b == jj) || (e.a == jj && e.b == ii)) {
            ++ij_entries;
            i_total += EdgeInfluenceLedger::signed_value(e, ii);
        }
    }
    CHECK(ij_entries == 1);
    CHECK(i_total > 0.0);
}

TEST_CASE("compute_ledger: no co-play after the first snapshot means no entries") {
    std::vector<MatchRecord> records{coplay_match("m0", "a", "b", 0, 600, 600, "z"),
                                     versus("m1", "a", "z", kWeek, 600, 600),
                                     versus("m2", "b", "z", kWeek + 10, 30, 600),
                                     versus("m3", "a", "b", 2 * kWeek, 600, 30)};
    const auto series = SnapshotSeries::build(records, Granularity::week);
    const auto ledger = compute_ledger(series, 0.1, 10.0);
    const auto ia = *series.index_of("a"), ib = *series.index_of("b");
    for (const auto& e : ledger.entries()) {
        const bool is_ab = (e.a == ia && e.b == ib) || (e.a == ib && e.b == ia);
        CHECK_FALSE(is_ab);  // the pair only co-played in snapshot 0
    }
}

TEST_CASE("compute_ledger: constant corpus yields an all-zero ledger") {
    std::vector<MatchRecord> records;
    for (int w = 0; w < 4; ++w)
        records.push_back(coplay_match("m" + std::to_string(w), "a", "b", w * kWeek, 600, 300, "z"));
    const auto series = SnapshotSeries::build(records, Granularity::week);
    const auto ledger = compute_ledger(series, 0.1, 10.0);
    CHECK(ledger.size() > 0);
    for (const auto& e : ledger.entries()) CHECK(e.value == doctest::Approx(0.0));
}

TEST_CASE("compute_ledger: fewer than two snapshots is an error") {
    std::vector<MatchRecord> records{coplay_match("m0", "a", "b", 0, 600, 600, "z")};
    const auto series = SnapshotSeries::build(records, Granularity::week);
    CHECK_THROWS_AS(compute_ledger(series, 0.1, 10.0), std::invalid_argument);
}

TEST_CASE("ledger algebra: antisymmetry and bounds on random corpora") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const auto records = oracles::random_records(seed);
        const auto series = SnapshotSeries::build(records, Granularity::week);
        if (series.snapshot_count() < 2) continue;
        const auto ledger = compute_ledger(series, 0.1, 10.0);
        for (const auto& e : ledger.entries()) {
            CHECK(std::abs(e.value) <= 1.0);
            const double from_a = EdgeInfluenceLedger::signed_value(e, e.a);
            const double from_b = EdgeInfluenceLedger::signed_value(e, e.b);
            CHECK(from_a + from_b == 0.0);  // exact antisymmetry
        }
        const auto scores = node_influence(ledger, series);
        for (const auto& s : scores) {
            CHECK(s.influence >= -1.0);
            CHECK(s.influence <= 1.0);
            CHECK(s.edge_sd >= 0.0);
        }
    }
}

TEST_CASE("node_influence: score hits the +1 bound when every entry is +1") {
    // i is active in both snapshots, co-plays only in snapshot 1, so the
    // temporal degree equals the single ledger entry.
    std::vector<MatchRecord> records{versus("m0", "i", "j", 0, 600, 600),
                                     coplay_match("m1", "i", "j", kWeek, 600, 600, "z"),
                                     versus("mz", "z", "w", 5, 1, 1)};
    const auto series = SnapshotSeries::build(records, Granularity::week);
    const auto ii = *series.index_of("i"), jj = *series.index_of("j");
    std::vector<LedgerEntry> entries{{std::min(ii, jj), std::max(ii, jj), 1, ii, 1.0}};
    const auto scores = node_influence(EdgeInfluenceLedger(std::move(entries)), series);
    CHECK(scores[ii].temporal_degree == 1);
    CHECK(scores[ii].influence == doctest::Approx(1.0));
    CHECK(scores[jj].influence == doctest::Approx(-1.0));
}

TEST_CASE("node_influence: all-zero ledger gives all-zero scores") {
    std::vector<MatchRecord> records;
    for (int w = 0; w < 3; ++w)
        records.push_back(coplay_match("m" + std::to_string(w), "a", "b", w * kWeek, 600, 300, "z"));
    const auto series = SnapshotSeries::build(records, Granularity::week);
    const auto scores = node_influence(compute_ledger(series, 0.1, 10.0), series);
    for (const auto& s : scores) {
        CHECK(s.influence == doctest::Approx(0.0));
        CHECK(s.edge_sd == doctest::Approx(0.0));
    }
}

TEST_CASE("node_influence matches the direct nested-loop recomputation") {
    for (std::uint64_t seed = 100; seed < 140; ++seed) {
        const auto records = oracles::random_records(seed);
        const auto series = SnapshotSeries::build(records, Granularity::week);
        if (series.snapshot_count() < 2) continue;
        const auto scores = node_influence(compute_ledger(series, 0.1, 10.0), series);
        const auto expected = oracles::node_influence_direct(series, 0.1, 10.0);
        REQUIRE(scores.size() == expected.size());
        for (std::size_t v = 0; v < scores.size(); ++v)
            CHECK(scores[v].influence == doctest::Approx(expected[v]).epsilon(1e-12));
    }
}

TEST_CASE("ledger and scores are label-invariant") {
    const auto records = oracles::random_records(7);
    auto renamed = records;
    for (auto& r : renamed) {
        for (auto* team : {&r.team_a, &r.team_b})
            for (auto& p : *team) p.player_id = "zz_" + p.player_id;
    }
    const auto s1 = SnapshotSeries::build(records, Granularity::week);
    const auto s2 = SnapshotSeries::build(renamed, Granularity::week);
    const auto n1 = node_influence(compute_ledger(s1, 0.1, 10.0), s1);
    const auto n2 = node_influence(compute_ledger(s2, 0.1, 10.0), s2);
    REQUIRE(s1.player_ids().size() == s2.player_ids().size());
    for (std::size_t v = 0; v < s1.player_ids().size(); ++v) {
        const auto mapped = *s2.index_of("zz_" + s1.player_ids()[v]);
        CHECK(n1[v].influence == doctest::Approx(n2[mapped].influence).epsilon(1e-12));
        CHECK(n1[v].temporal_degree == n2[mapped].temporal_degree);
    }
}

TEST_CASE("planted one-way mimicry: mimicked positive, mimicking negative") {
    // j's playtime tracks i's from the previous week; i is constant.
    std::vector<MatchRecord> records;
    const std::int64_t i_secs = 600;
    std::int64_t j_secs = 30;
    for (int w = 0; w < 6; ++w) {
        records.push_back(coplay_match("m" + std::to_string(w), "i", "j", w * kWeek + 3600,
                                       i_secs, j_secs, "z"));
        j_secs = (j_secs + i_secs) / 2;  // converge toward i
    }
    const auto series = SnapshotSeries::build(records, Granularity::week);
    const auto scores = node_influence(compute_ledger(series, 0.05, 1.0), series);
    const auto ii = *series.index_of("i"), jj = *series.index_of("j");
    CHECK(scores[ii].influence > 0.0);
    CHECK(scores[jj].influence < 0.0);
    CHECK(scores[ii].influence == doctest::Approx(-scores[jj].influence));
}

TEST_CASE("select_influential") {
    const auto records = oracles::random_records(42);
    const auto series = SnapshotSeries::build(records, Granularity::week);
    const auto scores = node_influence(compute_ledger(series, 0.1, 10.0), series);

    SUBCASE("equal scores select everyone") {
        std::vector<NodeInfluence> flat(series.player_ids().size());
        const auto sel = select_influential(series, flat, 0.9);
        CHECK(sel.players.size() == series.player_ids().size());
    }
    SUBCASE("selection shrinks monotonically with the quantile") {
        const auto s90 = select_influential(series, scores, 0.90).players;
        const auto s99 = select_influential(series, scores, 0.99).players;
        const auto s999 = select_influential(series, scores, 0.999).players;
        CHECK(std::includes(s90.begin(), s90.end(), s99.begin(), s99.end()));
        CHECK(std::includes(s99.begin(), s99.end(), s999.begin(), s999.end()));
    }
}

TEST_CASE("retention_transfer") {
    SUBCASE("neighbours leaving together score zero") {
        std::vector<MatchRecord> records;
        for (int w = 0; w < 3; ++w)
            records.push_back(coplay_match("m" + std::to_string(w), "i", "j", w * kWeek, 600, 600,
                                           "z" + std::to_string(w)));
        const auto series = SnapshotSeries::build(records, Granularity::week);
        CHECK(retention_transfer(series, "i") == doctest::Approx(0.0));
    }
    SUBCASE("single neighbour outlasting by 3 snapshots") {
        std::vector<MatchRecord> records{coplay_match("m0", "i", "j", 0, 600, 600, "z")};
        for (int w = 1; w < 4; ++w)
            records.push_back(versus("m" + std::to_string(w), "j", "z", w * kWeek, 600, 600));
        const auto series = SnapshotSeries::build(records, Granularity::week);
        // i last active snapshot 0, j snapshot 3; first contact at 0.
        CHECK(retention_transfer(series, "i") == doctest::Approx(3.0));
        CHECK(retention_transfer(series, "j") == doctest::Approx(3.0));
    }
    SUBCASE("two neighbours average their differences") {
        std::vector<MatchRecord> records{coplay_match("m0", "i", "j", 0, 600, 600, "x"),
                                         coplay_match("m1", "i", "k", 10, 600, 600, "x")};
        for (int w = 1; w <= 2; ++w)
            records.push_back(versus("j" + std::to_string(w), "j", "x", w * kWeek, 600, 600));
        for (int w = 1; w <= 4; ++w)
            records.push_back(versus("k" + std::to_string(w), "k", "x", w * kWeek, 600, 600));
        const auto series = SnapshotSeries::build(records, Granularity::week);
        // Differences vs i (last active 0): j lasts 2 longer, k lasts 4 longer.
        CHECK(retention_transfer(series, "i") == doctest::Approx(3.0));
    }
    SUBCASE("player without neighbours is an error") {
        // "a" and "b" only ever oppose each other.
        std::vector<MatchRecord> records{versus("m0", "a", "b", 0, 60, 60)};
        const auto series = SnapshotSeries::build(records, Granularity::week);
        CHECK_THROWS_AS(retention_transfer(series, "a"), std::invalid_argument);
        CHECK_THROWS_AS(retention_transfer(series, "ghost"), std::invalid_argument);
    }
}
