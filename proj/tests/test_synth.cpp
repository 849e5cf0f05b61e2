#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coplay/centrality.hpp"
#include "coplay/graph.hpp"
#include "coplay/influence.hpp"
#include "coplay/ingest.hpp"
#include "coplay/stats.hpp"
#include "coplay/synth.hpp"
#include "coplay/temporal.hpp"

using namespace coplay;

namespace {

SynthConfig small_config() {
    SynthConfig cfg;
    cfg.players = 220;
    cfg.weeks = 12;
    cfg.influencers = 4;
    cfg.followers_per_influencer = 5;
    cfg.hubs = 4;
    cfg.hub_partners_per_week = 20;
    cfg.seed = 9;
    return cfg;
}

std::string corpus_bytes(const SynthResult& r) {
    std::ostringstream out;
    for (const auto& m : r.records) out << serialize_match(m) << "\n";
    return out.str();
}

}  // namespace

TEST_CASE("generate: same seed, byte-identical corpus") {
    const auto cfg = small_config();
    const auto r1 = generate(cfg);
    const auto r2 = generate(cfg);
    CHECK(corpus_bytes(r1) == corpus_bytes(r2));
    CHECK(r1.truth.influencers == r2.truth.influencers);

    auto other = cfg;
    other.seed = 10;
    CHECK(corpus_bytes(generate(other)) != corpus_bytes(r1));
}

TEST_CASE("generate: planted sets are disjoint and sized per config") {
    const auto cfg = small_config();
    const auto r = generate(cfg);
    CHECK(r.truth.influencers.size() == cfg.influencers);
    CHECK(r.truth.followers.size() == cfg.influencers * cfg.followers_per_influencer);
    CHECK(r.truth.hubs.size() == cfg.hubs);
    for (const auto& p : r.truth.influencers) {
        CHECK_FALSE(r.truth.followers.contains(p));
        CHECK_FALSE(r.truth.hubs.contains(p));
    }
    CHECK(r.truth.roles.size() == cfg.players);
}

TEST_CASE("generate: every record is well-formed") {
    const auto r = generate(small_config());
    for (const auto& m : r.records) CHECK_FALSE(validate_match(m).has_value());
}

TEST_CASE("generate: infeasible configs are rejected") {
    auto cfg = small_config();
    cfg.players = 20;  // 4 + 20 + 4 planted does not fit
    CHECK_THROWS_AS(generate(cfg), std::invalid_argument);
    auto bad_rate = small_config();
    bad_rate.mimic_rate = 1.5;
    CHECK_THROWS_AS(generate(bad_rate), std::invalid_argument);
}

TEST_CASE("generate: zero mimicry and zero noise give a near-zero ledger") {
    auto cfg = small_config();
    cfg.mimic_rate = 0.0;
    cfg.behavior_noise = 0.0;
    const auto r = generate(cfg);
    const auto filtered = filter_short_lived_players(r.records, 5);
    const auto series = SnapshotSeries::build(filtered.records, Granularity::week);
    const auto ledger = compute_ledger(series, 0.1, 10.0);
    const auto scores = node_influence(ledger, series);
    // Followers hold their reset profile forever (no convergence); the only
    // residual dynamics are churn exits and reset quantization.
    double max_abs = 0;
    for (const auto& s : scores) max_abs = std::max(max_abs, std::abs(s.influence));
    CHECK(max_abs < 0.05);
}

TEST_CASE("generate: hubs reach the top degree decile, followers score negative") {
    const auto cfg = small_config();
    const auto r = generate(cfg);
    const auto filtered = filter_short_lived_players(r.records, 5);
    const auto graph = PlayerGraph::from_records(filtered.records);

    auto degrees = degree_centrality(graph);
    std::vector<double> sorted(degrees);
    std::sort(sorted.begin(), sorted.end());
    const double q90 = quantile_sorted(sorted, 0.90);
    for (const auto& hub : r.truth.hubs) {
        const auto idx = graph.index_of(hub);
        REQUIRE(idx);
        CHECK(degrees[*idx] >= q90);
    }

    const auto series = SnapshotSeries::build(filtered.records, Granularity::week);
    const auto scores = node_influence(compute_ledger(series, 0.1, 10.0), series);
    for (const auto& follower : r.truth.followers) {
        const auto idx = series.index_of(follower);
        REQUIRE(idx);
        CHECK(scores[*idx].influence < 0.0);
    }
    for (const auto& influencer : r.truth.influencers) {
        const auto idx = series.index_of(influencer);
        REQUIRE(idx);
        CHECK(scores[*idx].influence > 0.0);
    }
}

TEST_CASE("generate: tourists are exactly the players the five-week filter drops") {
    const auto cfg = small_config();
    const auto r = generate(cfg);
    const auto filtered = filter_short_lived_players(r.records, 5);
    const auto expected_tourists = static_cast<std::size_t>(
        std::llround(static_cast<double>(cfg.players) * cfg.tourist_fraction));
    CHECK(cfg.players - filtered.retained.size() == expected_tourists);
    for (const auto& [player, role] : r.truth.roles)
        if (filtered.retained.contains(player))
            CHECK((role == "influencer" || role == "follower" || role == "hub" ||
                   role == "background"));
}

TEST_CASE("evaluate_recovery") {
    const std::set<std::string> planted{"a", "b", "c"};
    SUBCASE("perfect detection") {
        const auto r = evaluate_recovery(planted, planted);
        CHECK(r.precision == doctest::Approx(1.0));
        CHECK(r.recall == doctest::Approx(1.0));
    }
    SUBCASE("no overlap") {
        const auto r = evaluate_recovery({"x", "y"}, planted);
        CHECK(r.precision == doctest::Approx(0.0));
        CHECK(r.recall == doctest::Approx(0.0));
    }
    SUBCASE("one extra detection") {
        std::set<std::string> planted10;
        for (int i = 0; i < 10; ++i) planted10.insert("p" + std::to_string(i));
        auto detected = planted10;
        detected.insert("extra");
        const auto r = evaluate_recovery(detected, planted10);
        CHECK(r.precision == doctest::Approx(10.0 / 11.0));
        CHECK(r.recall == doctest::Approx(1.0));
    }
    SUBCASE("empty planted set is an error") {
        CHECK_THROWS_AS(evaluate_recovery({"a"}, {}), std::invalid_argument);
    }
}
