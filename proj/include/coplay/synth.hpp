#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "coplay/match.hpp"

namespace coplay {

/// Configuration for the synthetic corpus. Planted influencers hold constant
/// behaviour while their followers converge toward them (and periodically
/// reset, so the mimicry keeps happening); hubs co-play once with many fresh
/// random partners each week but couple to nobody's behaviour; background
/// players live in small stable friend groups with noisy but stationary
/// behaviour. Ground truth is returned alongside the matches.
struct SynthConfig {
    std::size_t players = 1000;
    std::size_t weeks = 20;
    std::size_t influencers = 10;
    std::size_t followers_per_influencer = 8;
    std::size_t hubs = 10;
    double mimic_rate = 0.5;      // lambda: per-week fractional convergence
    double behavior_noise = 0.05; // sigma: relative per-feature jitter

    // Co-play structure (matches per active pair per week).
    std::uint32_t follower_coplay_matches = 10;  // follower-influencer, converge weeks
    std::size_t hub_partners_per_week = 30;
    std::size_t group_size = 6;
    double group_coplay_prob = 0.7;  // per group pair per week

    double churn_fraction = 0.25;    // backgrounds that quit before the window ends
    double tourist_fraction = 0.02;  // sub-five-week players, dropped by the filter
    std::uint64_t seed = 42;

    void validate() const;  // throws std::invalid_argument on infeasible configs
};

struct GroundTruth {
    std::set<std::string> influencers;
    std::set<std::string> followers;
    std::set<std::string> hubs;
    std::map<std::string, std::string> roles;  // every player -> influencer|follower|hub|background
};

struct SynthResult {
    std::vector<MatchRecord> records;  // sorted by start time
    GroundTruth truth;
};

/// Deterministic for a fixed config (same seed => byte-identical corpus).
SynthResult generate(const SynthConfig& config);

struct Recovery {
    double precision = 0;
    double recall = 0;
};

Recovery evaluate_recovery(const std::set<std::string>& detected,
                           const std::set<std::string>& planted);

/// 10k players / 48 weeks, tuned to land near 26k static edges.
SynthConfig benchmark_config();

}  // namespace coplay
