#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coplay/match.hpp"

namespace coplay {

enum class Granularity { day, week, month };

constexpr std::int64_t granularity_seconds(Granularity g) {
    switch (g) {
        case Granularity::day: return 24 * 3600;
        case Granularity::week: return 7 * 24 * 3600;
        case Granularity::month: return 28 * 24 * 3600;  // a month is exactly four weeks
    }
    return 0;
}

std::string_view granularity_name(Granularity g);
std::optional<Granularity> parse_granularity(std::string_view name);

/// Per-player behavioural features within one snapshot.
struct ParticipationVector {
    double matches_count = 0;
    double avg_inter_match_gap = 0;  // seconds; 0 with fewer than 2 matches
    double avg_match_seconds = 0;
    double completion_rate = 0;  // in [0, 1]

    std::array<double, 4> as_array() const {
        return {matches_count, avg_inter_match_gap, avg_match_seconds, completion_rate};
    }
    bool operator==(const ParticipationVector&) const = default;
};

using PlayerPair = std::pair<std::uint32_t, std::uint32_t>;  // always first < second

struct Snapshot {
    // Both sorted ascending, for binary search and deterministic iteration.
    std::vector<std::pair<std::uint32_t, ParticipationVector>> players;
    std::vector<std::pair<PlayerPair, std::uint32_t>> coplay;  // pair -> shared matches

    const ParticipationVector* find(std::uint32_t player) const;
    std::uint32_t coplay_count(std::uint32_t a, std::uint32_t b) const;
};

/// The corpus discretized into fixed-width snapshots tiling the observation
/// window. Players are interned; indices are positions in player_ids().
class SnapshotSeries {
public:
    static SnapshotSeries build(std::span<const MatchRecord> records, Granularity g);

    Granularity granularity() const { return granularity_; }
    std::int64_t window_start() const { return window_start_; }
    std::size_t snapshot_count() const { return snapshots_.size(); }
    const Snapshot& snapshot(std::size_t t) const { return snapshots_[t]; }
    const std::vector<std::string>& player_ids() const { return player_ids_; }
    std::optional<std::uint32_t> index_of(std::string_view player) const;

    /// Distinct co-play partners of the player in snapshot t.
    std::uint32_t snapshot_degree(std::size_t t, std::uint32_t player) const;
    /// Co-play degree of every player in snapshot t, in one pass.
    std::vector<std::uint32_t> snapshot_degrees(std::size_t t) const;
    /// First and last snapshot with at least one match for the player.
    std::pair<std::size_t, std::size_t> active_span(std::uint32_t player) const;

    /// Matches per snapshot, zeros included, trimmed to the active span.
    std::vector<double> activity_series(std::uint32_t player) const;
    std::vector<double> activity_series(std::string_view player) const;  // throws if unknown

private:
    Granularity granularity_ = Granularity::week;
    std::int64_t window_start_ = 0;
    std::vector<std::string> player_ids_;
    std::vector<Snapshot> snapshots_;
    std::vector<std::pair<std::size_t, std::size_t>> spans_;  // per player
};

/// Interior local extrema whose jump from the previous point exceeds
/// rel_threshold * max(series). An all-zero or shorter-than-3 series has none.
std::size_t count_peaks(std::span<const double> series, double rel_threshold = 0.5);

/// Ordinary least-squares slope of value against snapshot index.
double slope(std::span<const double> series);  // throws when length < 2

/// Relative standard deviation, percent: 100 * population sd / mean.
double rsd(std::span<const double> series);  // throws when the mean is 0

struct DistributionRow {
    double min = 0, q25 = 0, median = 0, q75 = 0, max = 0;
    std::size_t n = 0;
};

/// Per-granularity distributions of the per-player stability diagnostics.
struct GranularityReport {
    struct Entry {
        Granularity granularity;
        std::string metric;  // "peaks", "slope", "rsd"
        DistributionRow row;
    };
    std::vector<Entry> entries;  // day/week/month x peaks/slope/rsd, in that order
};

/// Stability diagnostics at all three granularities. Peaks use the relative
/// threshold; slopes cover players with a span of at least two snapshots; RSD
/// is the per-player average over the four participation features (features
/// with zero mean are skipped).
GranularityReport granularity_report(std::span<const MatchRecord> records,
                                     double peak_threshold = 0.5);

}  // namespace coplay
