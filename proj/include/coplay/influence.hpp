#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "coplay/temporal.hpp"

namespace coplay {

/// Feature scaling for behavioural comparison: each participation feature is
/// divided by its corpus-wide 95th percentile (over active player-snapshots)
/// and capped at 1, so no single raw unit dominates the distance or cosine.
struct FeatureScaler {
    std::array<double, 4> p95{1, 1, 1, 1};

    static FeatureScaler from_series(const SnapshotSeries& series);
    std::array<double, 4> scale(const ParticipationVector& v) const;
};

/// Cosine similarity of two nonnegative feature vectors; 0 if either is zero.
double cosine(const std::array<double, 4>& a, const std::array<double, 4>& b);

/// True when the scaled L2 distance between consecutive snapshots of the same
/// player exceeds epsilon. An absent player counts as the zero vector.
bool behavior_changed(const ParticipationVector& prev, const ParticipationVector& curr,
                      const FeatureScaler& scaler, double epsilon = 0.1);

/// Which endpoint an edge-influence value is credited to.
enum class Credit { none, first, second };

struct EdgeInfluenceResult {
    double value = 0;  // change in cosine similarity, in [-1, 1]
    Credit credited = Credit::none;
};

/// Influence flowing on one edge across one snapshot step: when exactly one
/// endpoint changed behaviour, the change in cosine similarity is credited to
/// the endpoint that stayed constant (the one being mimicked); otherwise 0.
EdgeInfluenceResult edge_influence(const ParticipationVector& xi_prev,
                                   const ParticipationVector& xi_curr,
                                   const ParticipationVector& xj_prev,
                                   const ParticipationVector& xj_curr,
                                   const FeatureScaler& scaler, double epsilon = 0.1);

/// Logarithmic weight adjustment: value * min(1, ln(1+w) / ln(1+w0)).
/// A pair with no shared match in the snapshot contributes nothing.
double influence_adjust(double value, std::uint32_t weight_at_t, double w0 = 10.0);

struct LedgerEntry {
    std::uint32_t a = 0, b = 0;  // player indices, a < b
    std::uint32_t snapshot = 0;  // t >= 1; the step is (t-1) -> t
    std::uint32_t credited = 0;  // a or b; for a zero value the orientation is a
    double value = 0;            // signed, credited node's perspective
};

/// Per-edge, per-snapshot influence values. Antisymmetry is structural: one
/// signed value is stored per entry and read from either endpoint's side.
class EdgeInfluenceLedger {
public:
    explicit EdgeInfluenceLedger(std::vector<LedgerEntry> entries)
        : entries_(std::move(entries)) {}

    std::span<const LedgerEntry> entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    /// The entry's value from `player`'s side (negated for the uncredited
    /// endpoint). `player` must be one of the entry's endpoints.
    static double signed_value(const LedgerEntry& e, std::uint32_t player) {
        return player == e.credited ? e.value : -e.value;
    }

private:
    std::vector<LedgerEntry> entries_;
};

/// Runs the edge-influence scoring over every snapshot step and every pair
/// that co-played in the step's snapshot. Requires at least 2 snapshots.
EdgeInfluenceLedger compute_ledger(const SnapshotSeries& series, double epsilon = 0.1,
                                   double w0 = 10.0);

struct NodeInfluence {
    double influence = 0;          // in [-1, 1]
    double edge_sd = 0;            // sd across the node's per-(edge, t) values
    std::uint64_t temporal_degree = 0;  // sum over snapshots of co-play degree
    std::uint64_t entry_count = 0;
};

/// Node influence: summed signed edge influence over the node's entries,
/// divided by the temporal degree (0 when the denominator is 0). Indexed like
/// series.player_ids().
std::vector<NodeInfluence> node_influence(const EdgeInfluenceLedger& ledger,
                                          const SnapshotSeries& series);

struct InfluentialSelection {
    std::set<std::string> players;
    double threshold = 0;
};

/// Players with influence score at or above the quantile threshold.
InfluentialSelection select_influential(const SnapshotSeries& series,
                                        std::span<const NodeInfluence> scores, double quantile);

/// Mean absolute difference between the player's remaining gameplay length
/// and each ever-co-played neighbour's, both measured in snapshots from their
/// first shared snapshot to the respective last active snapshot (inclusive).
/// Throws if the player has no neighbours.
double retention_transfer(const SnapshotSeries& series, std::string_view player);

/// Retention transfer for every player; players with no neighbours get
/// std::nullopt. Indexed like series.player_ids().
std::vector<std::optional<double>> retention_transfer_all(const SnapshotSeries& series);

}  // namespace coplay
