#include "coplay/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "coplay/stats.hpp"

namespace coplay {

std::string_view granularity_name(Granularity g) {
    switch (g) {
        case Granularity::day: return "day";
        case Granularity::week: return "week";
        case Granularity::month: return "month";
    }
    return "?";
}

std::optional<Granularity> parse_granularity(std::string_view name) {
    if (name == "day") return Granularity::day;
    if (name == "week") return Granularity::week;
    if (name == "month") return Granularity::month;
    return std::nullopt;
}

const ParticipationVector* Snapshot::find(std::uint32_t player) const {
    auto it = std::lower_bound(players.begin(), players.end(), player,
                               [](const auto& entry, std::uint32_t p) { return entry.first < p; });
    if (it == players.end() || it->first != player) return nullptr;
    return &it->second;
}

std::uint32_t Snapshot::coplay_count(std::uint32_t a, std::uint32_t b) const {
    if (a > b) std::swap(a, b);
    const PlayerPair key{a, b};
    auto it = std::lower_bound(coplay.begin(), coplay.end(), key,
                               [](const auto& entry, const PlayerPair& k) { return entry.first < k; });
    if (it == coplay.end() || it->first != key) return 0;
    return it->second;
}

namespace {

struct PlayerAccum {
    std::vector<std::int64_t> start_times;
    double seconds_sum = 0;
    std::uint32_t completed = 0;
};

ParticipationVector to_vector(PlayerAccum& acc) {
    ParticipationVector v;
    const auto n = acc.start_times.size();
    v.matches_count = static_cast<double>(n);
    if (n >= 2) {
        std::sort(acc.start_times.begin(), acc.start_times.end());
        double gap_sum = 0;
        for (std::size_t i = 1; i < n; ++i)
            gap_sum += static_cast<double>(acc.start_times[i] - acc.start_times[i - 1]);
        v.avg_inter_match_gap = gap_sum / static_cast<double>(n - 1);
    }
    if (n > 0) {
        v.avg_match_seconds = acc.seconds_sum / static_cast<double>(n);
        v.completion_rate = static_cast<double>(acc.completed) / static_cast<double>(n);
    }
    return v;
}

}  // namespace

SnapshotSeries SnapshotSeries::build(std::span<const MatchRecord> records, Granularity g) {
    SnapshotSeries series;
    series.granularity_ = g;
    if (records.empty()) return series;

    std::int64_t t0 = records.front().start_time, t1 = records.front().start_time;
    for (const auto& r : records) {
        t0 = std::min(t0, r.start_time);
        t1 = std::max(t1, r.start_time);
    }
    series.window_start_ = t0;
    const std::int64_t width = granularity_seconds(g);
    const auto snapshot_count = static_cast<std::size_t>((t1 - t0) / width) + 1;

    // Intern players in sorted order so indices are stable across runs.
    for (const auto& r : records)
        for (const auto* team : {&r.team_a, &r.team_b})
            for (const auto& p : *team) series.player_ids_.push_back(p.player_id);
    std::sort(series.player_ids_.begin(), series.player_ids_.end());
    series.player_ids_.erase(std::unique(series.player_ids_.begin(), series.player_ids_.end()),
                             series.player_ids_.end());
    std::unordered_map<std::string_view, std::uint32_t> index;
    index.reserve(series.player_ids_.size());
    for (std::uint32_t i = 0; i < series.player_ids_.size(); ++i)
        index.emplace(series.player_ids_[i], i);

    std::vector<std::unordered_map<std::uint32_t, PlayerAccum>> accums(snapshot_count);
    std::vector<std::unordered_map<std::uint64_t, std::uint32_t>> pair_counts(snapshot_count);
    for (const auto& r : records) {
        const auto t = static_cast<std::size_t>((r.start_time - t0) / width);
        for (const auto* team : {&r.team_a, &r.team_b}) {
            for (const auto& p : *team) {
                auto& acc = accums[t][index.at(p.player_id)];
                acc.start_times.push_back(r.start_time);
                acc.seconds_sum += static_cast<double>(p.seconds_played);
                acc.completed += p.completed ? 1u : 0u;
            }
            for (std::size_t i = 0; i < team->size(); ++i) {
                for (std::size_t j = i + 1; j < team->size(); ++j) {
                    std::uint32_t a = index.at((*team)[i].player_id);
                    std::uint32_t b = index.at((*team)[j].player_id);
                    if (a > b) std::swap(a, b);
                    ++pair_counts[t][(static_cast<std::uint64_t>(a) << 32) | b];
                }
            }
        }
    }

    series.snapshots_.resize(snapshot_count);
    for (std::size_t t = 0; t < snapshot_count; ++t) {
        auto& snap = series.snapshots_[t];
        snap.players.reserve(accums[t].size());
        for (auto& [player, acc] : accums[t]) snap.players.emplace_back(player, to_vector(acc));
        std::sort(snap.players.begin(), snap.players.end(),
                  [](const auto& l, const auto& r) { return l.first < r.first; });
        snap.coplay.reserve(pair_counts[t].size());
        for (const auto& [key, count] : pair_counts[t])
            snap.coplay.emplace_back(
                PlayerPair{static_cast<std::uint32_t>(key >> 32), static_cast<std::uint32_t>(key)},
                count);
        std::sort(snap.coplay.begin(), snap.coplay.end(),
                  [](const auto& l, const auto& r) { return l.first < r.first; });
    }

    series.spans_.assign(series.player_ids_.size(), {snapshot_count, 0});
    for (std::size_t t = 0; t < snapshot_count; ++t) {
        for (const auto& [player, v] : series.snapshots_[t].players) {
            auto& span = series.spans_[player];
            span.first = std::min(span.first, t);
            span.second = std::max(span.second, t);
        }
    }
    return series;
}

std::optional<std::uint32_t> SnapshotSeries::index_of(std::string_view player) const {
    auto it = std::lower_bound(player_ids_.begin(), player_ids_.end(), player);
    if (it == player_ids_.end() || *it != player) return std::nullopt;
    return static_cast<std::uint32_t>(it - player_ids_.begin());
}

std::uint32_t SnapshotSeries::snapshot_degree(std::size_t t, std::uint32_t player) const {
    std::uint32_t deg = 0;
    for (const auto& [pair, count] : snapshots_[t].coplay)
        deg += (pair.first == player || pair.second == player) ? 1u : 0u;
    return deg;
}

std::vector<std::uint32_t> SnapshotSeries::snapshot_degrees(std::size_t t) const {
    std::vector<std::uint32_t> deg(player_ids_.size(), 0);
    for (const auto& [pair, count] : snapshots_[t].coplay) {
        ++deg[pair.first];
        ++deg[pair.second];
    }
    return deg;
}

std::pair<std::size_t, std::size_t> SnapshotSeries::active_span(std::uint32_t player) const {
    return spans_[player];
}

std::vector<double> SnapshotSeries::activity_series(std::uint32_t player) const {
    const auto [first, last] = spans_[player];
    if (first > last) return {};
    std::vector<double> out;
    out.reserve(last - first + 1);
    for (std::size_t t = first; t <= last; ++t) {
        const auto* v = snapshots_[t].find(player);
        out.push_back(v ? v->matches_count : 0.0);
    }
    return out;
}

std::vector<double> SnapshotSeries::activity_series(std::string_view player) const {
    const auto idx = index_of(player);
    if (!idx)
        throw std::invalid_argument("temporal: unknown player '" + std::string(player) + "'");
    return activity_series(*idx);
}

std::size_t count_peaks(std::span<const double> series, double rel_threshold) {
    if (series.size() < 3) return 0;
    double maxv = series[0];
    for (double x : series) maxv = std::max(maxv, x);
    if (maxv <= 0.0) return 0;
    const double jump = rel_threshold * maxv;
    std::size_t peaks = 0;
    for (std::size_t t = 1; t + 1 < series.size(); ++t) {
        const bool is_max = series[t] > series[t - 1] && series[t] > series[t + 1];
        const bool is_min = series[t] < series[t - 1] && series[t] < series[t + 1];
        if ((is_max || is_min) && std::abs(series[t] - series[t - 1]) > jump) ++peaks;
    }
    return peaks;
}

double slope(std::span<const double> series) {
    const auto n = series.size();
    if (n < 2) throw std::invalid_argument("temporal: slope needs at least 2 points");
    const double dn = static_cast<double>(n);
    const double t_mean = (dn - 1.0) / 2.0;
    double x_mean = 0;
    for (double x : series) x_mean += x;
    x_mean /= dn;
    double num = 0, den = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double dt = static_cast<double>(t) - t_mean;
        num += dt * (series[t] - x_mean);
        den += dt * dt;
    }
    return num / den;
}

double rsd(std::span<const double> series) {
    if (series.empty()) throw std::invalid_argument("temporal: RSD of empty series");
    double mean = 0;
    for (double x : series) mean += x;
    mean /= static_cast<double>(series.size());
    if (mean == 0.0) throw std::invalid_argument("temporal: RSD undefined for zero-mean series");
    double ss = 0;
    for (double x : series) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(series.size()));
    return 100.0 * sd / mean;
}

namespace {

DistributionRow distribution_row(std::vector<double> values) {
    DistributionRow row;
    row.n = values.size();
    if (values.empty()) {
        const double nan = std::nan("");
        row.min = row.q25 = row.median = row.q75 = row.max = nan;
        return row;
    }
    std::sort(values.begin(), values.end());
    row.min = values.front();
    row.q25 = quantile_sorted(values, 0.25);
    row.median = quantile_sorted(values, 0.50);
    row.q75 = quantile_sorted(values, 0.75);
    row.max = values.back();
    return row;
}

// The four feature series over the player's active span, zeros for inactive
// snapshots.
std::array<std::vector<double>, 4> feature_series(const SnapshotSeries& series,
                                                  std::uint32_t player) {
    const auto [first, last] = series.active_span(player);
    std::array<std::vector<double>, 4> out;
    for (auto& f : out) f.reserve(last - first + 1);
    for (std::size_t t = first; t <= last; ++t) {
        const auto* v = series.snapshot(t).find(player);
        const auto a = v ? v->as_array() : std::array<double, 4>{};
        for (std::size_t f = 0; f < 4; ++f) out[f].push_back(a[f]);
    }
    return out;
}

}  // namespace

GranularityReport granularity_report(std::span<const MatchRecord> records, double peak_threshold) {
    if (records.empty()) throw std::invalid_argument("temporal: granularity report of empty corpus");

    GranularityReport report;
    for (Granularity g : {Granularity::day, Granularity::week, Granularity::month}) {
        const auto series = SnapshotSeries::build(records, g);
        std::vector<double> peaks, slopes, rsds;
        for (std::uint32_t p = 0; p < series.player_ids().size(); ++p) {
            const auto activity = series.activity_series(p);
            peaks.push_back(static_cast<double>(count_peaks(activity, peak_threshold)));
            if (activity.size() >= 2) slopes.push_back(slope(activity));

            const auto features = feature_series(series, p);
            double rsd_sum = 0;
            std::size_t rsd_n = 0;
            for (const auto& f : features) {
                double mean = 0;
                for (double x : f) mean += x;
                if (mean <= 0.0) continue;  // feature never observed; RSD undefined
                rsd_sum += rsd(f);
                ++rsd_n;
            }
            if (rsd_n > 0) rsds.push_back(rsd_sum / static_cast<double>(rsd_n));
        }
        report.entries.push_back({g, "peaks", distribution_row(std::move(peaks))});
        report.entries.push_back({g, "slope", distribution_row(std::move(slopes))});
        report.entries.push_back({g, "rsd", distribution_row(std::move(rsds))});
    }
    return report;
}

}  // namespace coplay
