#include "coplay/influence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

#include "coplay/stats.hpp"

namespace coplay {

FeatureScaler FeatureScaler::from_series(const SnapshotSeries& series) {
    std::array<std::vector<double>, 4> samples;
    for (std::size_t t = 0; t < series.snapshot_count(); ++t) {
        for (const auto& [player, v] : series.snapshot(t).players) {
            const auto a = v.as_array();
            for (std::size_t f = 0; f < 4; ++f) samples[f].push_back(a[f]);
        }
    }
    FeatureScaler scaler;
    for (std::size_t f = 0; f < 4; ++f) {
        if (samples[f].empty()) continue;
        std::sort(samples[f].begin(), samples[f].end());
        const double p95 = quantile_sorted(samples[f], 0.95);
        scaler.p95[f] = p95 > 0.0 ? p95 : 1.0;
    }
    return scaler;
}

std::array<double, 4> FeatureScaler::scale(const ParticipationVector& v) const {
    const auto raw = v.as_array();
    std::array<double, 4> out{};
    for (std::size_t f = 0; f < 4; ++f) out[f] = std::min(1.0, raw[f] / p95[f]);
    return out;
}

double cosine(const std::array<double, 4>& a, const std::array<double, 4>& b) {
    double dot = 0, na = 0, nb = 0;
    for (std::size_t f = 0; f < 4; ++f) {
        dot += a[f] * b[f];
        na += a[f] * a[f];
        nb += b[f] * b[f];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / std::sqrt(na * nb);
}

bool behavior_changed(const ParticipationVector& prev, const ParticipationVector& curr,
                      const FeatureScaler& scaler, double epsilon) {
    const auto p = scaler.scale(prev);
    const auto c = scaler.scale(curr);
    double d2 = 0;
    for (std::size_t f = 0; f < 4; ++f) d2 += (c[f] - p[f]) * (c[f] - p[f]);
    return std::sqrt(d2) > epsilon;
}

EdgeInfluenceResult edge_influence(const ParticipationVector& xi_prev,
                                   const ParticipationVector& xi_curr,
                                   const ParticipationVector& xj_prev,
                                   const ParticipationVector& xj_curr,
                                   const FeatureScaler& scaler, double epsilon) {
    const bool ci = behavior_changed(xi_prev, xi_curr, scaler, epsilon);
    const bool cj = behavior_changed(xj_prev, xj_curr, scaler, epsilon);
    if (ci == cj) return {};  // neither or both changed: no influence attributable

    EdgeInfluenceResult r;
    r.value = cosine(scaler.scale(xi_curr), scaler.scale(xj_curr)) -
              cosine(scaler.scale(xi_prev), scaler.scale(xj_prev));
    r.credited = ci ? Credit::second : Credit::first;  // credit the constant node
    return r;
}

double influence_adjust(double value, std::uint32_t weight_at_t, double w0) {
    if (weight_at_t == 0) return 0.0;
    const double factor =
        std::min(1.0, std::log1p(static_cast<double>(weight_at_t)) / std::log1p(w0));
    return value * factor;
}

EdgeInfluenceLedger compute_ledger(const SnapshotSeries& series, double epsilon, double w0) {
    const std::size_t k = series.snapshot_count();
    if (k < 2)
        throw std::invalid_argument(
            "influence: need at least 2 snapshots to score influence");

    const auto scaler = FeatureScaler::from_series(series);
    static const ParticipationVector kAbsent{};

    std::vector<LedgerEntry> entries;
    for (std::size_t t = 1; t < k; ++t) {
        const auto& snap = series.snapshot(t);
        const auto& prev = series.snapshot(t - 1);
        for (const auto& [pair, weight] : snap.coplay) {
            const auto [a, b] = pair;
            const auto* a_prev = prev.find(a);
            const auto* a_curr = snap.find(a);
            const auto* b_prev = prev.find(b);
            const auto* b_curr = snap.find(b);
            const auto r = edge_influence(a_prev ? *a_prev : kAbsent, a_curr ? *a_curr : kAbsent,
                                          b_prev ? *b_prev : kAbsent, b_curr ? *b_curr : kAbsent,
                                          scaler, epsilon);
            LedgerEntry e;
            e.a = a;
            e.b = b;
            e.snapshot = static_cast<std::uint32_t>(t);
            e.credited = r.credited == Credit::second ? b : a;
            e.value = r.credited == Credit::none ? 0.0 : influence_adjust(r.value, weight, w0);
            entries.push_back(e);
        }
    }
    return EdgeInfluenceLedger(std::move(entries));
}

std::vector<NodeInfluence> node_influence(const EdgeInfluenceLedger& ledger,
                                          const SnapshotSeries& series) {
    const std::size_t n = series.player_ids().size();
    std::vector<NodeInfluence> out(n);
    std::vector<double> sum(n, 0.0), sumsq(n, 0.0);

    for (const auto& e : ledger.entries()) {
        for (const auto v : {e.a, e.b}) {
            const double signed_v = EdgeInfluenceLedger::signed_value(e, v);
            sum[v] += signed_v;
            sumsq[v] += signed_v * signed_v;
            ++out[v].entry_count;
        }
    }
    for (std::size_t t = 0; t < series.snapshot_count(); ++t) {
        const auto deg = series.snapshot_degrees(t);
        for (std::size_t v = 0; v < n; ++v) out[v].temporal_degree += deg[v];
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (out[v].temporal_degree > 0)
            out[v].influence = sum[v] / static_cast<double>(out[v].temporal_degree);
        if (out[v].entry_count > 0) {
            const double m = sum[v] / static_cast<double>(out[v].entry_count);
            const double var = sumsq[v] / static_cast<double>(out[v].entry_count) - m * m;
            out[v].edge_sd = std::sqrt(std::max(0.0, var));
        }
    }
    return out;
}

InfluentialSelection select_influential(const SnapshotSeries& series,
                                        std::span<const NodeInfluence> scores, double quantile) {
    if (scores.empty()) throw std::invalid_argument("influence: no scores to select from");
    if (quantile <= 0.0 || quantile >= 1.0)
        throw std::invalid_argument("influence: quantile must be in (0,1)");

    std::vector<double> values(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) values[i] = scores[i].influence;
    std::sort(values.begin(), values.end());

    InfluentialSelection sel;
    sel.threshold = quantile_sorted(values, quantile);
    for (std::size_t i = 0; i < scores.size(); ++i)
        if (scores[i].influence >= sel.threshold) sel.players.insert(series.player_ids()[i]);
    return sel;
}

namespace {

// First snapshot in which each pair co-played.
std::unordered_map<std::uint64_t, std::size_t> first_contacts(const SnapshotSeries& series) {
    std::unordered_map<std::uint64_t, std::size_t> first;
    for (std::size_t t = 0; t < series.snapshot_count(); ++t)
        for (const auto& [pair, w] : series.snapshot(t).coplay)
            first.try_emplace((static_cast<std::uint64_t>(pair.first) << 32) | pair.second, t);
    return first;
}

}  // namespace

std::vector<std::optional<double>> retention_transfer_all(const SnapshotSeries& series) {
    const std::size_t n = series.player_ids().size();
    std::vector<std::optional<double>> out(n);
    if (n == 0) return out;

    const auto first = first_contacts(series);
    std::vector<double> acc(n, 0.0);
    std::vector<std::uint32_t> neighbor_count(n, 0);
    for (const auto& [key, t] : first) {
        const auto a = static_cast<std::uint32_t>(key >> 32);
        const auto b = static_cast<std::uint32_t>(key);
        const double len_a = static_cast<double>(series.active_span(a).second - t + 1);
        const double len_b = static_cast<double>(series.active_span(b).second - t + 1);
        const double diff = std::abs(len_a - len_b);
        acc[a] += diff;
        acc[b] += diff;
        ++neighbor_count[a];
        ++neighbor_count[b];
    }
    for (std::size_t v = 0; v < n; ++v)
        if (neighbor_count[v] > 0) out[v] = acc[v] / static_cast<double>(neighbor_count[v]);
    return out;
}

double retention_transfer(const SnapshotSeries& series, std::string_view player) {
    const auto idx = series.index_of(player);
    if (!idx)
        throw std::invalid_argument("influence: unknown player '" + std::string(player) + "'");
    const auto all = retention_transfer_all(series);
    if (!all[*idx])
        throw std::invalid_argument("influence: retention transfer undefined for '" +
                                    std::string(player) + "' (no co-play neighbours)");
    return *all[*idx];
}

}  // namespace coplay
