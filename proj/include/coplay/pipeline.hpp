#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coplay/centrality.hpp"
#include "coplay/influence.hpp"
#include "coplay/ingest.hpp"
#include "coplay/stats.hpp"
#include "coplay/temporal.hpp"

namespace coplay {

struct RunConfig {
    std::vector<std::string> inputs;
    std::string out_dir;
    Granularity granularity = Granularity::week;  // the analysis default
    int min_weeks = 5;
    double epsilon = 0.1;
    double w0 = 10.0;
    double peak_threshold = 0.5;
    double central_quantile = 0.90;
    std::vector<double> influential_quantiles{0.90, 0.99, 0.999};
    std::uint64_t seed = 42;
    std::size_t exact_paths_limit = 20000;
    int threads = 0;  // 0 = hardware concurrency

    void validate() const;  // throws std::invalid_argument
    /// Quantile whose selection feeds the group comparison: the configured
    /// quantile closest to 0.99.
    double comparison_quantile() const;
};

/// End-to-end result of one pipeline run; also written to out_dir as report
/// files when out_dir is nonempty.
struct PipelineResult {
    SkipReport skip_report;
    std::size_t players_before_filter = 0;
    std::size_t players_retained = 0;
    std::size_t matches_retained = 0;

    GraphSummary summary;
    CentralSelection central;
    std::vector<std::pair<double, InfluentialSelection>> influential;  // per quantile
    ComparisonBattery battery;

    PlayerGraph graph;
    SnapshotSeries series;
    CentralityScores centralities;
    std::vector<NodeInfluence> node_scores;
    std::vector<std::optional<double>> retention;
};

/// ingest -> filter -> static graph -> snapshots -> centralities -> ledger ->
/// node influence -> retention transfer -> group comparison, writing every
/// stage's report under config.out_dir (when set). Deterministic for fixed
/// inputs, seed and any thread count.
PipelineResult run_pipeline(const RunConfig& config);

/// Shared by the pipeline and the analysis subcommands: parse all inputs in
/// order and apply the activity filter.
struct LoadedCorpus {
    std::vector<MatchRecord> records;
    SkipReport skip_report;
    std::size_t players_before_filter = 0;
    std::size_t players_retained = 0;
};
LoadedCorpus load_corpus(const std::vector<std::string>& inputs, int min_weeks);

/// The metric tables the comparison battery consumes, assembled from the
/// analysis outputs.
PlayerMetricTables build_metric_tables(const PlayerGraph& graph, const CentralityScores& scores,
                                       const SnapshotSeries& series,
                                       std::span<const NodeInfluence> node_scores,
                                       std::span<const std::optional<double>> retention);

}  // namespace coplay
