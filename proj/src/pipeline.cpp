#include "coplay/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "coplay/report.hpp"

namespace coplay {

namespace fs = std::filesystem;

void RunConfig::validate() const {
    auto check_quantile = [](double q, const char* name) {
        if (q <= 0.0 || q >= 1.0)
            throw std::invalid_argument(std::string("config: ") + name + " must be in (0,1)");
    };
    check_quantile(central_quantile, "central quantile");
    if (influential_quantiles.empty())
        throw std::invalid_argument("config: need at least one influential quantile");
    for (double q : influential_quantiles) check_quantile(q, "influential quantile");
    if (epsilon < 0.0) throw std::invalid_argument("config: epsilon must be >= 0");
    if (w0 <= 0.0) throw std::invalid_argument("config: w0 must be > 0");
    if (peak_threshold < 0.0) throw std::invalid_argument("config: peak threshold must be >= 0");
    if (min_weeks < 1) throw std::invalid_argument("config: min weeks must be >= 1");
}

double RunConfig::comparison_quantile() const {
    double best = influential_quantiles.front();
    for (double q : influential_quantiles)
        if (std::abs(q - 0.99) < std::abs(best - 0.99)) best = q;
    return best;
}

LoadedCorpus load_corpus(const std::vector<std::string>& inputs, int min_weeks) {
    if (inputs.empty()) throw std::invalid_argument("config: no input files given");
    LoadedCorpus corpus;
    std::vector<MatchRecord> records;
    for (const auto& path : inputs) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("ingest: cannot open input '" + path + "'");
        auto parsed = parse_match_log(in);
        corpus.skip_report.lines_read += parsed.report.lines_read;
        corpus.skip_report.skipped += parsed.report.skipped;
        for (auto& d : parsed.report.details)
            if (corpus.skip_report.details.size() < SkipReport::kMaxDetails)
                corpus.skip_report.details.push_back(std::move(d));
        records.insert(records.end(), std::make_move_iterator(parsed.records.begin()),
                       std::make_move_iterator(parsed.records.end()));
    }
    corpus.skip_report.records_ok = records.size();

    auto filtered = filter_short_lived_players(std::move(records), min_weeks);
    corpus.players_before_filter = filtered.retained.size() + filtered.players_dropped;
    corpus.players_retained = filtered.retained.size();
    corpus.records = std::move(filtered.records);
    return corpus;
}

PlayerMetricTables build_metric_tables(const PlayerGraph& graph, const CentralityScores& scores,
                                       const SnapshotSeries& series,
                                       std::span<const NodeInfluence> node_scores,
                                       std::span<const std::optional<double>> retention) {
    PlayerMetricTables tables;
    for (std::uint32_t v = 0; v < graph.node_count(); ++v) {
        const auto& id = graph.players()[v];
        tables.degree.emplace(id, scores.degree[v]);
        tables.closeness.emplace(id, scores.closeness[v]);
        tables.betweenness.emplace(id, scores.betweenness[v]);
        tables.eigenvector.emplace(id, scores.eigenvector[v]);
        tables.pagerank.emplace(id, scores.pagerank[v]);
        tables.weighted_degree.emplace(id, static_cast<double>(graph.weighted_degree(v)));
    }
    const auto& ids = series.player_ids();
    for (std::size_t v = 0; v < ids.size(); ++v) {
        tables.influence.emplace(ids[v], node_scores[v].influence);
        tables.edge_influence_sd.emplace(ids[v], node_scores[v].edge_sd);
        if (retention[v]) tables.retention_transfer.emplace(ids[v], *retention[v]);
    }
    return tables;
}

namespace {

template <typename Fn>
void write_file(const fs::path& path, Fn&& fn) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("report: cannot write '" + path.string() + "'");
    fn(out);
}

}  // namespace

PipelineResult run_pipeline(const RunConfig& config) {
    config.validate();

    PipelineResult result;
    auto corpus = load_corpus(config.inputs, config.min_weeks);
    result.skip_report = corpus.skip_report;
    result.players_before_filter = corpus.players_before_filter;
    result.players_retained = corpus.players_retained;
    result.matches_retained = corpus.records.size();

    result.graph = PlayerGraph::from_records(corpus.records);
    result.summary = graph_summary(result.graph, config.exact_paths_limit, config.threads);

    result.series = SnapshotSeries::build(corpus.records, config.granularity);
    result.centralities = all_centralities(result.graph, config.threads);
    result.central = select_central_players(result.graph, result.centralities,
                                            config.central_quantile);

    const auto ledger = compute_ledger(result.series, config.epsilon, config.w0);
    result.node_scores = node_influence(ledger, result.series);
    for (double q : config.influential_quantiles)
        result.influential.emplace_back(q,
                                        select_influential(result.series, result.node_scores, q));
    result.retention = retention_transfer_all(result.series);

    const auto tables = build_metric_tables(result.graph, result.centralities, result.series,
                                            result.node_scores, result.retention);
    const double cq = config.comparison_quantile();
    const InfluentialSelection* comparison_set = nullptr;
    for (const auto& [q, sel] : result.influential)
        if (q == cq) comparison_set = &sel;
    if (comparison_set && !result.central.players.empty() && !comparison_set->players.empty())
        result.battery = compare_groups(result.central.players, comparison_set->players, tables);

    if (config.out_dir.empty()) return result;

    const fs::path out(config.out_dir);
    fs::create_directories(out);

    write_file(out / "skip_report.txt",
               [&](std::ostream& o) { o << result.skip_report.to_text(); });
    write_file(out / "graph_summary.txt",
               [&](std::ostream& o) { write_graph_summary_text(o, result.summary); });
    write_file(out / "graph_summary.json",
               [&](std::ostream& o) { write_graph_summary_json(o, result.summary); });
    write_file(out / "granularity.csv", [&](std::ostream& o) {
        write_granularity_csv(o, granularity_report(corpus.records, config.peak_threshold));
    });
    write_file(out / "centrality.csv", [&](std::ostream& o) {
        write_centrality_csv(o, result.graph, result.centralities, result.central.players);
    });
    write_file(out / "influence_edges.csv",
               [&](std::ostream& o) { write_ledger_csv(o, result.series, ledger); });
    write_file(out / "influence_nodes.csv", [&](std::ostream& o) {
        write_node_report_csv(o, result.series, result.node_scores, result.retention);
    });
    write_file(out / "retention.csv",
               [&](std::ostream& o) { write_retention_csv(o, result.series, result.retention); });
    if (!result.battery.tests.empty()) {
        write_file(out / "comparison.csv",
                   [&](std::ostream& o) { write_comparison_csv(o, result.battery); });
        write_file(out / "comparison.txt",
                   [&](std::ostream& o) { write_comparison_text(o, result.battery); });
    }

    // One structured summary object per run.
    nlohmann::ordered_json j;
    j["config"] = {{"inputs", config.inputs},
                   {"granularity", std::string(granularity_name(config.granularity))},
                   {"min_weeks", config.min_weeks},
                   {"epsilon", config.epsilon},
                   {"w0", config.w0},
                   {"peak_threshold", config.peak_threshold},
                   {"central_quantile", config.central_quantile},
                   {"influential_quantiles", config.influential_quantiles},
                   {"exact_paths_limit", config.exact_paths_limit},
                   {"seed", config.seed}};
    j["ingest"] = {{"lines_read", result.skip_report.lines_read},
                   {"records_ok", result.skip_report.records_ok},
                   {"lines_skipped", result.skip_report.skipped},
                   {"players_before_filter", result.players_before_filter},
                   {"players_retained", result.players_retained},
                   {"matches_retained", result.matches_retained}};
    j["graph"] = {{"nodes", result.summary.nodes},
                  {"edges", result.summary.edges},
                  {"components", result.summary.components}};
    j["snapshots"] = {{"granularity", std::string(granularity_name(config.granularity))},
                      {"count", result.series.snapshot_count()}};
    {
        nlohmann::ordered_json sel;
        sel["quantile"] = config.central_quantile;
        sel["thresholds"] = {{"degree", result.central.thresholds[0]},
                             {"closeness", result.central.thresholds[1]},
                             {"betweenness", result.central.thresholds[2]},
                             {"eigenvector", result.central.thresholds[3]},
                             {"pagerank", result.central.thresholds[4]}};
        sel["count"] = result.central.players.size();
        sel["players"] = result.central.players;
        j["central"] = sel;
    }
    {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& [q, sel] : result.influential) {
            nlohmann::ordered_json e;
            e["quantile"] = q;
            e["threshold"] = sel.threshold;
            e["count"] = sel.players.size();
            e["players"] = sel.players;
            arr.push_back(std::move(e));
        }
        j["influential"] = arr;
    }
    if (!result.battery.tests.empty()) {
        nlohmann::ordered_json comp;
        comp["overlap"] = result.battery.overlap;
        comp["disjoint"] = result.battery.disjoint;
        nlohmann::ordered_json tests = nlohmann::ordered_json::array();
        for (const auto& t : result.battery.tests) {
            tests.push_back({{"metric", t.metric},
                             {"u", t.u},
                             {"p", t.p},
                             {"method", t.method},
                             {"alternative", t.alternative == Alternative::a_greater
                                                 ? "a_greater"
                                                 : "a_less"},
                             {"significant_at_0.05", t.p < 0.05}});
        }
        comp["tests"] = tests;
        j["comparison"] = comp;
    }
    write_file(out / "run_summary.json", [&](std::ostream& o) { o << j.dump(2) << "\n"; });

    return result;
}

}  // namespace coplay
