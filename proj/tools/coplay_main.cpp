// coplay: analysis of co-play networks from multiplayer match logs.
//
// Subcommands cover the full pipeline (ingest/filter, static graph, temporal
// snapshots, centrality selection, edge/node influence, retention transfer,
// group comparison) plus a synthetic corpus generator with planted ground
// truth for validating the detections.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "coplay/pipeline.hpp"
#include "coplay/report.hpp"
#include "coplay/synth.hpp"

namespace fs = std::filesystem;
using namespace coplay;

namespace {

// Flag provenance: defaults marked "method default" come from the analysis
// definition; "free parameter" knobs have no canonical value.
constexpr const char* kGranularityHelp =
    "Snapshot width: day, week or month (method default: week)";
constexpr const char* kMinWeeksHelp =
    "Drop players active in fewer distinct weeks (method default: 5)";
constexpr const char* kEpsilonHelp =
    "Behaviour-change threshold on scaled feature vectors (free parameter; default 0.1)";
constexpr const char* kW0Help =
    "Shared-match count where the logarithmic weight adjustment saturates "
    "(free parameter; default 10)";
constexpr const char* kPeakHelp =
    "Relative jump, as a fraction of the series maximum, that counts as a peak "
    "(free parameter; default 0.5)";
constexpr const char* kCentralQHelp =
    "Quantile threshold intersected across all five centralities (method default: 0.90)";
constexpr const char* kInfluentialQHelp =
    "Influence-score quantiles to report (method defaults: 0.90 0.99 0.999)";

void add_input_option(CLI::App* cmd, std::vector<std::string>& inputs) {
    cmd->add_option("--input,-i", inputs, "Match log(s), one JSON object per line")
        ->required()
        ->expected(-1);
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("report: cannot write '" + path.string() + "'");
    return out;
}

Granularity granularity_from(const std::string& name) {
    const auto g = parse_granularity(name);
    if (!g) throw CLI::ValidationError("--granularity", "must be day, week or month");
    return *g;
}

int run_validate(const std::vector<std::string>& inputs, const std::string& out_dir) {
    SkipReport total;
    for (const auto& path : inputs) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("ingest: cannot open input '" + path + "'");
        const auto parsed = parse_match_log(in);
        total.lines_read += parsed.report.lines_read;
        total.records_ok += parsed.report.records_ok;
        total.skipped += parsed.report.skipped;
        for (const auto& d : parsed.report.details)
            if (total.details.size() < SkipReport::kMaxDetails) total.details.push_back(d);
    }
    std::cout << total.to_text();
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        open_out(fs::path(out_dir) / "skip_report.txt") << total.to_text();
    }
    return 0;
}

int run_summary(const RunConfig& cfg) {
    const auto corpus = load_corpus(cfg.inputs, cfg.min_weeks);
    const auto graph = PlayerGraph::from_records(corpus.records);
    const auto summary = graph_summary(graph, cfg.exact_paths_limit, cfg.threads);
    write_graph_summary_text(std::cout, summary);
    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        auto txt = open_out(fs::path(cfg.out_dir) / "graph_summary.txt");
        write_graph_summary_text(txt, summary);
        auto json = open_out(fs::path(cfg.out_dir) / "graph_summary.json");
        write_graph_summary_json(json, summary);
    }
    return 0;
}

int run_granularity(const RunConfig& cfg) {
    const auto corpus = load_corpus(cfg.inputs, cfg.min_weeks);
    const auto report = granularity_report(corpus.records, cfg.peak_threshold);
    write_granularity_csv(std::cout, report);
    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        auto out = open_out(fs::path(cfg.out_dir) / "granularity.csv");
        write_granularity_csv(out, report);
    }
    return 0;
}

int run_centrality(const RunConfig& cfg) {
    const auto corpus = load_corpus(cfg.inputs, cfg.min_weeks);
    const auto graph = PlayerGraph::from_records(corpus.records);
    const auto scores = all_centralities(graph, cfg.threads);
    const auto central = select_central_players(graph, scores, cfg.central_quantile);
    std::cerr << "central players (quantile " << cfg.central_quantile
              << "): " << central.players.size() << "\n";
    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        auto out = open_out(fs::path(cfg.out_dir) / "centrality.csv");
        write_centrality_csv(out, graph, scores, central.players);
    } else {
        write_centrality_csv(std::cout, graph, scores, central.players);
    }
    return 0;
}

int run_influence(const RunConfig& cfg) {
    const auto corpus = load_corpus(cfg.inputs, cfg.min_weeks);
    const auto series = SnapshotSeries::build(corpus.records, cfg.granularity);
    const auto ledger = compute_ledger(series, cfg.epsilon, cfg.w0);
    const auto nodes = node_influence(ledger, series);
    const auto retention = retention_transfer_all(series);
    for (double q : cfg.influential_quantiles) {
        const auto sel = select_influential(series, nodes, q);
        std::cerr << "influential players (quantile " << q << "): " << sel.players.size()
                  << " at threshold " << fmt_double(sel.threshold) << "\n";
    }
    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        auto edges = open_out(fs::path(cfg.out_dir) / "influence_edges.csv");
        write_ledger_csv(edges, series, ledger);
        auto node_out = open_out(fs::path(cfg.out_dir) / "influence_nodes.csv");
        write_node_report_csv(node_out, series, nodes, retention);
    } else {
        write_node_report_csv(std::cout, series, nodes, retention);
    }
    return 0;
}

int run_retention(const RunConfig& cfg) {
    const auto corpus = load_corpus(cfg.inputs, cfg.min_weeks);
    const auto series = SnapshotSeries::build(corpus.records, cfg.granularity);
    const auto retention = retention_transfer_all(series);
    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        auto out = open_out(fs::path(cfg.out_dir) / "retention.csv");
        write_retention_csv(out, series, retention);
    } else {
        write_retention_csv(std::cout, series, retention);
    }
    return 0;
}

// Rebuilds the comparison from the centrality and influence stage files, so
// the battery can run without recomputing the upstream stages.
int run_compare(const std::string& out_dir, double comparison_quantile) {
    const fs::path dir(out_dir);
    auto load = [](const fs::path& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("compare: missing stage file '" + path.string() + "'");
        return read_csv(in);
    };
    const auto cent = load(dir / "centrality.csv");
    const auto infl = load(dir / "influence_nodes.csv");

    PlayerMetricTables tables;
    std::set<std::string> central;
    {
        const auto id = cent.column("player_id");
        const auto deg = cent.column("degree"), clo = cent.column("closeness");
        const auto bet = cent.column("betweenness"), eig = cent.column("eigenvector");
        const auto pr = cent.column("pagerank"), flag = cent.column("is_central");
        const auto wd = cent.column("weighted_degree");
        for (const auto& row : cent.rows) {
            const auto& player = row[id];
            tables.degree[player] = std::stod(row[deg]);
            tables.closeness[player] = std::stod(row[clo]);
            tables.betweenness[player] = std::stod(row[bet]);
            tables.eigenvector[player] = std::stod(row[eig]);
            tables.pagerank[player] = std::stod(row[pr]);
            tables.weighted_degree[player] = std::stod(row[wd]);
            if (row[flag] == "1") central.insert(player);
        }
    }
    std::vector<double> influence_values;
    {
        const auto id = infl.column("player_id");
        const auto score = infl.column("influence"), sd = infl.column("edge_sd");
        const auto rt = infl.column("retention_transfer");
        for (const auto& row : infl.rows) {
            const auto& player = row[id];
            tables.influence[player] = std::stod(row[score]);
            tables.edge_influence_sd[player] = std::stod(row[sd]);
            if (!row[rt].empty()) tables.retention_transfer[player] = std::stod(row[rt]);
            influence_values.push_back(tables.influence[player]);
        }
    }
    std::sort(influence_values.begin(), influence_values.end());
    const double threshold = quantile_sorted(influence_values, comparison_quantile);
    std::set<std::string> influential;
    for (const auto& [player, score] : tables.influence)
        if (score >= threshold) influential.insert(player);

    const auto battery = compare_groups(central, influential, tables);
    write_comparison_text(std::cout, battery);
    auto csv = open_out(dir / "comparison.csv");
    write_comparison_csv(csv, battery);
    auto txt = open_out(dir / "comparison.txt");
    write_comparison_text(txt, battery);
    return 0;
}

int run_synth(const SynthConfig& cfg, const std::string& out_dir) {
    const auto result = generate(cfg);
    fs::create_directories(out_dir);
    auto corpus = open_out(fs::path(out_dir) / "corpus.jsonl");
    write_corpus_jsonl(corpus, result.records);
    auto truth = open_out(fs::path(out_dir) / "ground_truth.csv");
    write_ground_truth_csv(truth, result.truth);
    std::cerr << "generated " << result.records.size() << " matches for " << cfg.players
              << " players over " << cfg.weeks << " weeks (seed " << cfg.seed << ")\n";
    return 0;
}

int run_full_pipeline(const RunConfig& cfg) {
    const auto result = run_pipeline(cfg);
    std::cerr << result.skip_report.to_text();
    std::cout << "players retained: " << result.players_retained << " of "
              << result.players_before_filter << "\n";
    std::cout << "graph: " << result.summary.nodes << " nodes, " << result.summary.edges
              << " edges, " << result.summary.components << " components\n";
    std::cout << "snapshots: " << result.series.snapshot_count() << " ("
              << granularity_name(cfg.granularity) << ")\n";
    std::cout << "central players: " << result.central.players.size() << "\n";
    for (const auto& [q, sel] : result.influential)
        std::cout << "influential players at " << q << ": " << sel.players.size() << "\n";
    if (!result.battery.tests.empty()) write_comparison_text(std::cout, result.battery);
    std::cout << "reports written to " << cfg.out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"co-play network analysis: central vs influential players"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string granularity_name_opt = "week";
    std::string out_dir;

    auto add_common = [&](CLI::App* cmd, bool needs_input = true) {
        if (needs_input) add_input_option(cmd, cfg.inputs);
        cmd->add_option("--out,-o", cfg.out_dir, "Output directory for report files");
        cmd->add_option("--min-weeks", cfg.min_weeks, kMinWeeksHelp);
        cmd->add_option("--threads", cfg.threads,
                        "Worker threads; 0 = all cores. Outputs do not depend on it");
    };

    auto* validate_cmd = app.add_subcommand("validate", "Parse inputs and report skipped lines");
    add_common(validate_cmd);

    auto* summary_cmd = app.add_subcommand("summary", "Static co-play graph statistics");
    add_common(summary_cmd);
    summary_cmd->add_option("--exact-paths-limit", cfg.exact_paths_limit,
                            "Largest LCC for exact all-pairs path statistics (default 20000)");

    auto* granularity_cmd =
        app.add_subcommand("granularity", "Participation stability at day/week/month widths");
    add_common(granularity_cmd);
    granularity_cmd->add_option("--peak-threshold", cfg.peak_threshold, kPeakHelp);

    auto* centrality_cmd =
        app.add_subcommand("centrality", "Five centrality measures and the central-player set");
    add_common(centrality_cmd);
    centrality_cmd->add_option("--central-quantile", cfg.central_quantile, kCentralQHelp);

    auto* influence_cmd =
        app.add_subcommand("influence", "Edge influence ledger and node influence scores");
    add_common(influence_cmd);
    influence_cmd->add_option("--granularity", granularity_name_opt, kGranularityHelp);
    influence_cmd->add_option("--epsilon", cfg.epsilon, kEpsilonHelp);
    influence_cmd->add_option("--w0", cfg.w0, kW0Help);
    influence_cmd->add_option("--influential-quantiles", cfg.influential_quantiles,
                              kInfluentialQHelp)
        ->expected(-1);

    auto* retention_cmd = app.add_subcommand("retention", "Retention transfer per player");
    add_common(retention_cmd);
    retention_cmd->add_option("--granularity", granularity_name_opt, kGranularityHelp);

    auto* compare_cmd = app.add_subcommand(
        "compare", "Central-vs-influential battery from earlier stage files");
    compare_cmd->add_option("--out,-o", out_dir, "Directory holding centrality.csv and influence_nodes.csv")
        ->required();
    double compare_quantile = 0.99;
    compare_cmd->add_option("--influential-quantile", compare_quantile,
                            "Influence quantile defining the influential group (default 0.99)");

    SynthConfig synth_cfg;
    bool synth_benchmark = false;
    auto* synth_cmd =
        app.add_subcommand("synth", "Generate a synthetic corpus with planted ground truth");
    synth_cmd->add_option("--out,-o", out_dir, "Output directory")->required();
    synth_cmd->add_option("--players", synth_cfg.players, "Population size (default 1000)");
    synth_cmd->add_option("--weeks", synth_cfg.weeks, "Observation window in weeks (default 20)");
    synth_cmd->add_option("--influencers", synth_cfg.influencers, "Planted influencers");
    synth_cmd->add_option("--followers-per-influencer", synth_cfg.followers_per_influencer,
                          "Followers converging toward each influencer");
    synth_cmd->add_option("--hubs", synth_cfg.hubs, "Planted high-degree hubs");
    synth_cmd->add_option("--mimic-rate", synth_cfg.mimic_rate,
                          "Follower convergence rate per week, in [0,1]");
    synth_cmd->add_option("--noise", synth_cfg.behavior_noise, "Relative behaviour jitter");
    synth_cmd->add_option("--follower-coplay", synth_cfg.follower_coplay_matches,
                          "Follower-influencer shared matches per week");
    synth_cmd->add_option("--hub-partners", synth_cfg.hub_partners_per_week,
                          "Fresh random partners per hub per week");
    synth_cmd->add_option("--group-size", synth_cfg.group_size, "Background friend-group size");
    synth_cmd->add_option("--group-coplay-prob", synth_cfg.group_coplay_prob,
                          "Per-pair weekly co-play probability inside groups");
    synth_cmd->add_option("--churn-fraction", synth_cfg.churn_fraction,
                          "Backgrounds leaving before the window ends");
    synth_cmd->add_option("--tourist-fraction", synth_cfg.tourist_fraction,
                          "Short-lived players the activity filter should drop");
    synth_cmd->add_option("--seed", synth_cfg.seed, "Generator seed");
    synth_cmd->add_flag("--benchmark", synth_benchmark,
                        "Use the 10k-player / 48-week preset (overrides the size and shape "
                        "flags; --seed still applies)");

    auto* pipeline_cmd = app.add_subcommand("pipeline", "Run every stage and write all reports");
    add_common(pipeline_cmd);
    pipeline_cmd->add_option("--granularity", granularity_name_opt, kGranularityHelp);
    pipeline_cmd->add_option("--epsilon", cfg.epsilon, kEpsilonHelp);
    pipeline_cmd->add_option("--w0", cfg.w0, kW0Help);
    pipeline_cmd->add_option("--peak-threshold", cfg.peak_threshold, kPeakHelp);
    pipeline_cmd->add_option("--central-quantile", cfg.central_quantile, kCentralQHelp);
    pipeline_cmd->add_option("--influential-quantiles", cfg.influential_quantiles,
                             kInfluentialQHelp)
        ->expected(-1);
    pipeline_cmd->add_option("--seed", cfg.seed, "Seed for any sampled estimates");
    pipeline_cmd->add_option("--exact-paths-limit", cfg.exact_paths_limit,
                             "Largest LCC for exact all-pairs path statistics (default 20000)");
    pipeline_cmd->get_option("--out")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // bad flags are a usage error
    }

    try {
        if (app.got_subcommand(validate_cmd)) return run_validate(cfg.inputs, cfg.out_dir);
        cfg.granularity = granularity_from(granularity_name_opt);
        if (app.got_subcommand(summary_cmd)) return run_summary(cfg);
        if (app.got_subcommand(granularity_cmd)) return run_granularity(cfg);
        if (app.got_subcommand(centrality_cmd)) return run_centrality(cfg);
        if (app.got_subcommand(influence_cmd)) return run_influence(cfg);
        if (app.got_subcommand(retention_cmd)) return run_retention(cfg);
        if (app.got_subcommand(compare_cmd)) return run_compare(out_dir, compare_quantile);
        if (app.got_subcommand(synth_cmd)) {
            if (synth_benchmark) {
                SynthConfig preset = benchmark_config();
                preset.seed = synth_cfg.seed;
                synth_cfg = preset;
            }
            return run_synth(synth_cfg, out_dir);
        }
        if (app.got_subcommand(pipeline_cmd)) return run_full_pipeline(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
