#include "coplay/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace coplay {

std::string fmt_double(double x) {
    if (std::isnan(x)) return "nan";
    // Shortest representation that parses back to the same double.
    for (int prec = 1; prec <= 17; ++prec) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) return buf;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

std::string fmt_short(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

}  // namespace

void write_graph_summary_text(std::ostream& out, const GraphSummary& s) {
    out << "nodes: " << s.nodes << "\n";
    out << "edges: " << s.edges << "\n";
    out << "avg_degree: " << fmt_double(s.avg_degree) << "\n";
    out << "avg_weighted_degree: " << fmt_double(s.avg_weighted_degree) << "\n";
    out << "connected_components: " << s.components << "\n";
    out << "lcc_fraction: " << fmt_double(s.lcc_fraction) << "\n";
    out << "second_lcc_fraction: " << fmt_double(s.second_lcc_fraction) << "\n";
    out << "avg_clustering: " << fmt_double(s.avg_clustering) << "\n";
    out << "avg_path_length: " << fmt_double(s.avg_path_length) << "\n";
    out << "diameter: " << s.diameter << "\n";
    out << "paths_estimated: " << (s.paths_estimated ? "true" : "false") << "\n";
    out << "path_sources: " << s.path_sources << "\n";
}

void write_graph_summary_json(std::ostream& out, const GraphSummary& s) {
    nlohmann::ordered_json j;
    j["nodes"] = s.nodes;
    j["edges"] = s.edges;
    j["avg_degree"] = s.avg_degree;
    j["avg_weighted_degree"] = s.avg_weighted_degree;
    j["connected_components"] = s.components;
    j["lcc_fraction"] = s.lcc_fraction;
    j["second_lcc_fraction"] = s.second_lcc_fraction;
    j["avg_clustering"] = s.avg_clustering;
    j["avg_path_length"] = s.avg_path_length;
    j["diameter"] = s.diameter;
    j["paths_estimated"] = s.paths_estimated;
    j["path_sources"] = s.path_sources;
    out << j.dump(2) << "\n";
}

void write_granularity_csv(std::ostream& out, const GranularityReport& report) {
    out << "granularity,metric,min,q25,median,q75,max\n";
    for (const auto& e : report.entries) {
        out << granularity_name(e.granularity) << ',' << e.metric << ','
            << fmt_double(e.row.min) << ',' << fmt_double(e.row.q25) << ','
            << fmt_double(e.row.median) << ',' << fmt_double(e.row.q75) << ','
            << fmt_double(e.row.max) << "\n";
    }
}

void write_centrality_csv(std::ostream& out, const PlayerGraph& g, const CentralityScores& scores,
                          const std::set<std::string>& central) {
    out << "player_id,degree,closeness,betweenness,eigenvector,pagerank,is_central,"
           "weighted_degree\n";
    for (std::uint32_t v = 0; v < g.node_count(); ++v) {
        const auto& id = g.players()[v];
        out << id << ',' << fmt_double(scores.degree[v]) << ',' << fmt_double(scores.closeness[v])
            << ',' << fmt_double(scores.betweenness[v]) << ',' << fmt_double(scores.eigenvector[v])
            << ',' << fmt_double(scores.pagerank[v]) << ',' << (central.contains(id) ? 1 : 0)
            << ',' << g.weighted_degree(v) << "\n";
    }
}

void write_ledger_csv(std::ostream& out, const SnapshotSeries& series,
                      const EdgeInfluenceLedger& ledger) {
    // Edge-major ordering.
    std::vector<std::size_t> order(ledger.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    const auto entries = ledger.entries();
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        const auto& a = entries[l];
        const auto& b = entries[r];
        return std::tuple{a.a, a.b, a.snapshot} < std::tuple{b.a, b.b, b.snapshot};
    });
    const auto& ids = series.player_ids();
    out << "player_a,player_b,snapshot,credited_player,value\n";
    for (auto i : order) {
        const auto& e = entries[i];
        out << ids[e.a] << ',' << ids[e.b] << ',' << e.snapshot << ',' << ids[e.credited] << ','
            << fmt_double(e.value) << "\n";
    }
}

void write_node_report_csv(std::ostream& out, const SnapshotSeries& series,
                           std::span<const NodeInfluence> nodes,
                           std::span<const std::optional<double>> retention) {
    out << "player_id,influence,edge_sd,temporal_degree,retention_transfer\n";
    const auto& ids = series.player_ids();
    for (std::size_t v = 0; v < ids.size(); ++v) {
        out << ids[v] << ',' << fmt_double(nodes[v].influence) << ','
            << fmt_double(nodes[v].edge_sd) << ',' << nodes[v].temporal_degree << ',';
        if (retention[v]) out << fmt_double(*retention[v]);
        out << "\n";
    }
}

void write_retention_csv(std::ostream& out, const SnapshotSeries& series,
                         std::span<const std::optional<double>> retention) {
    out << "player_id,retention_transfer\n";
    const auto& ids = series.player_ids();
    for (std::size_t v = 0; v < ids.size(); ++v) {
        out << ids[v] << ',';
        if (retention[v]) out << fmt_double(*retention[v]);
        out << "\n";
    }
}

namespace {

const char* alternative_name(Alternative a) {
    return a == Alternative::a_greater ? "a_greater" : "a_less";
}

}  // namespace

void write_comparison_csv(std::ostream& out, const ComparisonBattery& battery) {
    out << "metric,group_a,group_b,alternative,u,p,method,n_a,n_b,mean_a,sd_a,mean_b,sd_b,"
           "significant_at_0.05\n";
    for (const auto& t : battery.tests) {
        out << t.metric << ',' << t.group_a << ',' << t.group_b << ','
            << alternative_name(t.alternative) << ',' << fmt_double(t.u) << ',' << fmt_double(t.p)
            << ',' << t.method << ',' << t.n_a << ',' << t.n_b << ',' << fmt_double(t.mean_a)
            << ',' << fmt_double(t.sd_a) << ',' << fmt_double(t.mean_b) << ','
            << fmt_double(t.sd_b) << ',' << (t.p < 0.05 ? 1 : 0) << "\n";
    }
}

void write_comparison_text(std::ostream& out, const ComparisonBattery& battery) {
    out << "central players: " << battery.n_central
        << "  influential players: " << battery.n_influential << "  overlap: " << battery.overlap
        << (battery.disjoint ? " (disjoint)" : "") << "\n\n";
    char line[160];
    std::snprintf(line, sizeof line, "%-20s %12s %12s %10s %22s %10s\n", "metric", "U", "p",
                  "method", "H_a (influential vs central)", "p<0.05");
    out << line;
    for (const auto& t : battery.tests) {
        std::snprintf(line, sizeof line, "%-20s %12s %12s %10s %22s %10s\n", t.metric.c_str(),
                      fmt_short(t.u).c_str(), fmt_short(t.p).c_str(),
                      t.method == "exact" ? "exact" : "normal",
                      t.alternative == Alternative::a_greater ? "greater" : "less",
                      t.p < 0.05 ? "yes" : "no");
        out << line;
    }
}

void write_corpus_jsonl(std::ostream& out, std::span<const MatchRecord> records) {
    for (const auto& r : records) out << serialize_match(r) << "\n";
}

void write_ground_truth_csv(std::ostream& out, const GroundTruth& truth) {
    out << "player_id,role\n";
    for (const auto& [player, role] : truth.roles) out << player << ',' << role << "\n";
}

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::runtime_error("report: CSV column '" + name + "' not found");
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (true) {
            const auto comma = line.find(',', pos);
            if (comma == std::string::npos) {
                fields.push_back(line.substr(pos));
                break;
            }
            fields.push_back(line.substr(pos, comma - pos));
            pos = comma + 1;
        }
        if (first) {
            table.header = std::move(fields);
            first = false;
        } else {
            table.rows.push_back(std::move(fields));
        }
    }
    return table;
}

}  // namespace coplay
