#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "coplay/centrality.hpp"
#include "coplay/graph.hpp"
#include "coplay/influence.hpp"
#include "coplay/ingest.hpp"
#include "coplay/stats.hpp"
#include "coplay/synth.hpp"
#include "coplay/temporal.hpp"

namespace coplay {

/// Shortest round-trip-exact formatting ("%.17g" trimmed); all machine CSV
/// values go through this so reports are byte-stable.
std::string fmt_double(double x);

void write_graph_summary_text(std::ostream& out, const GraphSummary& s);
void write_graph_summary_json(std::ostream& out, const GraphSummary& s);

void write_granularity_csv(std::ostream& out, const GranularityReport& report);

void write_centrality_csv(std::ostream& out, const PlayerGraph& g, const CentralityScores& scores,
                          const std::set<std::string>& central);

void write_ledger_csv(std::ostream& out, const SnapshotSeries& series,
                      const EdgeInfluenceLedger& ledger);

void write_node_report_csv(std::ostream& out, const SnapshotSeries& series,
                           std::span<const NodeInfluence> nodes,
                           std::span<const std::optional<double>> retention);

void write_retention_csv(std::ostream& out, const SnapshotSeries& series,
                         std::span<const std::optional<double>> retention);

void write_comparison_csv(std::ostream& out, const ComparisonBattery& battery);
void write_comparison_text(std::ostream& out, const ComparisonBattery& battery);

void write_corpus_jsonl(std::ostream& out, std::span<const MatchRecord> records);
void write_ground_truth_csv(std::ostream& out, const GroundTruth& truth);

/// Minimal CSV reader for the stage files this tool writes itself
/// (no quoting or embedded separators).
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;  // throws if absent
};
CsvTable read_csv(std::istream& in);

}  // namespace coplay
