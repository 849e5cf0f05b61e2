#pragma once

#include <cstddef>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "coplay/match.hpp"

namespace coplay {

/// Telemetry corpora are dirty; malformed lines are skipped and reported
/// instead of aborting the run.
struct SkipReport {
    struct Skip {
        std::size_t line_no = 0;  // 1-based
        std::string reason;
    };

    std::size_t lines_read = 0;
    std::size_t records_ok = 0;
    std::size_t skipped = 0;
    std::vector<Skip> details;  // capped at kMaxDetails entries

    static constexpr std::size_t kMaxDetails = 100;

    void add(std::size_t line_no, std::string reason);
    std::string to_text() const;
};

struct ParseResult {
    std::vector<MatchRecord> records;
    SkipReport report;
};

/// Parses line-delimited JSON match records. Well-formed records are returned
/// in input order; malformed lines never abort the run. A duplicate match_id
/// replaces the earlier record in place (last occurrence wins) and is counted
/// as skipped.
ParseResult parse_match_log(std::istream& in);

/// Canonical single-line JSON encoding; parse_match_log(serialize_match(r))
/// round-trips exactly.
std::string serialize_match(const MatchRecord& record);

struct FilterResult {
    std::vector<MatchRecord> records;
    std::set<std::string> retained;
    std::size_t players_dropped = 0;
    std::size_t matches_dropped = 0;
};

/// Drops players active in fewer than min_weeks distinct week bins, week bins
/// anchored at the corpus's earliest match timestamp. Dropping a player
/// removes their participations; a match whose team empties is dropped whole,
/// which can shrink other players' active spans, so the pass repeats until
/// stable — the operation is idempotent.
FilterResult filter_short_lived_players(std::vector<MatchRecord> records, int min_weeks = 5);

}  // namespace coplay
