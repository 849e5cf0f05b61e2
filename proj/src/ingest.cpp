#include "coplay/ingest.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"

namespace coplay {

using json = nlohmann::json;

std::optional<std::string> validate_match(const MatchRecord& record) {
    if (record.match_id.empty()) return "empty match_id";
    if (record.start_time < 0) return "negative start_time";
    if (record.duration < 0) return "negative duration";
    if (record.team_a.empty()) return "team_a is empty";
    if (record.team_b.empty()) return "team_b is empty";

    std::unordered_set<std::string> seen;
    for (const auto* team : {&record.team_a, &record.team_b}) {
        for (const auto& p : *team) {
            if (p.player_id.empty()) return "empty player_id";
            if (!seen.insert(p.player_id).second)
                return "player '" + p.player_id + "' appears twice";
            if (p.seconds_played < 0)
                return "negative seconds_played for '" + p.player_id + "'";
            if (p.seconds_played > record.duration)
                return "seconds_played exceeds duration for '" + p.player_id + "'";
        }
    }
    return std::nullopt;
}

void SkipReport::add(std::size_t line_no, std::string reason) {
    ++skipped;
    if (details.size() < kMaxDetails) details.push_back({line_no, std::move(reason)});
}

std::string SkipReport::to_text() const {
    std::ostringstream out;
    out << "lines_read: " << lines_read << "\n";
    out << "records_ok: " << records_ok << "\n";
    out << "lines_skipped: " << skipped << "\n";
    for (const auto& s : details) out << "line " << s.line_no << ": " << s.reason << "\n";
    if (skipped > details.size())
        out << "(" << (skipped - details.size()) << " further skips not listed)\n";
    return out.str();
}

namespace {

bool read_participations(const json& arr, std::vector<PlayerParticipation>& out,
                         std::string& error) {
    if (!arr.is_array()) {
        error = "team is not an array";
        return false;
    }
    for (const auto& e : arr) {
        if (!e.is_object() || !e.contains("player_id") || !e["player_id"].is_string() ||
            !e.contains("seconds_played") || !e["seconds_played"].is_number_integer() ||
            !e.contains("completed") || !e["completed"].is_boolean()) {
            error = "bad participation object";
            return false;
        }
        out.push_back({e["player_id"].get<std::string>(),
                       e["seconds_played"].get<std::int64_t>(), e["completed"].get<bool>()});
    }
    return true;
}

std::optional<MatchRecord> record_from_line(const std::string& line, std::string& error) {
    const json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
        error = "not a valid object";
        return std::nullopt;
    }
    for (const char* field : {"match_id", "start_time", "duration", "team_a", "team_b"}) {
        if (!j.contains(field)) {
            error = std::string("missing field ") + field;
            return std::nullopt;
        }
    }
    if (!j["match_id"].is_string() || !j["start_time"].is_number_integer() ||
        !j["duration"].is_number_integer()) {
        error = "wrong scalar field type";
        return std::nullopt;
    }

    MatchRecord r;
    r.match_id = j["match_id"].get<std::string>();
    r.start_time = j["start_time"].get<std::int64_t>();
    r.duration = j["duration"].get<std::int64_t>();
    if (!read_participations(j["team_a"], r.team_a, error)) return std::nullopt;
    if (!read_participations(j["team_b"], r.team_b, error)) return std::nullopt;
    if (auto invalid = validate_match(r)) {
        error = *invalid;
        return std::nullopt;
    }
    return r;
}

nlohmann::ordered_json team_to_json(const std::vector<PlayerParticipation>& team) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& p : team) {
        nlohmann::ordered_json e;
        e["player_id"] = p.player_id;
        e["seconds_played"] = p.seconds_played;
        e["completed"] = p.completed;
        arr.push_back(std::move(e));
    }
    return arr;
}

}  // namespace

ParseResult parse_match_log(std::istream& in) {
    if (!in) throw std::runtime_error("ingest: unreadable input stream");

    ParseResult result;
    std::unordered_map<std::string, std::size_t> index_by_id;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        ++result.report.lines_read;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::string error;
        auto record = record_from_line(line, error);
        if (!record) {
            result.report.add(line_no, error);
            continue;
        }
        auto [it, inserted] = index_by_id.try_emplace(record->match_id, result.records.size());
        if (inserted) {
            result.records.push_back(std::move(*record));
        } else {
            // Last occurrence wins; the replacement is noteworthy, not fatal.
            result.report.add(line_no, "duplicate match_id '" + record->match_id +
                                           "' (earlier record replaced)");
            result.records[it->second] = std::move(*record);
        }
    }
    if (in.bad()) throw std::runtime_error("ingest: I/O error while reading match log");
    result.report.records_ok = result.records.size();
    return result;
}

std::string serialize_match(const MatchRecord& record) {
    nlohmann::ordered_json j;
    j["match_id"] = record.match_id;
    j["start_time"] = record.start_time;
    j["duration"] = record.duration;
    j["team_a"] = team_to_json(record.team_a);
    j["team_b"] = team_to_json(record.team_b);
    return j.dump();
}

namespace {

constexpr std::int64_t kWeekSeconds = 7 * 24 * 3600;

// Distinct week bins (anchored at `anchor`) in which each player has a match.
std::unordered_map<std::string, std::set<std::int64_t>> active_weeks(
    const std::vector<MatchRecord>& records, std::int64_t anchor) {
    std::unordered_map<std::string, std::set<std::int64_t>> weeks;
    for (const auto& r : records) {
        const std::int64_t bin = (r.start_time - anchor) / kWeekSeconds;
        for (const auto* team : {&r.team_a, &r.team_b})
            for (const auto& p : *team) weeks[p.player_id].insert(bin);
    }
    return weeks;
}

}  // namespace

FilterResult filter_short_lived_players(std::vector<MatchRecord> records, int min_weeks) {
    if (min_weeks < 1) throw std::invalid_argument("ingest: min_weeks must be >= 1");

    FilterResult result;
    if (records.empty()) return result;

    std::unordered_set<std::string> initial_players;
    for (const auto& r : records)
        for (const auto* team : {&r.team_a, &r.team_b})
            for (const auto& p : *team) initial_players.insert(p.player_id);

    // Each pass re-anchors on the current corpus and re-counts. Dropping a
    // match can shrink a surviving player's span, so iterate to a fixed point;
    // this is what makes the filter idempotent.
    bool changed = true;
    while (changed && !records.empty()) {
        changed = false;
        std::int64_t anchor = records.front().start_time;
        for (const auto& r : records) anchor = std::min(anchor, r.start_time);

        const auto weeks = active_weeks(records, anchor);
        std::unordered_set<std::string> keep;
        for (const auto& [player, bins] : weeks)
            if (bins.size() >= static_cast<std::size_t>(min_weeks)) keep.insert(player);

        std::vector<MatchRecord> next;
        next.reserve(records.size());
        for (auto& r : records) {
            auto strip = [&](std::vector<PlayerParticipation>& team) {
                std::erase_if(team, [&](const PlayerParticipation& p) {
                    return !keep.contains(p.player_id);
                });
            };
            const std::size_t before = r.team_a.size() + r.team_b.size();
            strip(r.team_a);
            strip(r.team_b);
            if (before != r.team_a.size() + r.team_b.size()) changed = true;
            if (r.team_a.empty() || r.team_b.empty()) {
                changed = true;
                ++result.matches_dropped;
                continue;
            }
            next.push_back(std::move(r));
        }
        records = std::move(next);
    }

    for (const auto& r : records)
        for (const auto* team : {&r.team_a, &r.team_b})
            for (const auto& p : *team) result.retained.insert(p.player_id);
    result.players_dropped = initial_players.size() - result.retained.size();
    result.records = std::move(records);
    return result;
}

}  // namespace coplay
