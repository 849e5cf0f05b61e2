#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace coplay {

/// One player's participation in a single match.
struct PlayerParticipation {
    std::string player_id;
    std::int64_t seconds_played = 0;
    bool completed = false;

    bool operator==(const PlayerParticipation&) const = default;
};

/// One PvP match: two rosters, a start timestamp and a duration.
/// team_a and team_b are teammates internally and opponents of each other;
/// only same-team pairs count as co-play.
struct MatchRecord {
    std::string match_id;
    std::int64_t start_time = 0;  // seconds since epoch
    std::int64_t duration = 0;    // seconds
    std::vector<PlayerParticipation> team_a;
    std::vector<PlayerParticipation> team_b;

    bool operator==(const MatchRecord&) const = default;
};

// Returns an explanation if the record violates its invariants
// (empty team, overlapping rosters, playtime exceeding duration, ...),
// std::nullopt if the record is well-formed.
std::optional<std::string> validate_match(const MatchRecord& record);

}  // namespace coplay
