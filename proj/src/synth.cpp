#include "coplay/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>
#include <stdexcept>

#include "coplay/rng.hpp"

namespace coplay {

namespace {

constexpr std::int64_t kWeekSeconds = 7 * 24 * 3600;
constexpr std::int64_t kEpochBase = 1'400'000'000;  // arbitrary fixed origin
constexpr std::size_t kResetPeriod = 5;             // follower reset cycle, weeks

enum class Role : std::uint8_t { influencer, follower, hub, tourist, background };

const char* role_name(Role r) {
    switch (r) {
        case Role::influencer: return "influencer";
        case Role::follower: return "follower";
        case Role::hub: return "hub";
        // Tourists are just short-lived background players.
        case Role::tourist: return "background";
        case Role::background: return "background";
    }
    return "?";
}

struct Behavior {
    double matches = 0;
    double seconds = 0;
    double completion = 0;
};

struct MatchDraft {
    std::int64_t start_time = 0;
    std::int64_t duration = 0;
    std::vector<std::uint32_t> team_a, team_b;
};

double clamp(double x, double lo, double hi) { return std::min(hi, std::max(lo, x)); }

Behavior jitter(const Behavior& b, double sigma, Rng& rng) {
    Behavior out = b;
    out.matches = std::max(1.0, b.matches * (1.0 + rng.normal(0.0, sigma)));
    out.seconds = std::max(30.0, b.seconds * (1.0 + rng.normal(0.0, sigma)));
    out.completion = clamp(b.completion * (1.0 + rng.normal(0.0, sigma)), 0.0, 1.0);
    return out;
}

}  // namespace

void SynthConfig::validate() const {
    if (players == 0) throw std::invalid_argument("synth: players must be positive");
    if (weeks < 6) throw std::invalid_argument("synth: need at least 6 weeks");
    if (mimic_rate < 0.0 || mimic_rate > 1.0)
        throw std::invalid_argument("synth: mimic_rate must be in [0,1]");
    if (behavior_noise < 0.0) throw std::invalid_argument("synth: behavior_noise must be >= 0");
    if (group_size < 2) throw std::invalid_argument("synth: group_size must be >= 2");
    if (group_coplay_prob < 0.0 || group_coplay_prob > 1.0)
        throw std::invalid_argument("synth: group_coplay_prob must be in [0,1]");
    if (churn_fraction < 0.0 || churn_fraction > 1.0 || tourist_fraction < 0.0 ||
        tourist_fraction > 1.0)
        throw std::invalid_argument("synth: fractions must be in [0,1]");
    const std::size_t tourists =
        static_cast<std::size_t>(std::llround(static_cast<double>(players) * tourist_fraction));
    const std::size_t planted = influencers + influencers * followers_per_influencer + hubs;
    if (planted + tourists + group_size > players)
        throw std::invalid_argument("synth: planted players exceed the population");
}

SynthConfig benchmark_config() {
    SynthConfig c;
    c.players = 10000;
    c.weeks = 48;
    c.group_size = 5;
    c.group_coplay_prob = 0.5;
    c.hub_partners_per_week = 15;
    return c;
}

Recovery evaluate_recovery(const std::set<std::string>& detected,
                           const std::set<std::string>& planted) {
    if (planted.empty()) throw std::invalid_argument("synth: planted set is empty");
    std::size_t hit = 0;
    for (const auto& p : detected) hit += planted.contains(p);
    Recovery r;
    r.precision = detected.empty() ? 0.0 : static_cast<double>(hit) / static_cast<double>(detected.size());
    r.recall = static_cast<double>(hit) / static_cast<double>(planted.size());
    return r;
}

SynthResult generate(const SynthConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);

    const std::size_t n = cfg.players;
    const std::size_t n_inf = cfg.influencers;
    const std::size_t n_fol = cfg.influencers * cfg.followers_per_influencer;
    const std::size_t n_hub = cfg.hubs;
    const std::size_t n_tour =
        static_cast<std::size_t>(std::llround(static_cast<double>(n) * cfg.tourist_fraction));

    // Index layout: [influencers][followers][hubs][tourists][backgrounds].
    const std::size_t fol0 = n_inf;
    const std::size_t hub0 = fol0 + n_fol;
    const std::size_t tour0 = hub0 + n_hub;
    const std::size_t bg0 = tour0 + n_tour;

    std::vector<Role> role(n, Role::background);
    for (std::size_t i = 0; i < n_inf; ++i) role[i] = Role::influencer;
    for (std::size_t i = fol0; i < hub0; ++i) role[i] = Role::follower;
    for (std::size_t i = hub0; i < tour0; ++i) role[i] = Role::hub;
    for (std::size_t i = tour0; i < bg0; ++i) role[i] = Role::tourist;

    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "p%06zu", i);
        ids[i] = buf;
    }

    // --- static character of each player -----------------------------------
    std::vector<Behavior> base(n);
    std::vector<std::size_t> last_week(n, cfg.weeks - 1);

    for (std::size_t i = 0; i < n_inf; ++i) {
        base[i].matches = static_cast<double>(cfg.followers_per_influencer) *
                          static_cast<double>(cfg.follower_coplay_matches);
        base[i].seconds = rng.uniform_real(480.0, 660.0);
        base[i].completion = rng.uniform_real(0.85, 0.95);
    }
    // Followers restart from this far-off profile every kResetPeriod weeks.
    std::vector<Behavior> reset_profile(n_fol);
    std::vector<std::size_t> reset_offset(n_fol);
    for (std::size_t f = 0; f < n_fol; ++f) {
        reset_profile[f].matches = rng.uniform_real(2.0, 4.0);
        reset_profile[f].seconds = rng.uniform_real(60.0, 120.0);
        reset_profile[f].completion = rng.uniform_real(0.0, 0.1);
        reset_offset[f] = static_cast<std::size_t>(rng.uniform_int(0, kResetPeriod - 1));
    }
    for (std::size_t i = hub0; i < tour0; ++i) {
        base[i].matches = static_cast<double>(cfg.hub_partners_per_week);
        base[i].seconds = rng.uniform_real(300.0, 480.0);
        base[i].completion = rng.uniform_real(0.5, 0.8);
    }
    for (std::size_t i = tour0; i < bg0; ++i) {
        base[i].matches = rng.uniform_real(1.5, 3.0);
        base[i].seconds = rng.uniform_real(120.0, 400.0);
        base[i].completion = rng.uniform_real(0.2, 0.8);
        last_week[i] = static_cast<std::size_t>(rng.uniform_int(1, 2));  // < 5 active weeks
    }
    for (std::size_t i = bg0; i < n; ++i) {
        base[i].matches = rng.uniform_real(6.0, 10.0);
        base[i].seconds = rng.uniform_real(120.0, 600.0);
        base[i].completion = rng.uniform_real(0.2, 0.8);
    }

    // Churners survive the five-week filter but leave before the window ends.
    std::vector<std::uint32_t> backgrounds;
    for (std::size_t i = bg0; i < n; ++i) backgrounds.push_back(static_cast<std::uint32_t>(i));
    {
        auto order = backgrounds;
        rng.shuffle(order);
        const auto churners = static_cast<std::size_t>(
            std::llround(static_cast<double>(order.size()) * cfg.churn_fraction));
        for (std::size_t c = 0; c < churners; ++c)
            last_week[order[c]] = static_cast<std::size_t>(
                rng.uniform_int(4, static_cast<std::int64_t>(cfg.weeks) - 2));
    }

    // Friend groups partition the backgrounds.
    std::vector<std::vector<std::uint32_t>> groups;
    for (std::size_t i = 0; i < backgrounds.size(); i += cfg.group_size) {
        const auto end = std::min(i + cfg.group_size, backgrounds.size());
        if (end - i < 2) {
            if (!groups.empty())
                groups.back().insert(groups.back().end(), backgrounds.begin() + i,
                                     backgrounds.begin() + end);
            continue;
        }
        groups.emplace_back(backgrounds.begin() + i, backgrounds.begin() + end);
    }

    // Followers keep one steady non-churning background acquaintance, which
    // ties the influencer stars into the main component.
    std::vector<std::uint32_t> stable_bg;
    for (auto b : backgrounds)
        if (last_week[b] == cfg.weeks - 1) stable_bg.push_back(b);
    if (stable_bg.empty()) stable_bg = backgrounds;
    std::vector<std::uint32_t> acquaintance(n_fol);
    for (std::size_t f = 0; f < n_fol; ++f)
        acquaintance[f] =
            stable_bg[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(stable_bg.size()) - 1))];

    // --- weekly simulation ---------------------------------------------------
    std::vector<Behavior> current(base);  // followers evolve; others stay near base
    for (std::size_t f = 0; f < n_fol; ++f) current[fol0 + f] = reset_profile[f];

    struct Draft {
        std::int64_t start_time;
        std::uint32_t seq;
        std::vector<std::uint32_t> team_a, team_b;
        std::vector<std::int64_t> seconds_a, seconds_b;  // captured at draft time
        std::int64_t duration;
        std::vector<bool> completed_a, completed_b;
    };
    std::vector<Draft> drafts;
    std::uint32_t seq = 0;

    std::vector<double> week_seconds(n), week_completion(n);
    for (std::size_t w = 0; w < cfg.weeks; ++w) {
        const std::int64_t week_start = kEpochBase + static_cast<std::int64_t>(w) * kWeekSeconds;
        auto active = [&](std::uint32_t p) { return w <= last_week[p]; };

        // 1. This week's intended behaviour.
        std::vector<double> want(n, 0.0);
        for (std::uint32_t p = 0; p < n; ++p) {
            if (!active(p)) continue;
            Behavior b;
            switch (role[p]) {
                case Role::influencer:
                case Role::hub:
                    b = base[p];  // constant by design
                    break;
                case Role::follower: {
                    const std::size_t f = p - fol0;
                    const std::size_t owner = f / cfg.followers_per_influencer;
                    if ((w + reset_offset[f]) % kResetPeriod == 0) {
                        current[p] = jitter(reset_profile[f], cfg.behavior_noise, rng);
                    } else {
                        current[p].matches +=
                            cfg.mimic_rate * (base[owner].matches - current[p].matches);
                        current[p].seconds +=
                            cfg.mimic_rate * (base[owner].seconds - current[p].seconds);
                        current[p].completion +=
                            cfg.mimic_rate * (base[owner].completion - current[p].completion);
                        current[p] = jitter(current[p], cfg.behavior_noise, rng);
                    }
                    b = current[p];
                    break;
                }
                case Role::tourist:
                case Role::background:
                    b = jitter(base[p], cfg.behavior_noise, rng);
                    break;
            }
            want[p] = b.matches;
            week_seconds[p] = b.seconds;
            week_completion[p] = b.completion;
        }

        // 2. Co-play demands, in a fixed order.
        std::vector<std::pair<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t>> demands;
        for (const auto& group : groups) {
            for (std::size_t i = 0; i < group.size(); ++i) {
                for (std::size_t j = i + 1; j < group.size(); ++j) {
                    if (!active(group[i]) || !active(group[j])) continue;
                    if (rng.bernoulli(cfg.group_coplay_prob))
                        demands.push_back({{group[i], group[j]}, 1});
                }
            }
        }
        for (std::size_t f = 0; f < n_fol; ++f) {
            const auto p = static_cast<std::uint32_t>(fol0 + f);
            const auto owner = static_cast<std::uint32_t>(f / cfg.followers_per_influencer);
            const bool resetting = (w + reset_offset[f]) % kResetPeriod == 0;
            if (!resetting && cfg.follower_coplay_matches > 0) {
                // The shared-match count never exceeds what the follower's own
                // behaviour supports, or realization would distort the vector.
                const auto cap = std::max<std::int64_t>(0, std::llround(current[p].matches) - 1);
                const auto shared = std::min<std::int64_t>(cfg.follower_coplay_matches, cap);
                if (shared >= 1)
                    demands.push_back({{owner, p}, static_cast<std::uint32_t>(shared)});
            }
            if (active(acquaintance[f])) demands.push_back({{p, acquaintance[f]}, 1});
        }
        std::vector<std::uint32_t> active_bg;
        for (auto b : backgrounds)
            if (active(b)) active_bg.push_back(b);
        for (std::size_t h = 0; h < n_hub; ++h) {
            const auto hub = static_cast<std::uint32_t>(hub0 + h);
            const auto want_partners = std::min(cfg.hub_partners_per_week, active_bg.size());
            auto picks = rng.sample_indices(active_bg.size(), want_partners);
            std::sort(picks.begin(), picks.end());
            for (auto i : picks) demands.push_back({{hub, active_bg[i]}, 1});
        }

        // 3. Budgets: matches wanted minus edge commitments.
        std::vector<std::int64_t> remaining(n, 0);
        std::vector<std::int64_t> committed(n, 0);
        for (const auto& [pair, count] : demands) {
            committed[pair.first] += count;
            committed[pair.second] += count;
        }
        for (std::uint32_t p = 0; p < n; ++p) {
            if (!active(p)) continue;
            const auto intended =
                std::max<std::int64_t>(std::llround(want[p]), std::max<std::int64_t>(committed[p], 1));
            remaining[p] = intended - committed[p];
        }

        // 4. Edge matches, each against one opponent drawn from the non-tourist
        //    pool (tourists must not appear in retained players' matches).
        std::vector<std::uint32_t> opponent_pool;
        for (std::uint32_t p = 0; p < n; ++p)
            if (active(p) && role[p] != Role::tourist) opponent_pool.push_back(p);
        std::size_t cursor = 0;
        auto next_opponent = [&](std::uint32_t avoid1, std::uint32_t avoid2) {
            for (std::size_t step = 0; step < opponent_pool.size(); ++step) {
                const auto cand = opponent_pool[cursor];
                cursor = (cursor + 1) % opponent_pool.size();
                if (cand != avoid1 && cand != avoid2 && remaining[cand] > 0) return cand;
            }
            // Everyone is exhausted; tolerate a slight overshoot.
            auto cand = opponent_pool[cursor];
            cursor = (cursor + 1) % opponent_pool.size();
            if (cand == avoid1 || cand == avoid2)
                cand = opponent_pool[cursor], cursor = (cursor + 1) % opponent_pool.size();
            return cand;
        };

        auto emit = [&](std::vector<std::uint32_t> team_a, std::vector<std::uint32_t> team_b) {
            Draft d;
            d.start_time = week_start + rng.uniform_int(0, kWeekSeconds - 1);
            d.seq = seq++;
            std::int64_t dur = 0;
            for (auto p : team_a) {
                d.seconds_a.push_back(std::llround(week_seconds[p]));
                dur = std::max(dur, d.seconds_a.back());
            }
            for (auto p : team_b) {
                d.seconds_b.push_back(std::llround(week_seconds[p]));
                dur = std::max(dur, d.seconds_b.back());
            }
            d.duration = dur;
            d.team_a = std::move(team_a);
            d.team_b = std::move(team_b);
            d.completed_a.assign(d.team_a.size(), false);
            d.completed_b.assign(d.team_b.size(), false);
            drafts.push_back(std::move(d));
        };

        const std::size_t week_first_draft = drafts.size();
        for (const auto& [pair, count] : demands) {
            for (std::uint32_t c = 0; c < count; ++c) {
                const auto opp = next_opponent(pair.first, pair.second);
                remaining[opp] -= 1;
                emit({pair.first, pair.second}, {opp});
            }
        }

        // 5. Fillers: 1v1 matches between the two largest leftover budgets;
        //    opponents never become teammates, so the graph is untouched.
        //    Tourists pair only among themselves.
        auto drain = [&](const std::vector<std::uint32_t>& pool) {
            using Item = std::pair<std::int64_t, std::uint32_t>;
            auto cmp = [](const Item& l, const Item& r) {
                if (l.first != r.first) return l.first < r.first;
                return l.second > r.second;
            };
            std::priority_queue<Item, std::vector<Item>, decltype(cmp)> heap(cmp);
            for (auto p : pool)
                if (remaining[p] > 0) heap.push({remaining[p], p});
            while (heap.size() >= 2) {
                auto first = heap.top();
                heap.pop();
                auto second = heap.top();
                heap.pop();
                emit({first.second}, {second.second});
                if (--first.first > 0) heap.push(first);
                if (--second.first > 0) heap.push(second);
            }
            // A single player can be left with budget; that remainder is
            // dropped (quantization noise).
        };
        std::vector<std::uint32_t> tourist_pool;
        for (std::uint32_t p = static_cast<std::uint32_t>(tour0); p < bg0; ++p)
            if (active(p) && remaining[p] > 0) tourist_pool.push_back(p);
        drain(opponent_pool);
        drain(tourist_pool);

        // 6. Completion flags: first round(rate * count) of each player's
        //    matches this week.
        std::vector<std::vector<std::pair<std::size_t, std::pair<bool, std::size_t>>>> played(n);
        for (std::size_t d = week_first_draft; d < drafts.size(); ++d) {
            for (std::size_t s = 0; s < drafts[d].team_a.size(); ++s)
                played[drafts[d].team_a[s]].push_back({d, {true, s}});
            for (std::size_t s = 0; s < drafts[d].team_b.size(); ++s)
                played[drafts[d].team_b[s]].push_back({d, {false, s}});
        }
        for (std::uint32_t p = 0; p < n; ++p) {
            if (played[p].empty()) continue;
            const auto total = played[p].size();
            const auto done = static_cast<std::size_t>(
                std::llround(week_completion[p] * static_cast<double>(total)));
            for (std::size_t i = 0; i < done && i < total; ++i) {
                const auto [d, slot] = played[p][i];
                if (slot.first)
                    drafts[d].completed_a[slot.second] = true;
                else
                    drafts[d].completed_b[slot.second] = true;
            }
        }
    }

    // --- materialize ---------------------------------------------------------
    std::sort(drafts.begin(), drafts.end(), [](const Draft& l, const Draft& r) {
        if (l.start_time != r.start_time) return l.start_time < r.start_time;
        return l.seq < r.seq;
    });

    SynthResult result;
    result.records.reserve(drafts.size());
    for (std::size_t i = 0; i < drafts.size(); ++i) {
        const auto& d = drafts[i];
        MatchRecord r;
        char buf[24];
        std::snprintf(buf, sizeof buf, "m%08zu", i);
        r.match_id = buf;
        r.start_time = d.start_time;
        r.duration = d.duration;
        auto fill = [&](const std::vector<std::uint32_t>& team,
                        const std::vector<std::int64_t>& seconds,
                        const std::vector<bool>& completed,
                        std::vector<PlayerParticipation>& out) {
            for (std::size_t s = 0; s < team.size(); ++s) {
                PlayerParticipation pp;
                pp.player_id = ids[team[s]];
                pp.seconds_played = std::min<std::int64_t>(d.duration, seconds[s]);
                pp.completed = completed[s];
                out.push_back(std::move(pp));
            }
        };
        fill(d.team_a, d.seconds_a, d.completed_a, r.team_a);
        fill(d.team_b, d.seconds_b, d.completed_b, r.team_b);
        result.records.push_back(std::move(r));
    }

    for (std::uint32_t p = 0; p < n; ++p) {
        result.truth.roles[ids[p]] = role_name(role[p]);
        if (role[p] == Role::influencer) result.truth.influencers.insert(ids[p]);
        if (role[p] == Role::follower) result.truth.followers.insert(ids[p]);
        if (role[p] == Role::hub) result.truth.hubs.insert(ids[p]);
    }
    return result;
}

}  // namespace coplay
