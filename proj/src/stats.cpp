#include "coplay/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace coplay {

double quantile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("stats: quantile of empty sample");
    if (q < 0.0 || q > 1.0) throw std::invalid_argument("stats: quantile level outside [0,1]");
    if (sorted.size() == 1) return sorted[0];
    const double h = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

Descriptive descriptive(std::span<const double> sample) {
    if (sample.empty()) throw std::invalid_argument("stats: descriptive of empty sample");
    std::vector<double> xs(sample.begin(), sample.end());
    std::sort(xs.begin(), xs.end());

    Descriptive d;
    d.min = xs.front();
    d.q25 = quantile_sorted(xs, 0.25);
    d.median = quantile_sorted(xs, 0.50);
    d.q75 = quantile_sorted(xs, 0.75);
    d.max = xs.back();

    double sum = 0;
    for (double x : xs) sum += x;
    d.mean = sum / static_cast<double>(xs.size());
    double ss = 0;
    for (double x : xs) ss += (x - d.mean) * (x - d.mean);
    d.sd = std::sqrt(ss / static_cast<double>(xs.size()));
    return d;
}

namespace {

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// Null distribution of U for group sizes (n, m): count[u] = number of rank
// arrangements with U = u. Classic recurrence c(n,m,u) = c(n-1,m,u-m) +
// c(n,m-1,u) (largest pooled value comes from A or from B). Counts fit in
// uint64 for n*m <= 400 (max C(40,20) ~ 1.4e11).
std::vector<std::uint64_t> u_null_distribution(std::size_t n, std::size_t m) {
    const std::size_t umax = n * m;
    // dp[i][u] = c(i, j, u) for the current column j; roll over j.
    std::vector<std::vector<std::uint64_t>> dp(n + 1, std::vector<std::uint64_t>(umax + 1, 0));
    for (std::size_t i = 0; i <= n; ++i) dp[i][0] = 1;  // j = 0
    for (std::size_t j = 1; j <= m; ++j) {
        std::vector<std::vector<std::uint64_t>> next(n + 1,
                                                     std::vector<std::uint64_t>(umax + 1, 0));
        next[0][0] = 1;
        for (std::size_t i = 1; i <= n; ++i) {
            for (std::size_t u = 0; u <= i * j; ++u) {
                std::uint64_t c = dp[i][u];  // largest from B: (i, j-1, u)
                if (u >= j) c += next[i - 1][u - j];  // largest from A: (i-1, j, u-j)
                next[i][u] = c;
            }
        }
        dp = std::move(next);
    }
    return dp[n];
}

}  // namespace

GroupComparison mann_whitney_u(std::span<const double> a, std::span<const double> b,
                               Alternative alternative, MwMethod method) {
    if (a.empty() || b.empty())
        throw std::invalid_argument("stats: Mann-Whitney requires nonempty samples");

    const std::size_t na = a.size(), nb = b.size();
    struct Tagged {
        double value;
        bool from_a;
    };
    std::vector<Tagged> pooled;
    pooled.reserve(na + nb);
    for (double x : a) pooled.push_back({x, true});
    for (double x : b) pooled.push_back({x, false});
    std::stable_sort(pooled.begin(), pooled.end(),
                     [](const Tagged& l, const Tagged& r) { return l.value < r.value; });

    // Average ranks for ties; collect tie-group sizes for the variance
    // correction.
    const std::size_t n = pooled.size();
    std::vector<double> rank(n);
    double tie_sum = 0;
    bool has_ties = false;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && pooled[j].value == pooled[i].value) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) rank[k] = avg;
        const auto t = static_cast<double>(j - i);
        if (j - i > 1) {
            has_ties = true;
            tie_sum += t * t * t - t;
        }
        i = j;
    }

    double rank_sum_a = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (pooled[i].from_a) rank_sum_a += rank[i];
    const double ua = rank_sum_a - static_cast<double>(na) * (static_cast<double>(na) + 1) / 2.0;

    GroupComparison gc;
    gc.alternative = alternative;
    gc.u = ua;
    gc.n_a = na;
    gc.n_b = nb;
    {
        const auto da = descriptive(a);
        const auto db = descriptive(b);
        gc.mean_a = da.mean;
        gc.sd_a = da.sd;
        gc.mean_b = db.mean;
        gc.sd_b = db.sd;
    }

    const bool use_exact = method == MwMethod::automatic ? (!has_ties && na * nb <= 400)
                                                         : method == MwMethod::exact;
    if (use_exact && (has_ties || na * nb > 400))
        throw std::invalid_argument(
            "stats: exact Mann-Whitney needs a tie-free pooled sample with n_a*n_b <= 400");
    if (use_exact) {
        gc.method = "exact";
        const auto counts = u_null_distribution(na, nb);
        std::uint64_t total = 0;
        for (auto c : counts) total += c;
        const auto u_obs = static_cast<std::size_t>(std::llround(ua));
        std::uint64_t favourable = 0;
        if (alternative == Alternative::a_greater) {
            for (std::size_t u = u_obs; u < counts.size(); ++u) favourable += counts[u];
        } else {
            for (std::size_t u = 0; u <= u_obs && u < counts.size(); ++u) favourable += counts[u];
        }
        gc.p = static_cast<double>(favourable) / static_cast<double>(total);
    } else {
        gc.method = "normal-approximation";
        const double dna = static_cast<double>(na), dnb = static_cast<double>(nb);
        const double N = dna + dnb;
        const double mu = dna * dnb / 2.0;
        double var = dna * dnb / 12.0 * (N + 1.0 - tie_sum / (N * (N - 1.0)));
        if (var < 0) var = 0;
        const double sd = std::sqrt(var);
        if (sd <= 0.0) {
            gc.p = 1.0;  // fully degenerate: no evidence either way
        } else if (alternative == Alternative::a_greater) {
            gc.p = normal_sf((ua - mu - 0.5) / sd);
        } else {
            gc.p = normal_sf((mu - ua - 0.5) / sd);
        }
    }
    gc.p = std::min(1.0, std::max(gc.p, std::numeric_limits<double>::min()));
    return gc;
}

namespace {

// Values for the set members, in the set's (sorted) order; players missing
// from the table are skipped.
std::vector<double> values_for(const std::set<std::string>& group,
                               const std::map<std::string, double>& table) {
    std::vector<double> out;
    out.reserve(group.size());
    for (const auto& player : group) {
        auto it = table.find(player);
        if (it != table.end()) out.push_back(it->second);
    }
    return out;
}

}  // namespace

ComparisonBattery compare_groups(const std::set<std::string>& central,
                                 const std::set<std::string>& influential,
                                 const PlayerMetricTables& tables) {
    if (central.empty()) throw std::invalid_argument("stats: group 'central' is empty");
    if (influential.empty()) throw std::invalid_argument("stats: group 'influential' is empty");

    ComparisonBattery battery;
    battery.n_central = central.size();
    battery.n_influential = influential.size();
    for (const auto& p : influential) battery.overlap += central.contains(p);
    battery.disjoint = battery.overlap == 0;

    struct Item {
        const char* name;
        const std::map<std::string, double>* table;
        Alternative influential_vs_central;
    };
    const Item items[] = {
        {"influence_score", &tables.influence, Alternative::a_greater},
        {"degree", &tables.degree, Alternative::a_less},
        {"closeness", &tables.closeness, Alternative::a_less},
        {"betweenness", &tables.betweenness, Alternative::a_less},
        {"eigenvector", &tables.eigenvector, Alternative::a_less},
        {"pagerank", &tables.pagerank, Alternative::a_less},
        {"weighted_degree", &tables.weighted_degree, Alternative::a_greater},
        {"edge_influence_sd", &tables.edge_influence_sd, Alternative::a_less},
        {"retention_transfer", &tables.retention_transfer, Alternative::a_less},
    };
    for (const auto& item : items) {
        const auto sample_inf = values_for(influential, *item.table);
        const auto sample_cen = values_for(central, *item.table);
        if (sample_inf.empty() || sample_cen.empty())
            throw std::runtime_error(std::string("stats: no '") + item.name +
                                     "' values for one of the groups");
        auto gc = mann_whitney_u(sample_inf, sample_cen, item.influential_vs_central);
        gc.metric = item.name;
        gc.group_a = "influential";
        gc.group_b = "central";
        battery.tests.push_back(std::move(gc));
    }
    return battery;
}

}  // namespace coplay
