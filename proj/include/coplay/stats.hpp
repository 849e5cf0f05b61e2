#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace coplay {

/// Quantile by linear interpolation between closest ranks; input must be
/// sorted ascending and nonempty, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

struct Descriptive {
    double min = 0, q25 = 0, median = 0, q75 = 0, max = 0;
    double mean = 0;
    double sd = 0;  // population standard deviation
};

Descriptive descriptive(std::span<const double> sample);  // throws on empty input

enum class Alternative {
    a_greater,  // H_a: first sample stochastically greater
    a_less,     // H_a: first sample stochastically less
};

struct GroupComparison {
    std::string metric;
    std::string group_a, group_b;
    Alternative alternative = Alternative::a_greater;
    double u = 0;  // U statistic of the first sample
    double p = 1;  // one-sided
    std::size_t n_a = 0, n_b = 0;
    double mean_a = 0, sd_a = 0, mean_b = 0, sd_b = 0;
    std::string method;  // "exact" or "normal-approximation"
};

enum class MwMethod {
    automatic,  // exact when n_a*n_b <= 400 and tie-free, else approximation
    exact,
    normal_approximation,
};

/// Rank-sum Mann-Whitney U with average ranks for ties. The p-value is exact
/// (full null distribution of U) when n_a*n_b <= 400 and the pooled sample is
/// tie-free; otherwise a normal approximation with tie and continuity
/// corrections is used. Forcing the exact method on tied or oversized samples
/// throws.
GroupComparison mann_whitney_u(std::span<const double> a, std::span<const double> b,
                               Alternative alternative, MwMethod method = MwMethod::automatic);

/// Per-player metric tables feeding the central-vs-influential battery.
struct PlayerMetricTables {
    std::map<std::string, double> influence;
    std::map<std::string, double> degree;
    std::map<std::string, double> closeness;
    std::map<std::string, double> betweenness;
    std::map<std::string, double> eigenvector;
    std::map<std::string, double> pagerank;
    std::map<std::string, double> weighted_degree;
    std::map<std::string, double> edge_influence_sd;
    std::map<std::string, double> retention_transfer;  // only players with neighbors
};

struct ComparisonBattery {
    std::size_t n_central = 0, n_influential = 0;
    std::size_t overlap = 0;
    bool disjoint = false;
    std::vector<GroupComparison> tests;
};

/// Runs the fixed comparison battery between the central and the influential
/// group: influence score, the five centralities, average weighted degree,
/// per-node edge-influence standard deviation and retention transfer, each
/// with its stated one-sided alternative. Throws if either group is empty.
ComparisonBattery compare_groups(const std::set<std::string>& central,
                                 const std::set<std::string>& influential,
                                 const PlayerMetricTables& tables);

}  // namespace coplay
