#pragma once

#include <array>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "coplay/graph.hpp"

namespace coplay {

struct ConvergenceError : std::runtime_error {
    ConvergenceError(std::string what, int iterations, double residual)
        : std::runtime_error(std::move(what)), iterations(iterations), residual(residual) {}
    int iterations;
    double residual;
};

/// All five measures, indexed by graph node. Centralities are computed on the
/// unweighted topology; edge weights only matter to the influence scoring.
struct CentralityScores {
    std::vector<double> degree;
    std::vector<double> closeness;
    std::vector<double> betweenness;
    std::vector<double> eigenvector;
    std::vector<double> pagerank;
};

/// Raw neighbor count.
std::vector<double> degree_centrality(const PlayerGraph& g);

/// Wasserman-Faust closeness with component scaling:
/// (R / (n-1)) * (R / D) for R reachable others at total distance D;
/// isolated nodes score 0.
std::vector<double> closeness_centrality(const PlayerGraph& g, int threads = 0);

/// Exact unweighted betweenness (Brandes), each unordered pair counted once,
/// unnormalized.
std::vector<double> betweenness_centrality(const PlayerGraph& g, int threads = 0);

/// Dominant-eigenvector centrality per connected component via shifted power
/// iteration. Each component's Perron vector is max-normalized and scaled by
/// the ratio of the component's spectral radius to the global maximum, so the
/// best-embedded node of the strongest component scores exactly 1 and
/// edgeless nodes score 0.
std::vector<double> eigenvector_centrality(const PlayerGraph& g, double tol = 1e-8,
                                           int max_iter = 1000);

/// Power iteration with uniform teleport; isolated nodes are dangling and
/// their mass is redistributed uniformly. Scores sum to 1.
std::vector<double> pagerank(const PlayerGraph& g, double damping = 0.85, double tol = 1e-9,
                             int max_iter = 200);

CentralityScores all_centralities(const PlayerGraph& g, int threads = 0);

struct CentralSelection {
    std::set<std::string> players;
    // Quantile thresholds in measure order: degree, closeness, betweenness,
    // eigenvector, pagerank.
    std::array<double, 5> thresholds{};
};

/// Players at or above the quantile threshold of every measure (ties at the
/// threshold are included). An empty intersection is a valid result.
CentralSelection select_central_players(const PlayerGraph& g, const CentralityScores& scores,
                                        double quantile = 0.90);

}  // namespace coplay
