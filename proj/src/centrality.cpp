#include "coplay/centrality.hpp"

#include <algorithm>
#include <cmath>

#include "coplay/parallel.hpp"
#include "coplay/stats.hpp"

namespace coplay {

std::vector<double> degree_centrality(const PlayerGraph& g) {
    std::vector<double> scores(g.node_count());
    for (std::uint32_t v = 0; v < g.node_count(); ++v) scores[v] = g.degree(v);
    return scores;
}

std::vector<double> closeness_centrality(const PlayerGraph& g, int threads) {
    const std::size_t n = g.node_count();
    std::vector<double> scores(n, 0.0);
    if (n <= 1) return scores;
    for_each_chunk(n, 64, threads, [&](std::size_t, std::size_t lo, std::size_t hi) {
        std::vector<std::int32_t> dist(n);
        std::vector<std::uint32_t> queue;
        queue.reserve(n);
        for (std::size_t sv = lo; sv < hi; ++sv) {
            const auto s = static_cast<std::uint32_t>(sv);
            std::fill(dist.begin(), dist.end(), -1);
            queue.clear();
            queue.push_back(s);
            dist[s] = 0;
            std::uint64_t reach = 0, dist_sum = 0;
            for (std::size_t head = 0; head < queue.size(); ++head) {
                const auto v = queue[head];
                for (auto u : g.neighbors(v)) {
                    if (dist[u] < 0) {
                        dist[u] = dist[v] + 1;
                        queue.push_back(u);
                        ++reach;
                        dist_sum += static_cast<std::uint64_t>(dist[u]);
                    }
                }
            }
            if (reach == 0) continue;  // isolated
            const double r = static_cast<double>(reach);
            scores[s] = (r / static_cast<double>(n - 1)) * (r / static_cast<double>(dist_sum));
        }
    });
    return scores;
}

std::vector<double> betweenness_centrality(const PlayerGraph& g, int threads) {
    const std::size_t n = g.node_count();
    std::vector<double> scores(n, 0.0);
    if (n < 3) return scores;

    // One accumulator per fixed-size source chunk, reduced in chunk order, so
    // the floating-point sums do not depend on the thread count.
    const std::size_t chunk = 64;
    const std::size_t chunk_count = (n + chunk - 1) / chunk;
    std::vector<std::vector<double>> partial(chunk_count);

    for_each_chunk(n, chunk, threads, [&](std::size_t c, std::size_t lo, std::size_t hi) {
        std::vector<double> acc(n, 0.0);
        std::vector<std::int32_t> dist(n);
        std::vector<double> sigma(n), delta(n);
        std::vector<std::uint32_t> order;
        order.reserve(n);
        for (std::size_t sv = lo; sv < hi; ++sv) {
            const auto s = static_cast<std::uint32_t>(sv);
            if (g.degree(s) == 0) continue;
            std::fill(dist.begin(), dist.end(), -1);
            std::fill(sigma.begin(), sigma.end(), 0.0);
            std::fill(delta.begin(), delta.end(), 0.0);
            order.clear();

            dist[s] = 0;
            sigma[s] = 1.0;
            order.push_back(s);
            for (std::size_t head = 0; head < order.size(); ++head) {
                const auto v = order[head];
                for (auto u : g.neighbors(v)) {
                    if (dist[u] < 0) {
                        dist[u] = dist[v] + 1;
                        order.push_back(u);
                    }
                    if (dist[u] == dist[v] + 1) sigma[u] += sigma[v];
                }
            }
            // Dependency accumulation in reverse BFS order.
            for (std::size_t i = order.size(); i-- > 1;) {
                const auto w = order[i];
                for (auto v : g.neighbors(w)) {
                    if (dist[v] == dist[w] - 1)
                        delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
                }
                if (w != s) acc[w] += delta[w];
            }
        }
        partial[c] = std::move(acc);
    });

    for (const auto& acc : partial) {
        if (acc.empty()) continue;
        for (std::size_t v = 0; v < n; ++v) scores[v] += acc[v];
    }
    // Each unordered pair was accumulated from both endpoints.
    for (auto& x : scores) x /= 2.0;
    return scores;
}

std::vector<double> eigenvector_centrality(const PlayerGraph& g, double tol, int max_iter) {
    const std::size_t n = g.node_count();
    if (n == 0) throw std::invalid_argument("centrality: eigenvector of an empty graph");
    std::vector<double> scores(n, 0.0);

    const auto comp = connected_components(g);
    std::vector<std::vector<std::uint32_t>> members(comp.size.size());
    for (std::uint32_t c = 0; c < comp.size.size(); ++c) members[c].reserve(comp.size[c]);
    for (std::uint32_t v = 0; v < n; ++v) members[comp.label[v]].push_back(v);

    std::vector<double> lambda(comp.size.size(), 0.0);
    std::vector<double> x(n), y(n);
    for (std::uint32_t c = 0; c < members.size(); ++c) {
        const auto& nodes = members[c];
        if (nodes.size() < 2) continue;  // edgeless component: spectral radius 0

        for (auto v : nodes) x[v] = 1.0;
        double comp_lambda = 0.0;
        bool converged = false;
        double diff = 0.0;
        for (int it = 0; it < max_iter && !converged; ++it) {
            // Shifted iteration (A + I) keeps bipartite components from
            // oscillating between the +/- dominant eigenpair.
            double maxy = 0.0;
            for (auto v : nodes) {
                double sum = x[v];
                for (auto u : g.neighbors(v)) sum += x[u];
                y[v] = sum;
                maxy = std::max(maxy, sum);
            }
            diff = 0.0;
            for (auto v : nodes) {
                y[v] /= maxy;
                diff = std::max(diff, std::abs(y[v] - x[v]));
                x[v] = y[v];
            }
            comp_lambda = maxy - 1.0;  // spectral radius of A itself
            converged = diff < tol;
        }
        if (!converged)
            throw ConvergenceError("centrality: eigenvector power iteration did not converge "
                                   "(residual " + std::to_string(diff) + ")",
                                   max_iter, diff);
        lambda[c] = comp_lambda;
        for (auto v : nodes) scores[v] = x[v];
    }

    const double lambda_max = *std::max_element(lambda.begin(), lambda.end());
    if (lambda_max > 0.0) {
        for (std::uint32_t v = 0; v < n; ++v) {
            const auto c = comp.label[v];
            scores[v] *= lambda[c] / lambda_max;
        }
    }
    return scores;
}

std::vector<double> pagerank(const PlayerGraph& g, double damping, double tol, int max_iter) {
    const std::size_t n = g.node_count();
    std::vector<double> pr(n, 0.0);
    if (n == 0) return pr;
    const double dn = static_cast<double>(n);
    std::fill(pr.begin(), pr.end(), 1.0 / dn);

    std::vector<double> next(n);
    double residual = 0.0;
    for (int it = 0; it < max_iter; ++it) {
        double dangling = 0.0;
        for (std::uint32_t v = 0; v < n; ++v)
            if (g.degree(v) == 0) dangling += pr[v];
        const double base = (1.0 - damping) / dn + damping * dangling / dn;
        for (std::uint32_t v = 0; v < n; ++v) {
            double in = 0.0;
            for (auto u : g.neighbors(v)) in += pr[u] / static_cast<double>(g.degree(u));
            next[v] = base + damping * in;
        }
        residual = 0.0;
        for (std::uint32_t v = 0; v < n; ++v) residual += std::abs(next[v] - pr[v]);
        pr.swap(next);
        if (residual < tol) return pr;
    }
    throw ConvergenceError(
        "centrality: pagerank did not converge (L1 residual " + std::to_string(residual) + ")",
        max_iter, residual);
}

CentralityScores all_centralities(const PlayerGraph& g, int threads) {
    CentralityScores s;
    s.degree = degree_centrality(g);
    s.closeness = closeness_centrality(g, threads);
    s.betweenness = betweenness_centrality(g, threads);
    s.eigenvector = eigenvector_centrality(g);
    s.pagerank = pagerank(g);
    return s;
}

CentralSelection select_central_players(const PlayerGraph& g, const CentralityScores& scores,
                                        double quantile) {
    if (quantile <= 0.0 || quantile >= 1.0)
        throw std::invalid_argument("centrality: quantile must be in (0,1)");
    CentralSelection sel;
    if (g.node_count() == 0) return sel;

    const std::vector<double>* measures[5] = {&scores.degree, &scores.closeness,
                                              &scores.betweenness, &scores.eigenvector,
                                              &scores.pagerank};
    for (std::size_t m = 0; m < 5; ++m) {
        std::vector<double> sorted(*measures[m]);
        std::sort(sorted.begin(), sorted.end());
        sel.thresholds[m] = quantile_sorted(sorted, quantile);
    }
    for (std::uint32_t v = 0; v < g.node_count(); ++v) {
        bool all = true;
        for (std::size_t m = 0; m < 5 && all; ++m) all = (*measures[m])[v] >= sel.thresholds[m];
        if (all) sel.players.insert(g.players()[v]);
    }
    return sel;
}

}  // namespace coplay
