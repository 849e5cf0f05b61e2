#include "coplay/graph.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>
#include <unordered_map>

#include "coplay/parallel.hpp"
#include "coplay/rng.hpp"

namespace coplay {

namespace {

std::vector<std::string> collect_player_ids(std::span<const MatchRecord> records) {
    std::vector<std::string> ids;
    for (const auto& r : records)
        for (const auto* team : {&r.team_a, &r.team_b})
            for (const auto& p : *team) ids.push_back(p.player_id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

}  // namespace

PlayerGraph PlayerGraph::from_records(std::span<const MatchRecord> records) {
    PlayerGraph g;
    g.ids_ = collect_player_ids(records);
    std::unordered_map<std::string_view, std::uint32_t> index;
    index.reserve(g.ids_.size());
    for (std::uint32_t i = 0; i < g.ids_.size(); ++i) index.emplace(g.ids_[i], i);

    std::unordered_map<std::uint64_t, std::uint32_t> weights;
    for (const auto& r : records) {
        // Only teammates co-play; the opposing roster contributes nothing.
        for (const auto* team : {&r.team_a, &r.team_b}) {
            for (std::size_t i = 0; i < team->size(); ++i) {
                for (std::size_t j = i + 1; j < team->size(); ++j) {
                    std::uint32_t a = index.at((*team)[i].player_id);
                    std::uint32_t b = index.at((*team)[j].player_id);
                    if (a == b) continue;
                    if (a > b) std::swap(a, b);
                    ++weights[(static_cast<std::uint64_t>(a) << 32) | b];
                }
            }
        }
    }
    g.edges_.reserve(weights.size());
    for (const auto& [key, w] : weights)
        g.edges_.push_back({static_cast<std::uint32_t>(key >> 32), static_cast<std::uint32_t>(key), w});
    std::sort(g.edges_.begin(), g.edges_.end(),
              [](const Edge& l, const Edge& r) { return std::pair{l.a, l.b} < std::pair{r.a, r.b}; });
    g.build_adjacency();
    return g;
}

PlayerGraph PlayerGraph::from_edges(
    std::size_t node_count, std::span<const std::pair<std::uint32_t, std::uint32_t>> edges) {
    PlayerGraph g;
    g.ids_.reserve(node_count);
    for (std::size_t i = 0; i < node_count; ++i) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "n%04zu", i);
        g.ids_.emplace_back(buf);
    }
    std::unordered_map<std::uint64_t, std::uint32_t> weights;
    for (auto [a, b] : edges) {
        if (a == b) throw std::invalid_argument("graph: self-loops are not allowed");
        if (a >= node_count || b >= node_count)
            throw std::invalid_argument("graph: edge endpoint out of range");
        if (a > b) std::swap(a, b);
        ++weights[(static_cast<std::uint64_t>(a) << 32) | b];
    }
    g.edges_.reserve(weights.size());
    for (const auto& [key, w] : weights)
        g.edges_.push_back({static_cast<std::uint32_t>(key >> 32), static_cast<std::uint32_t>(key), w});
    std::sort(g.edges_.begin(), g.edges_.end(),
              [](const Edge& l, const Edge& r) { return std::pair{l.a, l.b} < std::pair{r.a, r.b}; });
    g.build_adjacency();
    return g;
}

void PlayerGraph::build_adjacency() {
    const std::size_t n = ids_.size();
    offsets_.assign(n + 1, 0);
    for (const auto& e : edges_) {
        ++offsets_[e.a + 1];
        ++offsets_[e.b + 1];
    }
    for (std::size_t i = 1; i <= n; ++i) offsets_[i] += offsets_[i - 1];
    adjacency_.resize(offsets_[n]);
    adjacency_weights_.resize(offsets_[n]);
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) {
        adjacency_[cursor[e.a]] = e.b;
        adjacency_weights_[cursor[e.a]++] = e.weight;
        adjacency_[cursor[e.b]] = e.a;
        adjacency_weights_[cursor[e.b]++] = e.weight;
    }
    // Edges are sorted, so each adjacency list ends up sorted as well except
    // for the mixed a/b insertions; sort each list with its weights.
    for (std::size_t v = 0; v < n; ++v) {
        const auto lo = offsets_[v], hi = offsets_[v + 1];
        std::vector<std::pair<std::uint32_t, std::uint32_t>> tmp;
        tmp.reserve(hi - lo);
        for (std::size_t i = lo; i < hi; ++i) tmp.emplace_back(adjacency_[i], adjacency_weights_[i]);
        std::sort(tmp.begin(), tmp.end());
        for (std::size_t i = lo; i < hi; ++i) {
            adjacency_[i] = tmp[i - lo].first;
            adjacency_weights_[i] = tmp[i - lo].second;
        }
    }
}

std::optional<std::uint32_t> PlayerGraph::index_of(std::string_view player) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), player);
    if (it == ids_.end() || *it != player) return std::nullopt;
    return static_cast<std::uint32_t>(it - ids_.begin());
}

std::span<const std::uint32_t> PlayerGraph::neighbors(std::uint32_t v) const {
    return {adjacency_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::span<const std::uint32_t> PlayerGraph::neighbor_weights(std::uint32_t v) const {
    return {adjacency_weights_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::uint32_t PlayerGraph::degree(std::uint32_t v) const {
    return static_cast<std::uint32_t>(offsets_[v + 1] - offsets_[v]);
}

std::uint64_t PlayerGraph::weighted_degree(std::uint32_t v) const {
    std::uint64_t sum = 0;
    for (auto w : neighbor_weights(v)) sum += w;
    return sum;
}

bool PlayerGraph::has_edge(std::uint32_t a, std::uint32_t b) const {
    const auto adj = neighbors(a);
    return std::binary_search(adj.begin(), adj.end(), b);
}

ComponentInfo connected_components(const PlayerGraph& g) {
    const auto n = static_cast<std::uint32_t>(g.node_count());
    ComponentInfo info;
    info.label.assign(n, UINT32_MAX);
    std::vector<std::uint32_t> stack;
    for (std::uint32_t s = 0; s < n; ++s) {
        if (info.label[s] != UINT32_MAX) continue;
        const auto label = static_cast<std::uint32_t>(info.size.size());
        info.size.push_back(0);
        stack.push_back(s);
        info.label[s] = label;
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            ++info.size[label];
            for (auto u : g.neighbors(v)) {
                if (info.label[u] == UINT32_MAX) {
                    info.label[u] = label;
                    stack.push_back(u);
                }
            }
        }
    }
    return info;
}

namespace {

struct PathStats {
    std::uint64_t dist_sum = 0;
    std::uint64_t pair_count = 0;
    std::size_t ecc_max = 0;
};

// BFS from one source restricted to its component; distances to all reached
// nodes (source excluded from the sums).
PathStats bfs_paths(const PlayerGraph& g, std::uint32_t source, std::vector<std::int32_t>& dist,
                    std::vector<std::uint32_t>& queue) {
    PathStats st;
    dist.assign(g.node_count(), -1);
    queue.clear();
    queue.push_back(source);
    dist[source] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto v = queue[head];
        for (auto u : g.neighbors(v)) {
            if (dist[u] < 0) {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
                st.dist_sum += static_cast<std::uint64_t>(dist[u]);
                ++st.pair_count;
                st.ecc_max = std::max(st.ecc_max, static_cast<std::size_t>(dist[u]));
            }
        }
    }
    return st;
}

}  // namespace

GraphSummary graph_summary(const PlayerGraph& g, std::size_t exact_paths_limit, int threads) {
    GraphSummary s;
    s.nodes = g.node_count();
    s.edges = g.edge_count();
    if (s.nodes == 0) return s;

    const double n = static_cast<double>(s.nodes);
    s.avg_degree = 2.0 * static_cast<double>(s.edges) / n;
    std::uint64_t weight_sum = 0;
    for (const auto& e : g.edges()) weight_sum += e.weight;
    s.avg_weighted_degree = 2.0 * static_cast<double>(weight_sum) / n;

    const auto comp = connected_components(g);
    s.components = comp.size.size();
    std::vector<std::uint32_t> sizes = comp.size;
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    s.lcc_fraction = static_cast<double>(sizes[0]) / n;
    s.second_lcc_fraction = sizes.size() > 1 ? static_cast<double>(sizes[1]) / n : 0.0;

    // Mean of local clustering coefficients; degree < 2 contributes 0.
    {
        std::vector<double> local(s.nodes, 0.0);
        for_each_chunk(s.nodes, 256, threads, [&](std::size_t, std::size_t lo, std::size_t hi) {
            for (std::size_t v = lo; v < hi; ++v) {
                const auto adj = g.neighbors(static_cast<std::uint32_t>(v));
                if (adj.size() < 2) continue;
                std::uint64_t links = 0;
                for (std::size_t i = 0; i < adj.size(); ++i)
                    for (std::size_t j = i + 1; j < adj.size(); ++j)
                        links += g.has_edge(adj[i], adj[j]) ? 1u : 0u;
                const double possible =
                    static_cast<double>(adj.size()) * (static_cast<double>(adj.size()) - 1.0) / 2.0;
                local[v] = static_cast<double>(links) / possible;
            }
        });
        double sum = 0;
        for (double c : local) sum += c;
        s.avg_clustering = sum / n;
    }

    // Path statistics within the LCC.
    const auto lcc_label = static_cast<std::uint32_t>(
        std::max_element(comp.size.begin(), comp.size.end()) - comp.size.begin());
    std::vector<std::uint32_t> lcc_nodes;
    for (std::uint32_t v = 0; v < s.nodes; ++v)
        if (comp.label[v] == lcc_label) lcc_nodes.push_back(v);
    const std::size_t nl = lcc_nodes.size();
    if (nl >= 2) {
        std::vector<std::uint32_t> sources;
        if (nl <= exact_paths_limit) {
            sources = lcc_nodes;
        } else {
            s.paths_estimated = true;
            const std::size_t want = std::min<std::size_t>(nl, 1000);
            Rng rng(0x9a7557a75ULL);  // fixed seed: sampled estimates stay reproducible
            auto picks = rng.sample_indices(nl, want);
            std::sort(picks.begin(), picks.end());
            sources.reserve(want);
            for (auto i : picks) sources.push_back(lcc_nodes[i]);
        }
        s.path_sources = sources.size();

        const std::size_t chunk = 64;
        const std::size_t chunk_count = (sources.size() + chunk - 1) / chunk;
        std::vector<PathStats> partial(chunk_count);
        for_each_chunk(sources.size(), chunk, threads,
                       [&](std::size_t c, std::size_t lo, std::size_t hi) {
                           std::vector<std::int32_t> dist;
                           std::vector<std::uint32_t> queue;
                           PathStats acc;
                           for (std::size_t i = lo; i < hi; ++i) {
                               const auto st = bfs_paths(g, sources[i], dist, queue);
                               acc.dist_sum += st.dist_sum;
                               acc.pair_count += st.pair_count;
                               acc.ecc_max = std::max(acc.ecc_max, st.ecc_max);
                           }
                           partial[c] = acc;
                       });
        PathStats total;
        for (const auto& st : partial) {
            total.dist_sum += st.dist_sum;
            total.pair_count += st.pair_count;
            total.ecc_max = std::max(total.ecc_max, st.ecc_max);
        }
        s.avg_path_length =
            total.pair_count > 0
                ? static_cast<double>(total.dist_sum) / static_cast<double>(total.pair_count)
                : 0.0;
        s.diameter = total.ecc_max;
    }
    return s;
}

}  // namespace coplay
