#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coplay/match.hpp"

namespace coplay {

/// Static weighted undirected co-play graph. Nodes are every player appearing
/// in the corpus (teammates and opponents alike); an edge connects two players
/// for each match they shared as teammates, weighted by the shared-match
/// count. Immutable once built.
class PlayerGraph {
public:
    struct Edge {
        std::uint32_t a = 0, b = 0;  // a < b
        std::uint32_t weight = 0;
    };

    static PlayerGraph from_records(std::span<const MatchRecord> records);
    /// Direct construction for tools and tests; duplicate pairs accumulate.
    static PlayerGraph from_edges(std::size_t node_count,
                                  std::span<const std::pair<std::uint32_t, std::uint32_t>> edges);

    std::size_t node_count() const { return ids_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<std::string>& players() const { return ids_; }
    std::optional<std::uint32_t> index_of(std::string_view player) const;
    const std::vector<Edge>& edges() const { return edges_; }

    std::span<const std::uint32_t> neighbors(std::uint32_t v) const;
    std::span<const std::uint32_t> neighbor_weights(std::uint32_t v) const;
    std::uint32_t degree(std::uint32_t v) const;
    std::uint64_t weighted_degree(std::uint32_t v) const;
    bool has_edge(std::uint32_t a, std::uint32_t b) const;

private:
    void build_adjacency();

    std::vector<std::string> ids_;  // sorted; node index = position
    std::vector<Edge> edges_;       // sorted by (a, b)
    std::vector<std::size_t> offsets_;
    std::vector<std::uint32_t> adjacency_;
    std::vector<std::uint32_t> adjacency_weights_;
};

/// Descriptive statistics of the static network.
struct GraphSummary {
    std::size_t nodes = 0;
    std::size_t edges = 0;
    double avg_degree = 0;
    double avg_weighted_degree = 0;
    std::size_t components = 0;
    double lcc_fraction = 0;
    double second_lcc_fraction = 0;
    double avg_clustering = 0;
    double avg_path_length = 0;   // within the LCC
    std::size_t diameter = 0;     // within the LCC; lower bound when estimated
    bool paths_estimated = false;
    std::size_t path_sources = 0;  // BFS sources used for the path statistics
};

/// Components, clustering and LCC path statistics. Path length and diameter
/// are exact (all-pairs BFS) when the LCC has at most exact_paths_limit nodes;
/// above that they are estimated from a fixed-seed sample of at least 1000
/// sources and the diameter is a lower bound.
GraphSummary graph_summary(const PlayerGraph& g, std::size_t exact_paths_limit = 20000,
                           int threads = 0);

/// Connected components as a label per node plus the member count per label.
struct ComponentInfo {
    std::vector<std::uint32_t> label;
    std::vector<std::uint32_t> size;  // indexed by label
};
ComponentInfo connected_components(const PlayerGraph& g);

}  // namespace coplay
