#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "infoflow/errors.hpp"

namespace infoflow {

/// Dataset-native vertex identifier. Not required to be dense.
using VertexId = std::uint64_t;

struct EdgeTriple {
    VertexId src;
    VertexId dst;
    double weight;
};

/// What to do with raw weights below 1.
enum class WeightNormalization {
    ScaleMin, ///< divide every weight by the minimum positive weight
    Reject,   ///< fail fast
};

struct LoadOptions {
    bool directed = true;
    bool weighted = true;
    WeightNormalization normalization = WeightNormalization::ScaleMin;
};

/// Index-aligned view of a vertex's out-edges.
struct NeighborView {
    std::span<const VertexId> neighbors;
    std::span<const double> weights;

    std::size_t size() const { return neighbors.size(); }
    bool empty() const { return neighbors.empty(); }
};

/// Directed weighted graph stored as a hash table keyed by source vertex.
/// Each key with out-degree > 0 maps to two index-aligned dynamic lists:
/// the neighbor list and the corresponding edge-weight list, in
/// first-occurrence order. Invariants maintained by construction:
///
///  - every stored weight is >= 1,
///  - no self-loops (dropped at ingestion), no duplicate neighbors
///    (parallel edges merged by summing weights),
///  - total stored list entries == 2 * edge_count.
///
/// Mutable only during ingestion/add_edge (single writer); safe for
/// concurrent reads afterwards.
class Graph {
public:
    Graph() = default;

    /// Build a graph from in-memory triples, applying the same rules as
    /// file loading: optional undirected doubling, weight normalization,
    /// self-loop dropping, duplicate merging. Unweighted inputs should
    /// carry weight 1 in the triples.
    static Graph from_triples(const std::vector<EdgeTriple>& triples, const LoadOptions& opts);

    /// Insert one edge (weight must be >= 1). Merges with an existing
    /// (src,dst) edge by summing weights; drops self-loops silently but
    /// still records the endpoint in the vertex set.
    void add_edge(const EdgeTriple& t);

    /// Record a vertex with no incident edges (idempotent).
    void add_vertex(VertexId u) { vertices_.insert(u); }

    /// Out-neighborhood of u; empty pair for sinks and unknown vertices.
    NeighborView neighborhood(VertexId u) const;

    std::size_t out_degree(VertexId u) const;          ///< delta(u)
    std::size_t in_degree(VertexId u) const;           ///< delta_i(u)
    double weighted_out_degree(VertexId u) const;      ///< delta*(u)

    std::size_t edge_count() const { return edge_count_; }
    std::size_t vertex_count() const { return vertices_.size(); }
    bool contains(VertexId u) const { return vertices_.count(u) != 0; }
    const std::unordered_set<VertexId>& vertices() const { return vertices_; }

    /// All vertices in ascending id order (for deterministic output).
    std::vector<VertexId> sorted_vertices() const;

    /// All source keys (vertices with out-degree > 0) in ascending order.
    std::vector<VertexId> sorted_sources() const;

    /// Total stored adjacency entries: neighbor entries + weight entries.
    /// Always equals 2 * edge_count().
    std::size_t stored_entries() const;

private:
    /// Adjacency insertion core: no weight check, no vertex registration,
    /// src != dst assumed. add_edge wraps it; bulk loaders call it directly.
    void link_edge(VertexId src, VertexId dst, double w);

    struct AdjacencyEntry {
        std::vector<VertexId> neighbors;
        std::vector<double> weights;
        double weight_sum = 0.0;
        // neighbor -> position, built once the list outgrows linear scans
        std::unordered_map<VertexId, std::size_t> index;

        static constexpr std::size_t kIndexThreshold = 16;

        std::size_t find(VertexId v) const; // npos if absent
        void insert(VertexId v, double w);
        static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    };

    std::unordered_map<VertexId, AdjacencyEntry> adjacency_;
    std::unordered_map<VertexId, std::size_t> in_degree_;
    std::unordered_set<VertexId> vertices_;
    std::size_t edge_count_ = 0;
};

/// Parse an edge-list file: one edge per line, "src dst [weight]", fields
/// separated by whitespace or a single comma; lines starting with '#' or
/// '%' are ignored. Throws ParseError (with line number), DomainError on
/// nonpositive weights, EmptyGraphError when no edges are present.
Graph load_edge_list(const std::filesystem::path& path, const LoadOptions& opts);

/// Deterministic writer for the same format: sources ascending, neighbors
/// in stored (first-occurrence) order.
void save_edge_list(const Graph& g, std::ostream& out);

/// BFS layers by shortest out-distance: layer 0 = {source}, layer i = the
/// i-th out-neighborhood. Layers are ascending-sorted vertex sets, pairwise
/// disjoint, covering exactly the reachable set. Unknown source -> DomainError.
std::vector<std::vector<VertexId>> bfs_layers(const Graph& g, VertexId source);

/// Largest weakly-connected vertex set, ties broken by smallest contained
/// vertex id. Empty graph -> empty set. Returned ascending.
std::vector<VertexId> largest_component(const Graph& g);

/// Symmetrized closure: every edge inserted in both directions (antiparallel
/// weights merge by summing). The vertex set is preserved, including
/// isolated vertices.
Graph symmetrized(const Graph& g);

} // namespace infoflow
