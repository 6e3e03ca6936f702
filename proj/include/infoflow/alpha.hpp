#pragma once

#include <vector>

#include "infoflow/graph.hpp"

namespace infoflow {

/// High-influence vertices: the intersection of the top-k% of vertices by
/// unweighted out-degree and by weighted out-degree.
struct AlphaSet {
    std::vector<VertexId> alphas; ///< ascending id order
    double k_percent = 0.0;

    bool empty() const { return alphas.empty(); }
    std::size_t size() const { return alphas.size(); }
};

/// Both top-k% rankings had an empty intersection. Carries the two
/// truncated lists so the caller can inspect them and retry with larger k.
class EmptyAlphaSetError : public Error {
public:
    EmptyAlphaSetError(std::vector<VertexId> by_out_degree,
                       std::vector<VertexId> by_weighted_out_degree)
        : Error("empty alpha set: top-k% rankings by out-degree and weighted "
                "out-degree do not intersect; retry with a larger k"),
          top_by_out_degree(std::move(by_out_degree)),
          top_by_weighted_out_degree(std::move(by_weighted_out_degree)) {}

    std::vector<VertexId> top_by_out_degree;
    std::vector<VertexId> top_by_weighted_out_degree;
};

/// Rank all vertices descending by delta(u) and, separately, by delta*(u)
/// (ties broken by ascending id), truncate both rankings to the top
/// ceil(k% * |V|) positions, and intersect. Zero-out-degree vertices never
/// qualify. Throws DomainError for k outside (0,100], EmptyAlphaSetError
/// when the intersection is empty.
AlphaSet detect_alphas(const Graph& g, double k_percent);

} // namespace infoflow
