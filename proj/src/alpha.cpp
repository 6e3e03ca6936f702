#include "infoflow/alpha.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace infoflow {

AlphaSet detect_alphas(const Graph& g, double k_percent) {
    if (!(k_percent > 0.0) || k_percent > 100.0)
        throw DomainError("detect_alphas: k must be in (0,100], got " + std::to_string(k_percent));
    if (g.vertex_count() == 0) throw DomainError("detect_alphas: empty graph");

    // Fetch each degree once and sort keyed pairs; a comparator that asks
    // the graph would repeat the hash lookup log(n) times per vertex. The
    // initial ascending-id order makes ties resolve by smallest id.
    const std::vector<VertexId> ids = g.sorted_vertices();
    std::vector<std::pair<std::size_t, VertexId>> num_rank;
    std::vector<std::pair<double, VertexId>> deg_rank;
    num_rank.reserve(ids.size());
    deg_rank.reserve(ids.size());
    for (VertexId v : ids) {
        num_rank.emplace_back(g.out_degree(v), v);
        deg_rank.emplace_back(g.weighted_out_degree(v), v);
    }
    std::stable_sort(num_rank.begin(), num_rank.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::stable_sort(deg_rank.begin(), deg_rank.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });

    const auto keep = static_cast<std::size_t>(
        std::ceil(k_percent / 100.0 * static_cast<double>(g.vertex_count())));
    std::vector<VertexId> by_num;
    std::vector<VertexId> by_deg;
    by_num.reserve(std::min(keep, num_rank.size()));
    by_deg.reserve(std::min(keep, deg_rank.size()));
    for (std::size_t i = 0; i < num_rank.size() && i < keep; ++i) by_num.push_back(num_rank[i].second);
    for (std::size_t i = 0; i < deg_rank.size() && i < keep; ++i) by_deg.push_back(deg_rank[i].second);

    std::unordered_set<VertexId> num_set(by_num.begin(), by_num.end());
    AlphaSet result;
    result.k_percent = k_percent;
    for (VertexId u : by_deg)
        if (num_set.count(u) && g.out_degree(u) > 0) result.alphas.push_back(u);
    std::sort(result.alphas.begin(), result.alphas.end());

    if (result.alphas.empty()) throw EmptyAlphaSetError(std::move(by_num), std::move(by_deg));
    return result;
}

} // namespace infoflow
