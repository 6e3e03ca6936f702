#include "infoflow/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>
#include <string_view>

namespace infoflow {

std::size_t Graph::AdjacencyEntry::find(VertexId v) const {
    if (!index.empty()) {
        auto it = index.find(v);
        return it == index.end() ? npos : it->second;
    }
    for (std::size_t i = 0; i < neighbors.size(); ++i)
        if (neighbors[i] == v) return i;
    return npos;
}

void Graph::AdjacencyEntry::insert(VertexId v, double w) {
    neighbors.push_back(v);
    weights.push_back(w);
    if (!index.empty()) {
        index.emplace(v, neighbors.size() - 1);
    } else if (neighbors.size() > kIndexThreshold) {
        index.reserve(neighbors.size() * 2);
        for (std::size_t i = 0; i < neighbors.size(); ++i) index.emplace(neighbors[i], i);
    }
}

void Graph::add_edge(const EdgeTriple& t) {
    if (t.weight < 1.0)
        throw DomainError("add_edge: weight " + std::to_string(t.weight) + " is below 1");
    vertices_.insert(t.src);
    vertices_.insert(t.dst);
    if (t.src == t.dst) return; // self-loops are dropped, endpoints kept
    link_edge(t.src, t.dst, t.weight);
}

void Graph::link_edge(VertexId src, VertexId dst, double w) {
    AdjacencyEntry& entry = adjacency_[src];
    const std::size_t pos = entry.find(dst);
    if (pos != AdjacencyEntry::npos) {
        entry.weights[pos] += w; // parallel edges merge by summing
        entry.weight_sum += w;
        return;
    }
    entry.insert(dst, w);
    entry.weight_sum += w;
    ++in_degree_[dst];
    ++edge_count_;
}

Graph Graph::from_triples(const std::vector<EdgeTriple>& triples, const LoadOptions& opts) {
    // Normalization first, over the raw weight domain, then insertion with
    // merging; merged sums of weights >= 1 stay >= 1.
    double divisor = 1.0;
    if (opts.weighted) {
        double min_w = std::numeric_limits<double>::infinity();
        for (const EdgeTriple& t : triples) {
            if (!(t.weight > 0.0))
                throw DomainError("edge weight must be positive");
            min_w = std::min(min_w, t.weight);
        }
        if (!triples.empty() && min_w < 1.0) {
            if (opts.normalization == WeightNormalization::Reject)
                throw DomainError("edge weight " + std::to_string(min_w) +
                                  " is below 1 and normalization policy is reject");
            // Divide rather than multiply by a reciprocal: w/min_w >= 1
            // exactly for every w >= min_w, so the minimum maps to 1.
            divisor = min_w;
        }
    }

    // Bulk path. Weights are already validated (>= 1 after normalization),
    // so add_edge's per-call checks are skipped, the vertex registry is
    // rebuilt once at the end, and consecutive triples sharing a source are
    // batched: one adjacency lookup and one capacity reservation per run
    // instead of per edge. Sorted-by-source input (the common bulk shape)
    // then costs ~|V| map operations instead of |E|; scattered input
    // degrades gracefully to runs of length one.
    Graph g;
    // When ids span a range comparable to the triple count (generator
    // output, compacted datasets), size the tables up front and count
    // in-degrees in a flat array — one streaming increment per edge beats a
    // hash probe per edge. Wildly sparse id spaces fall back to organic
    // growth and per-edge map updates.
    VertexId min_id = 0;
    std::vector<std::uint32_t> flat_in_degree;
    if (!triples.empty()) {
        min_id = triples.front().src;
        VertexId max_id = triples.front().src;
        for (const EdgeTriple& t : triples) {
            min_id = std::min({min_id, t.src, t.dst});
            max_id = std::max({max_id, t.src, t.dst});
        }
        const VertexId span = max_id - min_id + 1;
        if (span <= 2 * triples.size()) {
            g.adjacency_.reserve(span);
            g.in_degree_.reserve(span);
            g.vertices_.reserve(span);
            flat_in_degree.assign(span, 0);
        }
    }
    const std::size_t count = triples.size();
    std::size_t i = 0;
    while (i < count) {
        const VertexId src = triples[i].src;
        std::size_t j = i + 1;
        while (j < count && triples[j].src == src) ++j;

        AdjacencyEntry* entry = nullptr; // created on the first non-loop edge
        for (std::size_t k = i; k < j; ++k) {
            const EdgeTriple& t = triples[k];
            if (t.src == t.dst) {
                // dropped, but the endpoint still counts as a vertex
                g.vertices_.insert(t.src);
                continue;
            }
            const double w = opts.weighted ? t.weight / divisor : 1.0;
            if (entry == nullptr) {
                entry = &g.adjacency_[src];
                entry->neighbors.reserve(entry->neighbors.size() + (j - i));
                entry->weights.reserve(entry->weights.size() + (j - i));
            }
            const std::size_t pos = entry->find(t.dst);
            if (pos != AdjacencyEntry::npos) {
                entry->weights[pos] += w; // parallel edges merge by summing
                entry->weight_sum += w;
            } else {
                entry->insert(t.dst, w);
                entry->weight_sum += w;
                if (flat_in_degree.empty()) {
                    ++g.in_degree_[t.dst];
                } else {
                    ++flat_in_degree[t.dst - min_id];
                }
                ++g.edge_count_;
            }
        }
        if (!opts.directed) {
            // Reverse edges always land in entries other than this run's
            // (self-loops never reach here), so adding them after the
            // forward batch leaves every per-entry order unchanged.
            for (std::size_t k = i; k < j; ++k) {
                const EdgeTriple& t = triples[k];
                if (t.src == t.dst) continue;
                g.link_edge(t.dst, t.src, opts.weighted ? t.weight / divisor : 1.0);
            }
        }
        i = j;
    }
    // Flat counts join the map totals (reverse edges of undirected loads
    // were counted in the map directly).
    for (std::size_t d = 0; d < flat_in_degree.size(); ++d) {
        if (flat_in_degree[d] != 0) g.in_degree_[min_id + d] += flat_in_degree[d];
    }
    for (const auto& [u, entry] : g.adjacency_) g.vertices_.insert(u);
    for (const auto& [v, degree] : g.in_degree_) g.vertices_.insert(v);
    return g;
}

NeighborView Graph::neighborhood(VertexId u) const {
    auto it = adjacency_.find(u);
    if (it == adjacency_.end()) return {};
    return {it->second.neighbors, it->second.weights};
}

std::size_t Graph::out_degree(VertexId u) const {
    auto it = adjacency_.find(u);
    return it == adjacency_.end() ? 0 : it->second.neighbors.size();
}

std::size_t Graph::in_degree(VertexId u) const {
    auto it = in_degree_.find(u);
    return it == in_degree_.end() ? 0 : it->second;
}

double Graph::weighted_out_degree(VertexId u) const {
    auto it = adjacency_.find(u);
    return it == adjacency_.end() ? 0.0 : it->second.weight_sum;
}

std::vector<VertexId> Graph::sorted_vertices() const {
    std::vector<VertexId> out(vertices_.begin(), vertices_.end());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<VertexId> Graph::sorted_sources() const {
    std::vector<VertexId> out;
    out.reserve(adjacency_.size());
    for (const auto& [u, entry] : adjacency_) out.push_back(u);
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t Graph::stored_entries() const {
    std::size_t n = 0;
    for (const auto& [u, entry] : adjacency_)
        n += entry.neighbors.size() + entry.weights.size();
    return n;
}

namespace {

bool is_comment_or_blank(const std::string& line) {
    for (char c : line) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == '#' || c == '%';
    }
    return true;
}

// Fields separated by whitespace or a single comma.
std::vector<std::string_view> tokenize(const std::string& line) {
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    const std::size_t n = line.size();
    while (i < n) {
        while (i < n && (std::isspace(static_cast<unsigned char>(line[i])) || line[i] == ','))
            ++i;
        std::size_t start = i;
        while (i < n && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != ',')
            ++i;
        if (i > start) tokens.emplace_back(line.data() + start, i - start);
    }
    return tokens;
}

bool parse_vertex(std::string_view tok, VertexId& out) {
    if (tok.empty()) return false;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && ptr == tok.data() + tok.size();
}

bool parse_weight(std::string_view tok, double& out) {
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && ptr == tok.data() + tok.size() && std::isfinite(out);
}

// Shortest round-trip decimal form, locale-independent.
std::string format_weight(double w) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), w);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace

Graph load_edge_list(const std::filesystem::path& path, const LoadOptions& opts) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), 0, "cannot open file");

    std::vector<EdgeTriple> triples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_comment_or_blank(line)) continue;
        const auto tokens = tokenize(line);
        if (tokens.size() < 2 || tokens.size() > 3)
            throw ParseError(path.string(), line_no,
                             "expected 'src dst [weight]', got " + std::to_string(tokens.size()) +
                                 " fields");
        EdgeTriple t{0, 0, 1.0};
        if (!parse_vertex(tokens[0], t.src))
            throw ParseError(path.string(), line_no, "bad source vertex id '" + std::string(tokens[0]) + "'");
        if (!parse_vertex(tokens[1], t.dst))
            throw ParseError(path.string(), line_no, "bad destination vertex id '" + std::string(tokens[1]) + "'");
        if (tokens.size() == 3) {
            if (!parse_weight(tokens[2], t.weight))
                throw ParseError(path.string(), line_no, "bad weight '" + std::string(tokens[2]) + "'");
            if (t.weight <= 0.0)
                throw DomainError(path.string() + ":" + std::to_string(line_no) +
                                  ": rejected input: weight must be positive");
        }
        triples.push_back(t);
    }
    if (triples.empty()) throw EmptyGraphError(path.string());
    return Graph::from_triples(triples, opts);
}

void save_edge_list(const Graph& g, std::ostream& out) {
    for (VertexId u : g.sorted_sources()) {
        const NeighborView view = g.neighborhood(u);
        for (std::size_t i = 0; i < view.size(); ++i) {
            out << u << '\t' << view.neighbors[i] << '\t' << format_weight(view.weights[i])
                << '\n';
        }
    }
}

std::vector<std::vector<VertexId>> bfs_layers(const Graph& g, VertexId source) {
    if (!g.contains(source))
        throw DomainError("bfs_layers: unknown source vertex " + std::to_string(source));

    std::unordered_set<VertexId> seen{source};
    std::vector<std::vector<VertexId>> layers;
    std::vector<VertexId> frontier{source};
    while (!frontier.empty()) {
        std::sort(frontier.begin(), frontier.end());
        layers.push_back(frontier);
        std::vector<VertexId> next;
        for (VertexId u : frontier) {
            for (VertexId v : g.neighborhood(u).neighbors) {
                if (seen.insert(v).second) next.push_back(v);
            }
        }
        frontier = std::move(next);
    }
    return layers;
}

std::vector<VertexId> largest_component(const Graph& g) {
    if (g.vertex_count() == 0) return {};

    // Undirected view: out-neighbors plus a reverse adjacency built once.
    std::unordered_map<VertexId, std::vector<VertexId>> reverse;
    for (VertexId u : g.sorted_sources())
        for (VertexId v : g.neighborhood(u).neighbors) reverse[v].push_back(u);

    std::unordered_set<VertexId> seen;
    std::vector<VertexId> best;
    VertexId best_min = 0;
    for (VertexId start : g.sorted_vertices()) {
        if (seen.count(start)) continue;
        std::vector<VertexId> component;
        std::deque<VertexId> queue{start};
        seen.insert(start);
        while (!queue.empty()) {
            VertexId u = queue.front();
            queue.pop_front();
            component.push_back(u);
            for (VertexId v : g.neighborhood(u).neighbors)
                if (seen.insert(v).second) queue.push_back(v);
            auto rit = reverse.find(u);
            if (rit != reverse.end())
                for (VertexId v : rit->second)
                    if (seen.insert(v).second) queue.push_back(v);
        }
        const VertexId comp_min = *std::min_element(component.begin(), component.end());
        if (component.size() > best.size() ||
            (component.size() == best.size() && comp_min < best_min)) {
            best = std::move(component);
            best_min = comp_min;
        }
    }
    std::sort(best.begin(), best.end());
    return best;
}

Graph symmetrized(const Graph& g) {
    Graph out;
    for (VertexId u : g.sorted_sources()) {
        const NeighborView view = g.neighborhood(u);
        for (std::size_t i = 0; i < view.size(); ++i) {
            out.add_edge({u, view.neighbors[i], view.weights[i]});
            out.add_edge({view.neighbors[i], u, view.weights[i]});
        }
    }
    for (VertexId v : g.vertices()) {
        out.add_vertex(v);
    }
    return out;
}

} // namespace infoflow
