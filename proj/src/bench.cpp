#include "infoflow/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_set>

#include "infoflow/alpha.hpp"
#include "infoflow/propagate.hpp"
#include "infoflow/random.hpp"

namespace infoflow {

namespace {

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

// m distinct vertices drawn degree-proportionally: sample the repeated-node
// pool (one entry per edge endpoint) until m distinct ids accumulate.
std::vector<VertexId> degree_proportional_subset(const std::vector<VertexId>& repeated,
                                                 std::uint64_t m, rng::Engine& eng) {
    std::vector<VertexId> targets;
    targets.reserve(m);
    std::unordered_set<VertexId> seen;
    seen.reserve(m * 2);
    while (targets.size() < m) {
        const VertexId v = repeated[rng::uniform_index(eng, repeated.size())];
        if (seen.insert(v).second) targets.push_back(v);
    }
    return targets;
}

} // namespace

Graph generate_ba(const BAConfig& cfg) {
    if (cfg.m < 1 || cfg.m >= cfg.n) {
        throw DomainError("preferential attachment requires 1 <= m < n");
    }
    rng::Engine eng = rng::make_engine(cfg.seed);

    Graph g;
    for (VertexId v = 0; v < cfg.m; ++v) g.add_vertex(v);

    std::vector<VertexId> targets(cfg.m);
    std::iota(targets.begin(), targets.end(), VertexId{0});
    std::vector<VertexId> repeated;
    repeated.reserve(2 * cfg.m * (cfg.n - cfg.m));

    for (VertexId source = cfg.m; source < cfg.n; ++source) {
        for (VertexId t : targets) {
            g.add_edge({source, t, 1.0});
            g.add_edge({t, source, 1.0});
        }
        repeated.insert(repeated.end(), targets.begin(), targets.end());
        repeated.insert(repeated.end(), cfg.m, source);
        if (source + 1 < cfg.n) {
            targets = degree_proportional_subset(repeated, cfg.m, eng);
        }
    }
    return g;
}

std::pair<Graph, GroundTruth> generate_planted(const PlantedPartitionConfig& cfg) {
    if (cfg.communities < 2) throw DomainError("planted partition requires at least 2 communities");
    if (cfg.size < 2) throw DomainError("planted partition requires at least 2 vertices per community");
    if (!(cfg.p_in > 0.0) || !(cfg.p_in < 1.0)) throw DomainError("p_in must be in (0, 1)");
    if (!(cfg.p_out >= 0.0) || !(cfg.p_out < cfg.p_in)) {
        throw DomainError("p_out must satisfy 0 <= p_out < p_in");
    }
    if (cfg.weight_in < 1.0 || cfg.weight_out < 1.0) {
        throw DomainError("planted edge weights must be at least 1");
    }
    const std::uint64_t n = cfg.communities * cfg.size;
    rng::Engine eng = rng::make_engine(cfg.seed);

    Graph g;
    for (VertexId v = 0; v < n; ++v) g.add_vertex(v);
    for (VertexId u = 0; u < n; ++u) {
        const VertexId cu = u / cfg.size;
        for (VertexId v = 0; v < n; ++v) {
            if (u == v) continue;
            const bool inside = cu == v / cfg.size;
            const double p = inside ? cfg.p_in : cfg.p_out;
            if (rng::uniform_double(eng) < p) {
                g.add_edge({u, v, inside ? cfg.weight_in : cfg.weight_out});
            }
        }
    }

    std::vector<std::vector<VertexId>> communities(cfg.communities);
    for (std::uint64_t c = 0; c < cfg.communities; ++c) {
        communities[c].resize(cfg.size);
        std::iota(communities[c].begin(), communities[c].end(), c * cfg.size);
    }
    return {std::move(g), GroundTruth::from_communities(std::move(communities))};
}

std::vector<TimingRow> time_scaling(const std::vector<std::size_t>& sizes,
                                    const PipelineConfig& pipeline) {
    if (!std::is_sorted(sizes.begin(), sizes.end())) {
        throw DomainError("time_scaling sizes must be ascending");
    }
    if (pipeline.repeats < 1) throw DomainError("repeats must be at least 1");

    constexpr std::uint64_t kAttach = 5; // edges per arriving vertex

    std::vector<TimingRow> rows;
    rows.reserve(sizes.size());
    for (std::size_t target_edges : sizes) {
        // Stored edges = 2*m*(n-m); invert for n at m = kAttach.
        const std::uint64_t n = target_edges / (2 * kAttach) + kAttach;
        if (n <= kAttach) {
            throw DomainError("size " + std::to_string(target_edges) +
                              " is too small for the attachment parameter");
        }
        const Graph generated = generate_ba({n, kAttach, pipeline.seed});

        // The timed region starts from raw triples so it covers ingestion;
        // extraction itself is bookkeeping, not part of the pipeline.
        std::vector<EdgeTriple> triples;
        triples.reserve(generated.edge_count());
        for (VertexId u : generated.sorted_sources()) {
            const NeighborView view = generated.neighborhood(u);
            for (std::size_t i = 0; i < view.size(); ++i) {
                triples.push_back({u, view.neighbors[i], view.weights[i]});
            }
        }

        const auto run_pipeline = [&]() {
            const Graph g = Graph::from_triples(triples, LoadOptions{});
            const AlphaSet alphas = detect_alphas(g, pipeline.k_percent);
            PropagationConfig pcfg;
            pcfg.beta = pipeline.beta;
            pcfg.lambda = pipeline.lambda;
            pcfg.seed = pipeline.seed;
            pcfg.workers = pipeline.workers;
            return propagate_labels(g, alphas, pcfg);
        };

        run_pipeline(); // warm-up, excluded from measurement

        double best = std::numeric_limits<double>::infinity();
        for (int r = 0; r < pipeline.repeats; ++r) {
            const auto start = std::chrono::steady_clock::now();
            run_pipeline();
            const auto stop = std::chrono::steady_clock::now();
            best = std::min(best, std::chrono::duration<double>(stop - start).count());
        }
        rows.push_back(TimingRow{generated.edge_count(), best});
    }
    return rows;
}

void write_timings_tsv(const std::vector<TimingRow>& rows, std::ostream& out) {
    out << "# edges\tseconds\n";
    for (const TimingRow& row : rows) {
        out << row.edges << '\t' << format_double(row.seconds) << '\n';
    }
}

} // namespace infoflow
