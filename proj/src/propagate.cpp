#include "infoflow/propagate.hpp"

#include <atomic>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <thread>

#include "infoflow/errors.hpp"
#include "infoflow/random.hpp"

namespace infoflow {

namespace {

constexpr std::int32_t kUnlabeled = -1;

void validate_config(const PropagationConfig& cfg) {
    if (!(cfg.beta > 0.0) || !(cfg.beta < 1.0)) {
        throw DomainError("beta must be in (0, 1)");
    }
    if (cfg.lambda == 0) {
        throw DomainError("lambda must be at least 1");
    }
    if (cfg.workers == 0) {
        throw DomainError("workers must be at least 1");
    }
    if (cfg.max_iterations && *cfg.max_iterations == 0) {
        throw DomainError("max_iterations must be at least 1");
    }
}

// Default safety cap: propagation across a connected region needs on the
// order of the graph's diameter iterations, so ten times the eccentricity
// of the first alpha (plus the stable-state window) leaves generous slack
// without letting a pathological seed loop forever.
std::uint64_t default_cap(const Graph& g, VertexId first_alpha, std::uint64_t lambda) {
    const auto layers = bfs_layers(g, first_alpha);
    const std::uint64_t eccentricity = layers.empty() ? 0 : layers.size() - 1;
    return 10 * (eccentricity + lambda);
}

struct WorkerResult {
    std::vector<std::uint32_t> claimed; ///< dense indices of newly labeled vertices
    std::vector<PropagationEvent> events;
};

} // namespace

std::string to_string(Termination t) {
    switch (t) {
    case Termination::FullCoverage: return "full_coverage";
    case Termination::StableState: return "stable_state";
    case Termination::Cap: return "cap";
    }
    return "unknown";
}

double edge_probability(double w, double delta_star, double beta) {
    if (!(beta > 0.0) || !(beta < 1.0)) {
        throw DomainError("beta must be in (0, 1)");
    }
    if (!(w > 0.0) || !std::isfinite(w)) {
        throw DomainError("edge weight must be positive and finite");
    }
    if (!(delta_star > 0.0) || !std::isfinite(delta_star)) {
        throw DomainError("weighted out-degree must be positive and finite");
    }
    if (w > delta_star) {
        throw DomainError("edge weight cannot exceed the source's weighted out-degree");
    }
    return std::pow(w / delta_star, beta);
}

Labeling propagate_labels(const Graph& g, const AlphaSet& alphas, const PropagationConfig& cfg,
                          std::vector<PropagationEvent>* event_log) {
    validate_config(cfg);
    if (alphas.empty()) {
        throw DomainError("alpha set is empty");
    }
    if (alphas.size() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
        throw DomainError("alpha set too large");
    }

    // Dense index over the vertex set so the label table can be a flat
    // array of atomics; ids stay in the adjacency structure. Contiguous id
    // ranges (sorted and unique, so back - front == n - 1 suffices) map by
    // offset and skip the lookup table entirely.
    const std::vector<VertexId> ids = g.sorted_vertices();
    const std::size_t n = ids.size();
    const bool contiguous = !ids.empty() && ids.back() - ids.front() == n - 1;
    const VertexId base = ids.empty() ? 0 : ids.front();
    std::unordered_map<VertexId, std::uint32_t> dense;
    if (!contiguous) {
        dense.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            dense.emplace(ids[i], static_cast<std::uint32_t>(i));
        }
    }
    // Presence guaranteed by the graph's vertex registry.
    const auto dense_index = [&](VertexId v) -> std::uint32_t {
        if (contiguous) return static_cast<std::uint32_t>(v - base);
        return dense.find(v)->second;
    };

    auto labels = std::make_unique<std::atomic<std::int32_t>[]>(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels[i].store(kUnlabeled, std::memory_order_relaxed);
    }

    // Alphas are labeled with their own ids before the first iteration and
    // together form the initial frontier.
    for (std::size_t a = 0; a < alphas.size(); ++a) {
        const VertexId v = alphas.alphas[a];
        const bool present =
            contiguous ? v >= base && v - base < n : dense.find(v) != dense.end();
        if (!present) {
            throw DomainError("alpha vertex not present in graph");
        }
        std::int32_t expected = kUnlabeled;
        if (!labels[dense_index(v)].compare_exchange_strong(expected,
                                                            static_cast<std::int32_t>(a))) {
            throw DomainError("duplicate alpha vertex");
        }
    }

    const std::uint64_t cap =
        cfg.max_iterations ? *cfg.max_iterations : default_cap(g, alphas.alphas.front(), cfg.lambda);

    // Flatten the adjacency into dense-index CSR arrays once per call. The
    // retry loop revisits surviving edges every iteration, so streaming
    // arrays beats repeating hash lookups, and the transfer probability — a
    // pure function of (weight, weighted out-degree, beta) — is computed
    // once per edge instead of once per retry. Trial order and RNG draws
    // are identical to walking the adjacency directly.
    std::vector<std::size_t> head(n + 1, 0);
    std::vector<std::uint32_t> adj;
    std::vector<double> prob;
    adj.reserve(g.stored_entries() / 2);
    prob.reserve(g.stored_entries() / 2);
    for (std::size_t i = 0; i < n; ++i) {
        const NeighborView nb = g.neighborhood(ids[i]);
        const double delta_star = g.weighted_out_degree(ids[i]);
        for (std::size_t e = 0; e < nb.size(); ++e) {
            adj.push_back(dense_index(nb.neighbors[e]));
            prob.push_back(edge_probability(nb.weights[e], delta_star, cfg.beta));
        }
        head[i + 1] = adj.size();
    }

    // The frontier lives in dense-index space; dense indices are assigned in
    // ascending id order, so the initial frontier keeps the alphas' order.
    std::vector<std::uint32_t> frontier;
    frontier.reserve(alphas.size());
    for (VertexId a : alphas.alphas) {
        frontier.push_back(dense_index(a));
    }
    std::size_t labeled_count = alphas.size();
    std::uint64_t no_progress = 0;

    Labeling result;
    result.terminated_by = Termination::Cap;

    while (true) {
        if (labeled_count == n) {
            result.terminated_by = Termination::FullCoverage;
            break;
        }
        if (no_progress >= cfg.lambda) {
            result.terminated_by = Termination::StableState;
            break;
        }
        if (result.iterations_run >= cap) {
            result.terminated_by = Termination::Cap;
            break;
        }
        const std::uint64_t iteration = ++result.iterations_run;

        // Snapshot the frontier: vertices labeled during this iteration
        // only become active in the next one.
        const std::vector<std::uint32_t> snapshot = std::move(frontier);
        frontier.clear();

        const std::size_t chunks =
            snapshot.empty() ? 0 : std::min<std::size_t>(cfg.workers, snapshot.size());
        std::vector<WorkerResult> results(chunks);
        std::vector<std::uint8_t> keep(snapshot.size(), 0);

        auto run_chunk = [&](std::size_t worker, std::size_t begin, std::size_t end) {
            rng::Engine eng = rng::make_stream(cfg.seed, worker, iteration);
            WorkerResult& out = results[worker];
            for (std::size_t pos = begin; pos < end; ++pos) {
                const std::uint32_t u = snapshot[pos];
                if (head[u] == head[u + 1]) {
                    continue; // retire: nothing to send to
                }
                const std::int32_t own = labels[u].load(std::memory_order_relaxed);
                bool exhausted = true;
                for (std::size_t e = head[u]; e < head[u + 1]; ++e) {
                    const std::uint32_t vi = adj[e];
                    if (labels[vi].load(std::memory_order_relaxed) != kUnlabeled) {
                        continue;
                    }
                    const double p = prob[e];
                    if (rng::uniform_double(eng) < p) {
                        std::int32_t expected = kUnlabeled;
                        if (labels[vi].compare_exchange_strong(expected, own)) {
                            out.claimed.push_back(vi);
                            if (event_log != nullptr) {
                                out.events.push_back(PropagationEvent{
                                    iteration, ids[u], ids[vi],
                                    alphas.alphas[static_cast<std::size_t>(own)], p});
                            }
                        }
                        // On a lost race the target is labeled anyway; the
                        // edge stops being a candidate either way.
                    } else {
                        exhausted = false; // target may stay unlabeled; retry next iteration
                    }
                }
                if (!exhausted) {
                    keep[pos] = 1;
                }
            }
        };

        if (chunks == 1) {
            run_chunk(0, 0, snapshot.size());
        } else if (chunks > 1) {
            std::vector<std::thread> pool;
            pool.reserve(chunks);
            for (std::size_t w = 0; w < chunks; ++w) {
                const std::size_t begin = snapshot.size() * w / chunks;
                const std::size_t end = snapshot.size() * (w + 1) / chunks;
                pool.emplace_back(run_chunk, w, begin, end);
            }
            for (auto& t : pool) {
                t.join();
            }
        }

        // Rebuild the frontier: survivors in their existing order, then the
        // vertices claimed this iteration, in worker order.
        for (std::size_t pos = 0; pos < snapshot.size(); ++pos) {
            if (keep[pos]) {
                frontier.push_back(snapshot[pos]);
            }
        }
        std::size_t transferred = 0;
        for (auto& wr : results) {
            transferred += wr.claimed.size();
            frontier.insert(frontier.end(), wr.claimed.begin(), wr.claimed.end());
            if (event_log != nullptr) {
                event_log->insert(event_log->end(), wr.events.begin(), wr.events.end());
            }
        }
        labeled_count += transferred;
        no_progress = transferred == 0 ? no_progress + 1 : 0;
    }

    result.labels.reserve(labeled_count);
    for (std::size_t i = 0; i < n; ++i) {
        const std::int32_t l = labels[i].load(std::memory_order_relaxed);
        if (l != kUnlabeled) {
            result.labels.emplace(ids[i], alphas.alphas[static_cast<std::size_t>(l)]);
        }
    }
    return result;
}

double expected_trials_oracle(double p, std::uint64_t samples, std::uint64_t seed) {
    if (!(p > 0.0) || p > 1.0) {
        throw DomainError("probability must be in (0, 1]");
    }
    if (samples == 0) {
        throw DomainError("samples must be at least 1");
    }
    rng::Engine eng = rng::make_engine(seed);
    long double total = 0.0L;
    for (std::uint64_t s = 0; s < samples; ++s) {
        std::uint64_t trials = 0;
        do {
            ++trials;
        } while (rng::uniform_double(eng) >= p);
        total += static_cast<long double>(trials);
    }
    return static_cast<double>(total / static_cast<long double>(samples));
}

} // namespace infoflow
