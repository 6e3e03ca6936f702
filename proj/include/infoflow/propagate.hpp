#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "infoflow/alpha.hpp"
#include "infoflow/graph.hpp"

namespace infoflow {

struct PropagationConfig {
    double beta = 0.25;            ///< probability exponent, in (0,1)
    std::uint64_t lambda = 3;      ///< consecutive no-flow iterations before stable state
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> max_iterations; ///< safety cap; default 10*(est. diameter + lambda)
    unsigned workers = 1;
};

enum class Termination { FullCoverage, StableState, Cap };

std::string to_string(Termination t);

/// Cluster assignment produced by propagation. Label values are alpha
/// vertex ids; vertices absent from `labels` were never reached.
struct Labeling {
    std::unordered_map<VertexId, VertexId> labels;
    std::uint64_t iterations_run = 0;
    Termination terminated_by = Termination::StableState;
};

/// One successful label transfer, for event logs and provenance checks.
struct PropagationEvent {
    std::uint64_t iteration;
    VertexId src;
    VertexId dst;
    VertexId label;
    double probability;
};

/// Probability that information flows along an edge of weight w out of a
/// vertex with weighted out-degree delta_star: (w / delta_star)^beta.
/// Result is in (0,1], equal to 1 exactly when w == delta_star.
/// Requires 0 < w <= delta_star and beta in (0,1); DomainError otherwise.
double edge_probability(double w, double delta_star, double beta);

/// Simulate information flow from the alphas. Each alpha seeds its own id;
/// every outer iteration walks the active frontier and runs an independent
/// Bernoulli trial on each edge into an unlabeled vertex, with probability
/// edge_probability(w, delta*(src), beta). A successful trial transfers the
/// source's label; labels never change once set. An edge that fails its
/// trial is retried every iteration while its target is unlabeled; a
/// frontier vertex retires once its out-neighborhood is fully labeled or
/// empty. Terminates on full coverage, after `lambda` consecutive
/// iterations with no transfer anywhere, or at the safety cap.
///
/// Runs with workers=1 are bit-reproducible for a fixed seed. With more
/// workers the frontier is split into contiguous chunks, label claims are
/// atomic (exactly one claimant wins), and each worker draws from a stream
/// derived from (seed, worker, iteration).
///
/// If `event_log` is non-null, one event is appended per successful
/// transfer, in frontier order (worker order under workers > 1).
Labeling propagate_labels(const Graph& g, const AlphaSet& alphas, const PropagationConfig& cfg,
                          std::vector<PropagationEvent>* event_log = nullptr);

/// Monte-Carlo mean of geometric trial counts for a Bernoulli event of
/// probability p, drawn through the same RNG pathway propagation uses.
/// Test oracle for the expected-trials bound E = 1/p.
double expected_trials_oracle(double p, std::uint64_t samples, std::uint64_t seed);

} // namespace infoflow
