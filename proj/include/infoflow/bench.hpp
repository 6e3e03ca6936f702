#pragma once

#include <cstdint>
#include <ostream>
#include <utility>
#include <vector>

#include "infoflow/graph.hpp"
#include "infoflow/metrics.hpp"

namespace infoflow {

/// Preferential-attachment generator configuration.
struct BAConfig {
    std::uint64_t n;        ///< vertex count
    std::uint64_t m;        ///< edges attached per arriving vertex, 1 <= m < n
    std::uint64_t seed = 0;
};

/// Planted-partition generator configuration: `communities` blocks of
/// `size` vertices; every ordered cross-vertex pair gets an edge i.i.d.
/// with p_in inside a block (weight weight_in) and p_out across blocks
/// (weight weight_out). Requires 0 < p_in < 1, 0 <= p_out < p_in.
struct PlantedPartitionConfig {
    std::uint64_t communities = 2;
    std::uint64_t size = 30;
    double p_in = 0.3;
    double p_out = 0.01;
    double weight_in = 1.0;
    double weight_out = 1.0;
    std::uint64_t seed = 0;
};

/// Grow a preferential-attachment graph: m isolated seed vertices, then
/// each arriving vertex attaches to m distinct existing vertices chosen
/// proportionally to degree (the first arrival connects to all seeds).
/// Edges are unit-weight and stored in both directions, so
/// edge_count == 2 * m * (n - m). Seed-deterministic.
Graph generate_ba(const BAConfig& cfg);

/// Generate a planted-partition graph plus the planting as ground truth
/// (vertex ids 0..communities*size-1, community = id / size). Isolated
/// vertices are kept in the vertex set. Seed-deterministic.
std::pair<Graph, GroundTruth> generate_planted(const PlantedPartitionConfig& cfg);

/// Full-pipeline settings for the timing harness.
struct PipelineConfig {
    double k_percent = 1.0;
    double beta = 0.25;
    std::uint64_t lambda = 3;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    int repeats = 3; ///< timed runs per size; the minimum is reported
};

struct TimingRow {
    std::size_t edges;  ///< stored directed edge count actually generated
    double seconds;     ///< best wall-clock time over the timed repeats
};

/// Time ingestion + detection + propagation on preferential-attachment
/// graphs sized to the given stored-edge counts (ascending). Per size, the
/// graph is generated up front (untimed with m=5), one warm-up run is
/// discarded, then `repeats` runs are timed and the minimum kept. The
/// timed region covers in-memory graph construction from triples, alpha
/// detection, and label propagation — no file I/O.
std::vector<TimingRow> time_scaling(const std::vector<std::size_t>& sizes,
                                    const PipelineConfig& pipeline);

void write_timings_tsv(const std::vector<TimingRow>& rows, std::ostream& out);

} // namespace infoflow
