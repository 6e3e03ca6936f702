#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <unordered_map>
#include <vector>

#include "infoflow/errors.hpp"
#include "infoflow/graph.hpp"
#include "infoflow/propagate.hpp"

namespace infoflow {

/// One predicted cluster. `unlabeled_singleton` marks clusters materialized
/// from vertices the propagation never reached (labeled with their own id).
struct Cluster {
    VertexId label;
    std::vector<VertexId> members; ///< ascending
    bool unlabeled_singleton = false;
};

/// A complete partition of a vertex set into labeled clusters.
class Clustering {
public:
    struct AssignmentRow {
        VertexId vertex;
        std::optional<VertexId> label; ///< empty = unlabeled
    };

    /// Every vertex of `g` lands in exactly one cluster; vertices missing
    /// from the labeling become tagged singletons under their own id.
    static Clustering from_labeling(const Graph& g, const Labeling& labeling);

    /// Build from explicit rows (duplicate vertices or an unlabeled vertex
    /// whose id collides with another row's label → DomainError).
    static Clustering from_assignments(const std::vector<AssignmentRow>& rows);

    /// Clusters in ascending label order.
    const std::vector<Cluster>& clusters() const { return clusters_; }
    std::size_t vertex_count() const { return label_of_.size(); }
    bool contains(VertexId v) const { return label_of_.find(v) != label_of_.end(); }
    /// DomainError if v is not covered.
    VertexId label_of(VertexId v) const;
    bool same_cluster(VertexId u, VertexId v) const { return label_of(u) == label_of(v); }

private:
    std::vector<Cluster> clusters_;
    std::unordered_map<VertexId, VertexId> label_of_;

    static Clustering build(std::unordered_map<VertexId, VertexId> label_of,
                            const std::vector<VertexId>& unlabeled);
};

/// Parse an assignment file: one `vertex<TAB>label` row per line, label `-`
/// meaning unlabeled; `#`/`%` comments and blank lines ignored.
std::vector<Clustering::AssignmentRow> load_assignments(const std::filesystem::path& path);

/// Overlapping ground-truth communities.
class GroundTruth {
public:
    /// One community per line: whitespace-separated vertex ids. `#`/`%`
    /// comments and blank lines ignored; duplicate ids within a line
    /// collapse. Community ids are the 0-based order of appearance.
    static GroundTruth load(const std::filesystem::path& path);
    static GroundTruth from_communities(std::vector<std::vector<VertexId>> communities);

    bool contains(VertexId v) const { return memberships_.find(v) != memberships_.end(); }
    /// True when u and v co-occur in at least one community.
    bool share_community(VertexId u, VertexId v) const;
    const std::vector<std::vector<VertexId>>& communities() const { return communities_; }
    /// Sorted community indices the vertex belongs to; empty if absent.
    std::vector<std::uint32_t> memberships_of(VertexId v) const;
    std::size_t vertex_count() const { return memberships_.size(); }

private:
    std::vector<std::vector<VertexId>> communities_; ///< members ascending
    std::unordered_map<VertexId, std::vector<std::uint32_t>> memberships_;
};

/// Directed conductance φ(S) = c_S / (2·m_S + c_S), where c_S counts stored
/// edges leaving S (u ∈ S, v ∉ S) and m_S counts stored edges inside S.
/// Returns 0 when c_S = 0 (covers the isolated-singleton 0/0 convention).
/// DomainError on an empty set or a member not present in the graph.
double conductance(const Graph& g, const std::vector<VertexId>& s);

struct ProfileEntry {
    VertexId label;
    std::size_t size;
    double conductance;
    bool unlabeled_singleton;
};

struct ConductanceProfile {
    std::vector<ProfileEntry> entries; ///< descending size, ties ascending label
};

/// Conductance of every cluster (singletons included, flagged). When
/// `symmetrize` is set the graph is replaced by its symmetrized closure
/// first, for comparison with undirected tooling.
ConductanceProfile conductance_profile(const Graph& g, const Clustering& clustering,
                                       bool symmetrize = false);

enum class PairVerdict { TruePositive, FalsePositive, TrueNegative, FalseNegative, Skipped };

/// Classify one vertex pair: positive (same predicted cluster) or negative
/// (different clusters), correct or not against the ground truth. Skipped
/// when either vertex is absent from the truth. Symmetric in (u, v);
/// DomainError when u == v or either is outside the clustering.
PairVerdict classify_pair(const Clustering& clustering, const GroundTruth& truth, VertexId u,
                          VertexId v);

struct SampleConfig {
    std::uint64_t batch = 10000;        ///< pairs per checkpoint (even, half per type)
    double epsilon = 0.005;             ///< convergence spread bound
    std::uint64_t window = 5;           ///< checkpoints the spread is measured over
    std::uint64_t max_samples = 1000000; ///< hard cap on drawn pairs
    std::uint64_t seed = 0;
};

struct Checkpoint {
    std::uint64_t samples;
    double fp_rate;
    double fn_rate;
};

struct EvalReport {
    double fp_rate = 0.0;
    double fn_rate = 0.0;
    std::uint64_t samples_drawn = 0;
    bool converged = false;
    std::vector<Checkpoint> trace;
    std::uint64_t skipped = 0;    ///< pairs with a vertex missing from truth
    bool biased = false;
    double top_fraction = 1.0;    ///< only meaningful when biased
};

class NoPositivePairsError : public Error {
public:
    NoPositivePairsError() : Error("no positive pairs available: every eligible cluster is a singleton") {}
};

class NoNegativePairsError : public Error {
public:
    NoNegativePairsError() : Error("no negative pairs available: clustering has a single cluster") {}
};

/// Estimate false-positive / false-negative rates by sampling equal counts
/// of positive pairs (uniform over same-cluster pairs) and negative pairs
/// (uniform over cross-cluster pairs). After each batch a checkpoint is
/// recorded; sampling stops once both rates vary by less than epsilon over
/// the last `window` checkpoints (converged) or at max_samples.
EvalReport sample_pair_rates(const Clustering& clustering, const GroundTruth& truth,
                             const SampleConfig& cfg);

struct BiasConfig {
    double top_fraction = 0.01; ///< in (0, 1]
};

/// As sample_pair_rates, but positive pairs come only from the top
/// ceil(top_fraction · #clusters) largest clusters, and each negative pair
/// anchors one endpoint in the remaining (small) clusters when any exist.
/// top_fraction = 1.0 degenerates to the unbiased sampler.
EvalReport biased_sample_pair_rates(const Clustering& clustering, const GroundTruth& truth,
                                    const BiasConfig& bias, const SampleConfig& cfg);

/// Serialization. TSV is one row per entry/checkpoint with a `#`-prefixed
/// header; JSON mirrors every field. Numbers use `.` decimals regardless of
/// locale.
void write_profile_tsv(const ConductanceProfile& profile, std::ostream& out);
void write_report_tsv(const EvalReport& report, std::ostream& out);
void write_profile_json(const ConductanceProfile& profile, std::ostream& out);
void write_report_json(const EvalReport& report, std::ostream& out);

} // namespace infoflow
