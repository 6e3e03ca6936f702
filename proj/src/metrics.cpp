#include "infoflow/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>

#include <json.hpp>

#include "infoflow/random.hpp"

namespace infoflow {

namespace {

using ordered_json = nlohmann::ordered_json;

// Shortest round-trip decimal form, locale-independent.
std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

bool is_comment_or_blank(std::string_view line) {
    const std::size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return true;
    return line[first] == '#' || line[first] == '%';
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

bool parse_vertex_token(std::string_view tok, VertexId& out) {
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return res.ec == std::errc() && res.ptr == tok.data() + tok.size();
}

} // namespace

// ---------------------------------------------------------------------------
// Clustering

Clustering Clustering::build(std::unordered_map<VertexId, VertexId> label_of,
                             const std::vector<VertexId>& unlabeled) {
    Clustering c;

    std::unordered_set<VertexId> used_labels;
    used_labels.reserve(label_of.size());
    for (const auto& [v, l] : label_of) used_labels.insert(l);

    // Unreached vertices become singleton clusters under their own ids
    // ("dormant" vertices stay communities of one).
    std::unordered_set<VertexId> tagged;
    tagged.reserve(unlabeled.size());
    for (VertexId v : unlabeled) {
        if (used_labels.count(v)) {
            throw DomainError("unlabeled vertex " + std::to_string(v) +
                              " collides with an existing cluster label");
        }
        if (!label_of.emplace(v, v).second) {
            throw DomainError("vertex " + std::to_string(v) + " assigned twice");
        }
        tagged.insert(v);
    }

    std::unordered_map<VertexId, std::vector<VertexId>> groups;
    for (const auto& [v, l] : label_of) groups[l].push_back(v);

    c.clusters_.reserve(groups.size());
    for (auto& [label, members] : groups) {
        std::sort(members.begin(), members.end());
        const bool from_unlabeled = tagged.count(label) != 0;
        c.clusters_.push_back(Cluster{label, std::move(members), from_unlabeled});
    }
    std::sort(c.clusters_.begin(), c.clusters_.end(),
              [](const Cluster& a, const Cluster& b) { return a.label < b.label; });
    c.label_of_ = std::move(label_of);
    return c;
}

Clustering Clustering::from_labeling(const Graph& g, const Labeling& labeling) {
    std::unordered_map<VertexId, VertexId> label_of;
    label_of.reserve(labeling.labels.size());
    for (const auto& [v, l] : labeling.labels) {
        if (!g.contains(v)) {
            throw DomainError("labeled vertex " + std::to_string(v) + " is not in the graph");
        }
        label_of.emplace(v, l);
    }
    std::vector<VertexId> unlabeled;
    for (VertexId v : g.sorted_vertices()) {
        if (!label_of.count(v)) unlabeled.push_back(v);
    }
    return build(std::move(label_of), unlabeled);
}

Clustering Clustering::from_assignments(const std::vector<AssignmentRow>& rows) {
    std::unordered_map<VertexId, VertexId> label_of;
    std::vector<VertexId> unlabeled;
    std::unordered_set<VertexId> seen;
    label_of.reserve(rows.size());
    for (const AssignmentRow& row : rows) {
        if (!seen.insert(row.vertex).second) {
            throw DomainError("vertex " + std::to_string(row.vertex) + " assigned twice");
        }
        if (row.label) {
            label_of.emplace(row.vertex, *row.label);
        } else {
            unlabeled.push_back(row.vertex);
        }
    }
    return build(std::move(label_of), unlabeled);
}

VertexId Clustering::label_of(VertexId v) const {
    const auto it = label_of_.find(v);
    if (it == label_of_.end()) {
        throw DomainError("vertex " + std::to_string(v) + " is not covered by the clustering");
    }
    return it->second;
}

std::vector<Clustering::AssignmentRow> load_assignments(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), 0, "cannot open file");

    std::vector<Clustering::AssignmentRow> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_comment_or_blank(line)) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 2) {
            throw ParseError(path.string(), line_no, "expected 'vertex<TAB>label'");
        }
        Clustering::AssignmentRow row;
        if (!parse_vertex_token(fields[0], row.vertex)) {
            throw ParseError(path.string(), line_no, "bad vertex id '" + std::string(fields[0]) + "'");
        }
        if (fields[1] == "-") {
            row.label = std::nullopt;
        } else {
            VertexId label = 0;
            if (!parse_vertex_token(fields[1], label)) {
                throw ParseError(path.string(), line_no, "bad label '" + std::string(fields[1]) + "'");
            }
            row.label = label;
        }
        rows.push_back(row);
    }
    return rows;
}

// ---------------------------------------------------------------------------
// GroundTruth

GroundTruth GroundTruth::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path.string(), 0, "cannot open file");

    std::vector<std::vector<VertexId>> communities;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_comment_or_blank(line)) continue;
        std::vector<VertexId> members;
        for (std::string_view tok : split_fields(line)) {
            VertexId v = 0;
            if (!parse_vertex_token(tok, v)) {
                throw ParseError(path.string(), line_no, "bad vertex id '" + std::string(tok) + "'");
            }
            members.push_back(v);
        }
        if (!members.empty()) communities.push_back(std::move(members));
    }
    return from_communities(std::move(communities));
}

GroundTruth GroundTruth::from_communities(std::vector<std::vector<VertexId>> communities) {
    GroundTruth t;
    t.communities_.reserve(communities.size());
    for (auto& members : communities) {
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        if (members.empty()) continue;
        t.communities_.push_back(std::move(members));
    }
    for (std::uint32_t c = 0; c < t.communities_.size(); ++c) {
        for (VertexId v : t.communities_[c]) {
            t.memberships_[v].push_back(c); // ascending by construction
        }
    }
    return t;
}

bool GroundTruth::share_community(VertexId u, VertexId v) const {
    const auto iu = memberships_.find(u);
    const auto iv = memberships_.find(v);
    if (iu == memberships_.end() || iv == memberships_.end()) return false;
    const auto& a = iu->second;
    const auto& b = iv->second;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) return true;
        if (a[i] < b[j]) ++i;
        else ++j;
    }
    return false;
}

std::vector<std::uint32_t> GroundTruth::memberships_of(VertexId v) const {
    const auto it = memberships_.find(v);
    return it == memberships_.end() ? std::vector<std::uint32_t>{} : it->second;
}

// ---------------------------------------------------------------------------
// Conductance

double conductance(const Graph& g, const std::vector<VertexId>& s) {
    if (s.empty()) throw DomainError("conductance: empty vertex set");
    std::unordered_set<VertexId> in_set;
    in_set.reserve(s.size() * 2);
    for (VertexId v : s) {
        if (!g.contains(v)) {
            throw DomainError("conductance: vertex " + std::to_string(v) + " is not in the graph");
        }
        in_set.insert(v);
    }
    std::uint64_t m_s = 0; // stored edges with both endpoints inside
    std::uint64_t c_s = 0; // stored edges leaving the set
    for (VertexId u : in_set) {
        for (VertexId v : g.neighborhood(u).neighbors) {
            if (in_set.count(v)) ++m_s;
            else ++c_s;
        }
    }
    if (c_s == 0) return 0.0; // includes the isolated-singleton 0/0 convention
    return static_cast<double>(c_s) / static_cast<double>(2 * m_s + c_s);
}

ConductanceProfile conductance_profile(const Graph& g, const Clustering& clustering,
                                       bool symmetrize) {
    Graph sym;
    const Graph* gp = &g;
    if (symmetrize) {
        sym = symmetrized(g);
        gp = &sym;
    }
    ConductanceProfile profile;
    profile.entries.reserve(clustering.clusters().size());
    for (const Cluster& c : clustering.clusters()) {
        profile.entries.push_back(ProfileEntry{c.label, c.members.size(),
                                               conductance(*gp, c.members),
                                               c.unlabeled_singleton});
    }
    std::sort(profile.entries.begin(), profile.entries.end(),
              [](const ProfileEntry& a, const ProfileEntry& b) {
                  if (a.size != b.size) return a.size > b.size;
                  return a.label < b.label;
              });
    return profile;
}

// ---------------------------------------------------------------------------
// Pair sampling

PairVerdict classify_pair(const Clustering& clustering, const GroundTruth& truth, VertexId u,
                          VertexId v) {
    if (u == v) throw DomainError("classify_pair: endpoints must differ");
    const bool same = clustering.same_cluster(u, v);
    if (!truth.contains(u) || !truth.contains(v)) return PairVerdict::Skipped;
    const bool share = truth.share_community(u, v);
    if (same) return share ? PairVerdict::TruePositive : PairVerdict::FalsePositive;
    return share ? PairVerdict::FalseNegative : PairVerdict::TrueNegative;
}

namespace {

constexpr std::uint64_t kMaxRejects = 1u << 20;

struct PairSampler {
    const Clustering& clustering;
    // Clusters eligible for positive draws (>= 2 members), label-ascending,
    // with cumulative unordered-pair counts for proportional selection.
    std::vector<const Cluster*> positive_clusters;
    std::vector<std::uint64_t> cumulative_pairs;
    std::uint64_t total_pairs = 0;
    // Global vertex pool (label-ascending clusters, members ascending) and
    // the anchor pool for biased negatives (empty = draw from everyone).
    std::vector<VertexId> all_vertices;
    std::vector<VertexId> anchor_pool;

    PairSampler(const Clustering& c, const std::unordered_set<VertexId>* positive_labels)
        : clustering(c) {
        for (const Cluster& cl : c.clusters()) {
            const bool eligible = positive_labels == nullptr || positive_labels->count(cl.label);
            if (eligible && cl.members.size() >= 2) {
                const std::uint64_t n = cl.members.size();
                total_pairs += n * (n - 1) / 2;
                positive_clusters.push_back(&cl);
                cumulative_pairs.push_back(total_pairs);
            }
            if (positive_labels != nullptr && !positive_labels->count(cl.label)) {
                anchor_pool.insert(anchor_pool.end(), cl.members.begin(), cl.members.end());
            }
            all_vertices.insert(all_vertices.end(), cl.members.begin(), cl.members.end());
        }
        if (total_pairs == 0) throw NoPositivePairsError();
        if (c.clusters().size() < 2) throw NoNegativePairsError();
    }

    std::pair<VertexId, VertexId> draw_positive(rng::Engine& eng) const {
        const std::uint64_t r = rng::uniform_index(eng, total_pairs);
        const auto it = std::upper_bound(cumulative_pairs.begin(), cumulative_pairs.end(), r);
        const Cluster& cl = *positive_clusters[it - cumulative_pairs.begin()];
        const std::uint64_t n = cl.members.size();
        for (std::uint64_t tries = 0; tries < kMaxRejects; ++tries) {
            const std::uint64_t i = rng::uniform_index(eng, n);
            const std::uint64_t j = rng::uniform_index(eng, n);
            if (i != j) return {cl.members[i], cl.members[j]};
        }
        throw Error("internal: positive-pair rejection sampling stalled");
    }

    std::pair<VertexId, VertexId> draw_negative(rng::Engine& eng) const {
        const std::vector<VertexId>& anchors = anchor_pool.empty() ? all_vertices : anchor_pool;
        for (std::uint64_t tries = 0; tries < kMaxRejects; ++tries) {
            const VertexId u = anchors[rng::uniform_index(eng, anchors.size())];
            const VertexId v = all_vertices[rng::uniform_index(eng, all_vertices.size())];
            if (!clustering.same_cluster(u, v)) return {u, v};
        }
        throw Error("internal: negative-pair rejection sampling stalled");
    }
};

void validate_sample_config(const SampleConfig& cfg) {
    if (cfg.batch < 2 || cfg.batch % 2 != 0) {
        throw DomainError("batch must be an even count of at least 2");
    }
    if (!(cfg.epsilon > 0.0)) throw DomainError("epsilon must be positive");
    if (cfg.window == 0) throw DomainError("window must be at least 1");
    if (cfg.max_samples == 0) throw DomainError("max_samples must be at least 1");
}

EvalReport run_sampler(const Clustering& clustering, const GroundTruth& truth,
                       const SampleConfig& cfg,
                       const std::unordered_set<VertexId>* positive_labels) {
    validate_sample_config(cfg);
    const PairSampler sampler(clustering, positive_labels);
    rng::Engine eng = rng::make_engine(cfg.seed);

    EvalReport rep;
    std::uint64_t fp = 0, fn = 0, pos_classified = 0, neg_classified = 0;

    while (rep.samples_drawn < cfg.max_samples && !rep.converged) {
        const std::uint64_t this_batch = std::min(cfg.batch, cfg.max_samples - rep.samples_drawn);
        const std::uint64_t pos_n = this_batch / 2;
        const std::uint64_t neg_n = this_batch - pos_n;

        for (std::uint64_t i = 0; i < pos_n; ++i) {
            const auto [u, v] = sampler.draw_positive(eng);
            switch (classify_pair(clustering, truth, u, v)) {
            case PairVerdict::FalsePositive: ++fp; ++pos_classified; break;
            case PairVerdict::TruePositive: ++pos_classified; break;
            case PairVerdict::Skipped: ++rep.skipped; break;
            default: throw Error("internal: positive draw classified as negative");
            }
        }
        for (std::uint64_t i = 0; i < neg_n; ++i) {
            const auto [u, v] = sampler.draw_negative(eng);
            switch (classify_pair(clustering, truth, u, v)) {
            case PairVerdict::FalseNegative: ++fn; ++neg_classified; break;
            case PairVerdict::TrueNegative: ++neg_classified; break;
            case PairVerdict::Skipped: ++rep.skipped; break;
            default: throw Error("internal: negative draw classified as positive");
            }
        }

        rep.samples_drawn += this_batch;
        rep.fp_rate = pos_classified == 0 ? 0.0 : static_cast<double>(fp) / pos_classified;
        rep.fn_rate = neg_classified == 0 ? 0.0 : static_cast<double>(fn) / neg_classified;
        rep.trace.push_back(Checkpoint{rep.samples_drawn, rep.fp_rate, rep.fn_rate});

        if (rep.trace.size() >= cfg.window) {
            double fp_lo = 1.0, fp_hi = 0.0, fn_lo = 1.0, fn_hi = 0.0;
            for (std::size_t i = rep.trace.size() - cfg.window; i < rep.trace.size(); ++i) {
                fp_lo = std::min(fp_lo, rep.trace[i].fp_rate);
                fp_hi = std::max(fp_hi, rep.trace[i].fp_rate);
                fn_lo = std::min(fn_lo, rep.trace[i].fn_rate);
                fn_hi = std::max(fn_hi, rep.trace[i].fn_rate);
            }
            rep.converged = (fp_hi - fp_lo) < cfg.epsilon && (fn_hi - fn_lo) < cfg.epsilon;
        }
    }
    return rep;
}

} // namespace

EvalReport sample_pair_rates(const Clustering& clustering, const GroundTruth& truth,
                             const SampleConfig& cfg) {
    return run_sampler(clustering, truth, cfg, nullptr);
}

EvalReport biased_sample_pair_rates(const Clustering& clustering, const GroundTruth& truth,
                                    const BiasConfig& bias, const SampleConfig& cfg) {
    if (!(bias.top_fraction > 0.0) || bias.top_fraction > 1.0) {
        throw DomainError("top_fraction must be in (0, 1]");
    }
    // Rank clusters by size (descending, ties by ascending label) and keep
    // the top ceil(top_fraction * count) as the positive-draw universe.
    std::vector<const Cluster*> ranked;
    ranked.reserve(clustering.clusters().size());
    for (const Cluster& c : clustering.clusters()) ranked.push_back(&c);
    std::sort(ranked.begin(), ranked.end(), [](const Cluster* a, const Cluster* b) {
        if (a->members.size() != b->members.size()) return a->members.size() > b->members.size();
        return a->label < b->label;
    });
    const std::size_t keep = static_cast<std::size_t>(
        std::ceil(bias.top_fraction * static_cast<double>(ranked.size())));
    std::unordered_set<VertexId> top_labels;
    for (std::size_t i = 0; i < std::min(keep, ranked.size()); ++i) {
        top_labels.insert(ranked[i]->label);
    }

    EvalReport rep = run_sampler(clustering, truth, cfg, &top_labels);
    rep.biased = true;
    rep.top_fraction = bias.top_fraction;
    return rep;
}

// ---------------------------------------------------------------------------
// Serialization

void write_profile_tsv(const ConductanceProfile& profile, std::ostream& out) {
    out << "# cluster\tsize\tconductance\tunlabeled_singleton\n";
    for (const ProfileEntry& e : profile.entries) {
        out << e.label << '\t' << e.size << '\t' << format_double(e.conductance) << '\t'
            << (e.unlabeled_singleton ? "true" : "false") << '\n';
    }
}

void write_report_tsv(const EvalReport& report, std::ostream& out) {
    out << "fp_rate\t" << format_double(report.fp_rate) << '\n';
    out << "fn_rate\t" << format_double(report.fn_rate) << '\n';
    out << "samples_drawn\t" << report.samples_drawn << '\n';
    out << "converged\t" << (report.converged ? "true" : "false") << '\n';
    out << "skipped\t" << report.skipped << '\n';
    out << "biased\t" << (report.biased ? "true" : "false") << '\n';
    if (report.biased) out << "top_fraction\t" << format_double(report.top_fraction) << '\n';
    out << "# trace: samples\tfp_rate\tfn_rate\n";
    for (const Checkpoint& c : report.trace) {
        out << c.samples << '\t' << format_double(c.fp_rate) << '\t' << format_double(c.fn_rate)
            << '\n';
    }
}

void write_profile_json(const ConductanceProfile& profile, std::ostream& out) {
    ordered_json clusters = ordered_json::array();
    for (const ProfileEntry& e : profile.entries) {
        clusters.push_back(ordered_json{{"cluster", e.label},
                                        {"size", e.size},
                                        {"conductance", e.conductance},
                                        {"unlabeled_singleton", e.unlabeled_singleton}});
    }
    out << ordered_json{{"clusters", clusters}}.dump(2) << '\n';
}

void write_report_json(const EvalReport& report, std::ostream& out) {
    ordered_json trace = ordered_json::array();
    for (const Checkpoint& c : report.trace) {
        trace.push_back(
            ordered_json{{"samples", c.samples}, {"fp_rate", c.fp_rate}, {"fn_rate", c.fn_rate}});
    }
    ordered_json j{{"fp_rate", report.fp_rate},
                   {"fn_rate", report.fn_rate},
                   {"samples_drawn", report.samples_drawn},
                   {"converged", report.converged},
                   {"skipped", report.skipped},
                   {"biased", report.biased},
                   {"trace", trace}};
    if (report.biased) j["top_fraction"] = report.top_fraction;
    out << j.dump(2) << '\n';
}

} // namespace infoflow
