// Command-line front door: ingest edge lists, detect communities, evaluate
// labelings, generate synthetic graphs, and run the scaling benchmark.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "infoflow/alpha.hpp"
#include "infoflow/bench.hpp"
#include "infoflow/errors.hpp"
#include "infoflow/graph.hpp"
#include "infoflow/metrics.hpp"
#include "infoflow/propagate.hpp"

namespace {

using namespace infoflow;

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

// Shared input-graph flags.
struct GraphFlags {
    std::string input;
    bool undirected = false;
    bool unweighted = false;
    std::string normalization = "scale-min";
};

void add_graph_flags(CLI::App* cmd, GraphFlags& f) {
    cmd->add_option("input", f.input, "edge-list file (src dst [weight] per line)")->required();
    cmd->add_flag("--undirected", f.undirected, "insert every edge in both directions");
    cmd->add_flag("--unweighted", f.unweighted, "ignore the weight column; all weights = 1");
    cmd->add_option("--normalization", f.normalization,
                    "policy for weights below 1: scale-min (divide by the minimum) or reject")
        ->check(CLI::IsMember({"scale-min", "reject"}));
}

Graph load_graph(const GraphFlags& f) {
    LoadOptions opts;
    opts.directed = !f.undirected;
    opts.weighted = !f.unweighted;
    opts.normalization = f.normalization == "reject" ? WeightNormalization::Reject
                                                     : WeightNormalization::ScaleMin;
    return load_edge_list(f.input, opts);
}

// --seed is optional everywhere; without it we draw entropy and announce
// the chosen seed so the run can be replayed.
std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    std::random_device rd;
    const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    std::cerr << "# seed: " << s << '\n';
    return s;
}

// Output sink: empty or "-" means stdout.
class OutFile {
public:
    explicit OutFile(const std::string& path) {
        if (path.empty() || path == "-") {
            os_ = &std::cout;
        } else {
            file_.open(path);
            if (!file_) throw DomainError("cannot open output file: " + path);
            os_ = &file_;
        }
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_ = nullptr;
};

struct DetectOpts {
    GraphFlags graph;
    double k = 5.0;
    double beta = 0.25;
    std::uint64_t lambda = 3;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> max_iterations;
    unsigned workers = 1;
    bool emit_unlabeled = false;
    std::string output;
    std::string event_log;
};

void setup_detect(CLI::App& app) {
    auto* cmd = app.add_subcommand("detect", "detect communities by information-flow simulation");
    auto o = std::make_shared<DetectOpts>();
    add_graph_flags(cmd, o->graph);
    cmd->add_option("--k", o->k, "top percentage for both degree rankings, in (0,100]");
    cmd->add_option("--beta", o->beta, "flow-probability exponent, in (0,1)");
    cmd->add_option("--lambda", o->lambda, "no-flow iterations before the state is called stable");
    cmd->add_option("--seed", o->seed, "RNG seed (entropy drawn and printed when omitted)");
    cmd->add_option("--max-iterations", o->max_iterations, "override the iteration safety cap");
    cmd->add_option("--workers", o->workers, "worker threads for propagation");
    cmd->add_flag("--emit-unlabeled", o->emit_unlabeled,
                  "write unreached vertices with label '-' instead of omitting them");
    cmd->add_option("-o,--output", o->output, "assignment file (default stdout)");
    cmd->add_option("--event-log", o->event_log, "write one row per label transfer");

    cmd->callback([o]() {
        const Graph g = load_graph(o->graph);
        const AlphaSet alphas = detect_alphas(g, o->k);

        PropagationConfig pcfg;
        pcfg.beta = o->beta;
        pcfg.lambda = o->lambda;
        pcfg.seed = resolve_seed(o->seed);
        pcfg.max_iterations = o->max_iterations;
        pcfg.workers = o->workers;

        std::vector<PropagationEvent> events;
        const bool want_events = !o->event_log.empty();
        const Labeling lab = propagate_labels(g, alphas, pcfg, want_events ? &events : nullptr);

        OutFile out(o->output);
        for (VertexId v : g.sorted_vertices()) {
            const auto it = lab.labels.find(v);
            if (it != lab.labels.end()) {
                out.stream() << v << '\t' << it->second << '\n';
            } else if (o->emit_unlabeled) {
                out.stream() << v << "\t-\n";
            }
        }
        if (want_events) {
            OutFile ev(o->event_log);
            ev.stream() << "# iteration\tsrc\tdst\tlabel\tprobability\n";
            for (const PropagationEvent& e : events) {
                ev.stream() << e.iteration << '\t' << e.src << '\t' << e.dst << '\t' << e.label
                            << '\t' << format_double(e.probability) << '\n';
            }
        }
        std::cerr << "vertices=" << g.vertex_count() << " edges=" << g.edge_count()
                  << " alphas=" << alphas.size() << " labeled=" << lab.labels.size()
                  << " iterations=" << lab.iterations_run
                  << " termination=" << to_string(lab.terminated_by) << '\n';
    });
}

struct EvalOpts {
    GraphFlags graph;
    std::string assignment;
    std::string truth;
    bool sym = false;
    std::string format = "tsv";
    std::string profile_out;
    std::string report_out;
    std::uint64_t batch = 10000;
    double epsilon = 0.005;
    std::uint64_t window = 5;
    std::uint64_t max_samples = 1000000;
    std::optional<std::uint64_t> seed;
    std::optional<double> top_fraction;
};

void setup_eval(CLI::App& app) {
    auto* cmd = app.add_subcommand("eval", "conductance profile and pair-sampled error rates");
    auto o = std::make_shared<EvalOpts>();
    add_graph_flags(cmd, o->graph);
    cmd->add_option("assignment", o->assignment, "assignment file (vertex<TAB>label)")->required();
    cmd->add_option("--truth", o->truth, "ground-truth file (one community per line)");
    cmd->add_flag("--sym", o->sym, "symmetrize the graph before computing conductance");
    cmd->add_option("--format", o->format, "output format")->check(CLI::IsMember({"tsv", "json"}));
    cmd->add_option("--profile-out", o->profile_out, "conductance profile file (default stdout)");
    cmd->add_option("--report-out", o->report_out, "pair-rate report file (default stdout)");
    cmd->add_option("--batch", o->batch, "pairs per convergence checkpoint");
    cmd->add_option("--epsilon", o->epsilon, "max rate spread over the window to call converged");
    cmd->add_option("--window", o->window, "checkpoints the spread is measured over");
    cmd->add_option("--max-samples", o->max_samples, "hard cap on sampled pairs");
    cmd->add_option("--seed", o->seed, "RNG seed (entropy drawn and printed when omitted)");
    cmd->add_option("--top-fraction", o->top_fraction,
                    "bias positives to the top fraction of clusters by size, in (0,1]");

    cmd->callback([o]() {
        const Graph g = load_graph(o->graph);
        const Clustering clustering = Clustering::from_assignments(load_assignments(o->assignment));
        const bool json = o->format == "json";

        const ConductanceProfile profile = conductance_profile(g, clustering, o->sym);
        {
            OutFile out(o->profile_out);
            json ? write_profile_json(profile, out.stream())
                 : write_profile_tsv(profile, out.stream());
        }

        if (o->truth.empty()) return; // no ground truth: profile only

        const GroundTruth truth = GroundTruth::load(o->truth);
        SampleConfig scfg;
        scfg.batch = o->batch;
        scfg.epsilon = o->epsilon;
        scfg.window = o->window;
        scfg.max_samples = o->max_samples;
        scfg.seed = resolve_seed(o->seed);

        const EvalReport report =
            o->top_fraction
                ? biased_sample_pair_rates(clustering, truth, BiasConfig{*o->top_fraction}, scfg)
                : sample_pair_rates(clustering, truth, scfg);
        OutFile out(o->report_out);
        json ? write_report_json(report, out.stream()) : write_report_tsv(report, out.stream());
    });
}

void write_truth_file(const GroundTruth& truth, const std::string& path) {
    OutFile out(path);
    for (const auto& community : truth.communities()) {
        for (std::size_t i = 0; i < community.size(); ++i) {
            if (i > 0) out.stream() << ' ';
            out.stream() << community[i];
        }
        out.stream() << '\n';
    }
}

struct BaOpts {
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    std::optional<std::uint64_t> seed;
    std::string output;
};

struct PlantedOpts {
    PlantedPartitionConfig cfg;
    std::optional<std::uint64_t> seed;
    std::string output;
    std::string truth_out;
};

void setup_gen(CLI::App& app) {
    auto* cmd = app.add_subcommand("gen", "generate synthetic graphs");
    cmd->require_subcommand(1);

    auto* ba = cmd->add_subcommand("ba", "preferential-attachment graph");
    auto bo = std::make_shared<BaOpts>();
    ba->add_option("--n", bo->n, "vertex count")->required();
    ba->add_option("--m", bo->m, "edges attached per arriving vertex")->required();
    ba->add_option("--seed", bo->seed, "RNG seed (entropy drawn and printed when omitted)");
    ba->add_option("-o,--output", bo->output, "edge-list file (default stdout)");
    ba->callback([bo]() {
        const Graph g = generate_ba({bo->n, bo->m, resolve_seed(bo->seed)});
        OutFile out(bo->output);
        save_edge_list(g, out.stream());
    });

    auto* pl = cmd->add_subcommand("planted", "planted-partition graph with ground truth");
    auto po = std::make_shared<PlantedOpts>();
    pl->add_option("--communities", po->cfg.communities, "number of planted communities");
    pl->add_option("--size", po->cfg.size, "vertices per community");
    pl->add_option("--p-in", po->cfg.p_in, "within-community edge probability");
    pl->add_option("--p-out", po->cfg.p_out, "cross-community edge probability");
    pl->add_option("--weight-in", po->cfg.weight_in, "within-community edge weight");
    pl->add_option("--weight-out", po->cfg.weight_out, "cross-community edge weight");
    pl->add_option("--seed", po->seed, "RNG seed (entropy drawn and printed when omitted)");
    pl->add_option("-o,--output", po->output, "edge-list file (default stdout)");
    pl->add_option("--truth-out", po->truth_out, "write the planting as a ground-truth file");
    pl->callback([po]() {
        po->cfg.seed = resolve_seed(po->seed);
        const auto [g, truth] = generate_planted(po->cfg);
        OutFile out(po->output);
        save_edge_list(g, out.stream());
        if (!po->truth_out.empty()) write_truth_file(truth, po->truth_out);
    });
}

struct BenchOpts {
    std::vector<double> sizes;
    PipelineConfig pipeline;
    std::optional<std::uint64_t> seed;
    std::string output;
};

void setup_bench(CLI::App& app) {
    auto* cmd = app.add_subcommand("bench", "time the full pipeline across graph sizes");
    auto o = std::make_shared<BenchOpts>();
    cmd->add_option("--sizes", o->sizes, "stored-edge counts, ascending (e.g. 1e5,2e5,4e5)")
        ->required()
        ->delimiter(',');
    cmd->add_option("--k", o->pipeline.k_percent, "detection percentage");
    cmd->add_option("--beta", o->pipeline.beta, "flow-probability exponent");
    cmd->add_option("--lambda", o->pipeline.lambda, "stable-state window");
    cmd->add_option("--workers", o->pipeline.workers, "worker threads for propagation");
    cmd->add_option("--repeats", o->pipeline.repeats, "timed runs per size (minimum kept)");
    cmd->add_option("--seed", o->seed, "RNG seed (entropy drawn and printed when omitted)");
    cmd->add_option("-o,--output", o->output, "timing table file (default stdout)");
    cmd->callback([o]() {
        std::vector<std::size_t> sizes;
        sizes.reserve(o->sizes.size());
        for (double s : o->sizes) {
            if (!(s >= 1.0) || s != std::floor(s)) {
                throw DomainError("sizes must be positive integers");
            }
            sizes.push_back(static_cast<std::size_t>(s));
        }
        o->pipeline.seed = resolve_seed(o->seed);
        const auto rows = time_scaling(sizes, o->pipeline);
        OutFile out(o->output);
        write_timings_tsv(rows, out.stream());
    });
}

struct StatsOpts {
    GraphFlags graph;
    std::string output;
};

void setup_stats(CLI::App& app) {
    auto* cmd = app.add_subcommand("stats", "structural summary of an edge list");
    auto o = std::make_shared<StatsOpts>();
    add_graph_flags(cmd, o->graph);
    cmd->add_option("-o,--output", o->output, "stats file (default stdout)");
    cmd->callback([o]() {
        const Graph g = load_graph(o->graph);
        std::size_t max_out = 0;
        double max_wout = 0.0;
        for (VertexId v : g.sorted_vertices()) {
            max_out = std::max(max_out, g.out_degree(v));
            max_wout = std::max(max_wout, g.weighted_out_degree(v));
        }
        OutFile out(o->output);
        out.stream() << "vertices\t" << g.vertex_count() << '\n'
                     << "edges\t" << g.edge_count() << '\n'
                     << "stored_entries\t" << g.stored_entries() << '\n'
                     << "max_out_degree\t" << max_out << '\n'
                     << "max_weighted_out_degree\t" << format_double(max_wout) << '\n'
                     << "largest_component\t" << largest_component(g).size() << '\n';
    });
}

std::string preview(const std::vector<VertexId>& ids) {
    std::string s;
    const std::size_t show = std::min<std::size_t>(ids.size(), 8);
    for (std::size_t i = 0; i < show; ++i) {
        if (i > 0) s += ' ';
        s += std::to_string(ids[i]);
    }
    if (ids.size() > show) s += " ...";
    return s;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"community detection by simulated information flow"};
    app.require_subcommand(1);
    setup_detect(app);
    setup_eval(app);
    setup_gen(app);
    setup_bench(app);
    setup_stats(app);

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e);
        } catch (const CLI::CallForAllHelp& e) {
            return app.exit(e);
        } catch (const CLI::ParseError& e) {
            app.exit(e);
            return 1; // usage
        }
    } catch (const EmptyAlphaSetError& e) {
        std::cerr << "error: " << e.what() << '\n'
                  << "advisory: top by out-degree: " << preview(e.top_by_out_degree) << '\n'
                  << "advisory: top by weighted out-degree: "
                  << preview(e.top_by_weighted_out_degree) << '\n';
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const EmptyGraphError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NoPositivePairsError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NoNegativePairsError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
