#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hk/hk.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNonConverged = 2;
constexpr int kExitVerifyFailed = 3;

constexpr const char* kCrlf = "\r\n";

struct CommonOpts {
    std::string mode = "float";
    std::uint64_t seed = 1;
    std::uint64_t max_steps = 100000;
    double convergence_tol = 1e-13;
    double consensus_tol = 1e-9;
    unsigned threads = 0;
    bool convergence_tol_set = false;
};

void add_common_options(CLI::App* cmd, CommonOpts& o, bool with_mode) {
    cmd->fallthrough();  // lets --config appear after the subcommand name
    if (with_mode) {
        cmd->add_option("--mode", o.mode, "Arithmetic mode: float | rational")
            ->check(CLI::IsMember({"float", "rational"}))
            ->capture_default_str();
    }
    cmd->add_option("--seed", o.seed, "Master seed (64-bit)")->capture_default_str();
    cmd->add_option("--max-steps", o.max_steps, "Step cap per trajectory")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--convergence-tol", o.convergence_tol,
                    "Max one-step displacement treated as a fixed point (float mode; "
                    "rational mode defaults to exact equality)")
        ->capture_default_str();
    cmd->add_option("--consensus-tol", o.consensus_tol, "Cluster spread tolerance")
        ->capture_default_str();
    cmd->add_option("--threads", o.threads,
                    "Worker count (0 = HK_THREADS env or all cores); never affects results")
        ->capture_default_str();
}

template <typename S>
hk::ModelParams<S> make_params(const CommonOpts& o, double epsilon) {
    hk::ModelParams<S> params;
    params.epsilon = S(epsilon);
    params.max_steps = o.max_steps;
    params.consensus_tol = S(o.consensus_tol);
    if constexpr (hk::is_exact_v<S>) {
        // Exact equality unless the user explicitly asked for a tolerance.
        params.convergence_tol = o.convergence_tol_set ? S(o.convergence_tol) : S(0);
    } else {
        params.convergence_tol = S(o.convergence_tol);
    }
    params.validate();
    return params;
}

std::string join_doubles(const std::vector<double>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += hk::format_double(values[i]);
    }
    return out;
}

std::string join_sizes(const std::vector<std::size_t>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += hk::format_u64(values[i]);
    }
    return out;
}

/// Epsilon grid spec: either a comma list ("0.3,0.5") or an inclusive range
/// "start:stop:step" (endpoints included within half-step tolerance).
std::vector<double> parse_eps_spec(const std::string& spec) {
    std::vector<double> values;
    if (spec.find(':') != std::string::npos) {
        double start = 0;
        double stop = 0;
        double step = 0;
        char c1 = 0;
        char c2 = 0;
        std::istringstream in(spec);
        if (!(in >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':' ||
            !in.eof()) {
            throw std::invalid_argument("bad epsilon range, expected start:stop:step");
        }
        if (!(step > 0.0) || stop < start) {
            throw std::invalid_argument("epsilon range requires step > 0 and stop >= start");
        }
        for (int k = 0;; ++k) {
            const double v = start + k * step;
            if (v > stop + step / 2.0) {
                break;
            }
            values.push_back(v);
        }
    } else {
        std::istringstream in(spec);
        std::string token;
        while (std::getline(in, token, ',')) {
            values.push_back(std::stod(token));
        }
    }
    if (values.empty()) {
        throw std::invalid_argument("no epsilon values given");
    }
    return values;
}

struct MetadataWriter {
    std::ostream& out;
    const char* eol;

    void line(const std::string& key, const std::string& value) {
        out << "# " << key << ": " << value << eol;
    }
};

void write_common_metadata(MetadataWriter& md, const std::string& subcommand,
                           const CommonOpts& o) {
    md.line("tool", std::string(hk::kToolName) + " " + hk::kVersion);
    md.line("subcommand", subcommand);
    md.line("mode", o.mode == "rational" ? "exact-rational" : "float64");
    md.line("rng", hk::rng::kGeneratorName);
    md.line("master_seed", hk::format_u64(o.seed));
    md.line("max_steps", hk::format_u64(o.max_steps));
    md.line("convergence_tol", hk::format_double(o.convergence_tol));
    md.line("consensus_tol", hk::format_double(o.consensus_tol));
}

/// Opens the output target: the given path, or stdout when empty.
class OutputTarget {
public:
    explicit OutputTarget(const std::string& path) {
        if (!path.empty()) {
            file_.emplace(path, std::ios::binary);
            if (!*file_) {
                throw std::runtime_error("cannot open output file: " + path);
            }
        }
    }

    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::optional<std::ofstream> file_;
};

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateOpts {
    CommonOpts common;
    std::size_t n = 0;
    std::vector<double> opinions;
    double epsilon = 0.0;
    std::string trace_path;
    bool trace_opinions = false;
};

template <typename S>
int run_simulate(const SimulateOpts& opt) {
    const hk::ModelParams<S> params = make_params<S>(opt.common, opt.epsilon);

    std::optional<hk::OpinionProfile<S>> initial;
    if (!opt.opinions.empty()) {
        if (opt.n != 0 && opt.n != opt.opinions.size()) {
            std::cerr << "error: --n disagrees with the number of --opinions values\n";
            return kExitUsage;
        }
        std::vector<S> values;
        values.reserve(opt.opinions.size());
        for (const double v : opt.opinions) {
            values.push_back(S(v));
        }
        initial.emplace(std::move(values));
    } else {
        if (opt.n == 0) {
            std::cerr << "error: provide --n or --opinions\n";
            return kExitUsage;
        }
        initial = hk::sample_initial<S>(opt.n, hk::rng::trial_seed(opt.common.seed, 0));
    }

    std::optional<OutputTarget> trace;
    hk::RunOptions<S> options;
    options.track_connectivity = true;
    if (!opt.trace_path.empty()) {
        trace.emplace(opt.trace_path);
        std::ostream& ts = trace->stream();
        ts << "{\"meta\":{\"tool\":\"" << hk::kToolName << " " << hk::kVersion
           << "\",\"subcommand\":\"simulate\",\"mode\":\""
           << (opt.common.mode == "rational" ? "exact-rational" : "float64")
           << "\",\"n\":" << hk::format_u64(initial->size())
           << ",\"epsilon\":" << hk::format_double(opt.epsilon)
           << ",\"master_seed\":" << hk::format_u64(opt.common.seed)
           << ",\"max_steps\":" << hk::format_u64(opt.common.max_steps)
           << ",\"rng\":\"" << hk::rng::kGeneratorName << "\"}}\n";
        options.on_step = [&ts, &opt](const hk::StepView<S>& view) {
            ts << "{\"t\":" << hk::format_u64(view.profile.time())
               << ",\"connected\":" << (view.connected ? "true" : "false")
               << ",\"cluster_count\":" << hk::format_u64(view.component_count)
               << ",\"max_gap\":" << hk::format_double(hk::to_double(view.max_gap));
            if (opt.trace_opinions) {
                ts << ",\"opinions\":[";
                const auto& x = view.profile.opinions();
                for (std::size_t i = 0; i < x.size(); ++i) {
                    if (i > 0) {
                        ts << ',';
                    }
                    ts << hk::format_double(hk::to_double(x[i]));
                }
                ts << ']';
            }
            ts << "}\n";
        };
    }

    const hk::TrajectoryResult<S> result = hk::run(*initial, params, options);

    std::cout << "# " << hk::kToolName << " " << hk::kVersion << " simulate | mode="
              << (opt.common.mode == "rational" ? "exact-rational" : "float64")
              << " | n=" << initial->size() << " | eps=" << hk::format_double(opt.epsilon)
              << " | seed=" << opt.common.seed << " | rng=" << hk::rng::kGeneratorName << "\n";
    std::cout << "consensus: " << (result.consensus ? "true" : "false") << "\n";
    if (result.converged()) {
        std::cout << "converged_at: " << *result.converged_at << "\n";
    } else {
        std::cout << "converged_at: none\n";
    }
    std::cout << "clusters: " << result.clusters.size() << "\n";
    for (std::size_t i = 0; i < result.clusters.size(); ++i) {
        std::cout << "cluster[" << i
                  << "]: value=" << hk::format_double(hk::to_double(result.clusters[i].value))
                  << " count=" << result.clusters[i].count << "\n";
    }
    if (!result.converged()) {
        std::cerr << "error: no fixed point within " << opt.common.max_steps << " steps\n";
        return kExitNonConverged;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepOpts {
    CommonOpts common;
    std::vector<std::size_t> n_values;
    std::string eps_spec;
    std::uint64_t trials = 1000;
    std::string out_path;
};

void write_sweep_csv(std::ostream& out, const SweepOpts& opt,
                     const std::vector<std::size_t>& n_values,
                     const std::vector<double>& eps_values,
                     const std::vector<hk::EstimateRecord>& records) {
    MetadataWriter md{out, kCrlf};
    write_common_metadata(md, "sweep", opt.common);
    md.line("n_values", join_sizes(n_values));
    md.line("eps_values", join_doubles(eps_values));
    md.line("trials", hk::format_u64(opt.trials));
    md.line("seed_derivation",
            "cell master_seed = mix64(mix64(seed ^ golden*(n+1)) ^ cellgamma*(eps_index+1))");
    out << "n,epsilon,trials,successes,nonconverged,p_hat,ci_low,ci_high,mean_steps,master_seed"
        << kCrlf;
    for (const auto& r : records) {
        out << r.n << ',' << hk::format_double(r.epsilon) << ',' << r.trials << ','
            << r.successes << ',' << r.nonconverged << ',' << hk::format_double(r.p_hat) << ','
            << hk::format_double(r.ci_low) << ',' << hk::format_double(r.ci_high) << ','
            << hk::format_double(r.mean_steps) << ',' << r.master_seed << kCrlf;
    }
}

int run_sweep(const SweepOpts& opt) {
    if (opt.common.mode == "rational") {
        std::cerr << "error: sweep runs Monte Carlo trials in float64 only\n";
        return kExitUsage;
    }
    const std::vector<double> eps_values = parse_eps_spec(opt.eps_spec);
    hk::ModelParams<double> params = make_params<double>(opt.common, eps_values.front());

    const std::vector<hk::EstimateRecord> records =
        hk::sweep(opt.n_values, eps_values, opt.trials, opt.common.seed, params,
                  opt.common.threads);

    std::uint64_t nonconverged = 0;
    for (const auto& r : records) {
        nonconverged += r.nonconverged;
    }
    if (nonconverged > 0) {
        std::cerr << "warning: " << nonconverged
                  << " trial(s) hit the step cap; reported in the nonconverged column\n";
    }

    // Re-sorted copies so the metadata echoes the effective (ordered) grid.
    std::vector<std::size_t> ns = opt.n_values;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    std::vector<double> eps = eps_values;
    std::sort(eps.begin(), eps.end());
    eps.erase(std::unique(eps.begin(), eps.end()), eps.end());

    OutputTarget target(opt.out_path);
    write_sweep_csv(target.stream(), opt, ns, eps, records);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyOpts {
    CommonOpts common;
    std::string suite = "all";
    std::uint64_t cases = 10000;
    std::string out_path;
};

int run_verify(const VerifyOpts& opt) {
    std::vector<std::string> selected;
    if (opt.suite == "all") {
        selected = hk::suite_names();
    } else {
        selected.push_back(opt.suite);
    }

    std::vector<hk::VerificationReport> reports;
    reports.reserve(selected.size());
    std::ostream& log = opt.out_path.empty() ? std::cerr : std::cout;
    for (const std::string& name : selected) {
        hk::VerificationReport report =
            hk::run_suite(name, opt.cases, opt.common.seed, opt.common.threads);
        log << "suite " << report.suite << ": cases=" << report.cases
            << " violations=" << report.violations.size()
            << (report.passed() ? " PASS" : " FAIL") << " ("
            << hk::format_double(report.elapsed_ms) << " ms)\n";
        for (const std::string& v : report.violations) {
            log << "  violation: " << v << "\n";
        }
        reports.push_back(std::move(report));
    }

    std::string doc = "{\"metadata\":{\"tool\":\"" + std::string(hk::kToolName) + " " +
                      hk::kVersion + "\",\"subcommand\":\"verify\",\"seed\":" +
                      hk::format_u64(opt.common.seed) +
                      ",\"cases\":" + hk::format_u64(opt.cases) + ",\"rng\":\"" +
                      hk::rng::kGeneratorName + "\"},\"reports\":[";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        if (i > 0) {
            doc += ',';
        }
        doc += reports[i].to_json();
    }
    doc += "]}";

    OutputTarget target(opt.out_path);
    target.stream() << doc << "\n";

    for (const auto& report : reports) {
        if (!report.passed()) {
            return kExitVerifyFailed;
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// bound
// ---------------------------------------------------------------------------

struct BoundOpts {
    CommonOpts common;
    std::size_t n = 0;
    double epsilon = 0.0;
    std::uint64_t trials = 100000;
    std::string out_path;
};

int run_bound(const BoundOpts& opt) {
    const double bound = hk::disconnect_bound(opt.n, opt.epsilon);

    hk::TrialPlan plan;
    plan.n = opt.n;
    plan.epsilon = opt.epsilon;
    plan.trials = opt.trials;
    plan.master_seed = opt.common.seed;
    plan.params = make_params<double>(opt.common, opt.epsilon);
    plan.workers = opt.common.threads;
    const hk::EstimateRecord rec = hk::estimate_disconnect_probability(plan);

    const double threshold = bound + 4.0 * rec.ci_half_width();
    const bool respected = rec.p_hat <= threshold;

    std::cout << "# " << hk::kToolName << " " << hk::kVersion << " bound | n=" << opt.n
              << " | eps=" << hk::format_double(opt.epsilon) << " | trials=" << opt.trials
              << " | seed=" << opt.common.seed << "\n";
    std::cout << "bound: " << hk::format_double(bound) << "\n";
    std::cout << "empirical: " << hk::format_double(rec.p_hat) << " (ci ["
              << hk::format_double(rec.ci_low) << ", " << hk::format_double(rec.ci_high)
              << "], trials " << rec.trials << ")\n";
    std::cout << "threshold: " << hk::format_double(threshold)
              << " (bound + 4*ci_half_width)\n";
    std::cout << "bound_respected: " << (respected ? "PASS" : "FAIL") << "\n";

    if (!opt.out_path.empty()) {
        OutputTarget target(opt.out_path);
        std::ostream& out = target.stream();
        MetadataWriter md{out, kCrlf};
        write_common_metadata(md, "bound", opt.common);
        md.line("trials", hk::format_u64(opt.trials));
        out << "n,epsilon,trials,disconnected,p_hat,ci_low,ci_high,bound,threshold,respected"
            << kCrlf;
        out << rec.n << ',' << hk::format_double(rec.epsilon) << ',' << rec.trials << ','
            << rec.successes << ',' << hk::format_double(rec.p_hat) << ','
            << hk::format_double(rec.ci_low) << ',' << hk::format_double(rec.ci_high) << ','
            << hk::format_double(bound) << ',' << hk::format_double(threshold) << ','
            << (respected ? "PASS" : "FAIL") << kCrlf;
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounded-confidence opinion dynamics: simulation, Monte Carlo "
                 "estimation, and property verification"};
    app.set_version_flag("--version", std::string(hk::kToolName) + " " + hk::kVersion);
    app.set_config("--config", "",
                   "Flat key = value config file with '#' comments, keys prefixed by the "
                   "subcommand (e.g. sweep.trials = 500); command-line flags win");
    app.require_subcommand(1);

    SimulateOpts sim;
    CLI::App* c_sim = app.add_subcommand("simulate", "Run one trajectory to convergence");
    add_common_options(c_sim, sim.common, /*with_mode=*/true);
    c_sim->add_option("--n", sim.n, "Number of agents (sampled uniformly unless --opinions)");
    c_sim->add_option("--opinions", sim.opinions, "Explicit initial opinions in [0,1]")
        ->delimiter(',');
    c_sim->add_option("--eps", sim.epsilon, "Confidence threshold")->required();
    c_sim->add_option("--trace", sim.trace_path, "Write per-step JSONL trace to this path");
    c_sim->add_flag("--trace-opinions", sim.trace_opinions,
                    "Include the full profile in each trace record");

    SweepOpts swp;
    CLI::App* c_swp = app.add_subcommand("sweep", "Consensus-probability grid sweep to CSV");
    add_common_options(c_swp, swp.common, /*with_mode=*/true);
    c_swp->add_option("--n", swp.n_values, "Agent counts (comma list)")
        ->required()
        ->delimiter(',');
    c_swp->add_option("--eps", swp.eps_spec,
                      "Epsilon values: comma list or start:stop:step (inclusive)")
        ->required();
    c_swp->add_option("--trials", swp.trials, "Trials per grid cell")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c_swp->add_option("--out", swp.out_path, "CSV output path (default: stdout)");

    VerifyOpts ver;
    CLI::App* c_ver = app.add_subcommand("verify", "Run model property suites");
    add_common_options(c_ver, ver.common, /*with_mode=*/false);
    c_ver->add_option("--suite", ver.suite,
                      "Suite name or 'all' (order-preserving | disconnected-preserving | "
                      "gap-criterion | edge-persistence | h-inductive | matching | "
                      "oracle-equivalence)")
        ->capture_default_str();
    c_ver->add_option("--cases", ver.cases, "Random cases per suite")->capture_default_str();
    c_ver->add_option("--out", ver.out_path, "JSON report path (default: stdout)");

    BoundOpts bnd;
    CLI::App* c_bnd =
        app.add_subcommand("bound", "Compare the disconnection bound against simulation");
    add_common_options(c_bnd, bnd.common, /*with_mode=*/false);
    c_bnd->add_option("--n", bnd.n, "Number of agents")->required();
    c_bnd->add_option("--eps", bnd.epsilon, "Confidence threshold in (0,1)")->required();
    c_bnd->add_option("--trials", bnd.trials, "Monte Carlo trials")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    c_bnd->add_option("--out", bnd.out_path, "CSV output path (optional)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    sim.common.convergence_tol_set = c_sim->count("--convergence-tol") > 0;
    swp.common.convergence_tol_set = c_swp->count("--convergence-tol") > 0;

    try {
        if (c_sim->parsed()) {
            return sim.common.mode == "rational" ? run_simulate<hk::rational>(sim)
                                                 : run_simulate<double>(sim);
        }
        if (c_swp->parsed()) {
            return run_sweep(swp);
        }
        if (c_ver->parsed()) {
            return run_verify(ver);
        }
        if (c_bnd->parsed()) {
            return run_bound(bnd);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
