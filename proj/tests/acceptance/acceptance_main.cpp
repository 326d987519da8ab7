// Acceptance suite: one criterion per invocation (argv[1] = 1..9), or all
// when no selector is given. Prints exactly one [PASS]/[FAIL] line per
// criterion and exits nonzero if any selected criterion failed.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hk/hk.hpp"

namespace fs = std::filesystem;

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct CmdResult {
    int exit_code = -1;
    std::string out;
};

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "hksim_acceptance";
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CmdResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    static int counter = 0;
    const fs::path out = scratch_dir() / ("cli_out_" + std::to_string(++counter) + ".txt");
    const std::string cmd = env_prefix + " \"" + HKSIM_BIN_PATH + "\" " + args + " > \"" +
                            out.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    CmdResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out);
    return result;
}

double parse_after(const std::string& text, const std::string& key) {
    const auto pos = text.find(key);
    if (pos == std::string::npos) {
        return std::nan("");
    }
    return std::stod(text.substr(pos + key.size()));
}

// Splits one CSV data row (the first non-comment line after the header).
std::vector<std::string> first_data_row(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        std::vector<std::string> fields;
        std::istringstream row(line);
        std::string field;
        while (std::getline(row, field, ',')) {
            fields.push_back(field);
        }
        return fields;
    }
    return {};
}

bool report(int criterion, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    return pass;
}

std::string fmt(double v) { return hk::format_double(v); }

// 1. Closed-form anchor (n=2): sweep at eps=0.5 lands within 0.01 of 0.75.
bool criterion1() {
    const auto start = std::chrono::steady_clock::now();
    const fs::path out = scratch_dir() / "c1.csv";
    const auto r = run_cli("sweep --n 2 --eps 0.5 --trials 100000 --seed 9 --out \"" +
                           out.string() + "\"");
    const double elapsed = seconds_since(start);
    if (r.exit_code != 0) {
        return report(1, false, "sweep exited with code " + std::to_string(r.exit_code));
    }
    const auto fields = first_data_row(slurp(out));
    if (fields.size() != 10) {
        return report(1, false, "malformed sweep row");
    }
    const double p_hat = std::stod(fields[5]);
    const bool pass = std::abs(p_hat - 0.75) <= 0.01 && elapsed < 10.0;
    return report(1, pass,
                  "n=2 eps=0.5 trials=100000: p_hat=" + fmt(p_hat) + " vs 0.75 +/- 0.01 (" +
                      fmt(elapsed) + " s < 10 s)");
}

// 2. Trivial anchor: eps = 1.0 gives probability exactly 1.0 for any n.
bool criterion2() {
    const auto start = std::chrono::steady_clock::now();
    for (const std::size_t n : {1, 2, 7, 50, 200}) {
        hk::TrialPlan plan;
        plan.n = n;
        plan.epsilon = 1.0;
        plan.trials = 1000;
        plan.master_seed = 4;
        plan.params = hk::ModelParams<double>::with_epsilon(1.0);
        const hk::EstimateRecord rec = hk::estimate_consensus_probability(plan);
        if (rec.p_hat != 1.0 || rec.nonconverged != 0) {
            return report(2, false,
                          "n=" + std::to_string(n) + ": p_hat=" + fmt(rec.p_hat) +
                              " (expected exactly 1)");
        }
    }
    const double elapsed = seconds_since(start);
    return report(2, elapsed < 10.0,
                  "eps=1.0, n in {1,2,7,50,200}, 1000 trials each: p_hat exactly 1.0 (" +
                      fmt(elapsed) + " s < 10 s)");
}

// 3. Consensus trend at eps=0.5: p_hat non-decreasing in n within overlapping
//    CIs and at least 0.95 by n=1000.
bool criterion3() {
    const auto start = std::chrono::steady_clock::now();
    const auto params = hk::ModelParams<double>::with_epsilon(0.5);
    const auto records = hk::sweep({10, 100, 1000}, {0.5}, 300, 2024, params);
    const double elapsed = seconds_since(start);

    std::string detail = "eps=0.5 trials=300:";
    bool pass = true;
    for (const auto& rec : records) {
        detail += " p_hat(n=" + std::to_string(rec.n) + ")=" + fmt(rec.p_hat);
    }
    for (std::size_t i = 1; i < records.size(); ++i) {
        const bool non_decreasing = records[i].p_hat >= records[i - 1].p_hat;
        const bool ci_overlap = records[i].ci_high >= records[i - 1].ci_low;
        if (!non_decreasing && !ci_overlap) {
            pass = false;
            detail += " [drop beyond CI overlap at n=" + std::to_string(records[i].n) + "]";
        }
    }
    if (records.back().p_hat < 0.95) {
        pass = false;
        detail += " [p_hat(n=1000) < 0.95]";
    }
    pass = pass && elapsed < 300.0;
    detail += " (" + fmt(elapsed) + " s < 300 s)";
    return report(3, pass, detail);
}

// 4. Disconnection-bound comparison at n=10, eps=0.3: empirical frequency
//    must not exceed 0.05764801 + 4 CI half-widths.
bool criterion4() {
    const auto start = std::chrono::steady_clock::now();
    const auto r = run_cli("bound --n 10 --eps 0.3 --trials 200000 --seed 3");
    const double elapsed = seconds_since(start);
    if (r.exit_code != 0) {
        return report(4, false, "bound exited with code " + std::to_string(r.exit_code));
    }
    const double empirical = parse_after(r.out, "empirical: ");
    const double threshold = parse_after(r.out, "threshold: ");
    const bool respected = r.out.find("bound_respected: PASS") != std::string::npos;
    const bool pass = respected && empirical <= threshold && elapsed < 60.0;
    return report(4, pass,
                  "n=10 eps=0.3 trials=200000: empirical=" + fmt(empirical) +
                      " vs bound+4*ci_half=" + fmt(threshold) + " (" + fmt(elapsed) +
                      " s < 60 s)");
}

// 5. All property suites at 10000 cases, seed 7: zero violations.
bool criterion5() {
    const auto start = std::chrono::steady_clock::now();
    const auto r = run_cli("verify --suite all --cases 10000 --seed 7");
    const double elapsed = seconds_since(start);
    const bool pass = r.exit_code == 0 && elapsed < 300.0;
    return report(5, pass,
                  "verify --suite all --cases 10000 --seed 7: exit=" +
                      std::to_string(r.exit_code) + " (" + fmt(elapsed) + " s < 300 s)");
}

// 6. Exact finite-time convergence: 100 random rational profiles, n <= 20,
//    at eps in {0.1, 0.3, 0.5}, all reaching exact fixed points within 1e4 steps.
bool criterion6() {
    const auto start = std::chrono::steady_clock::now();
    std::uint64_t runs = 0;
    std::uint64_t max_observed_steps = 0;
    for (std::uint64_t c = 0; c < 100; ++c) {
        const std::uint64_t seed = hk::rng::trial_seed(606, c);
        const std::size_t n = 1 + static_cast<std::size_t>(seed % 20);
        const auto initial = hk::sample_initial<hk::rational>(n, seed);
        for (const double eps : {0.1, 0.3, 0.5}) {
            auto params = hk::ModelParams<hk::rational>::with_epsilon(hk::rational(eps));
            params.max_steps = 10000;
            const auto result = hk::run(initial, params);
            if (!result.converged()) {
                return report(6, false,
                              "profile seed=" + std::to_string(seed) +
                                  " eps=" + fmt(eps) + " did not reach an exact fixed point");
            }
            if (hk::sync_step(result.final_profile, params).opinions() !=
                result.final_profile.opinions()) {
                return report(6, false, "final profile is not an exact fixed point");
            }
            max_observed_steps = std::max(max_observed_steps, *result.converged_at);
            ++runs;
        }
    }
    const double elapsed = seconds_since(start);
    const bool pass = runs == 300 && elapsed < 120.0;
    return report(6, pass,
                  "300 exact runs (100 profiles x 3 eps), max converged_at=" +
                      std::to_string(max_observed_steps) + " < 10000 (" + fmt(elapsed) +
                      " s < 120 s)");
}

// 7. Hand trajectory through the CLI.
bool criterion7() {
    const auto r = run_cli("simulate --opinions 0.0,0.4,0.8 --eps 0.5");
    if (r.exit_code != 0) {
        return report(7, false, "simulate exited with code " + std::to_string(r.exit_code));
    }
    const bool consensus = r.out.find("consensus: true") != std::string::npos;
    const bool at2 = r.out.find("converged_at: 2") != std::string::npos;
    const double value = parse_after(r.out, "cluster[0]: value=");
    const bool value_ok = std::abs(value - 0.4) <= 1e-12;
    return report(7, consensus && at2 && value_ok,
                  "consensus=" + std::string(consensus ? "true" : "false") +
                      " converged_at_2=" + (at2 ? "true" : "false") +
                      " value=" + fmt(value) + " vs 0.4 +/- 1e-12");
}

// 8. Determinism: identical sweep flags give byte-identical CSV for any
//    worker count.
bool criterion8() {
    const fs::path a = scratch_dir() / "c8_a.csv";
    const fs::path b = scratch_dir() / "c8_b.csv";
    const std::string flags = "sweep --n 10,50 --eps 0.3:0.7:0.2 --trials 500 --seed 77 --out ";
    const auto ra = run_cli(flags + "\"" + a.string() + "\"", "HK_THREADS=1");
    const auto rb = run_cli(flags + "\"" + b.string() + "\"", "HK_THREADS=7");
    if (ra.exit_code != 0 || rb.exit_code != 0) {
        return report(8, false, "sweep invocation failed");
    }
    const std::string va = slurp(a);
    const std::string vb = slurp(b);
    const bool pass = !va.empty() && va == vb;
    return report(8, pass,
                  "HK_THREADS=1 vs HK_THREADS=7: " +
                      std::string(pass ? "byte-identical CSV" : "outputs differ"));
}

// 9. Performance: one synchronous step at n = 10^6 in float mode within
//    200 ms (the O(n) window/prefix path).
bool criterion9() {
    const auto initial = hk::sample_initial<double>(1000000, 909);
    const auto params = hk::ModelParams<double>::with_epsilon(0.2);
    double best = 1e9;
    for (int rep = 0; rep < 3; ++rep) {
        const auto start = std::chrono::steady_clock::now();
        const auto next = hk::sync_step(initial, params);
        const double elapsed = seconds_since(start);
        best = std::min(best, elapsed);
        if (next.size() != initial.size()) {
            return report(9, false, "step produced a malformed profile");
        }
    }
    const bool pass = best <= 0.2;
    return report(9, pass,
                  "sync_step at n=1e6: best of 3 = " + fmt(best * 1000.0) + " ms <= 200 ms");
}

} // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    if (argc > 1) {
        selected.push_back(std::atoi(argv[1]));
    } else {
        for (int c = 1; c <= 9; ++c) {
            selected.push_back(c);
        }
    }

    bool (*criteria[])() = {criterion1, criterion2, criterion3, criterion4, criterion5,
                            criterion6, criterion7, criterion8, criterion9};
    int failures = 0;
    for (const int c : selected) {
        if (c < 1 || c > 9) {
            std::fprintf(stderr, "unknown criterion %d (valid: 1..9)\n", c);
            return 2;
        }
        if (!criteria[c - 1]()) {
            ++failures;
        }
    }
    return failures == 0 ? 0 : 1;
}
