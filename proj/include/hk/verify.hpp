#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hk/format.hpp"
#include "hk/graph.hpp"
#include "hk/matching.hpp"
#include "hk/model.hpp"
#include "hk/parallel.hpp"
#include "hk/profile.hpp"
#include "hk/rng.hpp"
#include "hk/scalar.hpp"

namespace hk {

/// Result of one property suite. Violations are JSON object strings carrying
/// the offending inputs; an empty list means the suite passed. Deterministic
/// for a given (suite, cases, seed), apart from elapsed_ms.
struct VerificationReport {
    std::string suite;
    std::uint64_t cases = 0;
    std::vector<std::string> violations;
    std::uint64_t seed = 0;
    double elapsed_ms = 0.0;

    bool passed() const { return violations.empty(); }

    std::string to_json() const {
        std::string out = "{\"suite\":\"" + suite + "\",\"cases\":" + format_u64(cases) +
                          ",\"violations\":[";
        for (std::size_t i = 0; i < violations.size(); ++i) {
            if (i > 0) {
                out += ',';
            }
            out += violations[i];
        }
        out += "],\"seed\":" + format_u64(seed) +
               ",\"elapsed_ms\":" + format_double(elapsed_ms) + "}";
        return out;
    }
};

namespace detail {

struct ProfileCase {
    std::size_t n = 0;
    double epsilon = 0.0;
    std::vector<double> opinions;  // unsorted draws
};

inline ProfileCase gen_profile_case(std::uint64_t seed, std::size_t n_min, std::size_t n_max,
                                    double eps_min, double eps_max) {
    rng::Xoshiro256pp gen(seed);
    ProfileCase c;
    c.n = n_min + static_cast<std::size_t>(gen() % (n_max - n_min + 1));
    // uniform01 is in [0,1), so epsilon lands in (eps_min, eps_max].
    c.epsilon = eps_max - (eps_max - eps_min) * gen.uniform01();
    c.opinions.reserve(c.n);
    for (std::size_t i = 0; i < c.n; ++i) {
        c.opinions.push_back(gen.uniform01());
    }
    return c;
}

inline void append_double_array(std::string& out, const std::vector<double>& values) {
    out += '[';
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += format_double(values[i]);
    }
    out += ']';
}

inline std::string violation_json(std::uint64_t case_index, const ProfileCase& c,
                                  std::string_view what) {
    std::string out = "{\"case\":" + format_u64(case_index) +
                      ",\"n\":" + format_u64(c.n) +
                      ",\"epsilon\":" + format_double(c.epsilon) + ",\"opinions\":";
    append_double_array(out, c.opinions);
    out += ",\"detail\":\"";
    out += what;
    out += "\"}";
    return out;
}

// Exact rational twin of a float-mode profile (doubles are dyadic rationals,
// and the conversion is monotone, so sortedness carries over).
inline OpinionProfile<rational> rational_twin(const OpinionProfile<double>& p) {
    std::vector<rational> values;
    values.reserve(p.size());
    for (const double v : p.opinions()) {
        values.push_back(rational(v));
    }
    return OpinionProfile<rational>::from_canonical(std::move(values), p.time());
}

using SuiteCheck = std::optional<std::string> (*)(std::uint64_t case_index,
                                                  std::uint64_t case_seed);

// Property: one synchronous step never reorders opinions. Exact in
// rational arithmetic; the float path is allowed 1e-12 of rounding slack on
// the raw (pre-canonicalization) means.
inline std::optional<std::string> check_order_preserving(std::uint64_t case_index,
                                                         std::uint64_t case_seed) {
    const ProfileCase c = gen_profile_case(case_seed, 1, 100, 0.0, 1.0);
    const OpinionProfile<double> pf(c.opinions);
    const auto params_f = ModelParams<double>::with_epsilon(c.epsilon);
    const std::vector<double> raw_f = step_means(pf, params_f);
    for (std::size_t i = 1; i < raw_f.size(); ++i) {
        if (raw_f[i] < raw_f[i - 1] - 1e-12) {
            return violation_json(case_index, c, "float step means decreased beyond 1e-12 slack");
        }
    }
    const OpinionProfile<rational> pr = rational_twin(pf);
    const auto params_r = ModelParams<rational>::with_epsilon(rational(c.epsilon));
    const std::vector<rational> raw_r = step_means(pr, params_r);
    for (std::size_t i = 1; i < raw_r.size(); ++i) {
        if (raw_r[i] < raw_r[i - 1]) {
            return violation_json(case_index, c, "rational step means are not non-decreasing");
        }
    }
    return std::nullopt;
}

// Property: a disconnected opinion graph stays disconnected after one
// step. Epsilon is drawn strictly inside (0, max_gap) so the premise holds.
inline std::optional<std::string> check_disconnected_preserving(std::uint64_t case_index,
                                                                std::uint64_t case_seed) {
    ProfileCase c = gen_profile_case(case_seed, 2, 100, 0.0, 1.0);
    const OpinionProfile<double> pf(c.opinions);
    const auto& x = pf.opinions();
    double max_gap = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        max_gap = std::max(max_gap, x[i] - x[i - 1]);
    }
    if (max_gap == 0.0) {
        return std::nullopt;  // all draws equal: cannot be made disconnected
    }
    rng::Xoshiro256pp gen(rng::mix64(case_seed));
    c.epsilon = max_gap * (0.05 + 0.9 * gen.uniform01());

    const auto params_f = ModelParams<double>::with_epsilon(c.epsilon);
    if (is_connected(pf, c.epsilon)) {
        return violation_json(case_index, c, "generator failed to produce a disconnected graph");
    }
    if (is_connected(sync_step(pf, params_f), c.epsilon)) {
        return violation_json(case_index, c, "float graph reconnected after one step");
    }

    const OpinionProfile<rational> pr = rational_twin(pf);
    const rational eps_r(c.epsilon);
    const auto params_r = ModelParams<rational>::with_epsilon(eps_r);
    if (is_connected(sync_step(pr, params_r), eps_r)) {
        return violation_json(case_index, c, "rational graph reconnected after one step");
    }
    return std::nullopt;
}

// Property: the O(n) adjacent-gap connectivity criterion agrees with a
// full graph traversal over the pairwise edge set.
inline std::optional<std::string> check_gap_criterion(std::uint64_t case_index,
                                                      std::uint64_t case_seed) {
    const ProfileCase c = gen_profile_case(case_seed, 1, 100, 0.0, 1.0);
    const OpinionProfile<double> pf(c.opinions);
    if (is_connected(pf, c.epsilon) != is_connected_bruteforce(pf, c.epsilon)) {
        return violation_json(case_index, c, "gap criterion disagrees with graph traversal");
    }
    return std::nullopt;
}

// Property: whenever the edge-persistence inequality holds for an edge,
// that edge still exists after one step. Checked in exact arithmetic.
inline std::optional<std::string> check_edge_persistence(std::uint64_t case_index,
                                                         std::uint64_t case_seed) {
    const ProfileCase c = gen_profile_case(case_seed, 2, 50, 0.0, 1.0);
    const OpinionProfile<rational> pr = rational_twin(OpinionProfile<double>(c.opinions));
    const rational eps_r(c.epsilon);
    const auto params_r = ModelParams<rational>::with_epsilon(eps_r);
    const std::vector<NeighborWindow> windows = all_windows(pr, eps_r);
    const std::vector<rational> next = step_means(pr, params_r);
    for (std::size_t i = 0; i < pr.size(); ++i) {
        for (std::size_t j = i + 1; j <= windows[i].hi; ++j) {
            const std::size_t lo = std::max(windows[i].lo, windows[j].lo);
            const std::size_t hi = std::min(windows[i].hi, windows[j].hi);
            const std::size_t shared = hi >= lo ? hi - lo + 1 : 0;
            const std::size_t only_i = windows[i].size() - shared;
            const std::size_t only_j = windows[j].size() - shared;
            if (2 * std::max(only_i, only_j) > shared) {
                continue;  // criterion silent; nothing to check
            }
            if (abs_value(rational(next[i] - next[j])) > eps_r) {
                std::string what = "edge (" + format_u64(i) + "," + format_u64(j) +
                                   ") met the persistence inequality but vanished";
                return violation_json(case_index, c, what);
            }
        }
    }
    return std::nullopt;
}

// Property: the H predicate is inductive under the synchronous step,
// for confidence thresholds of at least one-half. Exact arithmetic.
inline std::optional<std::string> check_h_inductive(std::uint64_t case_index,
                                                    std::uint64_t case_seed) {
    const ProfileCase c = gen_profile_case(case_seed, 1, 100, 0.5, 1.0);
    const OpinionProfile<rational> pr = rational_twin(OpinionProfile<double>(c.opinions));
    const rational eps_r(c.epsilon);
    if (!h_statement(pr, eps_r)) {
        return std::nullopt;  // premise false: vacuous
    }
    const auto params_r = ModelParams<rational>::with_epsilon(eps_r);
    if (!h_statement(sync_step(pr, params_r), eps_r)) {
        return violation_json(case_index, c, "H held at t but failed at t+1");
    }
    return std::nullopt;
}

// Property: the matching decomposition reconstructs the zero-sum
// combination, its coefficients carry exactly the positive mass, and every
// term pairs a positive-lambda index with a negative one.
inline std::optional<std::string> check_matching(std::uint64_t case_index,
                                                 std::uint64_t case_seed) {
    rng::Xoshiro256pp gen(case_seed);
    const std::size_t n = 1 + static_cast<std::size_t>(gen() % 50);
    std::vector<double> lambdas(n);
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) {
        lambdas[i] = 2.0 * gen.uniform01() - 1.0;
        xs[i] = gen.uniform01();
    }
    double mean = 0.0;
    for (const double l : lambdas) {
        mean += l;
    }
    mean /= static_cast<double>(n);
    for (double& l : lambdas) {
        l -= mean;  // project to zero sum (float residue covered by kZeroSumTol)
    }

    const auto report = [&](std::string_view what) {
        std::string out = "{\"case\":" + format_u64(case_index) + ",\"lambdas\":";
        append_double_array(out, lambdas);
        out += ",\"xs\":";
        append_double_array(out, xs);
        out += ",\"detail\":\"";
        out += what;
        out += "\"}";
        return out;
    };

    const MatchingDecomposition<double> dec = matching_decomposition(lambdas, xs);
    double combo = 0.0;
    double abs_mass = 0.0;
    double max_abs_x = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        combo += lambdas[i] * xs[i];
        abs_mass += std::abs(lambdas[i]);
        max_abs_x = std::max(max_abs_x, std::abs(xs[i]));
    }
    double reconstructed = 0.0;
    double coeff_sum = 0.0;
    for (const auto& term : dec.terms) {
        if (!(term.coefficient >= 0.0)) {
            return report("negative coefficient emitted");
        }
        if (!(lambdas[term.positive_index] > 0.0) || !(lambdas[term.negative_index] < 0.0)) {
            return report("term does not pair a positive index with a negative index");
        }
        reconstructed += term.coefficient * (xs[term.positive_index] - xs[term.negative_index]);
        coeff_sum += term.coefficient;
    }
    const double tol = 1e-12 * (1.0 + abs_mass * max_abs_x);
    if (std::abs(reconstructed - combo) > tol) {
        return report("float reconstruction identity violated");
    }
    if (std::abs(coeff_sum - dec.total_positive_mass) > tol) {
        return report("float mass identity violated");
    }

    // Exact twin: subtracting the rational mean makes the sum exactly zero.
    std::vector<rational> lr;
    std::vector<rational> xr;
    lr.reserve(n);
    xr.reserve(n);
    rational lsum(0);
    for (std::size_t i = 0; i < n; ++i) {
        lr.push_back(rational(lambdas[i]));
        xr.push_back(rational(xs[i]));
        lsum = rational(lsum + lr.back());
    }
    const rational correction(lsum / rational(static_cast<std::uint64_t>(n)));
    rational combo_r(0);
    rational pos_mass_r(0);
    for (std::size_t i = 0; i < n; ++i) {
        lr[i] = rational(lr[i] - correction);
        combo_r = rational(combo_r + rational(lr[i] * xr[i]));
        if (lr[i] > rational(0)) {
            pos_mass_r = rational(pos_mass_r + lr[i]);
        }
    }
    const MatchingDecomposition<rational> dec_r = matching_decomposition(lr, xr);
    rational reconstructed_r(0);
    rational coeff_sum_r(0);
    for (const auto& term : dec_r.terms) {
        reconstructed_r = rational(
            reconstructed_r +
            rational(term.coefficient * rational(xr[term.positive_index] - xr[term.negative_index])));
        coeff_sum_r = rational(coeff_sum_r + term.coefficient);
    }
    if (reconstructed_r != combo_r) {
        return report("exact reconstruction identity violated");
    }
    if (coeff_sum_r != pos_mass_r || dec_r.total_positive_mass != pos_mass_r) {
        return report("exact mass identity violated");
    }
    return std::nullopt;
}

// The fast window/prefix step agrees with the quadratic reference: within
// 1e-9 componentwise in float, exactly in rational arithmetic.
inline std::optional<std::string> check_oracle_equivalence(std::uint64_t case_index,
                                                           std::uint64_t case_seed) {
    const ProfileCase c = gen_profile_case(case_seed, 1, 200, 0.0, 1.0);
    const OpinionProfile<double> pf(c.opinions);
    const auto params_f = ModelParams<double>::with_epsilon(c.epsilon);
    const std::vector<double> fast_f = step_means(pf, params_f);
    const std::vector<double> naive_f = step_means_naive(pf, params_f);
    for (std::size_t i = 0; i < fast_f.size(); ++i) {
        if (std::abs(fast_f[i] - naive_f[i]) > 1e-9) {
            return violation_json(case_index, c, "float fast/naive step disagreement beyond 1e-9");
        }
    }
    const OpinionProfile<rational> pr = rational_twin(pf);
    const auto params_r = ModelParams<rational>::with_epsilon(rational(c.epsilon));
    if (step_means(pr, params_r) != step_means_naive(pr, params_r)) {
        return violation_json(case_index, c, "rational fast/naive step disagreement");
    }
    return std::nullopt;
}

struct SuiteEntry {
    const char* name;
    SuiteCheck check;
};

inline constexpr SuiteEntry kSuiteTable[] = {
    {"order-preserving", &check_order_preserving},
    {"disconnected-preserving", &check_disconnected_preserving},
    {"gap-criterion", &check_gap_criterion},
    {"edge-persistence", &check_edge_persistence},
    {"h-inductive", &check_h_inductive},
    {"matching", &check_matching},
    {"oracle-equivalence", &check_oracle_equivalence},
};

} // namespace detail

inline std::vector<std::string> suite_names() {
    std::vector<std::string> names;
    for (const auto& entry : detail::kSuiteTable) {
        names.emplace_back(entry.name);
    }
    return names;
}

/// Runs one property suite: `cases` random instances derived deterministically
/// from the seed (per-case seed = rng::trial_seed(seed, case_index)), sharded
/// across workers, violations merged in case order. Throws
/// std::invalid_argument for an unknown suite name.
inline VerificationReport run_suite(std::string_view name, std::uint64_t cases,
                                    std::uint64_t seed, unsigned workers = 0) {
    detail::SuiteCheck check = nullptr;
    for (const auto& entry : detail::kSuiteTable) {
        if (name == entry.name) {
            check = entry.check;
            break;
        }
    }
    if (check == nullptr) {
        throw std::invalid_argument("unknown verification suite: " + std::string(name));
    }

    const auto start = std::chrono::steady_clock::now();
    std::vector<std::string> slots(cases);
    parallel_for(cases, resolve_worker_count(workers), [&](std::uint64_t i) {
        if (auto violation = check(i, rng::trial_seed(seed, i))) {
            slots[i] = std::move(*violation);
        }
    });
    const auto stop = std::chrono::steady_clock::now();

    VerificationReport report;
    report.suite = std::string(name);
    report.cases = cases;
    report.seed = seed;
    report.elapsed_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    for (auto& slot : slots) {
        if (!slot.empty()) {
            report.violations.push_back(std::move(slot));
        }
    }
    return report;
}

} // namespace hk
