#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hk/graph.hpp"
#include "hk/model.hpp"
#include "hk/parallel.hpp"
#include "hk/profile.hpp"
#include "hk/rng.hpp"

namespace hk {

/// n independent uniform draws on [0,1], canonicalized. The generator is
/// xoshiro256++ keyed by the trial seed (see rng.hpp for the exact mixing
/// constants); with the rational scalar the draws convert exactly, so both
/// arithmetic modes see the same initial profile for the same seed.
template <typename S = double>
OpinionProfile<S> sample_initial(std::size_t n, std::uint64_t trial_seed) {
    if (n == 0) {
        throw std::invalid_argument("sample_initial requires n >= 1");
    }
    rng::Xoshiro256pp gen(trial_seed);
    std::vector<S> values;
    values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        values.push_back(S(gen.uniform01()));
    }
    return OpinionProfile<S>(std::move(values));
}

/// One Monte Carlo configuration: grid cell dimensions plus seeding. Per-trial
/// seeds derive from (master_seed, trial_index) via rng::trial_seed.
struct TrialPlan {
    std::size_t n = 0;
    double epsilon = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t master_seed = 0;
    ModelParams<double> params{};
    unsigned workers = 0;  // 0 = resolve from HK_THREADS / hardware

    void validate() const {
        if (n < 1) {
            throw std::invalid_argument("trial plan requires n >= 1");
        }
        if (trials < 1) {
            throw std::invalid_argument("trial plan requires trials >= 1");
        }
        ModelParams<double> p = params;
        p.epsilon = epsilon;
        p.validate();
    }
};

/// One estimated grid cell. p_hat = successes/trials with a 95% Wilson score
/// interval; non-converged trials are a separate outcome, excluded from
/// successes and reported in their own field. Deterministic for a given plan
/// regardless of worker count.
struct EstimateRecord {
    std::size_t n = 0;
    double epsilon = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    std::uint64_t nonconverged = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double mean_steps = 0.0;  // over converged trials; 0 when none converged
    std::uint64_t master_seed = 0;

    double ci_half_width() const { return (ci_high - ci_low) / 2.0; }
};

struct WilsonInterval {
    double low = 0.0;
    double high = 1.0;
};

/// 95% (by default) Wilson score interval, chosen over the normal
/// approximation for robustness at counts near 0 or trials. Endpoints are
/// clamped so successes==0 gives low==0 and successes==trials gives high==1.
inline WilsonInterval wilson_score_interval(std::uint64_t successes, std::uint64_t trials,
                                            double z = 1.959963984540054) {
    if (trials == 0) {
        return {0.0, 1.0};
    }
    const double nd = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / nd;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / nd;
    const double center = p + z2 / (2.0 * nd);
    const double spread = z * std::sqrt(p * (1.0 - p) / nd + z2 / (4.0 * nd * nd));
    WilsonInterval ci{(center - spread) / denom, (center + spread) / denom};
    ci.low = std::max(0.0, ci.low);
    ci.high = std::min(1.0, ci.high);
    if (successes == 0) {
        ci.low = 0.0;
    }
    if (successes == trials) {
        ci.high = 1.0;
    }
    return ci;
}

namespace detail {

enum class TrialOutcome : std::uint8_t { Hit, Miss, NonConverged };

struct TrialResult {
    TrialOutcome outcome = TrialOutcome::Miss;
    std::uint64_t steps = 0;
    bool converged = false;
};

// Shared engine: runs one TrialFn per trial in parallel, writes per-trial
// slots, reduces in index order. TrialFn: uint64_t seed -> TrialResult.
template <typename TrialFn>
EstimateRecord estimate_generic(const TrialPlan& plan, TrialFn&& trial) {
    plan.validate();
    std::vector<TrialResult> results(plan.trials);
    const unsigned workers = resolve_worker_count(plan.workers);
    parallel_for(plan.trials, workers, [&](std::uint64_t i) {
        results[i] = trial(rng::trial_seed(plan.master_seed, i));
    });

    EstimateRecord record;
    record.n = plan.n;
    record.epsilon = plan.epsilon;
    record.trials = plan.trials;
    record.master_seed = plan.master_seed;
    std::uint64_t steps_sum = 0;
    std::uint64_t converged_count = 0;
    for (const TrialResult& r : results) {
        if (r.outcome == TrialOutcome::Hit) {
            ++record.successes;
        } else if (r.outcome == TrialOutcome::NonConverged) {
            ++record.nonconverged;
        }
        if (r.converged) {
            steps_sum += r.steps;
            ++converged_count;
        }
    }
    record.p_hat = static_cast<double>(record.successes) / static_cast<double>(record.trials);
    const WilsonInterval ci = wilson_score_interval(record.successes, record.trials);
    record.ci_low = ci.low;
    record.ci_high = ci.high;
    record.mean_steps = converged_count > 0
                            ? static_cast<double>(steps_sum) / static_cast<double>(converged_count)
                            : 0.0;
    return record;
}

} // namespace detail

/// Probability of consensus: fraction of trials whose trajectory converges to
/// a single cluster. Non-converged trials count as their own outcome.
inline EstimateRecord estimate_consensus_probability(const TrialPlan& plan) {
    ModelParams<double> params = plan.params;
    params.epsilon = plan.epsilon;
    return detail::estimate_generic(plan, [&](std::uint64_t seed) {
        const OpinionProfile<double> initial = sample_initial<double>(plan.n, seed);
        const TrajectoryResult<double> traj = run(initial, params);
        detail::TrialResult r;
        r.converged = traj.converged();
        r.steps = traj.converged_at.value_or(0);
        if (!traj.converged()) {
            r.outcome = detail::TrialOutcome::NonConverged;
        } else if (traj.consensus) {
            r.outcome = detail::TrialOutcome::Hit;
        } else {
            r.outcome = detail::TrialOutcome::Miss;
        }
        return r;
    });
}

/// Frequency of an initially disconnected opinion graph. Pair with
/// disconnect_bound(n, epsilon) for comparison.
inline EstimateRecord estimate_disconnect_probability(const TrialPlan& plan) {
    return detail::estimate_generic(plan, [&](std::uint64_t seed) {
        const OpinionProfile<double> initial = sample_initial<double>(plan.n, seed);
        detail::TrialResult r;
        r.converged = true;
        r.outcome = is_connected(initial, plan.epsilon) ? detail::TrialOutcome::Miss
                                                        : detail::TrialOutcome::Hit;
        return r;
    });
}

/// Frequency of the H predicate holding on the initial profile.
inline EstimateRecord estimate_h0_frequency(const TrialPlan& plan) {
    return detail::estimate_generic(plan, [&](std::uint64_t seed) {
        const OpinionProfile<double> initial = sample_initial<double>(plan.n, seed);
        detail::TrialResult r;
        r.converged = true;
        r.outcome = h_statement(initial, plan.epsilon) ? detail::TrialOutcome::Hit
                                                       : detail::TrialOutcome::Miss;
        return r;
    });
}

/// Consensus-probability sweep over an (n, epsilon) grid. Rows are ordered
/// (n ascending, epsilon ascending); each cell runs under its own derived
/// master seed (rng::cell_seed keyed by the epsilon index), so extending the
/// grid never changes existing cells.
inline std::vector<EstimateRecord> sweep(std::vector<std::size_t> n_values,
                                         std::vector<double> epsilon_values,
                                         std::uint64_t trials, std::uint64_t master_seed,
                                         const ModelParams<double>& params,
                                         unsigned workers = 0) {
    if (n_values.empty() || epsilon_values.empty()) {
        throw std::invalid_argument("sweep requires at least one n and one epsilon");
    }
    std::sort(n_values.begin(), n_values.end());
    n_values.erase(std::unique(n_values.begin(), n_values.end()), n_values.end());
    std::sort(epsilon_values.begin(), epsilon_values.end());
    epsilon_values.erase(std::unique(epsilon_values.begin(), epsilon_values.end()),
                         epsilon_values.end());

    std::vector<EstimateRecord> records;
    records.reserve(n_values.size() * epsilon_values.size());
    for (const std::size_t n : n_values) {
        for (std::size_t e = 0; e < epsilon_values.size(); ++e) {
            TrialPlan plan;
            plan.n = n;
            plan.epsilon = epsilon_values[e];
            plan.trials = trials;
            plan.master_seed = rng::cell_seed(master_seed, n, e);
            plan.params = params;
            plan.workers = workers;
            records.push_back(estimate_consensus_probability(plan));
        }
    }
    return records;
}

} // namespace hk
