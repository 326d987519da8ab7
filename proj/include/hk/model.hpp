#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hk/profile.hpp"
#include "hk/scalar.hpp"

namespace hk {

namespace detail {

// Membership predicate for agent j in agent i's neighbor set, written so the
// fast window path and the naive scan evaluate bit-identical comparisons in
// floating point: the larger opinion minus the smaller one, compared to eps
// with the closed inequality.
template <typename S>
bool within_confidence(const S& xi, const S& xj, const S& eps) {
    if (xj >= xi) {
        return S(xj - xi) <= eps;
    }
    return S(xi - xj) <= eps;
}

// Ascending-index prefix sums: prefix[k] = sum of x[0..k-1].
template <typename S>
std::vector<S> prefix_sums(const std::vector<S>& x) {
    std::vector<S> prefix(x.size() + 1, S(0));
    for (std::size_t k = 0; k < x.size(); ++k) {
        prefix[k + 1] = S(prefix[k] + x[k]);
    }
    return prefix;
}

template <typename S>
S window_mean(const std::vector<S>& prefix, const NeighborWindow& w) {
    return S(S(prefix[w.hi + 1] - prefix[w.lo]) / S(static_cast<std::uint64_t>(w.size())));
}

} // namespace detail

/// Maximal contiguous window around agent i whose opinions are within epsilon
/// of x_i (closed inequality; an agent is always its own neighbor).
template <typename S>
NeighborWindow neighbors(const OpinionProfile<S>& profile, std::size_t i,
                         const ModelParams<S>& params) {
    if (i >= profile.size()) {
        throw std::out_of_range("agent index out of range");
    }
    const auto& x = profile.opinions();
    NeighborWindow w{i, i};
    while (w.lo > 0 && detail::within_confidence(x[i], x[w.lo - 1], params.epsilon)) {
        --w.lo;
    }
    while (w.hi + 1 < x.size() && detail::within_confidence(x[i], x[w.hi + 1], params.epsilon)) {
        ++w.hi;
    }
    return w;
}

/// All neighbor windows in one O(n) pass. Both endpoints are monotone in i for
/// a sorted profile, so a single two-pointer sweep suffices.
template <typename S>
std::vector<NeighborWindow> all_windows(const OpinionProfile<S>& profile, const S& epsilon) {
    const auto& x = profile.opinions();
    const std::size_t n = x.size();
    std::vector<NeighborWindow> windows(n);
    std::size_t lo = 0;
    std::size_t hi = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (hi < i) {
            hi = i;
        }
        while (lo < i && !detail::within_confidence(x[i], x[lo], epsilon)) {
            ++lo;
        }
        while (hi + 1 < n && detail::within_confidence(x[i], x[hi + 1], epsilon)) {
            ++hi;
        }
        windows[i] = NeighborWindow{lo, hi};
    }
    return windows;
}

/// One synchronous update in agent order, before re-canonicalization: entry i
/// is the mean of agent i's neighbor window. Fast path: two-pointer windows
/// plus ascending prefix sums, O(n) total.
template <typename S>
std::vector<S> step_means(const OpinionProfile<S>& profile, const ModelParams<S>& params) {
    const auto windows = all_windows(profile, params.epsilon);
    const auto prefix = detail::prefix_sums(profile.opinions());
    std::vector<S> means;
    means.reserve(profile.size());
    for (const auto& w : windows) {
        means.push_back(detail::window_mean(prefix, w));
    }
    return means;
}

/// Reference update: quadratic scan of all pairs, no window or prefix-sum
/// machinery. Serves as the oracle for the fast path.
template <typename S>
std::vector<S> step_means_naive(const OpinionProfile<S>& profile, const ModelParams<S>& params) {
    const auto& x = profile.opinions();
    const std::size_t n = x.size();
    std::vector<S> means;
    means.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        S sum(0);
        std::uint64_t count = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (detail::within_confidence(x[i], x[j], params.epsilon)) {
                sum = S(sum + x[j]);
                ++count;
            }
        }
        means.push_back(S(sum / S(count)));
    }
    return means;
}

namespace detail {

// Order preservation guarantees the means are already sorted in exact
// arithmetic; floating point can break adjacent order by an ulp, so sort only
// when the O(n) check fails.
template <typename S>
OpinionProfile<S> canonicalize_step(std::vector<S> means, std::uint64_t next_time) {
    if (!std::is_sorted(means.begin(), means.end())) {
        std::sort(means.begin(), means.end());
    }
    return OpinionProfile<S>::from_canonical(std::move(means), next_time);
}

} // namespace detail

/// Synchronous update: every agent simultaneously moves to its neighbor-window
/// mean. Output is canonical with the time counter incremented.
template <typename S>
OpinionProfile<S> sync_step(const OpinionProfile<S>& profile, const ModelParams<S>& params) {
    return detail::canonicalize_step(step_means(profile, params), profile.time() + 1);
}

/// Reference synchronous update with the identical contract as sync_step.
template <typename S>
OpinionProfile<S> sync_step_naive(const OpinionProfile<S>& profile, const ModelParams<S>& params) {
    return detail::canonicalize_step(step_means_naive(profile, params), profile.time() + 1);
}

/// Asynchronous update: only the chosen agent moves to its window mean. The
/// result is re-sorted since a single move can pass other agents.
template <typename S>
OpinionProfile<S> async_step(const OpinionProfile<S>& profile, const ModelParams<S>& params,
                             std::size_t agent) {
    const NeighborWindow w = neighbors(profile, agent, params);
    const auto prefix = detail::prefix_sums(profile.opinions());
    std::vector<S> values = profile.opinions();
    values[agent] = detail::window_mean(prefix, w);
    std::sort(values.begin(), values.end());
    return OpinionProfile<S>::from_canonical(std::move(values), profile.time() + 1);
}

namespace detail {

template <typename S>
bool componentwise_within(const std::vector<S>& a, const std::vector<S>& b, const S& tol) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (abs_value(S(a[i] - b[i])) > tol) {
            return false;
        }
    }
    return true;
}

} // namespace detail

/// True iff one synchronous step leaves the profile unchanged: componentwise
/// within convergence_tol, which defaults to zero (exact) for the rational
/// scalar.
template <typename S>
bool is_fixed_point(const OpinionProfile<S>& profile, const ModelParams<S>& params) {
    const OpinionProfile<S> next = sync_step(profile, params);
    return detail::componentwise_within(profile.opinions(), next.opinions(),
                                        params.convergence_tol);
}

template <typename S>
struct Cluster {
    S value{};
    std::size_t count = 0;
};

/// Groups opinions whose consecutive gaps exceed epsilon; each cluster reports
/// its mean value and member count.
template <typename S>
std::vector<Cluster<S>> clusters(const OpinionProfile<S>& profile, const ModelParams<S>& params) {
    const auto& x = profile.opinions();
    std::vector<Cluster<S>> out;
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= x.size(); ++i) {
        if (i == x.size() || S(x[i] - x[i - 1]) > params.epsilon) {
            S sum(0);
            for (std::size_t j = begin; j < i; ++j) {
                sum = S(sum + x[j]);
            }
            const std::size_t count = i - begin;
            out.push_back(Cluster<S>{S(sum / S(static_cast<std::uint64_t>(count))), count});
            begin = i;
        }
    }
    return out;
}

/// Outcome of running a trajectory to convergence (or to the step cap).
template <typename S>
struct TrajectoryResult {
    std::optional<std::uint64_t> converged_at;     // empty: hit max_steps while still moving
    OpinionProfile<S> final_profile;
    std::vector<Cluster<S>> clusters;
    bool consensus = false;
    std::optional<std::vector<bool>> connectivity_history;  // one entry per visited step

    bool converged() const { return converged_at.has_value(); }
};

/// Per-step view passed to the run() observer.
template <typename S>
struct StepView {
    const OpinionProfile<S>& profile;
    bool connected = false;
    std::size_t component_count = 0;
    S max_gap{};
};

template <typename S>
struct RunOptions {
    bool track_connectivity = false;
    std::function<void(const StepView<S>&)> on_step;
};

namespace detail {

template <typename S>
StepView<S> summarize_step(const OpinionProfile<S>& x, const S& epsilon) {
    const auto& v = x.opinions();
    StepView<S> view{x};
    view.component_count = 1;
    view.max_gap = S(0);
    for (std::size_t i = 1; i < v.size(); ++i) {
        const S gap(v[i] - v[i - 1]);
        if (gap > view.max_gap) {
            view.max_gap = gap;
        }
        if (gap > epsilon) {
            ++view.component_count;
        }
    }
    view.connected = view.component_count == 1;
    return view;
}

} // namespace detail

/// Iterates sync_step until a fixed point (per is_fixed_point's tolerance) or
/// until max_steps updates have been applied. Non-convergence is an explicit
/// status (converged_at empty), never a silent truncation.
template <typename S>
TrajectoryResult<S> run(const OpinionProfile<S>& initial, const ModelParams<S>& params,
                        const RunOptions<S>& options = {}) {
    params.validate();
    const bool observing = options.track_connectivity || static_cast<bool>(options.on_step);

    TrajectoryResult<S> result{std::nullopt, initial, {}, false, std::nullopt};
    if (options.track_connectivity) {
        result.connectivity_history.emplace();
    }

    OpinionProfile<S> x = initial;
    std::uint64_t moves = 0;
    while (true) {
        if (observing) {
            const StepView<S> view = detail::summarize_step(x, params.epsilon);
            if (options.track_connectivity) {
                result.connectivity_history->push_back(view.connected);
            }
            if (options.on_step) {
                options.on_step(view);
            }
        }
        OpinionProfile<S> next = sync_step(x, params);
        if (detail::componentwise_within(x.opinions(), next.opinions(), params.convergence_tol)) {
            result.converged_at = moves;
            break;
        }
        if (moves == params.max_steps) {
            break;
        }
        x = std::move(next);
        ++moves;
    }

    result.final_profile = std::move(x);
    result.clusters = clusters(result.final_profile, params);
    result.consensus = result.converged() && result.clusters.size() == 1;
    return result;
}

} // namespace hk
