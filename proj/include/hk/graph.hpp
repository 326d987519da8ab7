#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hk/model.hpp"
#include "hk/profile.hpp"

namespace hk {

/// Connectivity of the opinion graph via the gap criterion: connected iff
/// every adjacent order-statistic gap is at most epsilon. O(n).
template <typename S>
bool is_connected(const OpinionProfile<S>& profile, const S& epsilon) {
    const auto& x = profile.opinions();
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (S(x[i] - x[i - 1]) > epsilon) {
            return false;
        }
    }
    return true;
}

/// Oracle for is_connected: explicit traversal of the full pairwise edge set
/// (edge iff |x_i - x_j| <= epsilon), no gap shortcut. O(n^2).
template <typename S>
bool is_connected_bruteforce(const OpinionProfile<S>& profile, const S& epsilon) {
    const auto& x = profile.opinions();
    const std::size_t n = x.size();
    std::vector<bool> visited(n, false);
    std::vector<std::size_t> stack{0};
    visited[0] = true;
    std::size_t seen = 1;
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        for (std::size_t j = 0; j < n; ++j) {
            if (!visited[j] && detail::within_confidence(x[i], x[j], epsilon)) {
                visited[j] = true;
                ++seen;
                stack.push_back(j);
            }
        }
    }
    return seen == n;
}

/// Inclusive index range of one connected component in a canonical profile.
struct IndexRange {
    std::size_t lo = 0;
    std::size_t hi = 0;
    bool operator==(const IndexRange&) const = default;
};

/// Partition of agent indices into components, cutting at gaps > epsilon.
/// Concatenating the ranges reproduces 0..n-1 in order.
template <typename S>
std::vector<IndexRange> components(const OpinionProfile<S>& profile, const S& epsilon) {
    const auto& x = profile.opinions();
    std::vector<IndexRange> out;
    std::size_t begin = 0;
    for (std::size_t i = 1; i <= x.size(); ++i) {
        if (i == x.size() || S(x[i] - x[i - 1]) > epsilon) {
            out.push_back(IndexRange{begin, i - 1});
            begin = i;
        }
    }
    return out;
}

/// Cardinalities of the neighbor-set differences and intersection for a pair
/// of agents: |N_i - N_j|, |N_j - N_i|, |N_i ∩ N_j|.
struct EdgeCounts {
    std::size_t only_i = 0;
    std::size_t only_j = 0;
    std::size_t shared = 0;
    bool operator==(const EdgeCounts&) const = default;
};

/// Exact neighbor-set algebra from window bounds: windows are contiguous index
/// intervals on a canonical profile, so differences and intersections are O(1)
/// interval arithmetic once the windows are known.
template <typename S>
EdgeCounts edge_counts(const OpinionProfile<S>& profile, std::size_t i, std::size_t j,
                       const S& epsilon) {
    if (i >= profile.size() || j >= profile.size()) {
        throw std::out_of_range("agent index out of range");
    }
    if (i == j) {
        throw std::invalid_argument("edge_counts requires two distinct agents");
    }
    const ModelParams<S> params = ModelParams<S>::with_epsilon(epsilon);
    const NeighborWindow wi = neighbors(profile, i, params);
    const NeighborWindow wj = neighbors(profile, j, params);
    const std::size_t lo = std::max(wi.lo, wj.lo);
    const std::size_t hi = std::min(wi.hi, wj.hi);
    const std::size_t shared = hi >= lo ? hi - lo + 1 : 0;
    return EdgeCounts{wi.size() - shared, wj.size() - shared, shared};
}

/// Edge-persistence criterion: for an existing edge (i,j), true iff
/// 2*max{|N_i - N_j|, |N_j - N_i|} <= |N_i ∩ N_j|, which guarantees the edge
/// survives one synchronous step (no claim when false).
template <typename S>
bool edge_persists_condition(const OpinionProfile<S>& profile, std::size_t i, std::size_t j,
                             const S& epsilon) {
    if (i >= profile.size() || j >= profile.size()) {
        throw std::out_of_range("agent index out of range");
    }
    const auto& x = profile.opinions();
    if (!detail::within_confidence(x[i], x[j], epsilon)) {
        // The criterion's hypothesis includes edge existence; returning false
        // here would mask caller bugs.
        throw std::domain_error("edge_persists_condition called on a non-edge");
    }
    const EdgeCounts c = edge_counts(profile, i, j, epsilon);
    return 2 * std::max(c.only_i, c.only_j) <= c.shared;
}

namespace detail {

// One leg of the H predicate. Rank collisions (i == j) are vacuously true:
// the self-edge always exists and its set differences are empty.
template <typename S>
bool h_pair_holds(const OpinionProfile<S>& profile, std::size_t i, std::size_t j,
                  const S& epsilon) {
    if (i == j) {
        return true;
    }
    const auto& x = profile.opinions();
    if (!within_confidence(x[i], x[j], epsilon)) {
        return false;
    }
    return edge_persists_condition(profile, i, j, epsilon);
}

} // namespace detail

/// The H predicate on a canonical profile: the edges joining the minimum, the
/// ceil(n/2)-th smallest, and the maximum opinion all exist and all satisfy
/// the edge-persistence criterion. Ranks are 1-based (converted to 0-based
/// indices internally); n = 1 is vacuously true.
template <typename S>
bool h_statement(const OpinionProfile<S>& profile, const S& epsilon) {
    const std::size_t n = profile.size();
    const std::size_t median_rank = (n + 1) / 2;  // ceil(n/2), 1-based
    const std::size_t lo_idx = 0;
    const std::size_t mid_idx = median_rank - 1;
    const std::size_t hi_idx = n - 1;
    return detail::h_pair_holds(profile, lo_idx, mid_idx, epsilon) &&
           detail::h_pair_holds(profile, mid_idx, hi_idx, epsilon);
}

} // namespace hk
