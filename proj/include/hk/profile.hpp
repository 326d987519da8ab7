#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "hk/scalar.hpp"

namespace hk {

/// Opinion profile at one time step, kept in canonical form: opinions sorted
/// ascending, every value in [0,1]. In canonical form position i is the i-th
/// order statistic, which is what makes contiguous neighbor windows and the
/// gap-based connectivity test valid.
template <typename S>
class OpinionProfile {
public:
    /// Sorts the values into canonical form. Throws std::invalid_argument on
    /// an empty profile or values outside [0,1] (NaN included).
    explicit OpinionProfile(std::vector<S> values, std::uint64_t time = 0)
        : opinions_(std::move(values)), time_(time) {
        std::sort(opinions_.begin(), opinions_.end());
        validate();
    }

    /// Trusted fast path for values already sorted (asserted in debug builds).
    static OpinionProfile from_canonical(std::vector<S> sorted_values, std::uint64_t time = 0) {
        return OpinionProfile(canonical_tag{}, std::move(sorted_values), time);
    }

    const std::vector<S>& opinions() const { return opinions_; }
    std::size_t size() const { return opinions_.size(); }
    std::uint64_t time() const { return time_; }

    const S& operator[](std::size_t i) const { return opinions_[i]; }
    const S& front() const { return opinions_.front(); }
    const S& back() const { return opinions_.back(); }

    bool operator==(const OpinionProfile&) const = default;

private:
    struct canonical_tag {};

    OpinionProfile(canonical_tag, std::vector<S> values, std::uint64_t time)
        : opinions_(std::move(values)), time_(time) {
        assert(std::is_sorted(opinions_.begin(), opinions_.end()));
        validate();
    }

    void validate() const {
        if (opinions_.empty()) {
            throw std::invalid_argument("opinion profile must contain at least one agent");
        }
        for (const S& v : opinions_) {
            if (!(v >= S(0) && v <= S(1))) {
                throw std::invalid_argument("opinions must lie in [0,1]");
            }
        }
    }

    std::vector<S> opinions_;
    std::uint64_t time_ = 0;
};

/// Model parameters. The scalar type selects the arithmetic backend; with the
/// rational scalar the default convergence tolerance of zero makes fixed-point
/// detection exact.
template <typename S>
struct ModelParams {
    S epsilon{};
    S convergence_tol = default_convergence_tol();
    S consensus_tol = S(1e-9);
    std::uint64_t max_steps = 100000;

    static ModelParams with_epsilon(S eps) {
        ModelParams p;
        p.epsilon = std::move(eps);
        return p;
    }

    static S default_convergence_tol() {
        if constexpr (is_exact_v<S>) {
            return S(0);
        } else {
            return S(1e-13);
        }
    }

    void validate() const {
        if (!(epsilon > S(0))) {
            throw std::invalid_argument("epsilon must be positive");
        }
        if (!(convergence_tol >= S(0)) || !(convergence_tol < epsilon)) {
            throw std::invalid_argument("convergence_tol must satisfy 0 <= tol < epsilon");
        }
        if (!(consensus_tol >= S(0))) {
            throw std::invalid_argument("consensus_tol must be nonnegative");
        }
        if (max_steps < 1) {
            throw std::invalid_argument("max_steps must be at least 1");
        }
    }
};

/// Contiguous index range [lo, hi] into a canonical profile: the neighbor set
/// of one agent. Contiguity is a consequence of sortedness.
struct NeighborWindow {
    std::size_t lo = 0;
    std::size_t hi = 0;

    std::size_t size() const { return hi - lo + 1; }
    bool contains(std::size_t i) const { return lo <= i && i <= hi; }
    bool operator==(const NeighborWindow&) const = default;
};

} // namespace hk
