#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hk/scalar.hpp"

namespace hk {

/// Zero-sum tolerance accepted on float-mode coefficient vectors. Inputs
/// failing it are rejected rather than renormalized.
inline constexpr double kZeroSumTol = 1e-12;

template <typename S>
struct MatchingTerm {
    S coefficient{};             // nonnegative
    std::size_t positive_index;  // index with lambda > 0
    std::size_t negative_index;  // index with lambda < 0
};

/// Decomposition of sum(lambda_i * x_i) with zero-sum lambda into nonnegative
/// pair terms c*(x_j - x_k): sum of terms reconstructs the combination, and
/// the coefficients sum to the positive-lambda mass.
template <typename S>
struct MatchingDecomposition {
    std::vector<MatchingTerm<S>> terms;
    S total_positive_mass{};
};

/// Greedy two-pointer pairing of positive-coefficient mass against negative
/// mass: consume whichever side's remaining mass is smaller, emit a term,
/// advance. Linear after separation and deterministic. xs participates only
/// through the length contract; the identities hold for any xs.
template <typename S>
MatchingDecomposition<S> matching_decomposition(const std::vector<S>& lambdas,
                                                const std::vector<S>& xs) {
    if (lambdas.size() != xs.size()) {
        throw std::domain_error("lambdas and xs must have the same length");
    }
    S total(0);
    for (const S& l : lambdas) {
        total = S(total + l);
    }
    if constexpr (is_exact_v<S>) {
        if (total != S(0)) {
            throw std::domain_error("lambda coefficients must sum to zero");
        }
    } else {
        if (abs_value(total) > S(kZeroSumTol)) {
            throw std::domain_error("lambda coefficients must sum to zero (within 1e-12)");
        }
    }

    struct Entry {
        std::size_t index;
        S mass;
    };
    std::vector<Entry> positives;
    std::vector<Entry> negatives;
    S positive_mass(0);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        if (lambdas[i] > S(0)) {
            positives.push_back(Entry{i, lambdas[i]});
            positive_mass = S(positive_mass + lambdas[i]);
        } else if (lambdas[i] < S(0)) {
            negatives.push_back(Entry{i, S(-lambdas[i])});
        }
    }

    MatchingDecomposition<S> out;
    out.total_positive_mass = positive_mass;
    std::size_t p = 0;
    std::size_t q = 0;
    while (p < positives.size() && q < negatives.size()) {
        const S c = std::min(positives[p].mass, negatives[q].mass);
        if (c > S(0)) {
            out.terms.push_back(MatchingTerm<S>{c, positives[p].index, negatives[q].index});
        }
        positives[p].mass = S(positives[p].mass - c);
        negatives[q].mass = S(negatives[q].mass - c);
        if (!(positives[p].mass > S(0))) {
            ++p;
        }
        if (!(negatives[q].mass > S(0))) {
            ++q;
        }
    }
    return out;
}

/// Reference disconnection bound (1-eps)^(n-2) for n agents with uniform
/// initial opinions. Reported as-is for comparison against empirical
/// estimates; see the bound subcommand.
inline double disconnect_bound(std::size_t n, double epsilon) {
    if (n < 2) {
        throw std::domain_error("disconnect_bound requires n >= 2");
    }
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::domain_error("disconnect_bound requires 0 < epsilon < 1");
    }
    return std::pow(1.0 - epsilon, static_cast<double>(n - 2));
}

} // namespace hk
