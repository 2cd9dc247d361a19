#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace permtest {

// Comparator for statistic values. Tolerance 0 compares bit-exactly, which is
// sound for built-in statistics: every orbit value is produced by the same
// canonical accumulation, so genuine ties reproduce exactly. A positive
// absolute tolerance is available for custom statistics.
struct TieComparator {
    double tolerance = 0.0;

    bool equal(double a, double b) const {
        return tolerance == 0.0 ? a == b : std::fabs(a - b) <= tolerance;
    }
    bool greater(double a, double b) const {
        return tolerance == 0.0 ? a > b : a - b > tolerance;
    }
    bool greater_equal(double a, double b) const { return greater(a, b) || equal(a, b); }
};

// k = ceil((1 - alpha) * total), clamped to 1..total. The product is snapped
// to the nearest integer within a small relative band so that grid alphas
// like 1/3 land on their exact rank despite double rounding.
std::uint64_t threshold_rank(double alpha, std::uint64_t total);

// Rejection probability at the order-statistic boundary, clamped to [0, 1].
double boundary_probability(double alpha, std::uint64_t total, std::uint64_t m_plus,
                            std::uint64_t m_zero);

// Everything the rejection rules need from one value multiset.
struct RankDecision {
    std::uint64_t total = 0;           // multiset size (w or #G)
    std::uint64_t threshold_index = 0; // k
    double threshold_value = 0.0;      // k-th smallest value
    std::uint64_t m_plus = 0;          // values > threshold
    std::uint64_t m_zero = 0;          // values = threshold
    std::uint64_t count_gt = 0;        // values > original
    std::uint64_t count_eq = 0;        // values = original
    std::uint64_t count_ge = 0;        // values >= original (D or B)
    bool strict_reject = false;        // original > threshold
    bool boundary = false;             // original = threshold
};

// Unweighted multiset.
RankDecision rank_decision(const std::vector<double>& values, double original, double alpha,
                           const TieComparator& cmp = {});

// Weighted multiset: values[i] occurs weights[i] times.
RankDecision rank_decision_weighted(const std::vector<double>& values,
                                    const std::vector<std::uint64_t>& weights, double original,
                                    double alpha, const TieComparator& cmp = {});

} // namespace permtest
