#include "permtest/decision.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "permtest/kernels.hpp"

namespace permtest {

std::uint64_t threshold_rank(double alpha, std::uint64_t total) {
    if (alpha < 0.0 || alpha >= 1.0)
        throw std::invalid_argument("alpha must lie in [0, 1)");
    if (total == 0)
        throw std::invalid_argument("threshold rank needs a non-empty multiset");
    const double product = (1.0 - alpha) * static_cast<double>(total);
    const double snapped = std::ceil(product - 1e-9 * std::max(1.0, product));
    if (snapped < 1.0)
        return 1;
    if (snapped >= static_cast<double>(total))
        return total;
    return static_cast<std::uint64_t>(snapped);
}

double boundary_probability(double alpha, std::uint64_t total, std::uint64_t m_plus,
                            std::uint64_t m_zero) {
    if (m_zero == 0)
        throw std::invalid_argument("boundary probability needs at least one tied value");
    const double a = (alpha * static_cast<double>(total) - static_cast<double>(m_plus)) /
                     static_cast<double>(m_zero);
    return std::clamp(a, 0.0, 1.0);
}

namespace {

void fill_decision_flags(RankDecision& d, double original, const TieComparator& cmp) {
    d.count_ge = d.count_gt + d.count_eq;
    d.strict_reject = cmp.greater(original, d.threshold_value);
    d.boundary = cmp.equal(original, d.threshold_value);
}

} // namespace

RankDecision rank_decision(const std::vector<double>& values, double original, double alpha,
                           const TieComparator& cmp) {
    if (values.empty())
        throw std::invalid_argument("decision needs at least one value");
    RankDecision d;
    d.total = values.size();
    d.threshold_index = threshold_rank(alpha, d.total);

    std::vector<double> scratch(values);
    std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(d.threshold_index - 1),
                     scratch.end());
    d.threshold_value = scratch[d.threshold_index - 1];

    if (cmp.tolerance == 0.0) {
        const kernels::RelCounts vs_threshold =
            kernels::count_rel(values.data(), values.size(), d.threshold_value);
        d.m_plus = vs_threshold.greater;
        d.m_zero = vs_threshold.equal;
        const kernels::RelCounts vs_original =
            kernels::count_rel(values.data(), values.size(), original);
        d.count_gt = vs_original.greater;
        d.count_eq = vs_original.equal;
    } else {
        for (double v : values) {
            d.m_plus += cmp.greater(v, d.threshold_value);
            d.m_zero += cmp.equal(v, d.threshold_value);
            d.count_gt += cmp.greater(v, original);
            d.count_eq += cmp.equal(v, original);
        }
    }
    fill_decision_flags(d, original, cmp);
    return d;
}

RankDecision rank_decision_weighted(const std::vector<double>& values,
                                    const std::vector<std::uint64_t>& weights, double original,
                                    double alpha, const TieComparator& cmp) {
    if (values.empty() || values.size() != weights.size())
        throw std::invalid_argument("weighted decision needs matching values and weights");
    RankDecision d;
    d.total = std::accumulate(weights.begin(), weights.end(), std::uint64_t{0});
    if (d.total == 0)
        throw std::invalid_argument("weighted decision needs positive total weight");
    d.threshold_index = threshold_rank(alpha, d.total);

    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&values](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::uint64_t cum = 0;
    for (std::size_t idx : order) {
        cum += weights[idx];
        if (cum >= d.threshold_index) {
            d.threshold_value = values[idx];
            break;
        }
    }

    for (std::size_t i = 0; i < values.size(); ++i) {
        d.m_plus += cmp.greater(values[i], d.threshold_value) ? weights[i] : 0;
        d.m_zero += cmp.equal(values[i], d.threshold_value) ? weights[i] : 0;
        d.count_gt += cmp.greater(values[i], original) ? weights[i] : 0;
        d.count_eq += cmp.equal(values[i], original) ? weights[i] : 0;
    }
    fill_decision_flags(d, original, cmp);
    return d;
}

} // namespace permtest
