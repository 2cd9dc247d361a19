#include "permtest/exact_test.hpp"

#include <algorithm>
#include <numeric>

namespace permtest {

std::uint64_t binomial_clamped(std::uint64_t a, std::uint64_t b) {
    if (b > a)
        return 0;
    b = std::min(b, a - b);
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= b; ++i) {
        std::uint64_t t;
        if (__builtin_mul_overflow(r, a - b + i, &t))
            return UINT64_MAX;
        r = t / i; // exact: r holds C(a-b+i, i) after each step
    }
    return r;
}

void for_each_case_subset(std::size_t total, std::size_t count,
                          const std::function<void(const std::uint32_t*, std::size_t)>& fn) {
    if (count == 0 || count > total)
        throw std::invalid_argument("subset size must lie in 1..total");
    std::vector<std::uint32_t> subset(count);
    std::iota(subset.begin(), subset.end(), 0u);
    while (true) {
        fn(subset.data(), count);
        // advance to the next combination in lexicographic order
        std::size_t i = count;
        while (i > 0 && subset[i - 1] == total - count + (i - 1))
            --i;
        if (i == 0)
            return;
        ++subset[i - 1];
        for (std::size_t j = i; j < count; ++j)
            subset[j] = subset[j - 1] + 1;
    }
}

namespace detail {

bool two_sample_classes_apply(const GroupSpec& group, const StatisticSpec& stat,
                              std::uint64_t cap) {
    if (stat.family != StatisticFamily::two_sample_diff)
        return false;
    if (group.family() != GroupFamily::full_symmetric &&
        group.family() != GroupFamily::two_sample_relabeling)
        return false;
    if (group.degree() != 2 * stat.cases)
        return false;
    if (group.cardinality() == UINT64_MAX) // (2n)! must be exact for the weights
        return false;
    return binomial_clamped(group.degree(), stat.cases) <= cap;
}

} // namespace detail

namespace {

struct OrbitDecision {
    RankDecision rank;
    std::uint64_t group_size = 0;
};

OrbitDecision full_group_decision(OrbitEvaluator& eval, const GroupSpec& group, double alpha,
                                  const ExactTestOptions& options) {
    const DataVector& x = eval.base();
    if (group.degree() != x.size())
        throw DimensionError("group degree does not match data length");

    OrbitDecision out;
    if (detail::two_sample_classes_apply(group, eval.spec(), options.enumeration_cap)) {
        const std::size_t cases = eval.spec().cases;
        const std::uint64_t m = binomial_clamped(x.size(), cases);
        const std::uint64_t class_size = group.cardinality() / m;
        std::vector<double> values;
        values.reserve(static_cast<std::size_t>(m));
        for_each_case_subset(x.size(), cases,
                             [&](const std::uint32_t* subset, std::size_t count) {
                                 values.push_back(eval.value_of_content(subset, count));
                             });
        const std::vector<std::uint64_t> weights(values.size(), class_size);
        out.rank = rank_decision_weighted(values, weights, eval.original(), alpha,
                                          TieComparator{options.tie_tolerance});
    } else {
        const std::vector<GroupElement> elements = enumerate_group(group, options.enumeration_cap);
        out.rank = rank_decision(eval.values(elements), eval.original(), alpha,
                                 TieComparator{options.tie_tolerance});
    }
    out.group_size = out.rank.total;
    return out;
}

TestReport base_report(const OrbitEvaluator& eval, const OrbitDecision& dec, double alpha) {
    TestReport r;
    r.alpha = alpha;
    r.statistic = eval.original();
    r.threshold_index = dec.rank.threshold_index;
    r.threshold_value = dec.rank.threshold_value;
    r.counts.m_plus = dec.rank.m_plus;
    r.counts.m_zero = dec.rank.m_zero;
    r.counts.d = dec.rank.count_ge;
    r.p_value = static_cast<double>(dec.rank.count_ge) / static_cast<double>(dec.rank.total);
    r.group_size = dec.group_size;
    r.plan = PlanInfo{"full", dec.group_size, true};
    return r;
}

} // namespace

TestReport full_group_test(const DataVector& x, const GroupSpec& group, const StatisticSpec& stat,
                           double alpha, const ExactTestOptions& options) {
    if (alpha < 0.0 || alpha >= 1.0)
        throw std::invalid_argument("alpha must lie in [0, 1)");
    OrbitEvaluator eval(stat, x);
    const OrbitDecision dec = full_group_decision(eval, group, alpha, options);
    TestReport r = base_report(eval, dec, alpha);
    r.rejected = dec.rank.strict_reject;
    r.decision = r.rejected ? Decision::reject : Decision::retain;
    return r;
}

double full_group_pvalue(const DataVector& x, const GroupSpec& group, const StatisticSpec& stat,
                         const ExactTestOptions& options) {
    OrbitEvaluator eval(stat, x);
    const OrbitDecision dec = full_group_decision(eval, group, 0.5, options);
    return static_cast<double>(dec.rank.count_ge) / static_cast<double>(dec.rank.total);
}

TestReport hoeffding_randomized_test(const DataVector& x, const GroupSpec& group,
                                     const StatisticSpec& stat, double alpha, RngEngine& rng,
                                     const ExactTestOptions& options) {
    if (alpha < 0.0 || alpha >= 1.0)
        throw std::invalid_argument("alpha must lie in [0, 1)");
    OrbitEvaluator eval(stat, x);
    const OrbitDecision dec = full_group_decision(eval, group, alpha, options);
    TestReport r = base_report(eval, dec, alpha);
    const double u = uniform01(rng);
    r.u = u;
    if (dec.rank.strict_reject) {
        r.decision = Decision::reject;
        r.rejected = true;
    } else if (dec.rank.boundary) {
        const double a =
            boundary_probability(alpha, dec.rank.total, dec.rank.m_plus, dec.rank.m_zero);
        r.decision = Decision::reject_with_probability;
        r.boundary_probability = a;
        r.rejected = u <= a;
    } else {
        r.decision = Decision::retain;
        r.rejected = false;
    }
    return r;
}

ClassRepresentatives class_representatives(std::size_t cases_per_arm, const GroupSpec& group,
                                           std::uint64_t cap) {
    const std::size_t total = 2 * cases_per_arm;
    if (group.family() != GroupFamily::full_symmetric &&
        group.family() != GroupFamily::two_sample_relabeling)
        throw std::invalid_argument("class representatives need the symmetric group");
    if (group.degree() != total)
        throw DimensionError("group degree does not match the two-sample design");
    const std::uint64_t m = binomial_clamped(total, cases_per_arm);
    if (m == UINT64_MAX || m > cap)
        throw TooManyClasses("the two-sample design for arm size " +
                             std::to_string(cases_per_arm) + " has more than " +
                             std::to_string(cap) + " equivalence classes");

    ClassRepresentatives out;
    out.class_count = m;
    const std::uint64_t card = group.cardinality();
    out.class_size = card == UINT64_MAX ? 0 : card / m;
    out.reps.reserve(static_cast<std::size_t>(m));
    for_each_case_subset(total, cases_per_arm, [&](const std::uint32_t* subset, std::size_t count) {
        // minimal representative: subset ascending in the case positions,
        // complement ascending in the control positions
        std::vector<std::uint32_t> p;
        p.reserve(total);
        p.assign(subset, subset + count);
        std::vector<bool> in_subset(total, false);
        for (std::size_t j = 0; j < count; ++j)
            in_subset[subset[j]] = true;
        for (std::uint32_t i = 0; i < total; ++i)
            if (!in_subset[i])
                p.push_back(i);
        out.reps.push_back(GroupElement::permutation(std::move(p)));
    });
    return out;
}

} // namespace permtest
