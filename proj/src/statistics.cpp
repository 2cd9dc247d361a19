#include "permtest/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "permtest/kernels.hpp"

namespace permtest {

namespace {

std::size_t parse_sized_param(const std::string& text, const std::string& head) {
    // text looks like "<head><int>", e.g. "diff-sum:n=" + "2"
    try {
        return static_cast<std::size_t>(std::stoull(text.substr(head.size())));
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed statistic spec '" + text + "'");
    }
}

} // namespace

StatisticSpec StatisticSpec::two_sample_diff(std::size_t cases) {
    if (cases == 0)
        throw std::invalid_argument("two-sample statistic needs at least one case");
    StatisticSpec s;
    s.family = StatisticFamily::two_sample_diff;
    s.cases = cases;
    return s;
}

StatisticSpec StatisticSpec::mean() {
    StatisticSpec s;
    s.family = StatisticFamily::mean;
    return s;
}

StatisticSpec StatisticSpec::sum_first(std::size_t k) {
    if (k == 0)
        throw std::invalid_argument("sum-first statistic needs k >= 1");
    StatisticSpec s;
    s.family = StatisticFamily::sum_first_k;
    s.first_k = k;
    return s;
}

StatisticSpec StatisticSpec::abs_mean() {
    StatisticSpec s;
    s.family = StatisticFamily::abs_mean;
    return s;
}

StatisticSpec StatisticSpec::custom_statistic(std::string name,
                                              std::function<double(const DataVector&)> fn) {
    if (!fn)
        throw std::invalid_argument("custom statistic needs a callable");
    StatisticSpec s;
    s.family = StatisticFamily::custom;
    s.custom_fn = std::move(fn);
    s.custom_name = std::move(name);
    return s;
}

StatisticSpec StatisticSpec::parse(const std::string& text) {
    if (text == "mean")
        return mean();
    if (text == "abs-mean")
        return abs_mean();
    if (text.rfind("diff-sum:n=", 0) == 0)
        return two_sample_diff(parse_sized_param(text, "diff-sum:n="));
    if (text.rfind("sum-first:k=", 0) == 0)
        return sum_first(parse_sized_param(text, "sum-first:k="));
    throw std::invalid_argument("unknown statistic spec '" + text + "'");
}

std::string StatisticSpec::to_string() const {
    std::ostringstream os;
    switch (family) {
    case StatisticFamily::two_sample_diff:
        os << "diff-sum:n=" << cases;
        break;
    case StatisticFamily::mean:
        os << "mean";
        break;
    case StatisticFamily::sum_first_k:
        os << "sum-first:k=" << first_k;
        break;
    case StatisticFamily::abs_mean:
        os << "abs-mean";
        break;
    case StatisticFamily::custom:
        os << "custom:" << custom_name;
        break;
    }
    return os.str();
}

void StatisticSpec::validate_for(const DataVector& x) const {
    validate_data(x);
    switch (family) {
    case StatisticFamily::two_sample_diff:
        if (x.size() != 2 * cases)
            throw DimensionError("two-sample statistic with " + std::to_string(cases) +
                                 " cases needs data of length " + std::to_string(2 * cases));
        break;
    case StatisticFamily::sum_first_k:
        if (first_k > x.size())
            throw DimensionError("sum-first statistic has k larger than the data length");
        break;
    default:
        break;
    }
}

OrbitEvaluator::OrbitEvaluator(StatisticSpec spec, DataVector base)
    : spec_(std::move(spec)), base_(std::move(base)) {
    spec_.validate_for(base_);
    const std::size_t n = base_.size();

    index_of_slot_.resize(n);
    std::iota(index_of_slot_.begin(), index_of_slot_.end(), 0u);
    std::sort(index_of_slot_.begin(), index_of_slot_.end(),
              [this](std::uint32_t a, std::uint32_t b) {
                  const double va = base_[a];
                  const double vb = base_[b];
                  const double aa = std::fabs(va);
                  const double ab = std::fabs(vb);
                  if (aa != ab)
                      return aa < ab;
                  if (va != vb)
                      return va < vb;
                  return a < b;
              });
    presorted_.resize(n);
    slot_of_index_.resize(n);
    for (std::size_t slot = 0; slot < n; ++slot) {
        presorted_[slot] = base_[index_of_slot_[slot]];
        slot_of_index_[index_of_slot_[slot]] = static_cast<std::uint32_t>(slot);
    }

    switch (spec_.family) {
    case StatisticFamily::two_sample_diff:
        select_count_ = spec_.cases;
        break;
    case StatisticFamily::sum_first_k:
        select_count_ = spec_.first_k;
        break;
    default:
        select_count_ = n;
        break;
    }
    fixed_flags_.assign(n, 0);
    for (std::size_t slot = 0; slot < n; ++slot)
        fixed_flags_[slot] = index_of_slot_[slot] < select_count_;
    scratch_flags_.assign(n, 0);
    scratch_masked_.resize(n);

    if (spec_.family == StatisticFamily::custom) {
        original_ = spec_.custom_fn(base_);
    } else {
        original_ = selected_statistic(presorted_.data(), fixed_flags_.data());
        invariant_value_ = original_;
    }
}

double OrbitEvaluator::selected_statistic(const double* values, const std::uint8_t* flags) const {
    const kernels::PairSums sums = kernels::pair_select_sum(values, flags, base_.size());
    switch (spec_.family) {
    case StatisticFamily::two_sample_diff:
        return sums.selected - sums.rest;
    case StatisticFamily::sum_first_k:
        return sums.selected;
    case StatisticFamily::mean:
        return sums.selected / static_cast<double>(base_.size());
    case StatisticFamily::abs_mean:
        return std::fabs(sums.selected) / static_cast<double>(base_.size());
    case StatisticFamily::custom:
        break;
    }
    throw std::logic_error("selected_statistic is only defined for built-in statistics");
}

double OrbitEvaluator::value(const GroupElement& g) {
    const std::size_t n = base_.size();
    if (g.dimension() != n)
        throw DimensionError("element dimension does not match data length");

    if (spec_.family == StatisticFamily::custom) {
        apply_into(g, base_, scratch_vector_);
        return spec_.custom_fn(scratch_vector_);
    }

    switch (g.kind()) {
    case ElementKind::permutation:
    case ElementKind::cyclic_shift: {
        // Index rearrangements leave the value multiset alone.
        if (spec_.family == StatisticFamily::mean || spec_.family == StatisticFamily::abs_mean)
            return invariant_value_;
        std::fill(scratch_flags_.begin(), scratch_flags_.end(), 0);
        if (g.kind() == ElementKind::permutation) {
            const auto& p = g.perm();
            for (std::size_t j = 0; j < select_count_; ++j)
                scratch_flags_[slot_of_index_[p[j]]] = 1;
        } else {
            const std::size_t o = g.shift_offset();
            for (std::size_t j = 0; j < select_count_; ++j)
                scratch_flags_[slot_of_index_[(j + o) % n]] = 1;
        }
        return selected_statistic(presorted_.data(), scratch_flags_.data());
    }
    case ElementKind::sign_mask: {
        const auto& signs = g.signs();
        for (std::size_t slot = 0; slot < n; ++slot)
            scratch_masked_[slot] = signs[index_of_slot_[slot]] * presorted_[slot];
        return selected_statistic(scratch_masked_.data(), fixed_flags_.data());
    }
    }
    throw DimensionError("unknown element kind");
}

std::vector<double> OrbitEvaluator::values(const std::vector<GroupElement>& elements) {
    std::vector<double> out;
    out.reserve(elements.size());
    for (const GroupElement& g : elements)
        out.push_back(value(g));
    return out;
}

double OrbitEvaluator::value_of_content(const std::uint32_t* content, std::size_t count) {
    if (spec_.family != StatisticFamily::two_sample_diff &&
        spec_.family != StatisticFamily::sum_first_k)
        throw std::logic_error("content evaluation needs a selection statistic");
    if (count != select_count_)
        throw DimensionError("content size does not match the statistic's selection size");
    std::fill(scratch_flags_.begin(), scratch_flags_.end(), 0);
    for (std::size_t j = 0; j < count; ++j)
        scratch_flags_[slot_of_index_[content[j]]] = 1;
    return selected_statistic(presorted_.data(), scratch_flags_.data());
}

double eval_statistic(const StatisticSpec& spec, const DataVector& x) {
    return OrbitEvaluator(spec, x).original();
}

OrbitStatistics orbit_statistics(const StatisticSpec& spec, const DataVector& x,
                                 const std::vector<GroupElement>& elements) {
    if (elements.empty())
        throw std::invalid_argument("orbit statistics need at least one element");
    OrbitEvaluator eval(spec, x);
    OrbitStatistics out;
    out.original = eval.original();
    out.raw = eval.values(elements);
    out.sorted = out.raw;
    std::stable_sort(out.sorted.begin(), out.sorted.end());
    return out;
}

OrbitView make_orbit_view(const StatisticSpec& spec, DataVector base,
                          std::vector<GroupElement> elements) {
    OrbitEvaluator eval(spec, base);
    OrbitView view;
    view.statistics = eval.values(elements);
    view.base = std::move(base);
    view.elements = std::move(elements);
    return view;
}

} // namespace permtest
