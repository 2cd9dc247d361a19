#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "permtest/group.hpp"

namespace permtest {

enum class StatisticFamily { two_sample_diff, mean, sum_first_k, abs_mean, custom };

// A test statistic T: data vector -> real.
struct StatisticSpec {
    StatisticFamily family = StatisticFamily::mean;
    std::size_t cases = 0;   // two_sample_diff: cases occupy positions 0..cases-1
    std::size_t first_k = 0; // sum_first_k
    std::function<double(const DataVector&)> custom_fn;
    std::string custom_name;

    // Sum over cases minus sum over controls; data length must be 2*cases.
    static StatisticSpec two_sample_diff(std::size_t cases);
    static StatisticSpec mean();
    static StatisticSpec sum_first(std::size_t k);
    // Absolute mean, the usual choice for sign-flip designs.
    static StatisticSpec abs_mean();
    // In-process extension point. Custom statistics are evaluated by applying
    // the transformation and calling the function, with no bit-exact tie
    // guarantee; pass a tolerance to the test operations if needed.
    static StatisticSpec custom_statistic(std::string name,
                                          std::function<double(const DataVector&)> fn);

    // Accepts "diff-sum:n=<int>", "mean", "abs-mean", "sum-first:k=<int>".
    static StatisticSpec parse(const std::string& text);
    std::string to_string() const;

    void validate_for(const DataVector& x) const;
};

// Statistic values over a set of transformations of one base vector.
struct OrbitStatistics {
    std::vector<double> raw;    // in draw order
    std::vector<double> sorted; // ascending
    double original = 0.0;      // value at the identity
};

// Base vector together with transformations and cached statistic values.
struct OrbitView {
    DataVector base;
    std::vector<GroupElement> elements;
    std::vector<double> statistics; // statistics[i] = T(elements[i] * base)
};

// Evaluates one statistic over transformed copies of one base vector.
//
// Values are accumulated in a fixed multiset-canonical order (ascending by
// (|v|, v) over the base entries), so transformations that must agree -- two
// relabelings with the same case content, a sign mask and its negation under
// an absolute statistic -- produce bit-identical doubles. All built-in
// statistics funnel through the same pair_select_sum kernel, including the
// original value, which keeps tie counting exact.
//
// Not thread-safe; create one evaluator per thread.
class OrbitEvaluator {
public:
    OrbitEvaluator(StatisticSpec spec, DataVector base);

    double original() const { return original_; }
    const DataVector& base() const { return base_; }
    const StatisticSpec& spec() const { return spec_; }

    double value(const GroupElement& g);
    std::vector<double> values(const std::vector<GroupElement>& elements);

    // Value for a two_sample_diff / sum_first_k statistic given the set of
    // base indices landing in the selected positions. Used by the
    // equivalence-class machinery; must match value() bit-exactly for any
    // element with this content.
    double value_of_content(const std::uint32_t* content, std::size_t count);

private:
    double selected_statistic(const double* values, const std::uint8_t* flags) const;

    StatisticSpec spec_;
    DataVector base_;
    std::vector<double> presorted_;            // base values in canonical order
    std::vector<std::uint32_t> slot_of_index_; // base index -> canonical slot
    std::vector<std::uint32_t> index_of_slot_; // canonical slot -> base index
    std::vector<std::uint8_t> fixed_flags_;    // identity selection, canonical order
    std::vector<std::uint8_t> scratch_flags_;
    std::vector<double> scratch_masked_;
    DataVector scratch_vector_;
    std::size_t select_count_ = 0;
    double original_ = 0.0;
    double invariant_value_ = 0.0; // mean/abs-mean under index rearrangements
};

double eval_statistic(const StatisticSpec& spec, const DataVector& x);

OrbitStatistics orbit_statistics(const StatisticSpec& spec, const DataVector& x,
                                 const std::vector<GroupElement>& elements);

OrbitView make_orbit_view(const StatisticSpec& spec, DataVector base,
                          std::vector<GroupElement> elements);

} // namespace permtest
