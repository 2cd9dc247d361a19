#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "permtest/group.hpp"
#include "permtest/random_test.hpp"
#include "permtest/statistics.hpp"

namespace permtest {

enum class NullModelKind { normal, binary };

// Null data law: i.i.d. coordinates, standard normal or 0/1 Bernoulli. Both
// are exchangeable and sign-symmetric, so every implemented group leaves the
// joint law invariant; the binary model exercises heavy ties.
struct NullModel {
    NullModelKind kind = NullModelKind::normal;
    std::size_t dim = 1;
    double prob = 0.5; // binary success probability

    DataVector sample(RngEngine& rng) const;
};

enum class TestOperation {
    full_group,
    hoeffding,
    random_plain,
    randomized_exact,
    coset,
    monte_carlo
};

std::string to_string(TestOperation op);
TestOperation parse_test_operation(const std::string& text);

enum class PvalueKind { p_prime, upper_bound, p_hat, p_tilde, full_group };

std::string to_string(PvalueKind kind);
PvalueKind parse_pvalue_kind(const std::string& text);

struct TestConfig {
    TestOperation operation = TestOperation::full_group;
    StatisticSpec stat = StatisticSpec::mean();
    std::optional<GroupSpec> group;
    SamplingPlan plan; // random operations; plan.subset holds coset/explicit elements
    double alpha = 0.05;
    bool allow_naive = false;
    double tie_tolerance = 0.0;
};

enum class ExperimentKind { type1, pvalue_uniformity, balanced_demo, bonferroni_demo };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(const std::string& text);

struct SimulationConfig {
    ExperimentKind experiment = ExperimentKind::type1;
    NullModel null_model;
    TestConfig test;
    PvalueKind pvalue_kind = PvalueKind::p_prime; // uniformity runs
    std::uint64_t replications = 1000;
    std::uint64_t master_seed = 1;
    std::vector<double> cutoffs;
    std::size_t balanced_per_arm = 4;   // balanced demo
    std::size_t hypotheses = 1;         // bonferroni demo
    double per_test_cutoff = 0.0;       // bonferroni demo; 0 means alpha / hypotheses
    double shift = 0.0;                 // uncalibrated power convenience: added to cases
    int jobs = 1;
    bool keep_trace = false;

    static SimulationConfig from_json_text(const std::string& text);
    static SimulationConfig from_json_file(const std::string& path);
};

struct CutoffRate {
    double cutoff = 0.0;
    double rate = 0.0;
    double standard_error = 0.0;
};

struct TraceRow {
    std::uint64_t replication = 0;
    double p_value = 0.0; // NaN when the experiment yields no p-value
    bool rejected = false;
};

struct SimulationReport {
    ExperimentKind experiment = ExperimentKind::type1;
    std::uint64_t replications = 0;
    std::optional<double> rejection_rate;
    std::optional<double> standard_error;
    std::vector<CutoffRate> exceedance;
    std::optional<double> ks_distance; // uniformity runs
    std::optional<double> balanced_rate;
    std::optional<double> balanced_standard_error;
    std::optional<double> control_rate;
    std::optional<double> control_standard_error;
    std::optional<bool> group_axioms_pass;
    std::optional<double> fwer_naive;
    std::optional<double> fwer_naive_standard_error;
    std::optional<double> fwer_tilde;
    std::optional<double> fwer_tilde_standard_error;
    SimulationConfig config; // canonical echo
    std::vector<TraceRow> trace;
};

// sqrt(r (1 - r) / n)
double rate_standard_error(double rate, std::uint64_t n);

// N replications of the configured test; reports the rejection rate. When
// cutoffs are given, also tabulates P(p <= c) from the per-replication
// p-values.
SimulationReport type1_experiment(const SimulationConfig& config);

// N p-value draws; reports the Kolmogorov-Smirnov distance of their ECDF
// from uniform and the exceedance table.
SimulationReport pvalue_uniformity(const SimulationConfig& config);

// Order-statistic test over the balanced relabelings (plus the identity)
// against a full-group control arm on the same data stream.
SimulationReport balanced_permutation_demo(const SimulationConfig& config);

// Family-wise error of Bonferroni-corrected naive p-hat versus p-tilde.
SimulationReport bonferroni_interaction_demo(const SimulationConfig& config);

// Dispatches on config.experiment.
SimulationReport run_experiment(const SimulationConfig& config);

} // namespace permtest
