#include "permtest/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "permtest/exact_test.hpp"
#include "permtest/report_json.hpp"

namespace permtest {

DataVector NullModel::sample(RngEngine& rng) const {
    DataVector x(dim);
    if (kind == NullModelKind::normal) {
        std::normal_distribution<double> dist(0.0, 1.0);
        for (double& v : x)
            v = dist(rng);
    } else {
        std::bernoulli_distribution dist(prob);
        for (double& v : x)
            v = dist(rng) ? 1.0 : 0.0;
    }
    return x;
}

std::string to_string(TestOperation op) {
    switch (op) {
    case TestOperation::full_group:
        return "full-group";
    case TestOperation::hoeffding:
        return "hoeffding";
    case TestOperation::random_plain:
        return "random";
    case TestOperation::randomized_exact:
        return "randomized-exact";
    case TestOperation::coset:
        return "coset";
    case TestOperation::monte_carlo:
        return "monte-carlo";
    }
    return "unknown";
}

TestOperation parse_test_operation(const std::string& text) {
    if (text == "full-group")
        return TestOperation::full_group;
    if (text == "hoeffding")
        return TestOperation::hoeffding;
    if (text == "random")
        return TestOperation::random_plain;
    if (text == "randomized-exact")
        return TestOperation::randomized_exact;
    if (text == "coset")
        return TestOperation::coset;
    if (text == "monte-carlo")
        return TestOperation::monte_carlo;
    throw std::invalid_argument("unknown test operation '" + text + "'");
}

std::string to_string(PvalueKind kind) {
    switch (kind) {
    case PvalueKind::p_prime:
        return "p-prime";
    case PvalueKind::upper_bound:
        return "upper-bound";
    case PvalueKind::p_hat:
        return "p-hat";
    case PvalueKind::p_tilde:
        return "p-tilde";
    case PvalueKind::full_group:
        return "full-group";
    }
    return "unknown";
}

PvalueKind parse_pvalue_kind(const std::string& text) {
    if (text == "p-prime")
        return PvalueKind::p_prime;
    if (text == "upper-bound")
        return PvalueKind::upper_bound;
    if (text == "p-hat")
        return PvalueKind::p_hat;
    if (text == "p-tilde")
        return PvalueKind::p_tilde;
    if (text == "full-group")
        return PvalueKind::full_group;
    throw std::invalid_argument("unknown p-value kind '" + text + "'");
}

std::string to_string(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::type1:
        return "type1";
    case ExperimentKind::pvalue_uniformity:
        return "pvalue-uniformity";
    case ExperimentKind::balanced_demo:
        return "balanced-demo";
    case ExperimentKind::bonferroni_demo:
        return "bonferroni-demo";
    }
    return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& text) {
    if (text == "type1")
        return ExperimentKind::type1;
    if (text == "pvalue-uniformity")
        return ExperimentKind::pvalue_uniformity;
    if (text == "balanced-demo")
        return ExperimentKind::balanced_demo;
    if (text == "bonferroni-demo")
        return ExperimentKind::bonferroni_demo;
    throw std::invalid_argument("unknown experiment '" + text + "'");
}

double rate_standard_error(double rate, std::uint64_t n) {
    if (n == 0)
        return 0.0;
    return std::sqrt(rate * (1.0 - rate) / static_cast<double>(n));
}

namespace {

using nlohmann::ordered_json;

SamplingPlan plan_from_json(const ordered_json& j) {
    SamplingPlan plan;
    plan.mode = parse_sampling_mode(j.at("mode").get<std::string>());
    if (j.contains("w"))
        plan.w = j.at("w").get<std::uint64_t>();
    if (j.contains("include_identity"))
        plan.include_identity = j.at("include_identity").get<bool>();
    if (plan.w == 0)
        throw std::invalid_argument("sampling plan needs w >= 1");
    return plan;
}

TestConfig test_from_json(const ordered_json& j) {
    TestConfig t;
    t.operation = parse_test_operation(j.at("operation").get<std::string>());
    if (j.contains("stat"))
        t.stat = StatisticSpec::parse(j.at("stat").get<std::string>());
    if (j.contains("group"))
        t.group = GroupSpec::parse(j.at("group").get<std::string>());
    t.alpha = j.at("alpha").get<double>();
    if (j.contains("plan"))
        t.plan = plan_from_json(j.at("plan"));
    if (j.contains("transforms"))
        t.plan.subset = elements_from_json(j.at("transforms"));
    else if (j.contains("transforms_file"))
        t.plan.subset = elements_from_json_file(j.at("transforms_file").get<std::string>());
    if (!t.plan.subset.empty())
        t.plan.w = t.plan.subset.size();
    if (j.contains("allow_naive"))
        t.allow_naive = j.at("allow_naive").get<bool>();
    if (j.contains("tie_tolerance"))
        t.tie_tolerance = j.at("tie_tolerance").get<double>();
    return t;
}

} // namespace

SimulationConfig SimulationConfig::from_json_text(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("malformed config JSON: ") + e.what());
    }
    try {
        SimulationConfig cfg;
        cfg.experiment = parse_experiment_kind(j.at("experiment").get<std::string>());
        cfg.replications = j.at("replications").get<std::uint64_t>();
        if (cfg.replications == 0)
            throw std::invalid_argument("replications must be >= 1");
        cfg.master_seed = j.at("master_seed").get<std::uint64_t>();
        if (j.contains("jobs"))
            cfg.jobs = j.at("jobs").get<int>();
        const ordered_json& null_j = j.at("null");
        const std::string null_kind = null_j.at("kind").get<std::string>();
        if (null_kind == "normal")
            cfg.null_model.kind = NullModelKind::normal;
        else if (null_kind == "binary")
            cfg.null_model.kind = NullModelKind::binary;
        else
            throw std::invalid_argument("unknown null model kind '" + null_kind + "'");
        cfg.null_model.dim = null_j.at("dim").get<std::size_t>();
        if (cfg.null_model.dim == 0)
            throw std::invalid_argument("null model needs dim >= 1");
        if (null_j.contains("prob"))
            cfg.null_model.prob = null_j.at("prob").get<double>();
        if (cfg.null_model.prob < 0.0 || cfg.null_model.prob > 1.0)
            throw std::invalid_argument("binary success probability must lie in [0, 1]");
        if (j.contains("test"))
            cfg.test = test_from_json(j.at("test"));
        if (j.contains("pvalue"))
            cfg.pvalue_kind = parse_pvalue_kind(j.at("pvalue").get<std::string>());
        if (j.contains("cutoffs"))
            cfg.cutoffs = j.at("cutoffs").get<std::vector<double>>();
        std::sort(cfg.cutoffs.begin(), cfg.cutoffs.end());
        if (j.contains("balanced"))
            cfg.balanced_per_arm = j.at("balanced").at("per_arm").get<std::size_t>();
        if (j.contains("bonferroni")) {
            const ordered_json& bj = j.at("bonferroni");
            cfg.hypotheses = bj.at("hypotheses").get<std::size_t>();
            if (bj.contains("cutoff"))
                cfg.per_test_cutoff = bj.at("cutoff").get<double>();
        }
        if (j.contains("shift"))
            cfg.shift = j.at("shift").get<double>();
        return cfg;
    } catch (const ordered_json::exception& e) {
        throw std::invalid_argument(std::string("invalid config: ") + e.what());
    }
}

SimulationConfig SimulationConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

namespace {

// Runs fn once per replication with a counter-derived engine. Results are
// written by index, so output is independent of the thread count.
template <typename Result, typename Fn>
std::vector<Result> run_replications(std::uint64_t n, std::uint64_t master_seed, int jobs,
                                     Fn&& fn) {
    std::vector<Result> results(static_cast<std::size_t>(n));
    const int threads = std::clamp(jobs, 1, 256);
    if (threads == 1) {
        for (std::uint64_t rep = 0; rep < n; ++rep) {
            RngEngine rng = replication_engine(master_seed, rep);
            results[static_cast<std::size_t>(rep)] = fn(rep, rng);
        }
        return results;
    }
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            while (true) {
                const std::uint64_t rep = next.fetch_add(1);
                if (rep >= n)
                    return;
                try {
                    RngEngine rng = replication_engine(master_seed, rep);
                    results[static_cast<std::size_t>(rep)] = fn(rep, rng);
                } catch (...) {
                    std::scoped_lock lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
    return results;
}

struct PreparedTest {
    const SimulationConfig* cfg = nullptr;
    std::optional<ClassRepresentatives> reps;

    RandomTestOptions options() const {
        return RandomTestOptions{cfg->test.tie_tolerance, cfg->test.allow_naive};
    }
    ExactTestOptions exact_options() const {
        return ExactTestOptions{cfg->test.tie_tolerance, kDefaultEnumerationCap};
    }
};

bool plan_needs_classes(SamplingMode mode) {
    return mode == SamplingMode::class_with_replacement ||
           mode == SamplingMode::class_without_replacement;
}

bool operation_draws(TestOperation op) {
    return op == TestOperation::random_plain || op == TestOperation::randomized_exact;
}

PreparedTest prepare_test(const SimulationConfig& cfg) {
    PreparedTest pre;
    pre.cfg = &cfg;
    const TestConfig& t = cfg.test;
    const bool needs_group = t.operation == TestOperation::full_group ||
                             t.operation == TestOperation::hoeffding ||
                             operation_draws(t.operation);
    const bool uniformity = cfg.experiment == ExperimentKind::pvalue_uniformity;
    if (uniformity && cfg.pvalue_kind == PvalueKind::full_group) {
        if (!t.group)
            throw std::invalid_argument("full-group p-values need a group");
        return pre;
    }
    if (t.operation == TestOperation::coset && !uniformity) {
        if (t.plan.subset.empty())
            throw PlanInfeasible("coset operation needs transforms");
        return pre;
    }
    if (needs_group || uniformity) {
        if (operation_draws(t.operation) || uniformity) {
            if (plan_needs_classes(t.plan.mode)) {
                if (!t.group)
                    throw std::invalid_argument("class sampling needs a group");
                if (t.stat.family != StatisticFamily::two_sample_diff)
                    throw std::invalid_argument(
                        "class sampling is implemented for the two-sample design");
                pre.reps = class_representatives(t.stat.cases, *t.group);
            } else if (t.plan.mode != SamplingMode::explicit_list &&
                       t.plan.mode != SamplingMode::coset && !t.group) {
                throw std::invalid_argument("sampling needs a group");
            }
        } else if (!t.group) {
            throw std::invalid_argument("operation '" + to_string(t.operation) +
                                        "' needs a group");
        }
    }
    return pre;
}

DataVector draw_data(const SimulationConfig& cfg, RngEngine& rng) {
    DataVector x = cfg.null_model.sample(rng);
    if (cfg.shift != 0.0) {
        const std::size_t cases = cfg.test.stat.family == StatisticFamily::two_sample_diff
                                      ? cfg.test.stat.cases
                                      : x.size();
        for (std::size_t i = 0; i < cases && i < x.size(); ++i)
            x[i] += cfg.shift;
    }
    return x;
}

RandomDraw make_draw(const PreparedTest& pre, RngEngine& rng) {
    const TestConfig& t = pre.cfg->test;
    if (plan_needs_classes(t.plan.mode))
        return draw_transforms(t.plan, *pre.reps, rng);
    if (t.plan.mode == SamplingMode::explicit_list || t.plan.mode == SamplingMode::coset) {
        RandomDraw d;
        d.plan = t.plan;
        d.elements = t.plan.subset;
        return d;
    }
    return draw_transforms(t.plan, *t.group, rng);
}

struct RepOutcome {
    bool rejected = false;
    double p = std::numeric_limits<double>::quiet_NaN();
};

RepOutcome run_one_test(const PreparedTest& pre, RngEngine& rng) {
    const SimulationConfig& cfg = *pre.cfg;
    const TestConfig& t = cfg.test;
    const DataVector x = draw_data(cfg, rng);
    switch (t.operation) {
    case TestOperation::full_group: {
        const TestReport r = full_group_test(x, *t.group, t.stat, t.alpha, pre.exact_options());
        return {r.rejected, r.p_value.value()};
    }
    case TestOperation::hoeffding: {
        const TestReport r =
            hoeffding_randomized_test(x, *t.group, t.stat, t.alpha, rng, pre.exact_options());
        return {r.rejected, r.p_value.value()};
    }
    case TestOperation::random_plain: {
        const RandomDraw d = make_draw(pre, rng);
        const TestReport r = random_test(x, d, t.stat, t.alpha, pre.options());
        return {r.rejected, r.p_value.value()};
    }
    case TestOperation::randomized_exact: {
        const RandomDraw d = make_draw(pre, rng);
        const RandomizedOutcome out =
            randomized_exact_outcome(x, d, t.stat, t.alpha, rng, pre.options());
        return {out.report.rejected, out.p_prime};
    }
    case TestOperation::coset: {
        const TestReport r =
            coset_scheme_test(x, t.plan.subset, t.stat, t.alpha, rng, pre.options());
        return {r.rejected, r.p_value.value()};
    }
    case TestOperation::monte_carlo: {
        const NullModel& null_model = cfg.null_model;
        const auto sampler = [&null_model](RngEngine& e) { return null_model.sample(e); };
        const TestReport r =
            monte_carlo_test(x, sampler, t.stat, t.plan.w, t.alpha, rng, pre.options());
        return {r.rejected, r.p_value.value()};
    }
    }
    throw std::invalid_argument("unknown test operation");
}

double run_one_pvalue(const PreparedTest& pre, RngEngine& rng) {
    const SimulationConfig& cfg = *pre.cfg;
    const TestConfig& t = cfg.test;
    const DataVector x = draw_data(cfg, rng);
    switch (cfg.pvalue_kind) {
    case PvalueKind::p_prime: {
        const RandomDraw d = make_draw(pre, rng);
        return randomized_pvalue(x, d, t.stat, rng, pre.options());
    }
    case PvalueKind::upper_bound: {
        const RandomDraw d = make_draw(pre, rng);
        return pvalue_upper_bound(x, d, t.stat, pre.options());
    }
    case PvalueKind::p_hat: {
        const RandomDraw d = make_draw(pre, rng);
        return estimate_pvalue(x, d, t.stat).p_hat;
    }
    case PvalueKind::p_tilde: {
        const RandomDraw d = make_draw(pre, rng);
        return estimate_pvalue(x, d, t.stat).p_tilde;
    }
    case PvalueKind::full_group:
        return full_group_pvalue(x, *t.group, t.stat, pre.exact_options());
    }
    throw std::invalid_argument("unknown p-value kind");
}

std::vector<CutoffRate> exceedance_table(const std::vector<double>& cutoffs,
                                         const std::vector<double>& pvalues) {
    std::vector<CutoffRate> table;
    table.reserve(cutoffs.size());
    const std::uint64_t n = pvalues.size();
    for (double c : cutoffs) {
        std::uint64_t count = 0;
        for (double p : pvalues)
            count += p <= c;
        const double rate = static_cast<double>(count) / static_cast<double>(n);
        table.push_back(CutoffRate{c, rate, rate_standard_error(rate, n)});
    }
    return table;
}

double ks_distance_uniform(std::vector<double> pvalues) {
    std::sort(pvalues.begin(), pvalues.end());
    const double n = static_cast<double>(pvalues.size());
    double d = 0.0;
    for (std::size_t i = 0; i < pvalues.size(); ++i) {
        const double hi = (static_cast<double>(i) + 1.0) / n - pvalues[i];
        const double lo = pvalues[i] - static_cast<double>(i) / n;
        d = std::max(d, std::max(hi, lo));
    }
    return d;
}

} // namespace

SimulationReport type1_experiment(const SimulationConfig& config) {
    const PreparedTest pre = prepare_test(config);
    const auto results = run_replications<RepOutcome>(
        config.replications, config.master_seed, config.jobs,
        [&pre](std::uint64_t, RngEngine& rng) { return run_one_test(pre, rng); });

    SimulationReport report;
    report.experiment = config.experiment;
    report.replications = config.replications;
    report.config = config;
    std::uint64_t rejections = 0;
    std::vector<double> pvalues;
    pvalues.reserve(results.size());
    for (const RepOutcome& r : results) {
        rejections += r.rejected;
        pvalues.push_back(r.p);
    }
    const double rate =
        static_cast<double>(rejections) / static_cast<double>(config.replications);
    report.rejection_rate = rate;
    report.standard_error = rate_standard_error(rate, config.replications);
    if (!config.cutoffs.empty())
        report.exceedance = exceedance_table(config.cutoffs, pvalues);
    if (config.keep_trace) {
        report.trace.reserve(results.size());
        for (std::size_t i = 0; i < results.size(); ++i)
            report.trace.push_back(TraceRow{i, results[i].p, results[i].rejected});
    }
    return report;
}

SimulationReport pvalue_uniformity(const SimulationConfig& config) {
    const PreparedTest pre = prepare_test(config);
    const auto pvalues = run_replications<double>(
        config.replications, config.master_seed, config.jobs,
        [&pre](std::uint64_t, RngEngine& rng) { return run_one_pvalue(pre, rng); });

    SimulationReport report;
    report.experiment = config.experiment;
    report.replications = config.replications;
    report.config = config;
    report.ks_distance = ks_distance_uniform(pvalues);
    std::vector<double> cutoffs = config.cutoffs;
    if (cutoffs.empty())
        cutoffs = {0.001, 0.01, 0.05, 0.1, 0.5};
    report.exceedance = exceedance_table(cutoffs, pvalues);
    if (config.keep_trace) {
        report.trace.reserve(pvalues.size());
        for (std::size_t i = 0; i < pvalues.size(); ++i)
            report.trace.push_back(
                TraceRow{i, pvalues[i], pvalues[i] <= config.test.alpha});
    }
    return report;
}

SimulationReport balanced_permutation_demo(const SimulationConfig& config) {
    const std::size_t n = config.balanced_per_arm;
    if (n < 2 || n % 2 != 0)
        throw UnsupportedDesign("balanced demo needs an even arm size of at least 2");
    const std::size_t total = 2 * n;
    if (config.null_model.dim != total)
        throw std::invalid_argument("balanced demo needs null dim = 2 * per_arm");
    const StatisticSpec stat = StatisticSpec::two_sample_diff(n);
    const double alpha = config.test.alpha;
    if (alpha < 0.0 || alpha >= 1.0)
        throw std::invalid_argument("alpha must lie in [0, 1)");

    // Balanced relabelings split into complete case-content classes of size
    // n! n!, so the order-statistic test over the set is evaluated exactly
    // from one representative value per class.
    std::vector<std::vector<std::uint32_t>> all_contents;
    std::vector<std::size_t> balanced_idx;
    for_each_case_subset(total, n, [&](const std::uint32_t* subset, std::size_t count) {
        std::size_t crossings = 0;
        for (std::size_t j = 0; j < count; ++j)
            crossings += subset[j] >= n;
        if (crossings == n / 2)
            balanced_idx.push_back(all_contents.size());
        all_contents.emplace_back(subset, subset + count);
    });
    std::uint64_t class_size = 1;
    for (std::uint64_t i = 2; i <= n; ++i)
        class_size *= i;
    class_size *= class_size; // n! * n!

    struct ArmOutcome {
        bool balanced_reject = false;
        bool control_reject = false;
    };
    const TieComparator cmp{config.test.tie_tolerance};
    const auto results = run_replications<ArmOutcome>(
        config.replications, config.master_seed, config.jobs,
        [&](std::uint64_t, RngEngine& rng) {
            const DataVector x = draw_data(config, rng);
            OrbitEvaluator eval(stat, x);
            std::vector<double> all_values;
            all_values.reserve(all_contents.size());
            for (const auto& content : all_contents)
                all_values.push_back(eval.value_of_content(content.data(), content.size()));

            ArmOutcome out;
            // Balanced arm: the balanced classes plus the identity once.
            std::vector<double> values;
            std::vector<std::uint64_t> weights;
            values.reserve(balanced_idx.size() + 1);
            weights.reserve(balanced_idx.size() + 1);
            for (std::size_t idx : balanced_idx) {
                values.push_back(all_values[idx]);
                weights.push_back(class_size);
            }
            values.push_back(eval.original());
            weights.push_back(1);
            out.balanced_reject =
                rank_decision_weighted(values, weights, eval.original(), alpha, cmp)
                    .strict_reject;

            // Control arm: the full group on the same data.
            const std::vector<std::uint64_t> full_weights(all_values.size(), class_size);
            out.control_reject =
                rank_decision_weighted(all_values, full_weights, eval.original(), alpha, cmp)
                    .strict_reject;
            return out;
        });

    SimulationReport report;
    report.experiment = config.experiment;
    report.replications = config.replications;
    report.config = config;
    std::uint64_t balanced_rejections = 0;
    std::uint64_t control_rejections = 0;
    for (const ArmOutcome& r : results) {
        balanced_rejections += r.balanced_reject;
        control_rejections += r.control_reject;
    }
    const double nreps = static_cast<double>(config.replications);
    report.balanced_rate = static_cast<double>(balanced_rejections) / nreps;
    report.balanced_standard_error =
        rate_standard_error(*report.balanced_rate, config.replications);
    report.control_rate = static_cast<double>(control_rejections) / nreps;
    report.control_standard_error =
        rate_standard_error(*report.control_rate, config.replications);
    report.rejection_rate = report.balanced_rate;
    report.standard_error = report.balanced_standard_error;

    try {
        report.group_axioms_pass = verify_group_axioms(balanced_permutations(n)).is_group();
    } catch (const GroupTooLarge&) {
        // arm too large to enumerate; the demo rates stand on their own
    }
    if (config.keep_trace) {
        report.trace.reserve(results.size());
        for (std::size_t i = 0; i < results.size(); ++i)
            report.trace.push_back(TraceRow{i, std::numeric_limits<double>::quiet_NaN(),
                                            results[i].balanced_reject});
    }
    return report;
}

SimulationReport bonferroni_interaction_demo(const SimulationConfig& config) {
    const std::size_t hypotheses = config.hypotheses;
    if (hypotheses == 0)
        throw std::invalid_argument("bonferroni demo needs at least one hypothesis");
    const TestConfig& t = config.test;
    if (!t.group)
        throw std::invalid_argument("bonferroni demo needs a group to draw from");
    if (t.plan.include_identity)
        throw std::invalid_argument(
            "bonferroni demo studies naive draws; set include_identity=false");
    const double cutoff = config.per_test_cutoff > 0.0
                              ? config.per_test_cutoff
                              : t.alpha / static_cast<double>(hypotheses);

    struct FamilyOutcome {
        bool naive_error = false;
        bool tilde_error = false;
    };
    const auto results = run_replications<FamilyOutcome>(
        config.replications, config.master_seed, config.jobs,
        [&](std::uint64_t, RngEngine& rng) {
            FamilyOutcome out;
            for (std::size_t h = 0; h < hypotheses; ++h) {
                const DataVector x = draw_data(config, rng);
                const RandomDraw d = draw_transforms(t.plan, *t.group, rng);
                const PvalueEstimates est = estimate_pvalue(x, d, t.stat);
                out.naive_error |= est.p_hat <= cutoff;
                out.tilde_error |= est.p_tilde <= cutoff;
            }
            return out;
        });

    SimulationReport report;
    report.experiment = config.experiment;
    report.replications = config.replications;
    report.config = config;
    std::uint64_t naive = 0;
    std::uint64_t tilde = 0;
    for (const FamilyOutcome& r : results) {
        naive += r.naive_error;
        tilde += r.tilde_error;
    }
    const double nreps = static_cast<double>(config.replications);
    report.fwer_naive = static_cast<double>(naive) / nreps;
    report.fwer_naive_standard_error =
        rate_standard_error(*report.fwer_naive, config.replications);
    report.fwer_tilde = static_cast<double>(tilde) / nreps;
    report.fwer_tilde_standard_error =
        rate_standard_error(*report.fwer_tilde, config.replications);
    if (config.keep_trace) {
        report.trace.reserve(results.size());
        for (std::size_t i = 0; i < results.size(); ++i)
            report.trace.push_back(TraceRow{i, std::numeric_limits<double>::quiet_NaN(),
                                            results[i].naive_error});
    }
    return report;
}

SimulationReport run_experiment(const SimulationConfig& config) {
    switch (config.experiment) {
    case ExperimentKind::type1:
        return type1_experiment(config);
    case ExperimentKind::pvalue_uniformity:
        return pvalue_uniformity(config);
    case ExperimentKind::balanced_demo:
        return balanced_permutation_demo(config);
    case ExperimentKind::bonferroni_demo:
        return bonferroni_interaction_demo(config);
    }
    throw std::invalid_argument("unknown experiment kind");
}

} // namespace permtest
