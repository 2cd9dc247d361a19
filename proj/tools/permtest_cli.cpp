#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "permtest/exact_test.hpp"
#include "permtest/random_test.hpp"
#include "permtest/report_json.hpp"
#include "permtest/simulation.hpp"

namespace {

using permtest::ordered_json;

// exit codes: 0 ok, 1 usage/validation, 2 infeasible/runtime, 3 not-a-group
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitNotAGroup = 3;

permtest::DataVector load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open data file '" + path + "'");
    permtest::DataVector values;
    std::string token;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        while (std::getline(ls, token, ',')) {
            // trim spaces
            const auto b = token.find_first_not_of(" \t\r");
            if (b == std::string::npos)
                continue;
            const auto e = token.find_last_not_of(" \t\r");
            token = token.substr(b, e - b + 1);
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(token, &used);
            } catch (const std::exception&) {
                throw std::invalid_argument("malformed number '" + token + "' in " + path);
            }
            if (used != token.size())
                throw std::invalid_argument("malformed number '" + token + "' in " + path);
            values.push_back(v);
        }
    }
    permtest::validate_data(values);
    return values;
}

struct TestArgs {
    std::string data_path;
    std::string stat_text;
    std::string group_text;
    std::string transforms_path;
    std::string scheme = "full";
    std::uint64_t w = 0;
    double alpha = 0.05;
    std::optional<std::uint64_t> seed;
    std::string randomized = "off";
    bool allow_naive = false;
    double tolerance = 0.0;
};

struct Loaded {
    permtest::DataVector data;
    permtest::StatisticSpec stat = permtest::StatisticSpec::mean();
    std::optional<permtest::GroupSpec> group;
    std::vector<permtest::GroupElement> transforms;
};

Loaded load_common(const TestArgs& args) {
    Loaded l;
    l.data = load_csv(args.data_path);
    l.stat = permtest::StatisticSpec::parse(args.stat_text);
    if (!args.group_text.empty())
        l.group = permtest::GroupSpec::parse(args.group_text);
    if (!args.transforms_path.empty())
        l.transforms = permtest::elements_from_json_file(args.transforms_path);
    if (!l.group && l.transforms.empty())
        throw std::invalid_argument("provide --group or --transforms-file");
    return l;
}

bool is_random_scheme(const std::string& scheme) {
    return scheme != "full";
}

permtest::RngEngine require_seed_engine(const TestArgs& args) {
    if (!args.seed)
        throw std::invalid_argument("this invocation is randomized; --seed is required");
    return permtest::RngEngine(permtest::mix_seed(*args.seed));
}

permtest::SamplingPlan scheme_plan(const TestArgs& args, const Loaded& l) {
    using permtest::SamplingPlan;
    if (args.scheme == "with-repl")
        return SamplingPlan::with_replacement(args.w);
    if (args.scheme == "without-repl")
        return SamplingPlan::without_replacement(args.w);
    if (args.scheme == "class-with-repl")
        return SamplingPlan::class_with_replacement(args.w);
    if (args.scheme == "class-without-repl")
        return SamplingPlan::class_without_replacement(args.w);
    if (args.scheme == "naive")
        return SamplingPlan::with_replacement(args.w, /*include_identity=*/false);
    if (args.scheme == "coset") {
        if (l.transforms.empty())
            throw std::invalid_argument("the coset scheme needs --transforms-file");
        return SamplingPlan::coset(l.transforms);
    }
    throw std::invalid_argument("unknown scheme '" + args.scheme + "'");
}

permtest::RandomDraw make_cli_draw(const TestArgs& args, const Loaded& l,
                                   const permtest::SamplingPlan& plan,
                                   permtest::RngEngine& rng) {
    using permtest::SamplingMode;
    if (plan.mode == SamplingMode::class_with_replacement ||
        plan.mode == SamplingMode::class_without_replacement) {
        if (l.transforms.empty()) {
            if (!l.group)
                throw std::invalid_argument("class schemes need --group");
            const auto reps =
                permtest::class_representatives(l.stat.cases, *l.group);
            return permtest::draw_transforms(plan, reps, rng);
        }
        // caller-supplied representatives; the caller asserts they represent
        // distinct equivalence classes with the identity first
        permtest::ClassRepresentatives reps;
        reps.reps = l.transforms;
        reps.class_count = l.transforms.size();
        reps.class_size = 0;
        return permtest::draw_transforms(plan, reps, rng);
    }
    if (!l.group)
        throw std::invalid_argument("scheme '" + args.scheme + "' needs --group");
    return permtest::draw_transforms(plan, *l.group, rng);
}

void print_report(const permtest::TestReport& report) {
    std::cout << permtest::to_json(report).dump(2) << std::endl;
    std::cerr << "decision=" << permtest::to_string(report.decision)
              << " rejected=" << (report.rejected ? "yes" : "no");
    if (report.p_value)
        std::cerr << " p=" << *report.p_value;
    std::cerr << " T=" << report.statistic << " threshold=" << report.threshold_value
              << " (rank " << report.threshold_index << ")" << std::endl;
}

int run_test(const TestArgs& args) {
    Loaded l = load_common(args);
    const bool randomized = args.randomized == "on";
    permtest::TestReport report;

    if (!is_random_scheme(args.scheme)) {
        permtest::GroupSpec group =
            l.group ? *l.group : permtest::GroupSpec::explicit_list(l.transforms);
        const permtest::ExactTestOptions opts{args.tolerance, permtest::kDefaultEnumerationCap};
        if (randomized) {
            permtest::RngEngine rng = require_seed_engine(args);
            report = permtest::hoeffding_randomized_test(l.data, group, l.stat, args.alpha, rng,
                                                         opts);
        } else {
            report = permtest::full_group_test(l.data, group, l.stat, args.alpha, opts);
        }
    } else {
        if (args.scheme != "coset" && args.w == 0)
            throw std::invalid_argument("scheme '" + args.scheme + "' needs --w");
        permtest::RngEngine rng = require_seed_engine(args);
        const permtest::SamplingPlan plan = scheme_plan(args, l);
        const permtest::RandomTestOptions opts{args.tolerance, args.allow_naive};
        if (args.scheme == "coset") {
            report = permtest::coset_scheme_test(l.data, l.transforms, l.stat, args.alpha, rng,
                                                 opts);
        } else {
            const permtest::RandomDraw draw = make_cli_draw(args, l, plan, rng);
            report = randomized
                         ? permtest::randomized_exact_test(l.data, draw, l.stat, args.alpha, rng,
                                                           opts)
                         : permtest::random_test(l.data, draw, l.stat, args.alpha, opts);
        }
    }
    report.seed = args.seed;
    print_report(report);
    return kExitOk;
}

int run_pvalue(const TestArgs& args) {
    Loaded l = load_common(args);
    ordered_json j;
    j["schema"] = "permtest/1";
    j["kind"] = "pvalue-report";
    j["scheme"] = args.scheme;
    j["stat"] = l.stat.to_string();

    if (!is_random_scheme(args.scheme)) {
        permtest::GroupSpec group =
            l.group ? *l.group : permtest::GroupSpec::explicit_list(l.transforms);
        const permtest::ExactTestOptions opts{args.tolerance, permtest::kDefaultEnumerationCap};
        const permtest::TestReport r = permtest::full_group_test(l.data, group, l.stat, 0.5, opts);
        j["statistic"] = r.statistic;
        j["p_value"] = *r.p_value;
        j["counts"] = ordered_json{{"D", *r.counts.d}};
        j["group_size"] = *r.group_size;
        std::cout << j.dump(2) << std::endl;
        std::cerr << "p=" << *r.p_value << " (D=" << *r.counts.d << "/" << *r.group_size << ")"
                  << std::endl;
        return kExitOk;
    }

    if (args.scheme != "coset" && args.w == 0)
        throw std::invalid_argument("scheme '" + args.scheme + "' needs --w");
    permtest::RngEngine rng = require_seed_engine(args);
    const permtest::RandomTestOptions opts{args.tolerance, args.allow_naive};
    if (args.scheme == "naive") {
        const permtest::SamplingPlan plan = scheme_plan(args, l);
        const permtest::RandomDraw draw = make_cli_draw(args, l, plan, rng);
        const permtest::PvalueEstimates est = permtest::estimate_pvalue(l.data, draw, l.stat);
        j["p_hat"] = est.p_hat;
        j["p_tilde"] = est.p_tilde;
        j["counts"] = ordered_json{{"B", est.b}};
        j["w"] = est.w;
        j["seed"] = *args.seed;
        std::cout << j.dump(2) << std::endl;
        std::cerr << "p_hat=" << est.p_hat << " p_tilde=" << est.p_tilde << " (B=" << est.b
                  << "/" << est.w << ")" << std::endl;
        return kExitOk;
    }
    if (args.scheme == "coset") {
        const permtest::TestReport r =
            permtest::coset_scheme_test(l.data, l.transforms, l.stat, 0.5, rng, opts);
        j["statistic"] = r.statistic;
        j["p_value"] = *r.p_value;
        j["counts"] = ordered_json{{"B", *r.counts.b}};
        j["w"] = *r.w;
        j["seed"] = *args.seed;
        std::cout << j.dump(2) << std::endl;
        std::cerr << "p=" << *r.p_value << " (B=" << *r.counts.b << "/" << *r.w << ")"
                  << std::endl;
        return kExitOk;
    }
    const permtest::SamplingPlan plan = scheme_plan(args, l);
    const permtest::RandomDraw draw = make_cli_draw(args, l, plan, rng);
    const permtest::RandomizedOutcome out =
        permtest::randomized_exact_outcome(l.data, draw, l.stat, 0.5, rng, opts);
    const double upper = static_cast<double>(*out.report.counts.b) /
                         static_cast<double>(*out.report.w);
    j["statistic"] = out.report.statistic;
    j["p_prime"] = out.p_prime;
    j["upper_bound"] = upper;
    j["u"] = *out.report.u;
    j["counts"] = ordered_json{{"B", *out.report.counts.b}};
    j["w"] = *out.report.w;
    j["seed"] = *args.seed;
    std::cout << j.dump(2) << std::endl;
    std::cerr << "p_prime=" << out.p_prime << " upper_bound=" << upper << " (B="
              << *out.report.counts.b << "/" << *out.report.w << ")" << std::endl;
    return kExitOk;
}

struct SimulateArgs {
    std::string config_path;
    std::string out_path;
    std::string trace_path;
    int jobs = 0;
};

int run_simulate(const SimulateArgs& args) {
    permtest::SimulationConfig cfg = permtest::SimulationConfig::from_json_file(args.config_path);
    if (args.jobs > 0)
        cfg.jobs = args.jobs;
    cfg.keep_trace = !args.trace_path.empty();

    const auto start = std::chrono::steady_clock::now();
    const permtest::SimulationReport report = permtest::run_experiment(cfg);
    const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);

    permtest::SimulationReport to_emit = report;
    to_emit.trace.clear();
    const std::string text = permtest::to_json(to_emit).dump(2) + "\n";
    if (!args.out_path.empty()) {
        std::ofstream out(args.out_path, std::ios::binary);
        if (!out)
            throw std::invalid_argument("cannot open output file '" + args.out_path + "'");
        out << text;
    } else {
        std::cout << text;
    }
    if (!args.trace_path.empty()) {
        std::ofstream out(args.trace_path, std::ios::binary);
        if (!out)
            throw std::invalid_argument("cannot open trace file '" + args.trace_path + "'");
        out << permtest::trace_csv(report.trace);
    }
    std::cerr << "experiment=" << permtest::to_string(report.experiment)
              << " replications=" << report.replications;
    if (report.rejection_rate)
        std::cerr << " rate=" << *report.rejection_rate;
    if (report.ks_distance)
        std::cerr << " ks=" << *report.ks_distance;
    if (report.fwer_naive)
        std::cerr << " fwer_naive=" << *report.fwer_naive << " fwer_tilde=" << *report.fwer_tilde;
    std::cerr << " runtime=" << elapsed.count() << "s" << std::endl;
    return kExitOk;
}

struct VerifyArgs {
    std::string group_text;
    std::string transforms_path;
    std::uint64_t balanced = 0;
};

int run_verify_group(const VerifyArgs& args) {
    const int provided = (!args.group_text.empty()) + (!args.transforms_path.empty()) +
                         (args.balanced > 0);
    if (provided != 1)
        throw std::invalid_argument(
            "provide exactly one of --group, --transforms-file, --balanced");
    std::vector<permtest::GroupElement> elements;
    if (!args.group_text.empty())
        elements = permtest::enumerate_group(permtest::GroupSpec::parse(args.group_text));
    else if (!args.transforms_path.empty())
        elements = permtest::elements_from_json_file(args.transforms_path);
    else
        elements = permtest::balanced_permutations(args.balanced);

    const permtest::AxiomReport report = permtest::verify_group_axioms(elements);
    std::cout << permtest::to_json(report).dump(2) << std::endl;
    std::cerr << (report.is_group() ? "group axioms hold" : "NOT a group") << " ("
              << elements.size() << " elements, " << report.checked_pairs
              << " composition pairs checked)" << std::endl;
    return report.is_group() ? kExitOk : kExitNotAGroup;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const permtest::GroupTooLarge& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitRuntime;
    } catch (const permtest::TooManyClasses& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitRuntime;
    } catch (const permtest::PlanInfeasible& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitRuntime;
    } catch (const permtest::RefusedNaivePlan& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitRuntime;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Group-invariance permutation tests, exact random-sampling rules, and a "
                 "Monte Carlo calibration harness"};
    app.require_subcommand(1);

    TestArgs test_args;
    CLI::App* test = app.add_subcommand("test", "run a test and print a JSON report");
    test->add_option("--data", test_args.data_path, "CSV data: one row or one value per line")
        ->required();
    test->add_option("--stat", test_args.stat_text,
                     "statistic: diff-sum:n=<int> | mean | abs-mean | sum-first:k=<int>")
        ->required();
    test->add_option("--group", test_args.group_text,
                     "group: full-symmetric:N | two-sample:N | sign-flip:N | cyclic:N");
    test->add_option("--transforms-file", test_args.transforms_path,
                     "JSON file with explicit transformations");
    test->add_option("--scheme", test_args.scheme,
                     "full | with-repl | without-repl | class-with-repl | class-without-repl | "
                     "coset | naive");
    test->add_option("--w", test_args.w, "number of draws, identity included");
    test->add_option("--alpha", test_args.alpha, "test level in [0,1)")->required();
    test->add_option("--seed", test_args.seed, "rng seed (required for random schemes)");
    test->add_option("--randomized", test_args.randomized,
                     "on|off: randomized boundary rule for exact level");
    test->add_flag("--allow-naive", test_args.allow_naive,
                   "permit draws without the identity (demos only)");
    test->add_option("--tolerance", test_args.tolerance,
                     "absolute tie tolerance for custom statistics (default 0 = exact)");

    TestArgs pvalue_args;
    CLI::App* pvalue = app.add_subcommand("pvalue", "compute p-values and print them as JSON");
    pvalue->add_option("--data", pvalue_args.data_path, "CSV data")->required();
    pvalue->add_option("--stat", pvalue_args.stat_text, "statistic spec")->required();
    pvalue->add_option("--group", pvalue_args.group_text, "group spec");
    pvalue->add_option("--transforms-file", pvalue_args.transforms_path,
                       "JSON file with explicit transformations");
    pvalue->add_option("--scheme", pvalue_args.scheme, "as in `test`");
    pvalue->add_option("--w", pvalue_args.w, "number of draws");
    pvalue->add_option("--seed", pvalue_args.seed, "rng seed (required for random schemes)");
    pvalue->add_flag("--allow-naive", pvalue_args.allow_naive, "permit naive draws");
    pvalue->add_option("--tolerance", pvalue_args.tolerance, "absolute tie tolerance");

    SimulateArgs sim_args;
    CLI::App* simulate = app.add_subcommand("simulate", "run a calibration experiment");
    simulate->add_option("--config", sim_args.config_path, "experiment config JSON")->required();
    simulate->add_option("--out", sim_args.out_path, "report JSON path (default: stdout)");
    simulate->add_option("--trace", sim_args.trace_path,
                         "per-replication CSV (replication,p_value,rejected)");
    simulate->add_option("--jobs", sim_args.jobs, "worker threads (overrides config)");

    VerifyArgs verify_args;
    CLI::App* verify = app.add_subcommand("verify-group", "check the group axioms");
    verify->add_option("--group", verify_args.group_text, "group spec to enumerate and check");
    verify->add_option("--transforms-file", verify_args.transforms_path,
                       "JSON file with explicit transformations");
    verify->add_option("--balanced", verify_args.balanced,
                       "check the balanced relabelings for this arm size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    if (test->parsed())
        return guarded([&] { return run_test(test_args); });
    if (pvalue->parsed())
        return guarded([&] { return run_pvalue(pvalue_args); });
    if (simulate->parsed())
        return guarded([&] { return run_simulate(sim_args); });
    if (verify->parsed())
        return guarded([&] { return run_verify_group(verify_args); });
    return kExitUsage;
}
