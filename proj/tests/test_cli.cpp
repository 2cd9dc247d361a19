#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliResult {
    int exit_code = -1;
    std::string out;
};

fs::path scratch_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "permtest_cli_tests";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

fs::path write_file(const std::string& name, const std::string& content) {
    const fs::path p = scratch_dir() / name;
    std::ofstream out(p);
    out << content;
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

CliResult run_cli(const std::string& args) {
    const fs::path out_path = scratch_dir() / "stdout.txt";
    const std::string cmd = std::string(PERMTEST_CLI_BIN) + " " + args + " > " +
                            out_path.string() + " 2> " +
                            (scratch_dir() / "stderr.txt").string();
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WEXITSTATUS(raw);
    r.out = read_file(out_path);
    return r;
}

const std::string kWorkedCsv = "2.1,0.3,-1.2,0.7\n";

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("full-group test on the worked instance") {
    const fs::path data = write_file("worked.csv", kWorkedCsv);
    const CliResult r = run_cli("test --data " + data.string() +
                                " --stat diff-sum:n=2 --group full-symmetric:4"
                                " --scheme full --alpha 0.333333333333");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("schema") == "permtest/1");
    CHECK(j.at("decision") == "reject");
    CHECK(j.at("counts").at("D") == 8);
    CHECK(j.at("p_value").get<double>() == doctest::Approx(1.0 / 3.0));
    CHECK(j.at("group_size") == 24);
}

TEST_CASE("alpha zero always retains") {
    const fs::path data = write_file("worked.csv", kWorkedCsv);
    const CliResult r = run_cli("test --data " + data.string() +
                                " --stat diff-sum:n=2 --group full-symmetric:4"
                                " --scheme full --alpha 0");
    REQUIRE(r.exit_code == 0);
    CHECK(json::parse(r.out).at("decision") == "retain");
}

TEST_CASE("class scheme without replacement rejects the worked instance") {
    const fs::path data = write_file("worked.csv", kWorkedCsv);
    const CliResult r = run_cli("test --data " + data.string() +
                                " --stat diff-sum:n=2 --group full-symmetric:4"
                                " --scheme class-without-repl --w 6"
                                " --alpha 0.333333333333 --seed 11");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("decision") == "reject");
    CHECK(j.at("k_prime") == 4);
    CHECK(j.at("w") == 6);
    CHECK(j.at("plan").at("mode") == "class-without-replacement");
    CHECK(j.at("draws").size() == 6);
}

TEST_CASE("random schemes demand a seed") {
    const fs::path data = write_file("worked.csv", kWorkedCsv);
    const CliResult r = run_cli("test --data " + data.string() +
                                " --stat diff-sum:n=2 --group full-symmetric:4"
                                " --scheme with-repl --w 10 --alpha 0.05");
    CHECK(r.exit_code == 1);
}

TEST_CASE("naive scheme is refused without the override") {
    const fs::path data = write_file("worked.csv", kWorkedCsv);
    const std::string base = "test --data " + data.string() +
                             " --stat diff-sum:n=2 --group full-symmetric:4"
                             " --scheme naive --w 10 --alpha 0.05 --seed 3";
    CHECK(run_cli(base).exit_code == 1);
    CHECK(run_cli(base + " --allow-naive").exit_code == 0);
}

TEST_CASE("replay: identical flags and seed give identical bytes") {
    const fs::path data = write_file("worked.csv", kWorkedCsv);
    const std::string args = "test --data " + data.string() +
                             " --stat diff-sum:n=2 --group full-symmetric:4"
                             " --scheme without-repl --w 12 --alpha 0.2 --seed 99"
                             " --randomized on";
    const CliResult a = run_cli(args);
    const CliResult b = run_cli(args);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("oversized groups exit with the infeasibility code") {
    const fs::path data = write_file("mean12.csv", "1\n2\n3\n4\n5\n6\n7\n8\n9\n10\n11\n12\n");
    const CliResult r = run_cli("test --data " + data.string() +
                                " --stat mean --group full-symmetric:12"
                                " --scheme full --alpha 0.05");
    CHECK(r.exit_code == 2);
}

TEST_CASE("malformed data exits with the usage code") {
    const fs::path data = write_file("bad.csv", "1.0,banana,2.0\n");
    const CliResult r = run_cli("test --data " + data.string() +
                                " --stat mean --group cyclic:3 --scheme full --alpha 0.05");
    CHECK(r.exit_code == 1);
}

TEST_CASE("pvalue subcommand: full scheme") {
    const fs::path data = write_file("worked.csv", kWorkedCsv);
    const CliResult r = run_cli("pvalue --data " + data.string() +
                                " --stat diff-sum:n=2 --group full-symmetric:4 --scheme full");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("kind") == "pvalue-report");
    CHECK(j.at("p_value").get<double>() == doctest::Approx(1.0 / 3.0));
    CHECK(j.at("counts").at("D") == 8);
}

TEST_CASE("pvalue subcommand: randomized and naive schemes") {
    const fs::path data = write_file("worked.csv", kWorkedCsv);
    const CliResult rand = run_cli("pvalue --data " + data.string() +
                                   " --stat diff-sum:n=2 --group full-symmetric:4"
                                   " --scheme with-repl --w 20 --seed 5");
    REQUIRE(rand.exit_code == 0);
    const json jr = json::parse(rand.out);
    CHECK(jr.contains("p_prime"));
    CHECK(jr.contains("upper_bound"));
    CHECK(jr.at("upper_bound").get<double>() >= jr.at("p_prime").get<double>());

    const CliResult naive = run_cli("pvalue --data " + data.string() +
                                    " --stat diff-sum:n=2 --group full-symmetric:4"
                                    " --scheme naive --w 20 --seed 5 --allow-naive");
    REQUIRE(naive.exit_code == 0);
    const json jn = json::parse(naive.out);
    CHECK(jn.at("p_tilde").get<double>() >= jn.at("p_hat").get<double>());
}

TEST_CASE("verify-group distinguishes groups from non-groups") {
    CHECK(run_cli("verify-group --group full-symmetric:4").exit_code == 0);
    CHECK(run_cli("verify-group --group sign-flip:5").exit_code == 0);

    const CliResult balanced = run_cli("verify-group --balanced 2");
    CHECK(balanced.exit_code == 3);
    const json j = json::parse(balanced.out);
    CHECK(j.at("contains_identity") == false);
    CHECK(j.at("is_group") == false);

    const fs::path trivial = write_file("trivial.json", "[[0, 1]]");
    CHECK(run_cli("verify-group --transforms-file " + trivial.string()).exit_code == 0);

    const fs::path broken = write_file("broken.json", "[[0, 1]");
    CHECK(run_cli("verify-group --transforms-file " + broken.string()).exit_code == 1);
    CHECK(run_cli("verify-group").exit_code == 1);
}

TEST_CASE("explicit transforms drive the full scheme and the coset scheme") {
    const fs::path data = write_file("pair.csv", "5.0\n-3.0\n");
    const fs::path swap_group = write_file("swap.json", "[[0,1],[1,0]]");
    const CliResult full = run_cli("test --data " + data.string() +
                                   " --stat sum-first:k=1 --transforms-file " +
                                   swap_group.string() + " --scheme full --alpha 0.4");
    REQUIRE(full.exit_code == 0);

    const CliResult coset = run_cli("test --data " + data.string() +
                                    " --stat sum-first:k=1 --transforms-file " +
                                    swap_group.string() +
                                    " --scheme coset --alpha 0.4 --seed 8");
    REQUIRE(coset.exit_code == 0);
    // a subgroup makes the coset rule coincide with the basic test
    CHECK(json::parse(coset.out).at("decision") == json::parse(full.out).at("decision"));
}

TEST_CASE("simulate: determinism across jobs and trace output") {
    const std::string config = R"({
        "experiment": "type1",
        "replications": 400,
        "master_seed": 31337,
        "null": {"kind": "binary", "dim": 8, "prob": 0.5},
        "test": {
            "operation": "randomized-exact",
            "stat": "diff-sum:n=4",
            "group": "full-symmetric:8",
            "alpha": 0.05,
            "plan": {"mode": "with-replacement", "w": 12}
        },
        "cutoffs": [0.01, 0.05]
    })";
    const fs::path cfg = write_file("sim_config.json", config);
    const fs::path out1 = scratch_dir() / "report1.json";
    const fs::path out8 = scratch_dir() / "report8.json";
    const fs::path trace1 = scratch_dir() / "trace1.csv";
    const fs::path trace8 = scratch_dir() / "trace8.csv";

    const CliResult a = run_cli("simulate --config " + cfg.string() + " --out " +
                                out1.string() + " --trace " + trace1.string() + " --jobs 1");
    REQUIRE(a.exit_code == 0);
    const CliResult b = run_cli("simulate --config " + cfg.string() + " --out " +
                                out8.string() + " --trace " + trace8.string() + " --jobs 8");
    REQUIRE(b.exit_code == 0);

    CHECK(read_file(out1) == read_file(out8));
    CHECK(read_file(trace1) == read_file(trace8));

    const json report = json::parse(read_file(out1));
    CHECK(report.at("kind") == "simulation-report");
    CHECK(report.at("replications") == 400);
    CHECK(report.at("config").at("test").at("stat") == "diff-sum:n=4");

    const std::string trace = read_file(trace1);
    CHECK(trace.rfind("replication,p_value,decision\n", 0) == 0);

    const CliResult bad = run_cli("simulate --config " + cfg.string() + "missing");
    CHECK(bad.exit_code == 1);
}

TEST_SUITE_END();
