#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "monofit/experiment.hpp"
#include "monofit/lower_bound.hpp"
#include "monofit/rng.hpp"

using namespace monofit;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// scratch directory, wiped per test case
struct Scratch {
    fs::path dir;
    Scratch() : dir(fs::temp_directory_path() / "monofit_test_experiment") {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    fs::path operator/(const std::string& name) const { return dir / name; }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    REQUIRE(out);
    out << text;
}

json risk_config(const std::string& output) {
    return json{{"experiment", "risk-curve"},
                {"id", "unit"},
                {"function", {{"kind", "dictator"}, {"dim", 4}, {"coordinate", 2}}},
                {"noise", {{"kind", "none"}}},
                {"n_grid", {50, 100}},
                {"replicates", 2},
                {"seed", 7},
                {"output", output}};
}

int run_cli(std::initializer_list<const char*> args) {
    std::vector<const char*> argv = {"monofit"};
    argv.insert(argv.end(), args);
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("influence profile experiment: the CSV is pinned") {
    json cfg = {{"experiment", "influence-profile"},
                {"id", "prof"},
                {"function", {{"kind", "majority"}, {"dim", 3}}},
                {"output", "unused"}};
    ExperimentResult res = run_experiment(cfg);
    CHECK(res.csv ==
          "experiment_id,function_tag,d,coordinate,l1,l2\n"
          "prof,majority,3,1,0.5,0.5\n"
          "prof,majority,3,2,0.5,0.5\n"
          "prof,majority,3,3,0.5,0.5\n");
    CHECK(res.csv_path == fs::path("unused.csv"));
    CHECK(res.provenance_path == fs::path("unused.provenance.json"));
    CHECK(res.provenance.at("config") == cfg);
    CHECK(res.provenance.at("totals").at("l1").get<double>() == doctest::Approx(1.5));
}

TEST_CASE("risk curve experiment: deterministic rows and recorded seeds") {
    json cfg = risk_config("unused");
    ExperimentResult a = run_experiment(cfg);
    ExperimentResult b = run_experiment(cfg);
    CHECK(a.csv == b.csv);

    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < a.csv.size()) {
        std::size_t end = a.csv.find('\n', start);
        lines.push_back(a.csv.substr(start, end - start));
        start = end + 1;
    }
    REQUIRE(lines.size() == 3);  // header + one row per n
    CHECK(lines[0].rfind("experiment_id,function_tag,d,n,sigma", 0) == 0);
    CHECK(lines[1].rfind("unit,dictator_2,4,50,", 0) == 0);
    CHECK(lines[2].rfind("unit,dictator_2,4,100,", 0) == 0);

    // row seeds derive from the master seed by row index
    const json& row_seeds = a.provenance.at("row_seeds");
    REQUIRE(row_seeds.size() == 2);
    CHECK(row_seeds[0].get<std::uint64_t>() == derive_seed(7, 0));
    CHECK(row_seeds[1].get<std::uint64_t>() == derive_seed(7, 1));
    const json& rep_seeds = a.provenance.at("replicate_seeds");
    REQUIRE(rep_seeds.size() == 2);
    CHECK(rep_seeds[0].size() == 2);
    CHECK(rep_seeds[0][1].get<std::uint64_t>() == derive_seed(derive_seed(7, 0), 1));
}

TEST_CASE("baseline comparison: estimator and baseline rows interleave") {
    json cfg = risk_config("unused");
    cfg["experiment"] = "baseline-compare";
    ExperimentResult res = run_experiment(cfg);
    CHECK(res.csv.find("unit.estimator,dictator_2,4,50,") != std::string::npos);
    CHECK(res.csv.find("unit.baseline,dictator_2,4,50,") != std::string::npos);
    CHECK(res.csv.find("unit.estimator,dictator_2,4,100,") != std::string::npos);
    CHECK(res.csv.find("unit.baseline,dictator_2,4,100,") != std::string::npos);
}

TEST_CASE("spectral check experiment: bound column is all true for majority") {
    json cfg = {{"experiment", "spectral-check"},
                {"id", "spec"},
                {"function", {{"kind", "majority"}, {"dim", 5}}},
                {"d0_list", {1, 2}},
                {"delta_list", {0.5, 0.01}},
                {"output", "unused"}};
    ExperimentResult res = run_experiment(cfg);
    // header + 4 rows, each ending in ",true"
    std::size_t rows = 0, satisfied = 0;
    std::size_t start = res.csv.find('\n') + 1;
    while (start < res.csv.size()) {
        std::size_t end = res.csv.find('\n', start);
        std::string line = res.csv.substr(start, end - start);
        ++rows;
        if (line.size() >= 5 && line.substr(line.size() - 5) == ",true") ++satisfied;
        start = end + 1;
    }
    CHECK(rows == 4);
    CHECK(satisfied == 4);
}

TEST_CASE("lower bound experiment: verification rows plus a full report") {
    json cfg = {{"experiment", "lower-bound"}, {"id", "lb"},     {"s", 4},
                {"budget", 1.0},              {"sigma", 0.5},    {"n", 50},
                {"seed", 3},                  {"target_count", 4}, {"output", "unused"}};
    ExperimentResult res = run_experiment(cfg);
    std::size_t rows = 0;
    for (char c : res.csv) rows += c == '\n';
    CHECK(rows == 5);  // header + one row per family member
    const json& report = res.provenance.at("report");
    CHECK(report.at("code_size").get<int>() == 4);
    CHECK(report.at("code_distance_ok").get<bool>());
    CHECK(report.at("verification").at("all_ok").get<bool>());
    CHECK(report.at("beta").get<double>() == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("config validation: unknown or missing fields are rejected") {
    CHECK_THROWS_AS(run_experiment(json::parse("[1,2]")), ConfigError);
    CHECK_THROWS_AS(run_experiment(json{{"id", "x"}}), ConfigError);
    CHECK_THROWS_AS(run_experiment(json{{"experiment", "nonesuch"}, {"id", "x"}}), ConfigError);

    json cfg = risk_config("out");
    cfg["surprise"] = 1;
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);

    cfg = risk_config("out");
    cfg.erase("noise");
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);

    cfg = risk_config("out");
    cfg["replicates"] = 0;
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);

    cfg = risk_config("out");
    cfg["n_grid"] = json::array();
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);

    cfg = risk_config("out");
    cfg["n_grid"] = {50, 1};  // n must be at least 2
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);

    cfg = risk_config("out");
    cfg["id"] = "has,comma";
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);

    cfg = risk_config("");
    CHECK_THROWS_AS(run_experiment(cfg), ConfigError);

    // seed override needs a seed field to override
    json no_seed = {{"experiment", "influence-profile"},
                    {"id", "x"},
                    {"function", {{"kind", "majority"}, {"dim", 3}}},
                    {"output", "out"}};
    CHECK_THROWS_AS(run_experiment(no_seed, std::uint64_t{5}), ConfigError);
}

TEST_CASE("config file runner: artifacts appear only on success") {
    Scratch tmp;
    json cfg = risk_config((tmp / "curve").string());
    spit(tmp / "config.json", cfg.dump());
    ExperimentResult res = run_config_file(tmp / "config.json");
    CHECK(fs::exists(tmp / "curve.csv"));
    CHECK(fs::exists(tmp / "curve.provenance.json"));
    CHECK(slurp(tmp / "curve.csv") == res.csv);

    // a failing config writes nothing
    json bad = risk_config((tmp / "bad").string());
    bad["replicates"] = 0;
    spit(tmp / "bad.json", bad.dump());
    CHECK_THROWS_AS(run_config_file(tmp / "bad.json"), ConfigError);
    CHECK_FALSE(fs::exists(tmp / "bad.csv"));
    CHECK_FALSE(fs::exists(tmp / "bad.provenance.json"));

    CHECK_THROWS_AS(run_config_file(tmp / "missing.json"), ConfigError);
    spit(tmp / "broken.json", "{not json");
    CHECK_THROWS_AS(run_config_file(tmp / "broken.json"), ConfigError);
}

TEST_CASE("config file runner: a provenance file reproduces its run byte for byte") {
    Scratch tmp;
    json cfg = risk_config((tmp / "first").string());
    spit(tmp / "config.json", cfg.dump());
    run_config_file(tmp / "config.json");
    const std::string first_csv = slurp(tmp / "first.csv");

    // rerun directly from the provenance artifact, redirected elsewhere
    json prov = json::parse(slurp(tmp / "first.provenance.json"));
    prov["config"]["output"] = (tmp / "second").string();
    spit(tmp / "rerun.json", prov.dump());
    run_config_file(tmp / "rerun.json");
    CHECK(slurp(tmp / "second.csv") == first_csv);
}

TEST_CASE("config file runner: the seed override changes the recorded config") {
    Scratch tmp;
    json cfg = risk_config((tmp / "a").string());
    spit(tmp / "config.json", cfg.dump());
    ExperimentResult a = run_config_file(tmp / "config.json");

    json cfg2 = risk_config((tmp / "b").string());
    spit(tmp / "config2.json", cfg2.dump());
    ExperimentResult b = run_config_file(tmp / "config2.json", std::uint64_t{7});
    // override with the same value reproduces the same rows
    CHECK(b.provenance.at("config").at("seed").get<std::uint64_t>() == 7);
    CHECK(a.csv.substr(a.csv.find('\n')) == b.csv.substr(b.csv.find('\n')));

    ExperimentResult c = run_config_file(tmp / "config2.json", std::uint64_t{8});
    CHECK(c.provenance.at("config").at("seed").get<std::uint64_t>() == 8);
    CHECK(c.csv != b.csv);
}

TEST_CASE("command line: exit codes map the failure taxonomy") {
    Scratch tmp;
    json cfg = risk_config((tmp / "cli").string());
    spit(tmp / "good.json", cfg.dump());
    CHECK(run_cli({"run", (tmp / "good.json").string().c_str()}) == kExitOk);
    CHECK(fs::exists(tmp / "cli.csv"));

    CHECK(run_cli({"run", (tmp / "absent.json").string().c_str()}) == kExitUsage);

    // capacity: a lower-bound run whose support exceeds the width limit
    json wide = {{"experiment", "lower-bound"}, {"id", "w"},   {"s", 30},
                 {"budget", 1.0},               {"sigma", 1.0}, {"n", 10},
                 {"seed", 1},                   {"output", (tmp / "wide").string()}};
    spit(tmp / "wide.json", wide.dump());
    CHECK(run_cli({"run", (tmp / "wide.json").string().c_str()}) == kExitCapacity);
    CHECK_FALSE(fs::exists(tmp / "wide.csv"));

    // infeasible: a budget that needs beta above one
    json heavy = {{"experiment", "lower-bound"}, {"id", "h"},   {"s", 4},
                  {"budget", 10.0},              {"sigma", 1.0}, {"n", 10},
                  {"seed", 1},                   {"output", (tmp / "heavy").string()}};
    spit(tmp / "heavy.json", heavy.dump());
    CHECK(run_cli({"run", (tmp / "heavy.json").string().c_str()}) == kExitInfeasible);

    // bad usage: unknown subcommand
    CHECK(run_cli({"frobnicate"}) == kExitUsage);
}

TEST_CASE("command line: the packed-family demonstration writes its report") {
    Scratch tmp;
    const std::string out = (tmp / "demo.json").string();
    CHECK(run_cli({"lower-bound-demo", "--s", "4", "--n", "100", "--seed", "2",
                   "--target-count", "4", "--out", out.c_str()}) == kExitOk);
    json report = json::parse(slurp(out));
    CHECK(report.at("s").get<int>() == 4);
    CHECK(report.at("code_size").get<int>() == 4);
    CHECK(report.at("verification").at("all_ok").get<bool>());
    // the emitted family parses back into a usable object
    CHECK(family_from_json(report.at("family")).size() == 4);
}

TEST_CASE("command line: seed override flows through to the artifacts") {
    Scratch tmp;
    json cfg = risk_config((tmp / "x").string());
    spit(tmp / "config.json", cfg.dump());
    CHECK(run_cli({"run", (tmp / "config.json").string().c_str(), "--seed", "99"}) == kExitOk);
    json prov = json::parse(slurp(tmp / "x.provenance.json"));
    CHECK(prov.at("config").at("seed").get<std::uint64_t>() == 99);
}
