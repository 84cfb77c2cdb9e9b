#include "monofit/experiment.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <vector>

#include "CLI11.hpp"
#include "json_util.hpp"
#include "monofit/errors.hpp"
#include "monofit/harness.hpp"
#include "monofit/lower_bound.hpp"
#include "monofit/version.hpp"

namespace monofit {

namespace {

using nlohmann::json;

// shortest decimal that round trips, so reruns are byte-identical
std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

void check_id(const std::string& id) {
    if (id.empty()) throw ConfigError("config: \"id\" must be nonempty");
    for (char c : id)
        if (c == ',' || c == '\n' || c == '\r' || c == '"')
            throw ConfigError("config: \"id\" must not contain commas, quotes, or newlines");
}

EstimatorConfig estimator_from_json(const json& j) {
    jsonutil::expect_keys(j, "estimator", {}, {"gamma", "c0", "d0_override", "max_spectral_set"});
    EstimatorConfig cfg;
    if (j.contains("gamma")) cfg.gamma = jsonutil::get_double(j, "estimator", "gamma");
    if (j.contains("c0")) cfg.c0 = jsonutil::get_double(j, "estimator", "c0");
    if (j.contains("d0_override"))
        cfg.d0_override = static_cast<int>(jsonutil::get_int(j, "estimator", "d0_override"));
    if (j.contains("max_spectral_set"))
        cfg.max_spectral_set = jsonutil::get_uint64(j, "estimator", "max_spectral_set");
    try {
        validate(cfg);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

std::vector<long long> int_list(const json& j, const std::string& what, const char* key,
                                long long lo) {
    const json& arr = j.at(key);
    if (!arr.is_array() || arr.empty())
        throw ConfigError(what + ": \"" + key + "\" must be a nonempty array");
    std::vector<long long> out;
    for (const auto& v : arr) {
        if (!v.is_number_integer() && !v.is_number_unsigned())
            throw ConfigError(what + ": \"" + key + "\" entries must be integers");
        long long x = v.get<long long>();
        if (x < lo)
            throw ConfigError(what + ": \"" + key + "\" entries must be >= " + std::to_string(lo));
        out.push_back(x);
    }
    return out;
}

const char* kRiskHeader =
    "experiment_id,function_tag,d,n,sigma,replicates,mean_risk,std_error,d0,delta,"
    "mean_J_size,mean_S_size,seed\n";

void append_risk_row(std::string& csv, const std::string& id, const RiskReport& r) {
    csv += id;
    csv += ',';
    csv += r.function_tag;
    csv += ',';
    csv += std::to_string(r.dim);
    csv += ',';
    csv += std::to_string(r.n);
    csv += ',';
    csv += format_double(r.noise_sd);
    csv += ',';
    csv += std::to_string(r.replicates);
    csv += ',';
    csv += format_double(r.mean_risk);
    csv += ',';
    csv += format_double(r.std_error);
    csv += ',';
    csv += std::to_string(r.d0);
    csv += ',';
    csv += format_double(r.delta);
    csv += ',';
    csv += format_double(r.mean_selected);
    csv += ',';
    csv += format_double(r.mean_spectral);
    csv += ',';
    csv += std::to_string(r.master_seed);
    csv += '\n';
}

json seeds_json(std::uint64_t row_seed, int replicates) {
    json arr = json::array();
    for (int r = 0; r < replicates; ++r)
        arr.push_back(derive_seed(row_seed, static_cast<std::uint64_t>(r)));
    return arr;
}

struct CommonParts {
    std::string id;
    std::filesystem::path output;
};

CommonParts common_parts(const json& cfg) {
    CommonParts p;
    p.id = jsonutil::get_string(cfg, "config", "id");
    check_id(p.id);
    p.output = jsonutil::get_string(cfg, "config", "output");
    if (p.output.empty()) throw ConfigError("config: \"output\" must be nonempty");
    return p;
}

ExperimentResult finish(const json& cfg, const CommonParts& parts, std::string csv,
                        json row_seeds, json replicate_seeds) {
    ExperimentResult res;
    res.csv = std::move(csv);
    res.csv_path = parts.output;
    res.csv_path += ".csv";
    res.provenance_path = parts.output;
    res.provenance_path += ".provenance.json";
    res.provenance["library_version"] = kVersion;
    res.provenance["config"] = cfg;
    res.provenance["row_seeds"] = std::move(row_seeds);
    res.provenance["replicate_seeds"] = std::move(replicate_seeds);
    res.provenance["artifacts"] = json{{"csv", res.csv_path.string()}};
    return res;
}

ExperimentResult run_risk_curve(const json& cfg, bool with_baseline) {
    const char* what = with_baseline ? "baseline-compare" : "risk-curve";
    jsonutil::expect_keys(cfg, what,
                          {"experiment", "id", "function", "n_grid", "noise", "replicates",
                           "seed", "output"},
                          {"estimator"});
    const CommonParts parts = common_parts(cfg);
    const FunctionSpec f = function_from_json(cfg.at("function"));
    const NoiseModel noise = noise_from_json(cfg.at("noise"));
    const std::vector<long long> n_grid = int_list(cfg, what, "n_grid", 2);
    const long long replicates = jsonutil::get_int(cfg, what, "replicates");
    if (replicates < 1 || replicates > 1000000)
        throw ConfigError(std::string(what) + ": \"replicates\" outside [1, 1000000]");
    const std::uint64_t master = jsonutil::get_uint64(cfg, what, "seed");
    const EstimatorConfig est =
        cfg.contains("estimator") ? estimator_from_json(cfg.at("estimator")) : EstimatorConfig{};

    std::string csv = kRiskHeader;
    json row_seeds = json::array();
    json replicate_seeds = json::array();
    for (std::size_t row = 0; row < n_grid.size(); ++row) {
        const std::uint64_t row_seed = derive_seed(master, static_cast<std::uint64_t>(row));
        row_seeds.push_back(row_seed);
        replicate_seeds.push_back(seeds_json(row_seed, static_cast<int>(replicates)));
        const RiskReport est_rep =
            mc_risk(f, n_grid[row], noise, est, static_cast<int>(replicates), row_seed);
        append_risk_row(csv, with_baseline ? parts.id + ".estimator" : parts.id, est_rep);
        if (with_baseline) {
            const RiskReport base_rep = constant_baseline_risk(
                f, n_grid[row], noise, static_cast<int>(replicates), row_seed);
            append_risk_row(csv, parts.id + ".baseline", base_rep);
        }
    }
    return finish(cfg, parts, std::move(csv), std::move(row_seeds), std::move(replicate_seeds));
}

ExperimentResult run_spectral_check(const json& cfg) {
    jsonutil::expect_keys(cfg, "spectral-check",
                          {"experiment", "id", "function", "d0_list", "delta_list", "output"});
    const CommonParts parts = common_parts(cfg);
    const FunctionSpec f = function_from_json(cfg.at("function"));
    std::vector<int> d0_list;
    for (long long v : int_list(cfg, "spectral-check", "d0_list", 1))
        d0_list.push_back(static_cast<int>(v));
    const json& dl = cfg.at("delta_list");
    if (!dl.is_array() || dl.empty())
        throw ConfigError("spectral-check: \"delta_list\" must be a nonempty array");
    std::vector<double> delta_list;
    for (const auto& v : dl) {
        if (!v.is_number() || !(v.get<double>() > 0.0))
            throw ConfigError("spectral-check: \"delta_list\" entries must be positive numbers");
        delta_list.push_back(v.get<double>());
    }

    std::vector<ConcentrationReport> reports;
    try {
        reports = spectral_sweep(f, d0_list, delta_list);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("spectral-check: ") + e.what());
    }

    std::string csv =
        "experiment_id,function_tag,d,d0,delta,budget,heavy_count,tail_weight,bound,"
        "bound_satisfied\n";
    const std::string ftag = tag(f);
    for (const ConcentrationReport& r : reports) {
        csv += parts.id + ',' + ftag + ',' + std::to_string(f.dim) + ',' +
               std::to_string(r.d0) + ',' + format_double(r.delta) + ',' +
               format_double(r.budget) + ',' + std::to_string(r.heavy_count) + ',' +
               format_double(r.tail_weight) + ',' + format_double(r.bound) + ',' +
               format_bool(r.holds) + '\n';
    }
    return finish(cfg, parts, std::move(csv), json::array(), json::array());
}

ExperimentResult run_influence_profile(const json& cfg) {
    jsonutil::expect_keys(cfg, "influence-profile", {"experiment", "id", "function", "output"});
    const CommonParts parts = common_parts(cfg);
    const FunctionSpec f = function_from_json(cfg.at("function"));
    const InfluenceProfile prof = influence_profile(to_table(f));

    std::string csv = "experiment_id,function_tag,d,coordinate,l1,l2\n";
    const std::string ftag = tag(f);
    for (int i = 0; i < prof.dim; ++i) {
        csv += parts.id + ',' + ftag + ',' + std::to_string(f.dim) + ',' + std::to_string(i + 1) +
               ',' + format_double(prof.l1[i]) + ',' + format_double(prof.l2[i]) + '\n';
    }
    ExperimentResult res =
        finish(cfg, parts, std::move(csv), json::array(), json::array());
    res.provenance["totals"] =
        json{{"l1", prof.total_l1}, {"l2", prof.total_l2}};
    return res;
}

ExperimentResult run_lower_bound(const json& cfg) {
    jsonutil::expect_keys(cfg, "lower-bound",
                          {"experiment", "id", "s", "budget", "sigma", "n", "seed", "output"},
                          {"target_count"});
    const CommonParts parts = common_parts(cfg);
    const int s = static_cast<int>(jsonutil::get_int(cfg, "lower-bound", "s"));
    const double budget = jsonutil::get_double(cfg, "lower-bound", "budget");
    const double sigma = jsonutil::get_double(cfg, "lower-bound", "sigma");
    const long long n = jsonutil::get_int(cfg, "lower-bound", "n");
    const std::uint64_t seed = jsonutil::get_uint64(cfg, "lower-bound", "seed");
    const int target = cfg.contains("target_count")
                           ? static_cast<int>(jsonutil::get_int(cfg, "lower-bound", "target_count"))
                           : 0;

    json report = lower_bound_demo(s, budget, sigma, n, seed, target);

    std::string csv =
        "experiment_id,s,beta,omega_index,monotone,min_value,max_value,total_l1,total_l2,"
        "influence_ok,derivative_identity\n";
    for (const auto& chk : report.at("verification").at("checks")) {
        csv += parts.id + ',' + std::to_string(s) + ',' +
               format_double(report.at("beta").get<double>()) + ',' +
               std::to_string(chk.at("index").get<int>()) + ',' +
               format_bool(chk.at("monotone").get<bool>()) + ',' +
               format_double(chk.at("min_value").get<double>()) + ',' +
               format_double(chk.at("max_value").get<double>()) + ',' +
               format_double(chk.at("total_l1").get<double>()) + ',' +
               format_double(chk.at("total_l2").get<double>()) + ',' +
               format_bool(chk.at("influence_ok").get<bool>()) + ',' +
               format_bool(chk.at("derivative_identity").get<bool>()) + '\n';
    }
    ExperimentResult res = finish(cfg, parts, std::move(csv), json::array({seed}), json::array());
    res.provenance["report"] = std::move(report);
    return res;
}

}  // namespace

ExperimentResult run_experiment(const json& config, std::optional<std::uint64_t> seed_override) {
    jsonutil::expect_object(config, "config");
    if (!config.contains("experiment"))
        throw ConfigError("config: missing field \"experiment\"");
    json cfg = config;
    if (seed_override) {
        if (!cfg.contains("seed"))
            throw ConfigError("config: --seed given but this experiment takes no seed");
        cfg["seed"] = *seed_override;
    }
    const std::string kind = jsonutil::get_string(cfg, "config", "experiment");
    if (kind == "risk-curve") return run_risk_curve(cfg, false);
    if (kind == "baseline-compare") return run_risk_curve(cfg, true);
    if (kind == "spectral-check") return run_spectral_check(cfg);
    if (kind == "influence-profile") return run_influence_profile(cfg);
    if (kind == "lower-bound") return run_lower_bound(cfg);
    throw ConfigError("config: unknown experiment \"" + kind + "\"");
}

ExperimentResult run_config_file(const std::filesystem::path& path,
                                 std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    // a provenance file carries its config under "config"
    if (j.is_object() && j.contains("config") && j.at("config").is_object()) j = j.at("config");

    ExperimentResult res = run_experiment(j, seed_override);

    // artifacts are written only after the whole run has succeeded
    if (res.csv_path.has_parent_path())
        std::filesystem::create_directories(res.csv_path.parent_path());
    {
        std::ofstream out(res.csv_path, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + res.csv_path.string());
        out << res.csv;
    }
    {
        std::ofstream out(res.provenance_path, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + res.provenance_path.string());
        out << res.provenance.dump(2) << '\n';
    }
    return res;
}

json lower_bound_demo(int s, double k_budget, double sigma, long long n, std::uint64_t seed,
                      int target_count) {
    if (n < 1) throw std::invalid_argument("lower_bound_demo: n must be >= 1");
    if (!(sigma > 0.0)) throw std::invalid_argument("lower_bound_demo: sigma must be > 0");
    if (s < 1) throw std::invalid_argument("lower_bound_demo: s must be >= 1");
    if (target_count == 0) {
        // default: aim for the packing-bound size e^(layer/8), kept to desk scale
        const double layer = static_cast<double>(binomial(s, s / 2));
        const double goal = std::exp(std::min(layer / 8.0, 16.0));
        target_count = static_cast<int>(std::min(128.0, std::max(2.0, std::ceil(goal))));
    }
    FamilyBuild build = build_family_l1(s, s, k_budget, target_count, seed);
    const MiddleLayerFamily& fam = build.family;

    json report;
    report["s"] = s;
    report["m"] = fam.m;
    report["layer_size"] = fam.code.length;
    report["k_budget"] = k_budget;
    report["beta"] = fam.beta;
    report["coeff_a"] = build.coeff_a;
    report["min_dist"] = fam.code.min_dist;
    report["target_count"] = target_count;
    report["code_size"] = fam.size();
    report["log_code_size"] = std::log(static_cast<double>(fam.size()));
    report["log_size_target"] = static_cast<double>(fam.code.length) / 8.0;
    report["code_distance_ok"] = check_pairwise_distance(fam.code);
    report["n"] = n;
    report["sigma"] = sigma;
    report["seed"] = seed;
    // the sample-size-driven choice of s, for reference
    report["suggested_s"] =
        static_cast<long long>(std::floor(2.0 * std::log2(static_cast<double>(n))));

    double min_sep = 0.0, max_sep = 0.0;
    bool first = true;
    for (int i = 0; i < fam.size(); ++i) {
        for (int j = i + 1; j < fam.size(); ++j) {
            const double sep = separation(fam, i, j);
            if (first || sep < min_sep) min_sep = sep;
            if (first || sep > max_sep) max_sep = sep;
            first = false;
        }
    }
    report["separation"] = json{{"min", min_sep}, {"max", max_sep}};
    report["kl"] = json{{"min", kl_gaussian(min_sep, n, sigma)},
                        {"max", kl_gaussian(max_sep, n, sigma)}};

    const FanoBudget fano = fano_budget(fam, n, sigma);
    report["fano"] = json{{"kl_bar_bound", fano.kl_bar_bound},
                          {"half_log_size", fano.half_log_size},
                          {"satisfied", fano.satisfied}};

    report["verification"] = to_json(verify_family(fam, k_budget));
    report["family"] = to_json(fam);
    return report;
}

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Spectral estimation and analysis on the Boolean hypercube"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run an experiment described by a JSON config");
    std::string config_path;
    run->add_option("config", config_path, "Path to the config (or provenance) JSON")->required();
    std::uint64_t seed_value = 0;
    auto* seed_opt = run->add_option("--seed", seed_value, "Override the config's master seed");

    auto* demo = app.add_subcommand("lower-bound-demo",
                                    "Build, verify, and report a budgeted packed family");
    int s = 4;
    double budget = 1.0, sigma = 1.0;
    long long n = 100;
    std::uint64_t demo_seed = 1;
    int target = 0;
    std::string out_path;
    demo->add_option("--s", s, "Active-coordinate count")->required();
    demo->add_option("--budget", budget, "Total L1 influence budget (default 1.0)");
    demo->add_option("--sigma", sigma, "Gaussian noise level (default 1.0)");
    demo->add_option("--n", n, "Sample size for the information check")->required();
    demo->add_option("--seed", demo_seed, "Packing seed (default 1)");
    demo->add_option("--target-count", target, "Requested code size (default: packing bound, capped)");
    demo->add_option("--out", out_path, "Write the JSON report here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (run->parsed()) {
            std::optional<std::uint64_t> seed_override;
            if (seed_opt->count() > 0) seed_override = seed_value;
            ExperimentResult res = run_config_file(config_path, seed_override);
            std::cout << res.csv_path.string() << '\n'
                      << res.provenance_path.string() << '\n';
            return kExitOk;
        }
        json report = lower_bound_demo(s, budget, sigma, n, demo_seed, target);
        if (!out_path.empty()) {
            std::filesystem::path p(out_path);
            if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
            std::ofstream out(p, std::ios::binary);
            if (!out) throw ConfigError("cannot write " + out_path);
            out << report.dump(2) << '\n';
            std::cout << out_path << '\n';
        } else {
            std::cout << report.dump(2) << '\n';
        }
        return kExitOk;
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << '\n';
        return kExitCapacity;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kExitInfeasible;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

}  // namespace monofit
