#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "monofit/errors.hpp"
#include "monofit/harness.hpp"

using namespace monofit;

TEST_CASE("dataset generation: byte-identical under the same seed") {
    FunctionSpec f = make_majority(7);
    Dataset a = generate_dataset(f, 500, NoiseModel::gaussian(0.5), 12345);
    Dataset b = generate_dataset(f, 500, NoiseModel::gaussian(0.5), 12345);
    CHECK(a.x == b.x);
    CHECK(a.y == b.y);
    Dataset c = generate_dataset(f, 500, NoiseModel::gaussian(0.5), 12346);
    CHECK(a.x != c.x);
    REQUIRE(a.provenance.has_value());
    CHECK(a.provenance->seed == 12345);
    CHECK(tag(a.provenance->fn) == "majority");
}

TEST_CASE("dataset generation: noise models shape the responses") {
    FunctionSpec f = make_dictator(6, 2);
    Dataset clean = generate_dataset(f, 300, NoiseModel::none(), 9);
    for (std::size_t j = 0; j < clean.size(); ++j)
        CHECK(clean.y[j] == evaluate(f, clean.x[j]));

    Dataset bounded = generate_dataset(f, 300, NoiseModel::uniform_bounded(0.2), 9);
    for (std::size_t j = 0; j < bounded.size(); ++j)
        CHECK(std::abs(bounded.y[j] - evaluate(f, bounded.x[j])) <= 0.2);

    // points stay inside the cube
    for (Mask x : clean.x) CHECK((x & ~full_mask(6)) == 0);
    CHECK_THROWS_AS(generate_dataset(f, 0, NoiseModel::none(), 1), std::invalid_argument);
}

TEST_CASE("dataset generation: standard Gaussian noise has the right moments") {
    // zero function, unit noise: responses are pure N(0,1) draws
    FunctionSpec f = make_table_fn(zero_table(6));
    const long long n = 100000;
    Dataset data = generate_dataset(f, n, NoiseModel::gaussian(1.0), 271828);
    double mean = 0.0;
    for (double y : data.y) mean += y;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double y : data.y) var += (y - mean) * (y - mean);
    var /= static_cast<double>(n - 1);
    CHECK(std::abs(mean) <= 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("exact risk: pinned values") {
    FunctionSpec f = make_dictator(3, 1);
    CHECK(exact_risk([&](Mask x) { return evaluate(f, x); }, f) == 0.0);
    CHECK(exact_risk([](Mask) { return 0.0; }, f) == 0.5);   // misses every one
    CHECK(exact_risk([](Mask) { return 0.5; }, f) == 0.25);  // constant best guess
    CHECK_THROWS_AS(exact_risk([](Mask) { return 0.0; }, make_majority(21)), CapacityError);
}

TEST_CASE("replicated risk: deterministic, and decomposes over the spectrum") {
    FunctionSpec f = make_additive_junta(8, {1, 2, 3});
    RiskReport rep = mc_risk(f, 1000, NoiseModel::gaussian(0.5), EstimatorConfig{}, 4, 77);
    RiskReport again = mc_risk(f, 1000, NoiseModel::gaussian(0.5), EstimatorConfig{}, 4, 77);
    CHECK(rep.risks == again.risks);
    CHECK(rep.mean_risk == again.mean_risk);

    REQUIRE(rep.risks.size() == 4);
    REQUIRE(rep.unclamped_risks.size() == 4);
    REQUIRE(rep.tail_weight.size() == 4);
    REQUIRE(rep.coeff_error.size() == 4);
    for (int r = 0; r < 4; ++r) {
        // unclamped squared error = squared coefficient error on the kept sets
        // plus the squared mass left outside them
        CHECK(rep.unclamped_risks[r] ==
              doctest::Approx(rep.coeff_error[r] + rep.tail_weight[r]).epsilon(1e-10));
        // clamping into [0,1] can only help against a [0,1]-valued target
        CHECK(rep.risks[r] <= rep.unclamped_risks[r] + 1e-15);
        CHECK(rep.risks[r] >= 0.0);
    }
    CHECK(rep.function_tag == "junta_1_2_3");
    CHECK(rep.noise_sd == 0.5);
    CHECK(rep.d0 >= 1);
    CHECK(rep.mean_selected >= 0.0);
    CHECK(rep.mean_spectral >= 1.0);  // the empty set is always kept
}

TEST_CASE("replicated risk: clean dictator fits are near-perfect") {
    FunctionSpec f = make_dictator(10, 1);
    RiskReport rep = mc_risk(f, 10000, NoiseModel::none(), EstimatorConfig{}, 3, 2024);
    CHECK(rep.mean_risk < 1e-3);
    for (double r : rep.risks) CHECK(r < 1e-3);
}

TEST_CASE("replicated risk: estimator beats the constant baseline on a dictator") {
    FunctionSpec f = make_dictator(10, 1);
    const NoiseModel noise = NoiseModel::gaussian(0.5);
    RiskReport est = mc_risk(f, 10000, noise, EstimatorConfig{}, 10, 555);
    RiskReport base = constant_baseline_risk(f, 10000, noise, 10, 555);
    // the dictator has variance 1/4, which a constant can never explain
    CHECK(base.mean_risk > 0.2);
    CHECK(est.mean_risk < 0.05);
    CHECK(est.mean_risk < base.mean_risk);
    CHECK(base.d0 == 0);
    CHECK(base.risks.size() == 10);

    // paired replicates: both reports consumed identical datasets
    CHECK(est.master_seed == base.master_seed);
}

TEST_CASE("replicated risk: wide inputs switch to fresh-sample evaluation") {
    FunctionSpec f = make_dictator(22, 1);
    RiskReport rep = mc_risk(f, 600, NoiseModel::gaussian(0.2), EstimatorConfig{}, 2, 31);
    CHECK(rep.unclamped_risks.empty());
    CHECK(rep.tail_weight.empty());
    REQUIRE(rep.eval_se.size() == 2);
    for (int r = 0; r < 2; ++r) {
        CHECK(rep.risks[r] >= 0.0);
        CHECK(rep.risks[r] <= 0.5);
        CHECK(rep.eval_se[r] > 0.0);
        CHECK(rep.eval_se[r] < 0.01);
    }

    RiskReport base = constant_baseline_risk(f, 600, NoiseModel::gaussian(0.2), 2, 31);
    REQUIRE(base.eval_se.size() == 2);
    CHECK(base.mean_risk > 0.1);  // constant cannot explain the dictator
}

TEST_CASE("replicated risk: argument validation") {
    FunctionSpec f = make_dictator(4, 1);
    CHECK_THROWS_AS(mc_risk(f, 1, NoiseModel::none(), EstimatorConfig{}, 1, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(mc_risk(f, 100, NoiseModel::none(), EstimatorConfig{}, 0, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(constant_baseline_risk(f, 0, NoiseModel::none(), 1, 1),
                    std::invalid_argument);
}

TEST_CASE("concentration sweep: majority holds its budget at every grid point") {
    FunctionSpec f = make_majority(5);
    std::vector<ConcentrationReport> reports = spectral_sweep(f, {1, 2, 3}, {0.5, 0.1, 0.01});
    REQUIRE(reports.size() == 9);
    const double budget = influence_profile(to_table(f)).total_l1;
    for (const ConcentrationReport& r : reports) {
        CHECK(r.holds);
        CHECK(r.budget == doctest::Approx(budget).epsilon(1e-12));
        CHECK(r.tail_weight <= r.bound + 1e-12);
        CHECK(r.heavy_count <= static_cast<int>(budget / r.delta) + 1);
    }
    // the grid iterates degree-major: first three entries share d0 = 1
    CHECK(reports[0].d0 == 1);
    CHECK(reports[1].d0 == 1);
    CHECK(reports[2].d0 == 1);
    CHECK(reports[3].d0 == 2);

    CHECK_THROWS_AS(spectral_sweep(make_majority(13), {1}, {0.5}), CapacityError);
    CHECK_THROWS_AS(spectral_sweep(f, {}, {0.5}), std::invalid_argument);
    CHECK_THROWS_AS(spectral_sweep(f, {1}, {}), std::invalid_argument);
}
