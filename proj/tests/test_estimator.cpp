#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "monofit/errors.hpp"
#include "monofit/estimator.hpp"
#include "monofit/harness.hpp"
#include "monofit/zoo.hpp"

using namespace monofit;

TEST_CASE("schedule: pinned values") {
    EstimatorConfig cfg;  // gamma 2.5, c0 3.0
    Schedule s2 = schedule(2, cfg);
    CHECK(s2.d0 == 1);
    CHECK(s2.delta == doctest::Approx(0.0820849986238988).epsilon(1e-15));

    Schedule s100 = schedule(100, cfg);  // ln n < c0 sqrt(ln n): inner term clips to 0
    CHECK(s100.d0 == 1);
    CHECK(s100.delta == doctest::Approx(0.0820849986238988).epsilon(1e-15));

    Schedule s1e6 = schedule(1000000, cfg);
    CHECK(s1e6.d0 == 2);
    CHECK(s1e6.delta == doctest::Approx(0.006737946999085467).epsilon(1e-15));
}

TEST_CASE("schedule: degree grows with n and delta decays geometrically") {
    EstimatorConfig cfg;
    int last_d0 = 1;
    for (long long n = 10; n <= 100000000000LL; n *= 10) {
        Schedule s = schedule(n, cfg);
        CHECK(s.d0 >= last_d0);
        CHECK(s.delta == doctest::Approx(std::exp(-cfg.gamma * s.d0)).epsilon(1e-15));
        last_d0 = s.d0;
    }
    CHECK(last_d0 >= 3);
}

TEST_CASE("schedule: override fixes the degree but delta tracks it") {
    EstimatorConfig cfg;
    cfg.d0_override = 3;
    Schedule s = schedule(100, cfg);
    CHECK(s.d0 == 3);
    CHECK(s.delta == doctest::Approx(std::exp(-7.5)).epsilon(1e-15));
}

TEST_CASE("config validation rejects the threshold exponent boundary") {
    EstimatorConfig cfg;
    cfg.gamma = 2.0 * std::log(3.0);  // exactly the boundary
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    cfg.gamma = 2.1;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    cfg.gamma = 2.2;
    CHECK_NOTHROW(validate(cfg));
    cfg = EstimatorConfig{};
    cfg.c0 = -0.1;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    cfg = EstimatorConfig{};
    cfg.d0_override = 0;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    cfg = EstimatorConfig{};
    cfg.max_spectral_set = 0;
    CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    CHECK_THROWS_AS(schedule(1, EstimatorConfig{}), std::invalid_argument);
}

TEST_CASE("influence estimates: exact on a constructed dataset") {
    Dataset data;
    data.dim = 2;
    data.x = {0b00, 0b01, 0b10, 0b11};
    data.y = {0.0, 1.0, 2.0, 3.0};
    InfluenceEstimates est = estimate_influences(data, 4);
    REQUIRE(est.values.size() == 2);
    CHECK(est.values[0] == 1.0);  // (1+3)/2 - (0+2)/2
    CHECK(est.values[1] == 2.0);  // (2+3)/2 - (0+1)/2
    CHECK(est.empty_bins.empty());
}

TEST_CASE("influence estimates: empty bins are flagged and zeroed") {
    Dataset data;
    data.dim = 2;
    data.x = {0b01, 0b01, 0b11};
    data.y = {1.0, 1.0, 5.0};
    InfluenceEstimates est = estimate_influences(data, 2);  // only the first two rows
    CHECK(est.values[0] == 0.0);  // bit 0 always set: no zero bin
    CHECK(est.values[1] == 0.0);  // bit 1 never set: no one bin
    CHECK(est.empty_bins == std::vector<int>{1, 2});

    CHECK_THROWS_AS(estimate_influences(data, 0), std::invalid_argument);
    CHECK_THROWS_AS(estimate_influences(data, 4), std::invalid_argument);
}

TEST_CASE("coordinate selection: threshold is half delta, inclusive") {
    Mask m = select_coordinates({0.049999999, 0.05, 0.050000001, -1.0}, 0.1);
    CHECK(m == 0b0110);
    CHECK(select_coordinates({}, 0.5) == 0);
}

TEST_CASE("spectral set enumeration: order is by size then mask") {
    // coordinates 1, 2, 4 selected
    std::vector<Mask> sets = enumerate_spectral_set(0b1011, 2, 1 << 20);
    std::vector<Mask> expect = {0b0000, 0b0001, 0b0010, 0b1000, 0b0011, 0b1001, 0b1010};
    CHECK(sets == expect);

    CHECK(enumerate_spectral_set(0b1011, 0, 100) == std::vector<Mask>{0});
    CHECK(enumerate_spectral_set(0, 5, 100) == std::vector<Mask>{0});

    // d0 larger than the selected count keeps everything
    std::vector<Mask> all = enumerate_spectral_set(0b101, 64, 100);
    CHECK(all == std::vector<Mask>{0b000, 0b001, 0b100, 0b101});
}

TEST_CASE("spectral set enumeration: counts are exact") {
    // 20 selected coordinates, full depth: 2^20 subsets
    std::vector<Mask> sets = enumerate_spectral_set(full_mask(20), 20, std::uint64_t{1} << 20);
    CHECK(sets.size() == std::size_t{1} << 20);
    // all distinct and within the selected mask
    std::sort(sets.begin(), sets.end());
    CHECK(std::adjacent_find(sets.begin(), sets.end()) == sets.end());
    CHECK((sets.back() & ~full_mask(20)) == 0);
}

TEST_CASE("spectral set enumeration: highest coordinate survives expansion") {
    std::vector<Mask> sets = enumerate_spectral_set(Mask{1} << 63 | 1, 2, 100);
    std::vector<Mask> expect = {0, 1, Mask{1} << 63, (Mask{1} << 63) | 1};
    CHECK(sets == expect);
}

TEST_CASE("spectral set enumeration: cap violations name the count") {
    try {
        enumerate_spectral_set(0b1011, 2, 3);
        FAIL("expected CapacityError");
    } catch (const CapacityError& e) {
        CHECK(std::string(e.what()).find("7 subsets") != std::string::npos);
    }
    // the full 64-coordinate count overflows and still reports cleanly
    CHECK_THROWS_AS(enumerate_spectral_set(full_mask(64), 64, ~std::uint64_t{0}), CapacityError);
}

TEST_CASE("coefficient estimates: exact on a constructed dataset") {
    Dataset data;
    data.dim = 1;
    data.x = {0b0, 0b1};
    data.y = {0.0, 1.0};
    std::vector<double> c = estimate_coefficients(data, 0, 2, {0b0, 0b1});
    CHECK(c[0] == 0.5);
    CHECK(c[1] == 0.5);
    CHECK_THROWS_AS(estimate_coefficients(data, 1, 1, {0b0}), std::invalid_argument);
    CHECK_THROWS_AS(estimate_coefficients(data, 0, 3, {0b0}), std::invalid_argument);
}

TEST_CASE("fit: noiseless dictator estimates its coordinate exactly") {
    FunctionSpec f = make_dictator(10, 1);
    Dataset data = generate_dataset(f, 10000, NoiseModel::none(), 20240817);
    EstimatorOutput out = fit(data, EstimatorConfig{});

    // conditional means are exactly 1 and 0, so the estimate is exactly 1
    CHECK(out.influence_estimates[0] == 1.0);
    CHECK((out.selected & 1) != 0);
    CHECK(out.empty_bins.empty());

    // the coefficient on {1} is exactly the fraction of ones in the second half
    const std::size_t n1 = data.size() / 2;
    auto it = std::find(out.spectral_set.begin(), out.spectral_set.end(), Mask{1});
    REQUIRE(it != out.spectral_set.end());
    std::size_t ones = 0;
    for (std::size_t j = n1; j < data.size(); ++j) ones += (data.x[j] & 1) != 0;
    const double frac = static_cast<double>(ones) / static_cast<double>(data.size() - n1);
    CHECK(out.coefficients[it - out.spectral_set.begin()] == frac);

    // Frozen after the first verified run on this seed: coordinate 1 is the
    // only survivor, and the second half happens to hold exactly 2500 ones of
    // 5000, so both kept coefficients are exactly 1/2 and the clamped
    // predictor reproduces the dictator everywhere (exact risk 0, well under
    // the 0.05 requirement).
    CHECK(out.selected == Mask{1});
    const double risk = exact_risk([&](Mask x) { return out.predict(x); }, f);
    CHECK(risk == 0.0);
    CHECK(risk < 0.05);
}

TEST_CASE("fit: zero function under mild noise stays near zero") {
    FunctionSpec f = make_table_fn(zero_table(8));
    Dataset data = generate_dataset(f, 10000, NoiseModel::gaussian(0.1), 31337);
    EstimatorOutput out = fit(data, EstimatorConfig{});

    // Noise-only influence estimates sit far below the selection threshold,
    // so only the mean coefficient survives; after clamping, the predictor's
    // exact L2 distance to 0 is tiny.
    CHECK(out.selected == 0);
    const double risk = exact_risk([&](Mask x) { return out.predict(x); }, f);
    CHECK(risk < 0.01);
}

TEST_CASE("fit: byte-identical across repeated runs") {
    FunctionSpec f = make_additive_junta(8, {2, 5});
    Dataset data = generate_dataset(f, 3000, NoiseModel::gaussian(0.4), 99);
    EstimatorOutput a = fit(data, EstimatorConfig{});
    EstimatorOutput b = fit(data, EstimatorConfig{});
    CHECK(a.influence_estimates == b.influence_estimates);
    CHECK(a.selected == b.selected);
    CHECK(a.spectral_set == b.spectral_set);
    CHECK(a.coefficients == b.coefficients);
}

TEST_CASE("fit: empty selection degenerates to the constant predictor") {
    FunctionSpec f = make_table_fn(make_table(3, std::vector<double>(8, 0.5)));
    Dataset data = generate_dataset(f, 100, NoiseModel::none(), 5);
    EstimatorOutput out = fit(data, EstimatorConfig{});
    CHECK(out.selected == 0);
    CHECK(out.spectral_set == std::vector<Mask>{0});
    CHECK(out.coefficients[0] == 0.5);  // mean of constant halves is exact
    CHECK(out.predict(0b101) == 0.5);
}

TEST_CASE("fit: two samples is the smallest legal dataset") {
    Dataset data;
    data.dim = 3;
    data.x = {0b101, 0b010};
    data.y = {1.0, 2.0};
    EstimatorOutput out = fit(data, EstimatorConfig{});
    // the one first-half sample leaves an empty bin on every coordinate
    CHECK(out.empty_bins == std::vector<int>{1, 2, 3});
    CHECK(out.selected == 0);
    CHECK(out.spectral_set == std::vector<Mask>{0});
    CHECK(out.coefficients[0] == 2.0);  // second-half mean
    CHECK(out.predict_raw(0) == 2.0);
    CHECK(out.predict(0) == 1.0);  // clamped into [0, 1]

    Dataset tiny;
    tiny.dim = 1;
    tiny.x = {0b0};
    tiny.y = {0.0};
    CHECK_THROWS_AS(fit(tiny, EstimatorConfig{}), std::invalid_argument);
}

TEST_CASE("fit: degree override widens the kept subsets") {
    FunctionSpec f = make_additive_junta(6, {1, 2});
    Dataset data = generate_dataset(f, 2000, NoiseModel::none(), 31);
    EstimatorConfig cfg;
    cfg.d0_override = 2;
    EstimatorOutput out = fit(data, cfg);
    CHECK(out.d0 == 2);
    bool has_pair = false;
    for (Mask s : out.spectral_set) has_pair = has_pair || popcount(s) == 2;
    CHECK(has_pair);
}

TEST_CASE("fit: noisy junta recovers its members") {
    FunctionSpec f = make_additive_junta(6, {1, 2});
    Dataset data = generate_dataset(f, 20000, NoiseModel::gaussian(0.3), 4242);
    EstimatorOutput out = fit(data, EstimatorConfig{});
    // true influences are 1/2 on members, 0 elsewhere
    CHECK(out.influence_estimates[0] == doctest::Approx(0.5).epsilon(0.1));
    CHECK(out.influence_estimates[1] == doctest::Approx(0.5).epsilon(0.1));
    CHECK((out.selected & 0b11) == 0b11);
    double risk = exact_risk([&](Mask x) { return out.predict(x); }, f);
    CHECK(risk < 0.01);
}

TEST_CASE("fit: spectral cap propagates as a capacity error") {
    FunctionSpec f = make_additive_junta(10, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    Dataset data = generate_dataset(f, 100000, NoiseModel::none(), 8);
    EstimatorConfig cfg;
    cfg.d0_override = 10;
    cfg.max_spectral_set = 100;  // 2^10 subsets wanted, only 100 allowed
    CHECK_THROWS_AS(fit(data, cfg), CapacityError);
}
