#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "monofit/dataset.hpp"
#include "monofit/estimator.hpp"
#include "monofit/influence.hpp"

namespace monofit {

// n i.i.d. uniform points with noisy responses f(x) + eps; byte-reproducible
// from the seed.
Dataset generate_dataset(const FunctionSpec& f, long long n, const NoiseModel& noise,
                         std::uint64_t seed);

// Mean squared error of a predictor against f over the whole cube (dim <= 20).
double exact_risk(const std::function<double(Mask)>& predict, const FunctionSpec& f);

struct RiskReport {
    std::string function_tag;
    int dim = 0;
    long long n = 0;
    double noise_sd = 0.0;  // sqrt of the sub-Gaussian variance proxy
    int replicates = 0;
    std::uint64_t master_seed = 0;
    int d0 = 0;        // 0 for the constant baseline
    double delta = 0.0;
    double mean_risk = 0.0;
    double std_error = 0.0;  // sample std of risks / sqrt(replicates)
    double mean_selected = 0.0;   // average surviving-coordinate count
    double mean_spectral = 0.0;   // average kept-subset count
    std::vector<double> risks;    // per replicate, clamped predictor
    // Diagnostics (empty when out of range):
    std::vector<double> tail_weight;   // dim <= 12: squared mass outside the kept sets
    std::vector<double> coeff_error;   // dim <= 12: sum of squared coefficient errors
    std::vector<double> unclamped_risks;  // dim <= 20
    std::vector<double> eval_se;       // dim > 20: SE of the Monte-Carlo risk evaluation
};

// Replicated estimator risk. Replicate r uses seed derive_seed(master_seed, r);
// replicates run in parallel and are folded in replicate order. Risk is exact
// for dim <= 20, otherwise evaluated on >= 100000 fresh points.
RiskReport mc_risk(const FunctionSpec& f, long long n, const NoiseModel& noise,
                   const EstimatorConfig& cfg, int replicates, std::uint64_t master_seed);

// Same protocol for the clamped constant predictor mean(y).
RiskReport constant_baseline_risk(const FunctionSpec& f, long long n,
                                  const NoiseModel& noise, int replicates,
                                  std::uint64_t master_seed);

// Concentration reports for every (d0, delta) pair, with budget = total L1
// influence of f. dim <= 12.
std::vector<ConcentrationReport> spectral_sweep(const FunctionSpec& f,
                                                const std::vector<int>& d0_list,
                                                const std::vector<double>& delta_list);

}  // namespace monofit
