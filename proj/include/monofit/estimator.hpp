#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"
#include "monofit/dataset.hpp"

namespace monofit {

struct EstimatorConfig {
    // Degree/threshold trade-off; must exceed 2 ln 3 so the low-degree tail
    // term vanishes faster than the threshold term.
    double gamma = 2.5;
    double c0 = 3.0;
    std::optional<int> d0_override;  // fixes the degree; delta still tracks it
    std::uint64_t max_spectral_set = std::uint64_t{1} << 20;
};

void validate(const EstimatorConfig& cfg);  // throws on gamma <= 2 ln 3 etc.

// d0 = max(ceil(sqrt((ln n - c0 sqrt(ln n))_+ / gamma)), 1), delta = e^(-gamma d0).
struct Schedule {
    int d0 = 1;
    double delta = 0.0;
};
Schedule schedule(long long n, const EstimatorConfig& cfg);

// Per-coordinate conditional-mean differences mean(y | x_i=1) - mean(y | x_i=0)
// over the first n1 rows. A coordinate with an empty bin gets estimate 0 and
// is listed in empty_bins (1-based).
struct InfluenceEstimates {
    std::vector<double> values;
    std::vector<int> empty_bins;
};
InfluenceEstimates estimate_influences(const Dataset& data, std::size_t n1);

// Coordinates whose estimate clears delta/2 (inclusive), as a mask.
Mask select_coordinates(const std::vector<double>& estimates, double delta);

// All subsets of `selected` with size <= d0, ordered by size then by mask
// value (so the empty set is first). Throws CapacityError naming the count
// when it would exceed cap.
std::vector<Mask> enumerate_spectral_set(Mask selected, int d0, std::uint64_t cap);

// Empirical coefficients (1/(last-first)) * sum_{j in [first,last)} y_j chi_S(x_j),
// one per set, aligned with `sets`.
std::vector<double> estimate_coefficients(const Dataset& data, std::size_t first,
                                          std::size_t last, const std::vector<Mask>& sets);

struct EstimatorOutput {
    int dim = 0;
    int d0 = 1;
    double delta = 0.0;
    std::vector<double> influence_estimates;
    std::vector<int> empty_bins;        // 1-based coordinates whose bins were empty
    Mask selected = 0;                  // surviving coordinates, as a mask
    std::vector<Mask> spectral_set;     // subsets kept, ordered by (size, mask)
    std::vector<double> coefficients;   // aligned with spectral_set

    double predict_raw(Mask x) const;   // sum of coeff * chi_S(x)
    double predict(Mask x) const;       // predict_raw clamped to [0,1]
};

nlohmann::json to_json(const EstimatorOutput& out);

// Split-sample pipeline: schedule, influence estimates on the first half,
// thresholding, subset enumeration, coefficients on the second half.
EstimatorOutput fit(const Dataset& data, const EstimatorConfig& cfg);

}  // namespace monofit
