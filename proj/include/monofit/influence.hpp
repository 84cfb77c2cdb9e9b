#pragma once

#include <vector>

#include "monofit/truth_table.hpp"

namespace monofit {

// D_i f with (D_i f)(x) = f(x with bit i-1 set) - f(x with bit i-1 cleared);
// the output table is constant in coordinate i. coordinate is 1-based.
TruthTable discrete_derivative(const TruthTable& t, int coordinate);

// l1[i-1] = E|D_i f|, l2[i-1] = E (D_i f)^2, plus their totals.
struct InfluenceProfile {
    int dim = 0;
    std::vector<double> l1;
    std::vector<double> l2;
    double total_l1 = 0.0;
    double total_l2 = 0.0;
};
InfluenceProfile influence_profile(const TruthTable& t);

// Spectral route: l2[i-1] = 4 * sum_{S ∋ i} coeffs[S]^2 and
// total = 4 * sum_{S != 0} |S| coeffs[S]^2.
struct SpectralInfluence {
    int dim = 0;
    std::vector<double> l2;
    double total_l2 = 0.0;
};
SpectralInfluence influence_from_spectrum(const FourierSpectrum& s);

// Every edge increment >= -1e-12.
bool is_monotone(const TruthTable& t);

// Low-degree spectral concentration over the heavy-influence coordinates of a
// monotone [0,1]-valued table whose total L1 influence is at most `budget`.
struct ConcentrationReport {
    int d0 = 0;
    double delta = 0.0;
    Mask heavy_mask = 0;   // coordinates with l1 influence >= delta (inclusive)
    int heavy_count = 0;
    double tail_weight = 0.0;  // squared coefficient mass outside the kept sets
    double bound = 0.0;        // total_l2/(4 d0) + budget * 3^d0 * sqrt(delta) / 12
    double budget = 0.0;
    double total_l1 = 0.0;
    double total_l2 = 0.0;
    bool holds = false;  // tail_weight <= bound + 1e-10
};
ConcentrationReport concentration_report(const TruthTable& t, int d0, double delta,
                                         double budget);

}  // namespace monofit
