#pragma once

#include "monofit/truth_table.hpp"

namespace monofit {

// chi_S(x) = prod_{i in S}(2x_i - 1) = (-1)^|{i in S : x_i = 0}|.
// Width-independent: bits of x outside S are ignored.
inline double character(Mask subset, Mask point) {
    return (popcount(subset & ~point) & 1) ? -1.0 : 1.0;
}

// Forward transform: coeffs[S] = 2^-d * sum_x values[x] * chi_S(x).
// In-place butterfly, O(d 2^d); the single 1/2^d scaling lives here.
FourierSpectrum wht_forward(const TruthTable& t);

// Inverse transform: values[x] = sum_S coeffs[S] * chi_S(x). No scaling.
TruthTable wht_inverse(const FourierSpectrum& s);
TruthTable wht_inverse(const SparseSpectrum& s);

// Noise operator: damps coeffs[S] by rho^|S|. rho in [-1,1].
FourierSpectrum noise_operator(const FourierSpectrum& s, double rho);

// ( 2^-d * sum_x |values[x]|^p )^(1/p), p >= 1.
double lp_norm(const TruthTable& t, double p);

// ||T_rho f||_2 <= ||f||_4/3 at rho = 1/sqrt(3), for any real table.
struct HypercontractivityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;  // lhs <= rhs + 1e-12
};
HypercontractivityCheck hypercontractivity_check(const TruthTable& t);

}  // namespace monofit
