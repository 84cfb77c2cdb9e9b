#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "monofit/bits.hpp"

namespace monofit {

// Dense real-valued function on {0,1}^dim; values[x] is the value at the
// point whose mask is x. dim is capped at kMaxDenseDim.
struct TruthTable {
    int dim = 0;
    std::vector<double> values;

    double operator[](Mask x) const { return values[x]; }
    double& operator[](Mask x) { return values[x]; }
    std::size_t size() const { return values.size(); }
};

TruthTable make_table(int dim, std::vector<double> values);  // validates
TruthTable zero_table(int dim);

// Fourier coefficients on the character basis chi_S(x) = prod_{i in S}(2x_i-1);
// coeffs[S] is indexed by the subset mask S.
struct FourierSpectrum {
    int dim = 0;
    std::vector<double> coeffs;

    double operator[](Mask s) const { return coeffs[s]; }
    double& operator[](Mask s) { return coeffs[s]; }
};

// Sparse spectrum: (subset mask, coefficient) pairs, any order, no duplicates.
struct SparseSpectrum {
    int dim = 0;
    std::vector<std::pair<Mask, double>> terms;
};

}  // namespace monofit
