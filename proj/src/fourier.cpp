#include "monofit/fourier.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "monofit/errors.hpp"

namespace monofit {

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t r = 1;
    for (int i = 1; i <= k; ++i) {
        // multiply then divide keeps every intermediate an exact integer
        unsigned __int128 t = static_cast<unsigned __int128>(r) * (n - k + i);
        t /= i;
        if (t > ~std::uint64_t{0}) return ~std::uint64_t{0};
        r = static_cast<std::uint64_t>(t);
    }
    return r;
}

static void check_dense_dim(int dim, const char* what) {
    if (dim < 1 || dim > kMaxDenseDim)
        throw CapacityError(std::string(what) + ": dim " + std::to_string(dim) +
                            " outside [1, " + std::to_string(kMaxDenseDim) + "]");
}

TruthTable make_table(int dim, std::vector<double> values) {
    check_dense_dim(dim, "make_table");
    if (values.size() != (std::size_t{1} << dim))
        throw std::invalid_argument("make_table: need " +
                                    std::to_string(std::size_t{1} << dim) + " values, got " +
                                    std::to_string(values.size()));
    return TruthTable{dim, std::move(values)};
}

TruthTable zero_table(int dim) {
    check_dense_dim(dim, "zero_table");
    return TruthTable{dim, std::vector<double>(std::size_t{1} << dim, 0.0)};
}

FourierSpectrum wht_forward(const TruthTable& t) {
    check_dense_dim(t.dim, "wht_forward");
    std::vector<double> a = t.values;
    const std::size_t n = a.size();
    // butterfly: slot with bit cleared accumulates the plain sum over x_i,
    // slot with bit set the sum weighted by 2x_i - 1
    for (std::size_t len = 1; len < n; len <<= 1) {
        for (std::size_t block = 0; block < n; block += len << 1) {
            for (std::size_t j = block; j < block + len; ++j) {
                double u = a[j], v = a[j + len];
                a[j] = u + v;
                a[j + len] = v - u;
            }
        }
    }
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& c : a) c *= scale;
    return FourierSpectrum{t.dim, std::move(a)};
}

TruthTable wht_inverse(const FourierSpectrum& s) {
    check_dense_dim(s.dim, "wht_inverse");
    if (s.coeffs.size() != (std::size_t{1} << s.dim))
        throw std::invalid_argument("wht_inverse: coefficient count mismatch");
    std::vector<double> a = s.coeffs;
    const std::size_t n = a.size();
    for (std::size_t len = 1; len < n; len <<= 1) {
        for (std::size_t block = 0; block < n; block += len << 1) {
            for (std::size_t j = block; j < block + len; ++j) {
                double u = a[j], v = a[j + len];
                a[j] = u - v;
                a[j + len] = u + v;
            }
        }
    }
    return TruthTable{s.dim, std::move(a)};
}

TruthTable wht_inverse(const SparseSpectrum& s) {
    check_dense_dim(s.dim, "wht_inverse");
    TruthTable t = zero_table(s.dim);
    for (Mask x = 0; x < t.size(); ++x) {
        double v = 0.0;
        for (const auto& [set, coeff] : s.terms) v += coeff * character(set, x);
        t[x] = v;
    }
    return t;
}

FourierSpectrum noise_operator(const FourierSpectrum& s, double rho) {
    if (!(rho >= -1.0 && rho <= 1.0))
        throw std::invalid_argument("noise_operator: rho outside [-1, 1]");
    std::vector<double> damp(s.dim + 1);
    damp[0] = 1.0;
    for (int k = 1; k <= s.dim; ++k) damp[k] = damp[k - 1] * rho;
    FourierSpectrum out = s;
    for (Mask set = 0; set < out.coeffs.size(); ++set) out[set] *= damp[popcount(set)];
    return out;
}

double lp_norm(const TruthTable& t, double p) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
    double acc = 0.0;
    if (p == 2.0) {
        for (double v : t.values) acc += v * v;
    } else {
        for (double v : t.values) acc += std::pow(std::abs(v), p);
    }
    acc /= static_cast<double>(t.size());
    return p == 2.0 ? std::sqrt(acc) : std::pow(acc, 1.0 / p);
}

HypercontractivityCheck hypercontractivity_check(const TruthTable& t) {
    FourierSpectrum s = wht_forward(t);
    // ||T_rho f||_2^2 = sum_S rho^(2|S|) coeff^2 at rho^2 = 1/3
    std::vector<double> damp(t.dim + 1);
    damp[0] = 1.0;
    for (int k = 1; k <= t.dim; ++k) damp[k] = damp[k - 1] / 3.0;
    double sq = 0.0;
    for (Mask set = 0; set < s.coeffs.size(); ++set)
        sq += damp[popcount(set)] * s[set] * s[set];
    HypercontractivityCheck out;
    out.lhs = std::sqrt(sq);
    out.rhs = lp_norm(t, 4.0 / 3.0);
    out.holds = out.lhs <= out.rhs + 1e-12;
    return out;
}

}  // namespace monofit
