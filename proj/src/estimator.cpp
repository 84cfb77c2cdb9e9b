#include "monofit/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "monofit/errors.hpp"
#include "monofit/fourier.hpp"

namespace monofit {

static const double kTwoLog3 = 2.0 * std::log(3.0);

void validate(const EstimatorConfig& cfg) {
    if (!(cfg.gamma > kTwoLog3))
        throw std::invalid_argument("estimator config: gamma must exceed 2 ln 3 = " +
                                    std::to_string(kTwoLog3));
    if (!(cfg.c0 >= 0.0)) throw std::invalid_argument("estimator config: c0 must be >= 0");
    if (cfg.d0_override && *cfg.d0_override < 1)
        throw std::invalid_argument("estimator config: d0_override must be >= 1");
    if (cfg.max_spectral_set < 1)
        throw std::invalid_argument("estimator config: max_spectral_set must be >= 1");
}

Schedule schedule(long long n, const EstimatorConfig& cfg) {
    validate(cfg);
    if (n < 2) throw std::invalid_argument("schedule: need n >= 2");
    int d0;
    if (cfg.d0_override) {
        d0 = *cfg.d0_override;
    } else {
        const double ln_n = std::log(static_cast<double>(n));
        const double inner = std::max(ln_n - cfg.c0 * std::sqrt(ln_n), 0.0);
        d0 = std::max(static_cast<int>(std::ceil(std::sqrt(inner / cfg.gamma))), 1);
    }
    return Schedule{d0, std::exp(-cfg.gamma * d0)};
}

InfluenceEstimates estimate_influences(const Dataset& data, std::size_t n1) {
    if (n1 < 1 || n1 > data.size())
        throw std::invalid_argument("estimate_influences: bad split point");
    InfluenceEstimates out;
    out.values.assign(data.dim, 0.0);
    for (int i = 0; i < data.dim; ++i) {
        const Mask bit = Mask{1} << i;
        double sum1 = 0.0, sum0 = 0.0;
        std::size_t count1 = 0, count0 = 0;
        for (std::size_t j = 0; j < n1; ++j) {
            if (data.x[j] & bit) {
                sum1 += data.y[j];
                ++count1;
            } else {
                sum0 += data.y[j];
                ++count0;
            }
        }
        if (count1 == 0 || count0 == 0) {
            out.values[i] = 0.0;  // no information on this coordinate
            out.empty_bins.push_back(i + 1);
        } else {
            out.values[i] = sum1 / static_cast<double>(count1) -
                            sum0 / static_cast<double>(count0);
        }
    }
    return out;
}

Mask select_coordinates(const std::vector<double>& estimates, double delta) {
    if (estimates.size() > kMaxDim)
        throw std::invalid_argument("select_coordinates: too many coordinates");
    Mask m = 0;
    const double cut = delta / 2.0;
    for (std::size_t i = 0; i < estimates.size(); ++i)
        if (estimates[i] >= cut) m |= Mask{1} << i;
    return m;
}

std::vector<Mask> enumerate_spectral_set(Mask selected, int d0, std::uint64_t cap) {
    if (d0 < 0) throw std::invalid_argument("enumerate_spectral_set: d0 must be >= 0");
    std::vector<int> pos;
    {
        Mask rest = selected;
        while (rest) {
            pos.push_back(std::countr_zero(rest));
            rest &= rest - 1;
        }
    }
    const int k = static_cast<int>(pos.size());
    const int top = std::min(d0, k);

    std::uint64_t total = 0;
    bool saturated = false;
    for (int sz = 0; sz <= top; ++sz) {
        std::uint64_t c = binomial(k, sz);
        if (c == ~std::uint64_t{0} || total + c < total) {
            saturated = true;
            break;
        }
        total += c;
    }
    if (saturated || total > cap)
        throw CapacityError("spectral set would hold " +
                            (saturated ? std::string("more than 2^64 - 1")
                                       : std::to_string(total)) +
                            " subsets, cap is " + std::to_string(cap));

    std::vector<Mask> out;
    out.reserve(total);
    for (int sz = 0; sz <= top; ++sz) {
        // walk same-weight masks of the compressed k-bit space in increasing
        // order; positions are sorted, so expansion preserves mask order
        const std::uint64_t count = binomial(k, sz);
        Mask c = sz == 0 ? 0 : (Mask{1} << sz) - 1;
        for (std::uint64_t step = 0; step < count; ++step) {
            Mask expanded = 0;
            Mask rest = c;
            while (rest) {
                int b = std::countr_zero(rest);
                expanded |= Mask{1} << pos[b];
                rest &= rest - 1;
            }
            out.push_back(expanded);
            if (step + 1 < count) {
                Mask lo = c & -c;
                Mask lz = (c + lo) & ~c;
                c |= lz;
                c &= ~(lz - 1);
                c |= (lz / lo >> 1) - 1;
            }
        }
    }
    return out;
}

std::vector<double> estimate_coefficients(const Dataset& data, std::size_t first,
                                          std::size_t last, const std::vector<Mask>& sets) {
    if (first >= last || last > data.size())
        throw std::invalid_argument("estimate_coefficients: empty or invalid range");
    std::vector<double> out(sets.size(), 0.0);
    for (std::size_t j = first; j < last; ++j) {
        const Mask x = data.x[j];
        const double y = data.y[j];
        for (std::size_t k = 0; k < sets.size(); ++k) out[k] += y * character(sets[k], x);
    }
    const double scale = 1.0 / static_cast<double>(last - first);
    for (auto& c : out) c *= scale;
    return out;
}

double EstimatorOutput::predict_raw(Mask x) const {
    double v = 0.0;
    for (std::size_t k = 0; k < spectral_set.size(); ++k)
        v += coefficients[k] * character(spectral_set[k], x);
    return v;
}

double EstimatorOutput::predict(Mask x) const {
    return std::clamp(predict_raw(x), 0.0, 1.0);
}

EstimatorOutput fit(const Dataset& data, const EstimatorConfig& cfg) {
    validate(cfg);
    const std::size_t n = data.size();
    if (n < 2) throw std::invalid_argument("fit: need at least 2 samples");
    if (data.dim < 1 || data.dim > kMaxDim)
        throw std::invalid_argument("fit: dim outside [1, 64]");
    if (data.y.size() != n) throw std::invalid_argument("fit: x/y length mismatch");

    const Schedule sched = schedule(static_cast<long long>(n), cfg);
    const std::size_t n1 = n / 2;

    EstimatorOutput out;
    out.dim = data.dim;
    out.d0 = sched.d0;
    out.delta = sched.delta;

    InfluenceEstimates inf = estimate_influences(data, n1);
    out.influence_estimates = std::move(inf.values);
    out.empty_bins = std::move(inf.empty_bins);
    out.selected = select_coordinates(out.influence_estimates, sched.delta);
    out.spectral_set = enumerate_spectral_set(out.selected, sched.d0, cfg.max_spectral_set);
    out.coefficients = estimate_coefficients(data, n1, n, out.spectral_set);
    return out;
}

nlohmann::json to_json(const EstimatorOutput& out) {
    nlohmann::json j;
    j["dim"] = out.dim;
    j["d0"] = out.d0;
    j["delta"] = out.delta;
    j["influence_estimates"] = out.influence_estimates;
    j["empty_bins"] = out.empty_bins;
    std::vector<int> sel;
    for (int i = 0; i < out.dim; ++i)
        if (get_bit(out.selected, i)) sel.push_back(i + 1);
    j["selected"] = sel;
    j["spectral_set"] = out.spectral_set;
    j["coefficients"] = out.coefficients;
    return j;
}

}  // namespace monofit
