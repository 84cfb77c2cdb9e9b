#include "monofit/influence.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "monofit/errors.hpp"
#include "monofit/fourier.hpp"

namespace monofit {

static void check_coordinate(const TruthTable& t, int coordinate) {
    if (coordinate < 1 || coordinate > t.dim)
        throw std::invalid_argument("coordinate " + std::to_string(coordinate) +
                                    " outside [1, " + std::to_string(t.dim) + "]");
}

TruthTable discrete_derivative(const TruthTable& t, int coordinate) {
    check_coordinate(t, coordinate);
    const Mask bit = Mask{1} << (coordinate - 1);
    TruthTable out{t.dim, std::vector<double>(t.size())};
    for (Mask x = 0; x < t.size(); ++x) {
        if (x & bit) continue;
        double diff = t[x | bit] - t[x];
        out[x] = diff;
        out[x | bit] = diff;
    }
    return out;
}

InfluenceProfile influence_profile(const TruthTable& t) {
    InfluenceProfile p;
    p.dim = t.dim;
    p.l1.resize(t.dim);
    p.l2.resize(t.dim);
    const double scale = 1.0 / static_cast<double>(t.size() / 2);
    for (int i = 1; i <= t.dim; ++i) {
        const Mask bit = Mask{1} << (i - 1);
        double s1 = 0.0, s2 = 0.0;
        for (Mask x = 0; x < t.size(); ++x) {
            if (x & bit) continue;
            double diff = t[x | bit] - t[x];
            s1 += std::abs(diff);
            s2 += diff * diff;
        }
        p.l1[i - 1] = s1 * scale;
        p.l2[i - 1] = s2 * scale;
        p.total_l1 += p.l1[i - 1];
        p.total_l2 += p.l2[i - 1];
    }
    return p;
}

SpectralInfluence influence_from_spectrum(const FourierSpectrum& s) {
    SpectralInfluence out;
    out.dim = s.dim;
    out.l2.assign(s.dim, 0.0);
    for (Mask set = 1; set < s.coeffs.size(); ++set) {
        const double w4 = 4.0 * s[set] * s[set];
        out.total_l2 += popcount(set) * w4;
        Mask rest = set;
        while (rest) {
            int pos = std::countr_zero(rest);
            out.l2[pos] += w4;
            rest &= rest - 1;
        }
    }
    return out;
}

bool is_monotone(const TruthTable& t) {
    for (int i = 0; i < t.dim; ++i) {
        const Mask bit = Mask{1} << i;
        for (Mask x = 0; x < t.size(); ++x) {
            if (x & bit) continue;
            if (t[x | bit] - t[x] < -1e-12) return false;
        }
    }
    return true;
}

ConcentrationReport concentration_report(const TruthTable& t, int d0, double delta,
                                         double budget) {
    if (d0 < 1) throw std::invalid_argument("concentration_report: d0 must be >= 1");
    if (!(delta > 0.0)) throw std::invalid_argument("concentration_report: delta must be > 0");
    if (!(budget >= 0.0)) throw std::invalid_argument("concentration_report: negative budget");
    for (double v : t.values)
        if (!(v >= -1e-12 && v <= 1.0 + 1e-12))
            throw std::invalid_argument("concentration_report: values must lie in [0, 1]");
    if (!is_monotone(t))
        throw std::invalid_argument("concentration_report: table is not monotone");

    InfluenceProfile prof = influence_profile(t);
    if (prof.total_l1 > budget + 1e-10)
        throw std::invalid_argument("concentration_report: total influence " +
                                    std::to_string(prof.total_l1) + " exceeds budget " +
                                    std::to_string(budget));

    ConcentrationReport rep;
    rep.d0 = d0;
    rep.delta = delta;
    rep.budget = budget;
    rep.total_l1 = prof.total_l1;
    rep.total_l2 = prof.total_l2;
    for (int i = 0; i < t.dim; ++i)
        if (prof.l1[i] >= delta) rep.heavy_mask |= Mask{1} << i;
    rep.heavy_count = popcount(rep.heavy_mask);

    FourierSpectrum spec = wht_forward(t);
    double tail = 0.0;
    for (Mask set = 0; set < spec.coeffs.size(); ++set) {
        if ((set & ~rep.heavy_mask) != 0 || popcount(set) > d0)
            tail += spec[set] * spec[set];
    }
    rep.tail_weight = tail;
    rep.bound = rep.total_l2 / (4.0 * d0) +
                budget * std::pow(3.0, d0) * std::sqrt(delta) / 12.0;
    rep.holds = rep.tail_weight <= rep.bound + 1e-10;
    return rep;
}

}  // namespace monofit
