#include "monofit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

#include "monofit/errors.hpp"
#include "monofit/fourier.hpp"

namespace monofit {

Dataset generate_dataset(const FunctionSpec& f, long long n, const NoiseModel& noise,
                         std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("generate_dataset: n must be >= 1");
    Dataset data;
    data.dim = f.dim;
    data.x.reserve(n);
    data.y.reserve(n);
    Rng rng(seed);
    for (long long j = 0; j < n; ++j) {
        Mask x = rng.point(f.dim);        // draw order is pinned: point, then noise
        double y = evaluate(f, x) + noise.sample(rng);
        data.x.push_back(x);
        data.y.push_back(y);
    }
    data.provenance = Dataset::Provenance{f, noise, seed};
    return data;
}

double exact_risk(const std::function<double(Mask)>& predict, const FunctionSpec& f) {
    if (f.dim > kMaxDenseDim)
        throw CapacityError("exact_risk: dim " + std::to_string(f.dim) + " exceeds " +
                            std::to_string(kMaxDenseDim));
    const TruthTable t = to_table(f);
    double acc = 0.0;
    for (Mask x = 0; x < t.size(); ++x) {
        const double d = predict(x) - t[x];
        acc += d * d;
    }
    return acc / static_cast<double>(t.size());
}

namespace {

// Runs body(0..count-1) on a small thread pool; outputs must go to
// per-index slots so the fold stays deterministic.
void parallel_for(int count, const std::function<void(int)>& body) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const int nthreads = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(count)));
    if (nthreads <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(nthreads);
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t] {
            try {
                int i;
                while ((i = next.fetch_add(1)) < count) body(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

struct ExactEval {
    TruthTable table;          // dim <= 20
    FourierSpectrum spectrum;  // dim <= 12
    double sq_norm = 0.0;      // sum of squared coefficients
};

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double std_error_of(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return std::sqrt(s / static_cast<double>(v.size() - 1)) /
           std::sqrt(static_cast<double>(v.size()));
}

}  // namespace

RiskReport mc_risk(const FunctionSpec& f, long long n, const NoiseModel& noise,
                   const EstimatorConfig& cfg, int replicates, std::uint64_t master_seed) {
    validate(cfg);
    if (replicates < 1) throw std::invalid_argument("mc_risk: replicates must be >= 1");
    if (n < 2) throw std::invalid_argument("mc_risk: n must be >= 2");

    RiskReport rep;
    rep.function_tag = tag(f);
    rep.dim = f.dim;
    rep.n = n;
    rep.noise_sd = std::sqrt(noise.sub_gaussian_variance());
    rep.replicates = replicates;
    rep.master_seed = master_seed;
    const Schedule sched = schedule(n, cfg);
    rep.d0 = sched.d0;
    rep.delta = sched.delta;

    ExactEval ev;
    const bool exact = f.dim <= kMaxDenseDim;
    const bool spectral = f.dim <= 12;
    if (exact) {
        ev.table = to_table(f);
        if (spectral) {
            ev.spectrum = wht_forward(ev.table);
            for (double c : ev.spectrum.coeffs) ev.sq_norm += c * c;
        }
    }

    rep.risks.assign(replicates, 0.0);
    std::vector<double> selected(replicates, 0.0), spectral_sizes(replicates, 0.0);
    if (spectral) {
        rep.tail_weight.assign(replicates, 0.0);
        rep.coeff_error.assign(replicates, 0.0);
    }
    if (exact) rep.unclamped_risks.assign(replicates, 0.0);
    if (!exact) rep.eval_se.assign(replicates, 0.0);

    parallel_for(replicates, [&](int r) {
        const std::uint64_t seed_r = derive_seed(master_seed, static_cast<std::uint64_t>(r));
        const Dataset data = generate_dataset(f, n, noise, seed_r);
        const EstimatorOutput out = fit(data, cfg);
        selected[r] = popcount(out.selected);
        spectral_sizes[r] = static_cast<double>(out.spectral_set.size());

        if (exact) {
            double acc = 0.0, acc_raw = 0.0;
            for (Mask x = 0; x < ev.table.size(); ++x) {
                const double raw = out.predict_raw(x);
                const double dc = std::clamp(raw, 0.0, 1.0) - ev.table[x];
                const double dr = raw - ev.table[x];
                acc += dc * dc;
                acc_raw += dr * dr;
            }
            rep.risks[r] = acc / static_cast<double>(ev.table.size());
            rep.unclamped_risks[r] = acc_raw / static_cast<double>(ev.table.size());
            if (spectral) {
                double kept = 0.0, err = 0.0;
                for (std::size_t k = 0; k < out.spectral_set.size(); ++k) {
                    const double truth = ev.spectrum[out.spectral_set[k]];
                    kept += truth * truth;
                    const double d = out.coefficients[k] - truth;
                    err += d * d;
                }
                rep.tail_weight[r] = ev.sq_norm - kept;
                rep.coeff_error[r] = err;
            }
        } else {
            // fresh-sample risk evaluation
            const long long m = 100000;
            Rng rng(derive_seed(seed_r, 0x00e7a1u));
            double acc = 0.0, acc2 = 0.0;
            for (long long k = 0; k < m; ++k) {
                const Mask x = rng.point(f.dim);
                const double d = out.predict(x) - evaluate(f, x);
                acc += d * d;
                acc2 += d * d * d * d;
            }
            const double mean = acc / static_cast<double>(m);
            rep.risks[r] = mean;
            const double var = std::max(acc2 / static_cast<double>(m) - mean * mean, 0.0);
            rep.eval_se[r] = std::sqrt(var / static_cast<double>(m));
        }
    });

    rep.mean_risk = mean_of(rep.risks);
    rep.std_error = std_error_of(rep.risks, rep.mean_risk);
    rep.mean_selected = mean_of(selected);
    rep.mean_spectral = mean_of(spectral_sizes);
    return rep;
}

RiskReport constant_baseline_risk(const FunctionSpec& f, long long n,
                                  const NoiseModel& noise, int replicates,
                                  std::uint64_t master_seed) {
    if (replicates < 1)
        throw std::invalid_argument("constant_baseline_risk: replicates must be >= 1");
    if (n < 1) throw std::invalid_argument("constant_baseline_risk: n must be >= 1");

    RiskReport rep;
    rep.function_tag = tag(f);
    rep.dim = f.dim;
    rep.n = n;
    rep.noise_sd = std::sqrt(noise.sub_gaussian_variance());
    rep.replicates = replicates;
    rep.master_seed = master_seed;

    ExactEval ev;
    const bool exact = f.dim <= kMaxDenseDim;
    if (exact) ev.table = to_table(f);

    rep.risks.assign(replicates, 0.0);
    if (exact) rep.unclamped_risks.assign(replicates, 0.0);
    if (!exact) rep.eval_se.assign(replicates, 0.0);

    parallel_for(replicates, [&](int r) {
        const std::uint64_t seed_r = derive_seed(master_seed, static_cast<std::uint64_t>(r));
        const Dataset data = generate_dataset(f, n, noise, seed_r);
        double mean_y = 0.0;
        for (double y : data.y) mean_y += y;
        mean_y /= static_cast<double>(data.size());
        const double c = std::clamp(mean_y, 0.0, 1.0);

        if (exact) {
            double acc = 0.0, acc_raw = 0.0;
            for (Mask x = 0; x < ev.table.size(); ++x) {
                const double dc = c - ev.table[x];
                const double dr = mean_y - ev.table[x];
                acc += dc * dc;
                acc_raw += dr * dr;
            }
            rep.risks[r] = acc / static_cast<double>(ev.table.size());
            rep.unclamped_risks[r] = acc_raw / static_cast<double>(ev.table.size());
        } else {
            const long long m = 100000;
            Rng rng(derive_seed(seed_r, 0x00e7a1u));
            double acc = 0.0, acc2 = 0.0;
            for (long long k = 0; k < m; ++k) {
                const Mask x = rng.point(f.dim);
                const double d = c - evaluate(f, x);
                acc += d * d;
                acc2 += d * d * d * d;
            }
            const double mean = acc / static_cast<double>(m);
            rep.risks[r] = mean;
            const double var = std::max(acc2 / static_cast<double>(m) - mean * mean, 0.0);
            rep.eval_se[r] = std::sqrt(var / static_cast<double>(m));
        }
    });

    rep.mean_risk = mean_of(rep.risks);
    rep.std_error = std_error_of(rep.risks, rep.mean_risk);
    return rep;
}

std::vector<ConcentrationReport> spectral_sweep(const FunctionSpec& f,
                                                const std::vector<int>& d0_list,
                                                const std::vector<double>& delta_list) {
    if (f.dim > 12)
        throw CapacityError("spectral_sweep: dim " + std::to_string(f.dim) + " exceeds 12");
    if (d0_list.empty() || delta_list.empty())
        throw std::invalid_argument("spectral_sweep: empty parameter list");
    const TruthTable t = to_table(f);
    const double budget = influence_profile(t).total_l1;
    std::vector<ConcentrationReport> out;
    out.reserve(d0_list.size() * delta_list.size());
    for (int d0 : d0_list)
        for (double delta : delta_list) out.push_back(concentration_report(t, d0, delta, budget));
    return out;
}

}  // namespace monofit
