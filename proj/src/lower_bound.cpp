#include "monofit/lower_bound.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "json_util.hpp"
#include "monofit/influence.hpp"
#include "monofit/rng.hpp"

namespace monofit {

PackingCode vg_packing(int length, int min_dist, int target_count, std::uint64_t seed) {
    if (length < 1) throw std::invalid_argument("vg_packing: length must be >= 1");
    if (min_dist < 1) throw std::invalid_argument("vg_packing: min_dist must be >= 1");
    if (min_dist > length)
        throw InfeasibleError("vg_packing: min_dist " + std::to_string(min_dist) +
                              " exceeds word length " + std::to_string(length));
    if (target_count < 1) throw std::invalid_argument("vg_packing: target_count must be >= 1");

    PackingCode code;
    code.length = length;
    code.min_dist = min_dist;
    code.seed = seed;

    Rng rng(seed);
    const int nwords = (length + 63) / 64;
    const int top = length & 63;
    const long long budget = 50LL * target_count;
    for (long long draw = 0; draw < budget; ++draw) {
        BitVec w(length);
        for (int k = 0; k < nwords; ++k) w.words[k] = rng.bits();
        if (top) w.words[nwords - 1] &= (std::uint64_t{1} << top) - 1;

        bool far_enough = true;
        for (const BitVec& kept : code.words) {
            if (hamming(kept, w) < min_dist) {
                far_enough = false;
                break;
            }
        }
        if (far_enough) {
            code.words.push_back(std::move(w));
            if (static_cast<int>(code.words.size()) == target_count) return code;
        }
    }
    throw PartialCodeError("vg_packing: found " + std::to_string(code.words.size()) +
                               " of " + std::to_string(target_count) + " words within " +
                               std::to_string(budget) + " draws",
                           std::move(code));
}

bool check_pairwise_distance(const PackingCode& code) {
    for (std::size_t i = 0; i < code.words.size(); ++i)
        for (std::size_t j = i + 1; j < code.words.size(); ++j)
            if (hamming(code.words[i], code.words[j]) < code.min_dist) return false;
    return true;
}

static double coeff_a(int s) {
    // exact middle-layer mass coefficient 2 sqrt(s) C(s, floor(s/2)) / 2^s
    return 2.0 * std::sqrt(static_cast<double>(s)) *
           static_cast<double>(binomial(s, s / 2)) / std::ldexp(1.0, s);
}

static void check_s(int s) {
    if (s < 1) throw std::invalid_argument("s must be >= 1");
    if (s > 24)
        throw CapacityError("s = " + std::to_string(s) +
                            " exceeds 24, the middle layer would be too wide");
}

BetaBudget beta_from_budget(double k_budget, int s) {
    check_s(s);
    if (!(k_budget > 0.0)) throw std::invalid_argument("beta_from_budget: budget must be > 0");
    const double a = coeff_a(s);
    const double beta = k_budget / (a * std::sqrt(static_cast<double>(s)));
    if (beta > 1.0)
        throw InfeasibleError("beta_from_budget: budget " + std::to_string(k_budget) +
                              " needs beta = " + std::to_string(beta) + " > 1 at s = " +
                              std::to_string(s));
    return BetaBudget{beta, a};
}

double beta_b_from_budget(double b_budget, int s, double a1) {
    check_s(s);
    if (!(b_budget > 0.0)) throw std::invalid_argument("beta_b_from_budget: budget must be > 0");
    if (!(a1 > 0.0)) throw std::invalid_argument("beta_b_from_budget: a1 must be > 0");
    const double beta = std::sqrt(b_budget / (a1 * std::sqrt(static_cast<double>(s))));
    if (beta > 1.0)
        throw InfeasibleError("beta_b_from_budget: budget " + std::to_string(b_budget) +
                              " needs beta = " + std::to_string(beta) + " > 1 at s = " +
                              std::to_string(s));
    return beta;
}

double default_a1(int s) {
    const double a = coeff_a(s);
    return std::max(a * a, a);
}

MiddleLayerFamily make_family(int dim, int s, double beta, PackingCode code) {
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("make_family: dim outside [1, 64]");
    check_s(s);
    if (s > dim) throw std::invalid_argument("make_family: s exceeds dim");
    if (!(beta > 0.0 && beta <= 1.0))
        throw std::invalid_argument("make_family: beta outside (0, 1]");
    const std::uint64_t layer = binomial(s, s / 2);
    if (code.length != static_cast<int>(layer))
        throw std::invalid_argument("make_family: code length " + std::to_string(code.length) +
                                    " differs from layer size " + std::to_string(layer));
    if (code.words.size() < 2)
        throw std::invalid_argument("make_family: need at least 2 code words");
    if (!check_pairwise_distance(code))
        throw std::invalid_argument("make_family: code violates its distance floor");
    MiddleLayerFamily fam;
    fam.dim = dim;
    fam.s = s;
    fam.m = s / 2;
    fam.support = full_mask(s);
    fam.beta = beta;
    fam.code = std::move(code);
    return fam;
}

FamilyBuild build_family_l1(int dim, int s, double k_budget, int target_count,
                            std::uint64_t seed) {
    check_s(s);
    const int layer = static_cast<int>(binomial(s, s / 2));
    const BetaBudget bb = beta_from_budget(k_budget, s);
    const int min_dist = (layer + 3) / 4;
    PackingCode code = vg_packing(layer, min_dist, target_count, seed);
    return FamilyBuild{make_family(dim, s, bb.beta, std::move(code)), bb.coeff_a};
}

FunctionSpec make_f_omega(const MiddleLayerFamily& fam, int index) {
    if (index < 0 || index >= fam.size())
        throw std::invalid_argument("make_f_omega: index outside the family");
    return make_middle_layer(fam.dim, fam.s, fam.support, fam.beta, fam.code.words[index]);
}

double separation(const MiddleLayerFamily& fam, int i, int j) {
    if (i < 0 || i >= fam.size() || j < 0 || j >= fam.size())
        throw std::invalid_argument("separation: index outside the family");
    const int dist = hamming(fam.code.words[i], fam.code.words[j]);
    return fam.beta * fam.beta * static_cast<double>(dist) / std::ldexp(1.0, fam.s);
}

double kl_gaussian(double sq_l2_dist, long long n, double sigma) {
    if (!(sq_l2_dist >= 0.0)) throw std::invalid_argument("kl_gaussian: negative distance");
    if (n < 1) throw std::invalid_argument("kl_gaussian: n must be >= 1");
    if (!(sigma > 0.0)) throw std::invalid_argument("kl_gaussian: sigma must be > 0");
    return static_cast<double>(n) * sq_l2_dist / (2.0 * sigma * sigma);
}

FanoBudget fano_budget(const MiddleLayerFamily& fam, long long n, double sigma) {
    if (n < 1) throw std::invalid_argument("fano_budget: n must be >= 1");
    if (!(sigma > 0.0)) throw std::invalid_argument("fano_budget: sigma must be > 0");
    FanoBudget out;
    // every pair is within beta^2 in squared L2 distance, so this bounds the
    // average pairwise KL of the n-sample experiments
    out.kl_bar_bound = kl_gaussian(fam.beta * fam.beta, n, sigma);
    out.half_log_size = 0.5 * std::log(static_cast<double>(fam.size()));
    out.satisfied = out.kl_bar_bound <= out.half_log_size;
    return out;
}

FamilyReport verify_family(const MiddleLayerFamily& fam, double k_budget,
                           std::optional<double> b_budget) {
    FamilyReport rep;
    rep.exhaustive = fam.s <= 12;
    rep.k_budget = k_budget;
    rep.b_budget = b_budget;
    rep.all_ok = true;

    for (int idx = 0; idx < fam.size(); ++idx) {
        FamilyCheck chk;
        chk.index = idx;
        // the function ignores coordinates outside the support, so every
        // check can run on the s-dimensional subcube
        FunctionSpec sub =
            make_middle_layer(fam.s, fam.s, full_mask(fam.s), fam.beta, fam.code.words[idx]);
        if (rep.exhaustive) {
            TruthTable t = to_table(sub);
            chk.monotone = is_monotone(t);
            chk.min_value = t.values[0];
            chk.max_value = t.values[0];
            for (double v : t.values) {
                chk.min_value = std::min(chk.min_value, v);
                chk.max_value = std::max(chk.max_value, v);
            }
            InfluenceProfile prof = influence_profile(t);
            chk.total_l1 = prof.total_l1;
            chk.total_l2 = prof.total_l2;
            chk.derivative_identity = true;
            for (int i = 0; i < fam.s && chk.derivative_identity; ++i) {
                const Mask bit = Mask{1} << i;
                for (Mask x = 0; x < t.size(); ++x) {
                    if (x & bit) continue;
                    const double d = t[x | bit] - t[x];
                    if (d * d != fam.beta * d) {  // exact: d is 0 or beta
                        chk.derivative_identity = false;
                        break;
                    }
                }
            }
        } else {
            // spot checks only
            Rng rng(derive_seed(fam.code.seed, static_cast<std::uint64_t>(idx)));
            chk.monotone = true;
            chk.derivative_identity = true;
            chk.min_value = chk.max_value = evaluate(sub, 0);
            double sum_l1 = 0.0, sum_l2 = 0.0;
            const int samples = 4096;
            for (int k = 0; k < samples; ++k) {
                Mask x = rng.point(fam.s);
                double v = evaluate(sub, x);
                chk.min_value = std::min(chk.min_value, v);
                chk.max_value = std::max(chk.max_value, v);
                int i = static_cast<int>(rng.bits() % static_cast<std::uint64_t>(fam.s));
                const Mask bit = Mask{1} << i;
                double d = evaluate(sub, x | bit) - evaluate(sub, x & ~bit);
                if (d < -1e-12) chk.monotone = false;
                if (d * d != fam.beta * d) chk.derivative_identity = false;
                sum_l1 += std::abs(d);
                sum_l2 += d * d;
            }
            chk.total_l1 = fam.s * sum_l1 / samples;
            chk.total_l2 = fam.s * sum_l2 / samples;
        }
        chk.influence_ok = chk.total_l1 <= k_budget + 1e-10;
        chk.l2_budget_ok = !b_budget || chk.total_l2 <= *b_budget + 1e-10;
        const bool range_ok = chk.min_value >= 0.0 && chk.max_value <= fam.beta;
        rep.all_ok = rep.all_ok && chk.monotone && chk.influence_ok &&
                     chk.derivative_identity && chk.l2_budget_ok && range_ok;
        rep.checks.push_back(std::move(chk));
    }
    return rep;
}

nlohmann::json to_json(const MiddleLayerFamily& fam) {
    nlohmann::json j;
    j["dim"] = fam.dim;
    j["s"] = fam.s;
    j["m"] = fam.m;
    std::vector<int> support;
    for (int i = 0; i < fam.dim; ++i)
        if (get_bit(fam.support, i)) support.push_back(i + 1);
    j["support"] = support;
    j["beta"] = fam.beta;
    j["code"]["length"] = fam.code.length;
    j["code"]["min_dist"] = fam.code.min_dist;
    j["code"]["seed"] = fam.code.seed;
    std::vector<std::string> words;
    words.reserve(fam.code.words.size());
    for (const BitVec& w : fam.code.words) words.push_back(to_hex(w));
    j["code"]["words"] = words;
    return j;
}

MiddleLayerFamily family_from_json(const nlohmann::json& j) {
    using jsonutil::expect_keys;
    expect_keys(j, "family", {"dim", "s", "m", "support", "beta", "code"});
    expect_keys(j.at("code"), "family.code", {"length", "min_dist", "seed", "words"});
    const int dim = static_cast<int>(jsonutil::get_int(j, "family", "dim"));
    const int s = static_cast<int>(jsonutil::get_int(j, "family", "s"));
    PackingCode code;
    const auto& cj = j.at("code");
    code.length = static_cast<int>(jsonutil::get_int(cj, "family.code", "length"));
    code.min_dist = static_cast<int>(jsonutil::get_int(cj, "family.code", "min_dist"));
    code.seed = jsonutil::get_uint64(cj, "family.code", "seed");
    if (!cj.at("words").is_array()) throw ConfigError("family.code: words must be an array");
    for (const auto& w : cj.at("words")) {
        if (!w.is_string()) throw ConfigError("family.code: words must be hex strings");
        code.words.push_back(bitvec_from_hex(w.get<std::string>(), code.length));
    }
    try {
        MiddleLayerFamily fam =
            make_family(dim, s, jsonutil::get_double(j, "family", "beta"), std::move(code));
        if (static_cast<int>(jsonutil::get_int(j, "family", "m")) != fam.m)
            throw ConfigError("family: m differs from floor(s/2)");
        Mask support = 0;
        for (const auto& v : j.at("support")) {
            long long i = v.get<long long>();
            if (i < 1 || i > dim) throw ConfigError("family: support coordinate outside [1, dim]");
            support |= Mask{1} << (i - 1);
        }
        if (support != fam.support)
            throw ConfigError("family: support must be the first s coordinates");
        return fam;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("family: ") + e.what());
    }
}

nlohmann::json to_json(const FamilyReport& rep) {
    nlohmann::json j;
    j["all_ok"] = rep.all_ok;
    j["exhaustive"] = rep.exhaustive;
    j["k_budget"] = rep.k_budget;
    if (rep.b_budget) j["b_budget"] = *rep.b_budget;
    j["checks"] = nlohmann::json::array();
    for (const FamilyCheck& c : rep.checks) {
        nlohmann::json cj;
        cj["index"] = c.index;
        cj["monotone"] = c.monotone;
        cj["min_value"] = c.min_value;
        cj["max_value"] = c.max_value;
        cj["total_l1"] = c.total_l1;
        cj["total_l2"] = c.total_l2;
        cj["influence_ok"] = c.influence_ok;
        cj["derivative_identity"] = c.derivative_identity;
        cj["l2_budget_ok"] = c.l2_budget_ok;
        j["checks"].push_back(std::move(cj));
    }
    return j;
}

}  // namespace monofit
