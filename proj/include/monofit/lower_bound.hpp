#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"
#include "monofit/bitvec.hpp"
#include "monofit/errors.hpp"
#include "monofit/zoo.hpp"

namespace monofit {

// Binary code with a guaranteed pairwise Hamming distance floor.
struct PackingCode {
    int length = 0;    // bits per word
    int min_dist = 1;  // every pair of kept words is at least this far apart
    std::uint64_t seed = 0;
    std::vector<BitVec> words;
};

// Thrown when the retry budget runs out first; carries what was packed.
struct PartialCodeError : InfeasibleError {
    PartialCodeError(const std::string& msg, PackingCode partial_)
        : InfeasibleError(msg), partial(std::move(partial_)) {}
    PackingCode partial;
};

// Greedy random packing: draw uniform words, keep those min_dist away from
// everything kept so far, stop at target_count. Draw budget: 50 * target_count.
// With min_dist = ceil(length/4), a maximal packing has at least e^(length/8)
// words, so modest targets succeed easily.
PackingCode vg_packing(int length, int min_dist, int target_count, std::uint64_t seed);

bool check_pairwise_distance(const PackingCode& code);

// Scale so the total L1 influence budget K is met with equality:
// beta = K / (coeff_a * sqrt(s)) with coeff_a = 2 sqrt(s) C(s, floor(s/2)) / 2^s.
// Throws InfeasibleError when beta would exceed 1.
struct BetaBudget {
    double beta = 0.0;
    double coeff_a = 0.0;
};
BetaBudget beta_from_budget(double k_budget, int s);

// Scale for an L2 influence budget: beta = sqrt(b_budget / (a1 * sqrt(s))).
double beta_b_from_budget(double b_budget, int s, double a1);
double default_a1(int s);  // max(coeff_a^2, coeff_a)

// A packed code interpreted as functions: word omega becomes the function
// that is 0 below the middle layer of the support subcube, beta above it,
// and beta*omega on it.
struct MiddleLayerFamily {
    int dim = 0;
    int s = 0;
    int m = 0;  // floor(s/2)
    Mask support = 0;
    double beta = 0.0;
    PackingCode code;

    int size() const { return static_cast<int>(code.words.size()); }
};

MiddleLayerFamily make_family(int dim, int s, double beta, PackingCode code);

// beta_from_budget + vg_packing(min_dist = ceil(layer/4)) + make_family.
struct FamilyBuild {
    MiddleLayerFamily family;
    double coeff_a = 0.0;
};
FamilyBuild build_family_l1(int dim, int s, double k_budget, int target_count,
                            std::uint64_t seed);

FunctionSpec make_f_omega(const MiddleLayerFamily& fam, int index);

// Exact squared L2 distance between members i and j: beta^2 d_H(w_i, w_j) / 2^s.
double separation(const MiddleLayerFamily& fam, int i, int j);

// KL divergence between the n-sample Gaussian experiments of two functions
// at squared L2 distance sq_l2_dist: n * sq_l2_dist / (2 sigma^2).
double kl_gaussian(double sq_l2_dist, long long n, double sigma);

// Mutual-information budget check: the worst-case pairwise KL bound
// n beta^2 / (2 sigma^2) against half the log of the family size.
struct FanoBudget {
    double kl_bar_bound = 0.0;
    double half_log_size = 0.0;
    bool satisfied = false;  // kl_bar_bound <= half_log_size
};
FanoBudget fano_budget(const MiddleLayerFamily& fam, long long n, double sigma);

// Per-member structural checks. Exhaustive on the support subcube for
// s <= 12; larger s gets seeded spot checks and exhaustive=false.
struct FamilyCheck {
    int index = 0;
    bool monotone = false;
    double min_value = 0.0;
    double max_value = 0.0;
    double total_l1 = 0.0;
    double total_l2 = 0.0;
    bool influence_ok = false;      // total_l1 <= k_budget + 1e-10
    bool derivative_identity = false;  // (D_i f)^2 == beta * D_i f pointwise, exact
    bool l2_budget_ok = true;       // total_l2 <= b_budget (when given)
};
struct FamilyReport {
    bool all_ok = false;
    bool exhaustive = false;
    double k_budget = 0.0;
    std::optional<double> b_budget;
    std::vector<FamilyCheck> checks;
};
FamilyReport verify_family(const MiddleLayerFamily& fam, double k_budget,
                           std::optional<double> b_budget = std::nullopt);

nlohmann::json to_json(const MiddleLayerFamily& fam);
MiddleLayerFamily family_from_json(const nlohmann::json& j);
nlohmann::json to_json(const FamilyReport& rep);

}  // namespace monofit
