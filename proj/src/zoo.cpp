#include "monofit/zoo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json_util.hpp"
#include "monofit/errors.hpp"
#include "monofit/fourier.hpp"
#include "monofit/influence.hpp"

namespace monofit {

static void check_dim(int dim) {
    if (dim < 1 || dim > kMaxDim)
        throw std::invalid_argument("function dim " + std::to_string(dim) + " outside [1, " +
                                    std::to_string(kMaxDim) + "]");
}

FunctionSpec make_dictator(int dim, int coordinate) {
    check_dim(dim);
    if (coordinate < 1 || coordinate > dim)
        throw std::invalid_argument("dictator coordinate outside [1, dim]");
    return FunctionSpec{dim, Dictator{coordinate}};
}

FunctionSpec make_additive_junta(int dim, std::vector<int> coordinates) {
    check_dim(dim);
    if (coordinates.empty())
        throw std::invalid_argument("additive junta needs at least one coordinate");
    std::sort(coordinates.begin(), coordinates.end());
    for (std::size_t k = 0; k < coordinates.size(); ++k) {
        if (coordinates[k] < 1 || coordinates[k] > dim)
            throw std::invalid_argument("additive junta coordinate outside [1, dim]");
        if (k > 0 && coordinates[k] == coordinates[k - 1])
            throw std::invalid_argument("additive junta has a duplicate coordinate");
    }
    return FunctionSpec{dim, AdditiveJunta{std::move(coordinates)}};
}

FunctionSpec make_tribes(int dim, int width, int blocks) {
    check_dim(dim);
    if (width < 1 || blocks < 1)
        throw std::invalid_argument("tribes width and blocks must be >= 1");
    if (static_cast<long long>(width) * blocks > dim)
        throw std::invalid_argument("tribes width*blocks exceeds dim");
    return FunctionSpec{dim, Tribes{width, blocks}};
}

FunctionSpec make_majority(int dim) {
    check_dim(dim);
    return FunctionSpec{dim, Majority{}};
}

FunctionSpec make_middle_layer(int dim, int s, Mask support, double beta, BitVec omega) {
    check_dim(dim);
    if (s < 1 || s > dim) throw std::invalid_argument("middle layer: s outside [1, dim]");
    if (s > 24)
        throw CapacityError("middle layer: s = " + std::to_string(s) +
                            " exceeds 24, the layer would be too wide");
    if ((support & ~full_mask(dim)) != 0)
        throw std::invalid_argument("middle layer: support has bits beyond dim");
    if (popcount(support) != s)
        throw std::invalid_argument("middle layer: support size differs from s");
    if (!(beta > 0.0 && beta <= 1.0))
        throw std::invalid_argument("middle layer: beta outside (0, 1]");
    const std::uint64_t layer = binomial(s, s / 2);
    if (omega.nbits != static_cast<int>(layer))
        throw std::invalid_argument("middle layer: omega has " + std::to_string(omega.nbits) +
                                    " bits, layer has " + std::to_string(layer));
    return FunctionSpec{dim, MiddleLayer{s, support, beta, std::move(omega)}};
}

FunctionSpec make_table_fn(TruthTable t) {
    const int dim = t.dim;
    check_dim(dim);
    if (t.values.size() != (std::size_t{1} << dim))
        throw std::invalid_argument("table function: value count mismatch");
    return FunctionSpec{dim, std::move(t)};
}

std::uint64_t layer_rank(Mask z) {
    // combinadic: rank among same-weight masks in increasing mask order
    std::uint64_t rank = 0;
    int j = 0;
    while (z) {
        int pos = std::countr_zero(z);
        ++j;
        rank += binomial(pos, j);
        z &= z - 1;
    }
    return rank;
}

Mask layer_point(int s, int m, std::uint64_t rank) {
    Mask z = 0;
    for (int j = m; j >= 1; --j) {
        int p = j - 1;  // smallest position that can carry the j-th bit
        while (p + 1 < s && binomial(p + 1, j) <= rank) ++p;
        z |= Mask{1} << p;
        rank -= binomial(p, j);
    }
    return z;
}

namespace {

struct Evaluator {
    int dim;
    Mask x;

    double operator()(const Dictator& f) const { return get_bit(x, f.coordinate - 1) ? 1.0 : 0.0; }

    double operator()(const AdditiveJunta& f) const {
        int c = 0;
        for (int i : f.coordinates) c += get_bit(x, i - 1);
        return static_cast<double>(c) / static_cast<double>(f.coordinates.size());
    }

    double operator()(const Tribes& f) const {
        for (int b = 0; b < f.blocks; ++b) {
            Mask block = full_mask(f.width) << (b * f.width);
            if ((x & block) == block) return 1.0;
        }
        return 0.0;
    }

    double operator()(const Majority& /*f*/) const {
        return 2 * popcount(x) > dim ? 1.0 : 0.0;
    }

    double operator()(const MiddleLayer& f) const {
        const int m = f.s / 2;
        const int k = popcount(x & f.support);
        if (k < m) return 0.0;
        if (k > m) return f.beta;
        // compress x onto the support coordinates, then rank within the layer
        Mask z = 0;
        int out = 0;
        Mask rest = f.support;
        while (rest) {
            int pos = std::countr_zero(rest);
            if (get_bit(x, pos)) z |= Mask{1} << out;
            ++out;
            rest &= rest - 1;
        }
        return f.omega.get(static_cast<int>(layer_rank(z))) ? f.beta : 0.0;
    }

    double operator()(const TruthTable& f) const { return f.values[x]; }
};

}  // namespace

double evaluate(const FunctionSpec& f, Mask x) {
    return std::visit(Evaluator{f.dim, x}, f.form);
}

TruthTable to_table(const FunctionSpec& f) {
    if (f.dim > kMaxDenseDim)
        throw CapacityError("to_table: dim " + std::to_string(f.dim) + " exceeds " +
                            std::to_string(kMaxDenseDim));
    TruthTable t = zero_table(f.dim);
    for (Mask x = 0; x < t.size(); ++x) t[x] = evaluate(f, x);
    return t;
}

namespace {

struct Tagger {
    std::string operator()(const Dictator& f) const {
        return "dictator_" + std::to_string(f.coordinate);
    }
    std::string operator()(const AdditiveJunta& f) const {
        std::string s = "junta";
        for (int i : f.coordinates) s += "_" + std::to_string(i);
        return s;
    }
    std::string operator()(const Tribes& f) const {
        return "tribes_w" + std::to_string(f.width) + "_b" + std::to_string(f.blocks);
    }
    std::string operator()(const Majority&) const { return "majority"; }
    std::string operator()(const MiddleLayer& f) const {
        return "middle_layer_s" + std::to_string(f.s);
    }
    std::string operator()(const TruthTable& f) const { return "table_d" + std::to_string(f.dim); }
};

std::vector<int> mask_to_coordinates(Mask m) {
    std::vector<int> out;
    while (m) {
        out.push_back(std::countr_zero(m) + 1);
        m &= m - 1;
    }
    return out;
}

Mask coordinates_to_mask(const nlohmann::json& arr, int dim, const std::string& what) {
    if (!arr.is_array()) throw ConfigError(what + ": coordinate list must be an array");
    Mask m = 0;
    for (const auto& v : arr) {
        if (!v.is_number_integer() && !v.is_number_unsigned())
            throw ConfigError(what + ": coordinates must be integers");
        long long i = v.get<long long>();
        if (i < 1 || i > dim) throw ConfigError(what + ": coordinate outside [1, dim]");
        m |= Mask{1} << (i - 1);
    }
    return m;
}

}  // namespace

std::string tag(const FunctionSpec& f) { return std::visit(Tagger{}, f.form); }

nlohmann::json to_json(const FunctionSpec& f) {
    using nlohmann::json;
    json j;
    j["dim"] = f.dim;
    std::visit(
        [&](const auto& form) {
            using T = std::decay_t<decltype(form)>;
            if constexpr (std::is_same_v<T, Dictator>) {
                j["kind"] = "dictator";
                j["coordinate"] = form.coordinate;
            } else if constexpr (std::is_same_v<T, AdditiveJunta>) {
                j["kind"] = "additive_junta";
                j["coordinates"] = form.coordinates;
            } else if constexpr (std::is_same_v<T, Tribes>) {
                j["kind"] = "tribes";
                j["width"] = form.width;
                j["blocks"] = form.blocks;
            } else if constexpr (std::is_same_v<T, Majority>) {
                j["kind"] = "majority";
            } else if constexpr (std::is_same_v<T, MiddleLayer>) {
                j["kind"] = "middle_layer";
                j["s"] = form.s;
                j["support"] = mask_to_coordinates(form.support);
                j["beta"] = form.beta;
                j["omega"] = to_hex(form.omega);
                j["omega_bits"] = form.omega.nbits;
            } else {
                j["kind"] = "table";
                j["values"] = form.values;
            }
        },
        f.form);
    return j;
}

FunctionSpec function_from_json(const nlohmann::json& j) {
    using jsonutil::expect_keys;
    using jsonutil::get_double;
    using jsonutil::get_int;
    using jsonutil::get_string;
    jsonutil::expect_object(j, "function");
    if (!j.contains("kind") || !j.contains("dim"))
        throw ConfigError("function: needs \"kind\" and \"dim\"");
    const std::string kind = get_string(j, "function", "kind");
    const int dim = static_cast<int>(get_int(j, "function", "dim"));
    try {
        if (kind == "dictator") {
            expect_keys(j, "function(dictator)", {"kind", "dim", "coordinate"});
            return make_dictator(dim, static_cast<int>(get_int(j, "function", "coordinate")));
        }
        if (kind == "additive_junta") {
            expect_keys(j, "function(additive_junta)", {"kind", "dim", "coordinates"});
            Mask m = coordinates_to_mask(j.at("coordinates"), dim, "function(additive_junta)");
            return make_additive_junta(dim, mask_to_coordinates(m));
        }
        if (kind == "tribes") {
            expect_keys(j, "function(tribes)", {"kind", "dim", "width", "blocks"});
            return make_tribes(dim, static_cast<int>(get_int(j, "function", "width")),
                               static_cast<int>(get_int(j, "function", "blocks")));
        }
        if (kind == "majority") {
            expect_keys(j, "function(majority)", {"kind", "dim"});
            return make_majority(dim);
        }
        if (kind == "middle_layer") {
            expect_keys(j, "function(middle_layer)",
                        {"kind", "dim", "s", "support", "beta", "omega", "omega_bits"});
            Mask support = coordinates_to_mask(j.at("support"), dim, "function(middle_layer)");
            int nbits = static_cast<int>(get_int(j, "function", "omega_bits"));
            BitVec omega = bitvec_from_hex(get_string(j, "function", "omega"), nbits);
            return make_middle_layer(dim, static_cast<int>(get_int(j, "function", "s")), support,
                                     get_double(j, "function", "beta"), std::move(omega));
        }
        if (kind == "table") {
            expect_keys(j, "function(table)", {"kind", "dim", "values"});
            const auto& vals = j.at("values");
            if (!vals.is_array()) throw ConfigError("function(table): values must be an array");
            std::vector<double> v;
            v.reserve(vals.size());
            for (const auto& e : vals) {
                if (!e.is_number()) throw ConfigError("function(table): values must be numbers");
                v.push_back(e.get<double>());
            }
            return make_table_fn(make_table(dim, std::move(v)));
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("function: ") + e.what());
    }
    throw ConfigError("function: unknown kind \"" + kind + "\"");
}

double tribes_influence_exact(int width, int blocks) {
    if (width < 1 || blocks < 1)
        throw std::invalid_argument("tribes width and blocks must be >= 1");
    const long long dim = static_cast<long long>(width) * blocks;
    if (dim > kMaxDenseDim)
        throw CapacityError("tribes_influence_exact: width*blocks exceeds " +
                            std::to_string(kMaxDenseDim));
    FunctionSpec f = make_tribes(static_cast<int>(dim), width, blocks);
    InfluenceProfile prof = influence_profile(to_table(f));
    // a coordinate is pivotal iff the rest of its block is all ones and no
    // other block is all ones
    const double closed =
        std::pow(2.0, -(width - 1)) * std::pow(1.0 - std::pow(2.0, -width), blocks - 1);
    for (double v : prof.l1)
        if (std::abs(v - closed) > 1e-12)
            throw std::logic_error("tribes influence mismatch against closed form");
    return prof.total_l1;
}

}  // namespace monofit
