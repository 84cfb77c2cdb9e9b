#include "monofit/noise.hpp"

#include <stdexcept>

#include "json_util.hpp"
#include "monofit/errors.hpp"

namespace monofit {

NoiseModel NoiseModel::gaussian(double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian noise: sigma must be > 0");
    return NoiseModel{Gaussian{sigma}};
}

NoiseModel NoiseModel::uniform_bounded(double half_width) {
    if (!(half_width > 0.0))
        throw std::invalid_argument("uniform noise: half_width must be > 0");
    return NoiseModel{UniformBounded{half_width}};
}

double NoiseModel::sub_gaussian_variance() const {
    return std::visit(
        [](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Gaussian>)
                return k.sigma * k.sigma;
            else if constexpr (std::is_same_v<T, UniformBounded>)
                return k.half_width * k.half_width;
            else
                return 0.0;
        },
        kind);
}

double NoiseModel::sample(Rng& rng) const {
    return std::visit(
        [&](const auto& k) -> double {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Gaussian>)
                return rng.normal(k.sigma);
            else if constexpr (std::is_same_v<T, UniformBounded>)
                return rng.uniform(-k.half_width, k.half_width);
            else
                return 0.0;
        },
        kind);
}

nlohmann::json to_json(const NoiseModel& m) {
    using nlohmann::json;
    return std::visit(
        [](const auto& k) -> json {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Gaussian>)
                return json{{"kind", "gaussian"}, {"sigma", k.sigma}};
            else if constexpr (std::is_same_v<T, UniformBounded>)
                return json{{"kind", "uniform"}, {"half_width", k.half_width}};
            else
                return json{{"kind", "none"}};
        },
        m.kind);
}

NoiseModel noise_from_json(const nlohmann::json& j) {
    jsonutil::expect_object(j, "noise");
    if (!j.contains("kind")) throw ConfigError("noise: missing field \"kind\"");
    const std::string kind = jsonutil::get_string(j, "noise", "kind");
    try {
        if (kind == "gaussian") {
            jsonutil::expect_keys(j, "noise(gaussian)", {"kind", "sigma"});
            return NoiseModel::gaussian(jsonutil::get_double(j, "noise", "sigma"));
        }
        if (kind == "uniform") {
            jsonutil::expect_keys(j, "noise(uniform)", {"kind", "half_width"});
            return NoiseModel::uniform_bounded(jsonutil::get_double(j, "noise", "half_width"));
        }
        if (kind == "none") {
            jsonutil::expect_keys(j, "noise(none)", {"kind"});
            return NoiseModel::none();
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("noise: ") + e.what());
    }
    throw ConfigError("noise: unknown kind \"" + kind + "\"");
}

}  // namespace monofit
