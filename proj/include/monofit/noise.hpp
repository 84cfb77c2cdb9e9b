#pragma once

#include <variant>

#include "json.hpp"
#include "monofit/rng.hpp"

namespace monofit {

struct Gaussian {
    double sigma = 1.0;
};
struct UniformBounded {
    double half_width = 1.0;  // uniform on [-half_width, half_width]
};
struct NoNoise {};

// Centered sub-Gaussian response noise.
struct NoiseModel {
    std::variant<Gaussian, UniformBounded, NoNoise> kind = NoNoise{};

    static NoiseModel gaussian(double sigma);
    static NoiseModel uniform_bounded(double half_width);
    static NoiseModel none() { return NoiseModel{NoNoise{}}; }

    // Sub-Gaussian variance proxy: sigma^2, half_width^2, or 0.
    double sub_gaussian_variance() const;

    double sample(Rng& rng) const;
};

nlohmann::json to_json(const NoiseModel& m);
NoiseModel noise_from_json(const nlohmann::json& j);

}  // namespace monofit
