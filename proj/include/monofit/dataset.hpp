#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "monofit/bits.hpp"
#include "monofit/noise.hpp"
#include "monofit/zoo.hpp"

namespace monofit {

// Sample of (point, response) pairs in a fixed stored order; estimators that
// split the sample take the first half in this order.
struct Dataset {
    struct Provenance {
        FunctionSpec fn;
        NoiseModel noise;
        std::uint64_t seed = 0;
    };

    int dim = 0;
    std::vector<Mask> x;
    std::vector<double> y;
    std::optional<Provenance> provenance;

    std::size_t size() const { return x.size(); }
};

}  // namespace monofit
