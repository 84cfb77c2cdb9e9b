#pragma once

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "monofit/bitvec.hpp"
#include "monofit/truth_table.hpp"

namespace monofit {

// Symbolic function forms, evaluable at any point for dim <= 64 without
// materializing a table. Coordinates are 1-based.

struct Dictator {
    int coordinate = 1;  // f(x) = x_coordinate
};

struct AdditiveJunta {
    std::vector<int> coordinates;  // f(x) = average of the listed coordinates
};

struct Tribes {
    int width = 1;   // OR of ANDs over consecutive blocks {1..w}, {w+1..2w}, ...
    int blocks = 1;  // width*blocks <= dim; trailing coordinates are ignored
};

struct Majority {};  // 1 when strictly more than half of all dim bits are set

// Supported on a fixed s-subset of coordinates: value 0 below the middle
// layer of that subcube, beta above it, and beta*omega[rank] on the layer
// itself, where rank indexes the weight-m points of the subcube in
// increasing mask order (m = s/2 rounded down).
struct MiddleLayer {
    int s = 0;
    Mask support = 0;  // the s coordinates, as a mask over [dim]
    double beta = 0.0;
    BitVec omega;  // nbits = C(s, m)
};

struct FunctionSpec {
    int dim = 0;
    std::variant<Dictator, AdditiveJunta, Tribes, Majority, MiddleLayer, TruthTable> form;
};

// Validating constructors.
FunctionSpec make_dictator(int dim, int coordinate);
FunctionSpec make_additive_junta(int dim, std::vector<int> coordinates);
FunctionSpec make_tribes(int dim, int width, int blocks);
FunctionSpec make_majority(int dim);
FunctionSpec make_middle_layer(int dim, int s, Mask support, double beta, BitVec omega);
FunctionSpec make_table_fn(TruthTable t);

double evaluate(const FunctionSpec& f, Mask x);
TruthTable to_table(const FunctionSpec& f);  // dim <= kMaxDenseDim

// Short identifier usable in CSV cells (no commas).
std::string tag(const FunctionSpec& f);

// Canonical JSON form; round trips losslessly through function_from_json.
nlohmann::json to_json(const FunctionSpec& f);
FunctionSpec function_from_json(const nlohmann::json& j);

// Total L1 influence of tribes computed from its table, cross-checked
// coordinate by coordinate against the closed form
// 2^-(w-1) * (1 - 2^-w)^(blocks-1) to 1e-12. width*blocks <= kMaxDenseDim.
double tribes_influence_exact(int width, int blocks);

// Rank of a weight-m mask z among all weight-m masks of width s, counting in
// increasing mask order. Inverse: layer_point(s, m, rank).
std::uint64_t layer_rank(Mask z);
Mask layer_point(int s, int m, std::uint64_t rank);

}  // namespace monofit
