#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "monofit/bits.hpp"

namespace monofit {

// Bit vector of arbitrary fixed width; code words of the packing construction
// can be far wider than 64 bits (width = size of a middle layer).
struct BitVec {
    int nbits = 0;
    std::vector<std::uint64_t> words;  // bit i lives in words[i/64] at position i%64

    BitVec() = default;
    explicit BitVec(int n) : nbits(n), words((n + 63) / 64, 0) {}

    bool get(int i) const { return (words[i >> 6] >> (i & 63)) & 1; }
    void set(int i, bool v) {
        std::uint64_t b = std::uint64_t{1} << (i & 63);
        if (v)
            words[i >> 6] |= b;
        else
            words[i >> 6] &= ~b;
    }

    int count() const {
        int c = 0;
        for (auto w : words) c += popcount(w);
        return c;
    }

    bool operator==(const BitVec& o) const = default;
};

int hamming(const BitVec& a, const BitVec& b);

// Hex serialization, most significant nibble first, fixed width ceil(nbits/4).
std::string to_hex(const BitVec& v);
BitVec bitvec_from_hex(const std::string& hex, int nbits);

}  // namespace monofit
