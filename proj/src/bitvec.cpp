#include "monofit/bitvec.hpp"

#include <stdexcept>

namespace monofit {

int hamming(const BitVec& a, const BitVec& b) {
    if (a.nbits != b.nbits) throw std::invalid_argument("hamming: width mismatch");
    int d = 0;
    for (std::size_t w = 0; w < a.words.size(); ++w) d += popcount(a.words[w] ^ b.words[w]);
    return d;
}

static int nibble(const BitVec& v, int k) {
    int out = 0;
    for (int b = 0; b < 4; ++b) {
        int i = 4 * k + b;
        if (i < v.nbits && v.get(i)) out |= 1 << b;
    }
    return out;
}

std::string to_hex(const BitVec& v) {
    const int ndigits = (v.nbits + 3) / 4;
    std::string s(ndigits, '0');
    for (int k = 0; k < ndigits; ++k) {
        int n = nibble(v, k);
        s[ndigits - 1 - k] = "0123456789abcdef"[n];
    }
    return s;
}

BitVec bitvec_from_hex(const std::string& hex, int nbits) {
    const int ndigits = (nbits + 3) / 4;
    if (static_cast<int>(hex.size()) != ndigits)
        throw std::invalid_argument("bitvec_from_hex: expected " + std::to_string(ndigits) +
                                    " digits, got " + std::to_string(hex.size()));
    BitVec v(nbits);
    for (int k = 0; k < ndigits; ++k) {
        char c = hex[ndigits - 1 - k];
        int n;
        if (c >= '0' && c <= '9')
            n = c - '0';
        else if (c >= 'a' && c <= 'f')
            n = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F')
            n = c - 'A' + 10;
        else
            throw std::invalid_argument("bitvec_from_hex: bad digit");
        for (int b = 0; b < 4; ++b) {
            int i = 4 * k + b;
            if (n & (1 << b)) {
                if (i >= nbits)
                    throw std::invalid_argument("bitvec_from_hex: bit set beyond width");
                v.set(i, true);
            }
        }
    }
    return v;
}

}  // namespace monofit
