// kwise.hpp
// Keyed k-wise independent function family f : Keys x {0,1}^n -> {0,1}^n,
// realized as evaluation of a random degree-(k-1) polynomial over GF(2^n)
// under the deterministic modulus for n, plus its 1-bit truncation.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsd/gf2n.hpp"

namespace qsd::kwise {

// Key = the k polynomial coefficients c_0..c_{k-1}, each an n-bit value.
struct KWiseKey {
    unsigned n = 0;
    unsigned k = 0;
    std::vector<std::uint64_t> coeffs;
};

// Draws k coefficients independently and uniformly from {0,...,2^n - 1}.
// Deterministic given the seed: the generator is std::mt19937_64 seeded
// directly with `seed`, and each coefficient takes the low n bits of one
// 64-bit draw (exact for power-of-two ranges).
KWiseKey sample_key(unsigned n, unsigned k, std::uint64_t seed);

// Polynomial evaluation at x in GF(2^n).
std::uint64_t eval_full(const KWiseKey& key, std::uint64_t x);

// Least significant bit of eval_full; the boolean-range function consumed by
// the phase-state constructions.
int eval_bit(const KWiseKey& key, std::uint64_t x);

struct KWiseReport {
    bool pass = false;
    double worst_deviation = 0.0;   // max |observed fraction - 2^{-nk}|
    std::uint64_t keys_checked = 0;
    std::uint64_t subsets_checked = 0;  // 0 when k > 2^n (vacuous)
};

// Exhaustively enumerates all 2^{nk} keys and checks that for every set of k
// distinct inputs and every output tuple the key fraction is exactly 2^{-nk}.
// Requires nk <= 16 and a work estimate small enough to finish in seconds;
// throws std::invalid_argument otherwise.
KWiseReport verify_kwise_exhaustive(unsigned n, unsigned k);

// JSON round trip of the key: {"n": ..., "k": ..., "coeffs": [...]}.
std::string key_to_json(const KWiseKey& key);
KWiseKey key_from_json(const std::string& text);

}  // namespace qsd::kwise
