// gf2n.hpp
// Exact arithmetic in GF(2^n) with a deterministic modulus choice.
// Elements are n-bit polynomial coefficient vectors over GF(2), bit i holding
// the coefficient of x^i. All functions are pure and thread safe.

#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace qsd::gf2n {

// An element of GF(2^n). `width` is the ambient field degree n; operations
// reject mixed widths.
struct FieldElement {
    std::uint64_t bits = 0;
    unsigned width = 0;

    friend bool operator==(const FieldElement&, const FieldElement&) = default;
};

// A monic irreducible polynomial of degree n over GF(2). The leading x^n
// coefficient is implicit (always 1), so a non-monic modulus is
// unrepresentable; `low_bits` holds the coefficients of x^0..x^{n-1}.
struct FieldModulus {
    std::uint64_t low_bits = 0;
    unsigned degree = 0;

    friend bool operator==(const FieldModulus&, const FieldModulus&) = default;
};

FieldElement make_element(std::uint64_t bits, unsigned width);

// Addition is bitwise XOR (characteristic 2). Throws std::invalid_argument
// on width mismatch.
FieldElement gf_add(FieldElement a, FieldElement b);

// Carry-less product of a and b reduced modulo m. Portable shift-xor loop.
FieldElement gf_mul(FieldElement a, FieldElement b, const FieldModulus& m);

// Square-and-multiply exponentiation; a^0 = 1.
FieldElement gf_pow(FieldElement a, std::uint64_t e, const FieldModulus& m);

// Evaluates sum_{i<k} coeffs[i] * x^i by Horner's rule. Throws on an empty
// coefficient sequence.
FieldElement poly_eval(std::span<const FieldElement> coeffs, FieldElement x,
                       const FieldModulus& m);

// The lexicographically smallest (as an (n+1)-bit integer) monic irreducible
// polynomial of degree n. Results are memoized; 1 <= n <= 64.
//
// n = 1 is special-cased to x + 1 so that every returned modulus has a
// nonzero constant term; for n = 1 the quotient ring is GF(2) either way and
// arithmetic on the valid elements {0, 1} does not depend on the choice.
FieldModulus find_modulus(unsigned n);

// True iff x^degree + low_bits is irreducible over GF(2). Uses the
// polynomial-gcd (Ben-Or) criterion: no factor of degree <= n/2 exists iff
// gcd(x^{2^i} - x, p) = 1 for all i <= n/2.
bool is_irreducible(std::uint64_t low_bits, unsigned degree);

// Human-readable form, e.g. "x^3 + x + 1".
std::string to_string(const FieldModulus& m);

}  // namespace qsd::gf2n
