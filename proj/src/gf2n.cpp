#include "qsd/gf2n.hpp"

#include <bit>
#include <map>
#include <mutex>
#include <stdexcept>

namespace qsd::gf2n {

namespace {

std::uint64_t width_mask(unsigned n) {
    return n >= 64 ? ~0ULL : (1ULL << n) - 1;
}

void check_element(const FieldElement& a, unsigned n) {
    if (a.width != n) {
        throw std::invalid_argument("gf2n: width mismatch");
    }
    if ((a.bits & ~width_mask(n)) != 0) {
        throw std::invalid_argument("gf2n: element bits exceed field width");
    }
}

// Carry-less multiply-and-reduce on raw bits. Shifts a left one position at a
// time, folding the overflow of x^n back in through the modulus low bits.
std::uint64_t clmul_reduce(std::uint64_t a, std::uint64_t b,
                           std::uint64_t mod_low, unsigned n) {
    const std::uint64_t mask = width_mask(n);
    const std::uint64_t top = n == 0 ? 0 : (1ULL << (n - 1));
    std::uint64_t acc = 0;
    while (b != 0) {
        if (b & 1) {
            acc ^= a;
        }
        b >>= 1;
        const bool carry = (a & top) != 0;
        a = (a << 1) & mask;
        if (carry) {
            a ^= mod_low & mask;
        }
    }
    return acc;
}

unsigned poly_degree(std::uint64_t p) {
    // degree of the zero polynomial is treated as 0 by callers that guard it
    return p == 0 ? 0 : 63 - static_cast<unsigned>(std::countl_zero(p));
}

// Remainder of a modulo s in GF(2)[x]; both fit in 64 bits.
std::uint64_t poly_mod(std::uint64_t a, std::uint64_t s) {
    const unsigned ds = poly_degree(s);
    while (a != 0 && poly_degree(a) >= ds) {
        a ^= s << (poly_degree(a) - ds);
    }
    return a;
}

std::uint64_t poly_gcd(std::uint64_t a, std::uint64_t b) {
    while (b != 0) {
        const std::uint64_t r = poly_mod(a, b);
        a = b;
        b = r;
    }
    return a;
}

// (x^degree + low_bits) mod s, for deg(s) < degree <= 64. Builds x^degree
// incrementally so nothing ever needs more than 64 bits.
std::uint64_t full_poly_mod(std::uint64_t low_bits, unsigned degree,
                            std::uint64_t s) {
    std::uint64_t xn = 1;
    for (unsigned i = 0; i < degree; ++i) {
        xn = poly_mod(xn << 1, s);
    }
    return xn ^ poly_mod(low_bits, s);
}

}  // namespace

FieldElement make_element(std::uint64_t bits, unsigned n) {
    if (n < 1 || n > 64) {
        throw std::invalid_argument("gf2n: field degree must be in [1, 64]");
    }
    if ((bits & ~width_mask(n)) != 0) {
        throw std::invalid_argument("gf2n: element bits exceed field width");
    }
    return FieldElement{bits, n};
}

FieldElement gf_add(FieldElement a, FieldElement b) {
    check_element(a, a.width);
    check_element(b, a.width);
    return FieldElement{a.bits ^ b.bits, a.width};
}

FieldElement gf_mul(FieldElement a, FieldElement b, const FieldModulus& m) {
    check_element(a, m.degree);
    check_element(b, m.degree);
    return FieldElement{clmul_reduce(a.bits, b.bits, m.low_bits, m.degree),
                        m.degree};
}

FieldElement gf_pow(FieldElement a, std::uint64_t e, const FieldModulus& m) {
    check_element(a, m.degree);
    std::uint64_t base = a.bits;
    std::uint64_t acc = 1;
    while (e != 0) {
        if (e & 1) {
            acc = clmul_reduce(acc, base, m.low_bits, m.degree);
        }
        base = clmul_reduce(base, base, m.low_bits, m.degree);
        e >>= 1;
    }
    return FieldElement{acc, m.degree};
}

FieldElement poly_eval(std::span<const FieldElement> coeffs, FieldElement x,
                       const FieldModulus& m) {
    if (coeffs.empty()) {
        throw std::invalid_argument("gf2n: empty coefficient sequence");
    }
    check_element(x, m.degree);
    std::uint64_t acc = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) {
        check_element(coeffs[i], m.degree);
        acc = clmul_reduce(acc, x.bits, m.low_bits, m.degree) ^ coeffs[i].bits;
    }
    return FieldElement{acc, m.degree};
}

bool is_irreducible(std::uint64_t low_bits, unsigned degree) {
    if (degree < 1 || degree > 64) {
        throw std::invalid_argument("gf2n: degree must be in [1, 64]");
    }
    if (degree == 1) {
        return true;
    }
    if ((low_bits & 1) == 0) {
        return false;  // divisible by x
    }
    // r tracks x^{2^i} mod p via repeated squaring in GF(2)[x]/(p).
    std::uint64_t r = 2;  // the polynomial x
    for (unsigned i = 1; i <= degree / 2; ++i) {
        r = clmul_reduce(r, r, low_bits, degree);
        const std::uint64_t probe = r ^ 2;  // x^{2^i} - x reduced mod p
        if (probe == 0) {
            return false;  // p divides x^{2^i} - x, so p has a small factor
        }
        // gcd(p, probe): one reduction of the full p brings it under 64 bits.
        if (poly_gcd(probe, full_poly_mod(low_bits, degree, probe)) != 1) {
            return false;
        }
    }
    return true;
}

FieldModulus find_modulus(unsigned n) {
    if (n < 1 || n > 64) {
        throw std::invalid_argument("gf2n: field degree must be in [1, 64]");
    }
    static std::mutex cache_mutex;
    static std::map<unsigned, FieldModulus> cache;
    std::scoped_lock lock(cache_mutex);
    if (auto it = cache.find(n); it != cache.end()) {
        return it->second;
    }
    FieldModulus m{0, n};
    if (n == 1) {
        m.low_bits = 1;  // x + 1; see header note
    } else {
        std::uint64_t low = 1;
        while (!is_irreducible(low, n)) {
            low += 2;  // constant term must stay 1 for n >= 2
        }
        m.low_bits = low;
    }
    cache.emplace(n, m);
    return m;
}

std::string to_string(const FieldModulus& m) {
    std::string out = "x^" + std::to_string(m.degree);
    for (unsigned i = m.degree; i-- > 0;) {
        if ((m.low_bits >> i) & 1) {
            if (i == 0) {
                out += " + 1";
            } else if (i == 1) {
                out += " + x";
            } else {
                out += " + x^" + std::to_string(i);
            }
        }
    }
    return out;
}

}  // namespace qsd::gf2n
