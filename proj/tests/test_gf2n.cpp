#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <random>
#include <thread>
#include <vector>

#include "qsd/gf2n.hpp"

using namespace qsd::gf2n;

namespace {

unsigned deg(std::uint64_t p) {
    unsigned d = 0;
    while (p >> (d + 1)) {
        ++d;
    }
    return d;
}

// remainder of a / b in GF(2)[x], test-side oracle
std::uint64_t poly_rem(std::uint64_t a, std::uint64_t b) {
    while (a != 0 && deg(a) >= deg(b)) {
        a ^= b << (deg(a) - deg(b));
    }
    return a;
}

// literal trial division: p (full bits, degree d) has no monic divisor of
// degree 1..d/2
bool irreducible_by_trial_division(std::uint64_t p) {
    const unsigned d = deg(p);
    for (unsigned dd = 1; dd <= d / 2; ++dd) {
        for (std::uint64_t low = 0; low < (1ULL << dd); ++low) {
            const std::uint64_t divisor = (1ULL << dd) | low;
            if (poly_rem(p, divisor) == 0) {
                return false;
            }
        }
    }
    return true;
}

std::uint64_t smallest_irreducible_full(unsigned n) {
    for (std::uint64_t low = 0; low < (1ULL << n); ++low) {
        if (irreducible_by_trial_division((1ULL << n) | low)) {
            return (1ULL << n) | low;
        }
    }
    return 0;
}

// carry-less schoolbook product followed by long reduction, independent of
// the library's fused multiply path (valid for 2*deg < 64)
std::uint64_t mul_oracle(std::uint64_t a, std::uint64_t b,
                         std::uint64_t full_mod) {
    std::uint64_t prod = 0;
    for (unsigned i = 0; i < 32; ++i) {
        if ((b >> i) & 1) {
            prod ^= a << i;
        }
    }
    return poly_rem(prod, full_mod);
}

FieldElement fe(std::uint64_t bits, unsigned n) { return make_element(bits, n); }

}  // namespace

TEST_CASE("find_modulus matches the trial-division oracle for n = 2..16") {
    for (unsigned n = 2; n <= 16; ++n) {
        const FieldModulus m = find_modulus(n);
        const std::uint64_t full = (1ULL << n) | m.low_bits;
        CHECK(full == smallest_irreducible_full(n));
        CHECK(is_irreducible(m.low_bits, n));
    }
}

TEST_CASE("find_modulus known small cases") {
    CHECK(find_modulus(2).low_bits == 0b11);    // x^2 + x + 1
    CHECK(find_modulus(3).low_bits == 0b011);   // x^3 + x + 1
    // n = 1 is special-cased to x + 1 (x itself is irreducible and smaller,
    // but the constant-term-1 convention is kept uniform)
    CHECK(find_modulus(1).low_bits == 0b1);
    CHECK(to_string(find_modulus(3)) == "x^3 + x + 1");
}

TEST_CASE("find_modulus handles large degrees quickly") {
    const FieldModulus m64 = find_modulus(64);
    CHECK(m64.degree == 64);
    CHECK(is_irreducible(m64.low_bits, 64));
    // no smaller candidate is irreducible
    for (std::uint64_t low = 1; low < m64.low_bits; low += 2) {
        CHECK_FALSE(is_irreducible(low, 64));
    }
}

TEST_CASE("gf_add") {
    CHECK(gf_add(fe(0b011, 3), fe(0b101, 3)).bits == 0b110);
    for (std::uint64_t a = 0; a < 8; ++a) {
        CHECK(gf_add(fe(a, 3), fe(a, 3)).bits == 0);
        CHECK(gf_add(fe(0, 3), fe(a, 3)).bits == a);
    }
    CHECK_THROWS_AS(gf_add(fe(1, 2), fe(1, 3)), std::invalid_argument);
}

TEST_CASE("gf_mul against the GF(4) table and identities") {
    const FieldModulus m = find_modulus(2);
    // x * x = x + 1 under x^2 + x + 1
    CHECK(gf_mul(fe(0b10, 2), fe(0b10, 2), m).bits == 0b11);
    const std::uint64_t full = (1ULL << 2) | m.low_bits;
    for (std::uint64_t a = 0; a < 4; ++a) {
        for (std::uint64_t b = 0; b < 4; ++b) {
            CHECK(gf_mul(fe(a, 2), fe(b, 2), m).bits == mul_oracle(a, b, full));
        }
        CHECK(gf_mul(fe(1, 2), fe(a, 2), m).bits == a);
        CHECK(gf_mul(fe(a, 2), fe(0, 2), m).bits == 0);
    }
}

TEST_CASE("gf_mul equals the schoolbook oracle exhaustively for n <= 4") {
    for (unsigned n = 1; n <= 4; ++n) {
        const FieldModulus m = find_modulus(n);
        const std::uint64_t full = (1ULL << n) | m.low_bits;
        for (std::uint64_t a = 0; a < (1ULL << n); ++a) {
            for (std::uint64_t b = 0; b < (1ULL << n); ++b) {
                CHECK(gf_mul(fe(a, n), fe(b, n), m).bits ==
                      mul_oracle(a, b, full));
            }
        }
    }
}

TEST_CASE("field axioms hold exhaustively for n <= 4") {
    for (unsigned n = 1; n <= 4; ++n) {
        const FieldModulus m = find_modulus(n);
        const std::uint64_t size = 1ULL << n;
        for (std::uint64_t a = 0; a < size; ++a) {
            for (std::uint64_t b = 0; b < size; ++b) {
                CHECK(gf_add(fe(a, n), fe(b, n)) == gf_add(fe(b, n), fe(a, n)));
                CHECK(gf_mul(fe(a, n), fe(b, n), m) ==
                      gf_mul(fe(b, n), fe(a, n), m));
                for (std::uint64_t c = 0; c < size; ++c) {
                    const auto ab_c =
                        gf_mul(gf_mul(fe(a, n), fe(b, n), m), fe(c, n), m);
                    const auto a_bc =
                        gf_mul(fe(a, n), gf_mul(fe(b, n), fe(c, n), m), m);
                    CHECK(ab_c == a_bc);
                    const auto lhs = gf_mul(
                        fe(a, n), gf_add(fe(b, n), fe(c, n)), m);
                    const auto rhs =
                        gf_add(gf_mul(fe(a, n), fe(b, n), m),
                               gf_mul(fe(a, n), fe(c, n), m));
                    CHECK(lhs == rhs);
                }
            }
        }
    }
}

TEST_CASE("gf_pow basics and GF(4) generator order") {
    const FieldModulus m = find_modulus(2);
    CHECK(gf_pow(fe(0b10, 2), 0, m).bits == 1);
    CHECK(gf_pow(fe(0b10, 2), 1, m).bits == 0b10);
    CHECK(gf_pow(fe(0b10, 2), 3, m).bits == 1);  // GF(4)* has order 3
}

TEST_CASE("every nonzero element has order dividing 2^n - 1, n <= 8") {
    for (unsigned n = 1; n <= 8; ++n) {
        const FieldModulus m = find_modulus(n);
        const std::uint64_t group_order = (1ULL << n) - 1;
        for (std::uint64_t a = 1; a < (1ULL << n); ++a) {
            CHECK(gf_pow(fe(a, n), group_order, m).bits == 1);
        }
    }
}

TEST_CASE("poly_eval basics") {
    const FieldModulus m = find_modulus(2);
    const std::vector<FieldElement> constant{fe(0b11, 2)};
    const std::vector<FieldElement> identity{fe(0, 2), fe(1, 2)};
    for (std::uint64_t x = 0; x < 4; ++x) {
        CHECK(poly_eval(constant, fe(x, 2), m).bits == 0b11);
        CHECK(poly_eval(identity, fe(x, 2), m).bits == x);
    }
    // c0 + c1*x = 01 + 10*11 = 01 + 01 = 00
    const std::vector<FieldElement> example{fe(0b01, 2), fe(0b10, 2)};
    CHECK(poly_eval(example, fe(0b11, 2), m).bits == 0b00);

    const std::vector<FieldElement> empty;
    CHECK_THROWS_AS(poly_eval(empty, fe(0, 2), m), std::invalid_argument);
}

TEST_CASE("concurrent callers see identical moduli and products") {
    std::vector<std::vector<std::uint64_t>> results(4);
    std::vector<std::thread> workers;
    for (auto& out : results) {
        workers.emplace_back([&out] {
            for (unsigned n = 1; n <= 16; ++n) {
                const FieldModulus m = find_modulus(n);
                out.push_back(m.low_bits);
                const std::uint64_t mask = (1ULL << n) - 1;
                out.push_back(
                    gf_mul(fe(0x5a5a & mask, n), fe(0x3c3c & mask, n), m).bits);
            }
        });
    }
    for (auto& w : workers) {
        w.join();
    }
    for (std::size_t i = 1; i < results.size(); ++i) {
        CHECK(results[i] == results[0]);
    }
}

TEST_CASE("Horner evaluation equals the monomial sum on random instances") {
    std::mt19937_64 rng(20240517);
    for (int trial = 0; trial < 1000; ++trial) {
        const unsigned n = 1 + static_cast<unsigned>(rng() % 16);
        const unsigned k = 1 + static_cast<unsigned>(rng() % 8);
        const FieldModulus m = find_modulus(n);
        const std::uint64_t mask = (1ULL << n) - 1;
        std::vector<FieldElement> coeffs;
        for (unsigned i = 0; i < k; ++i) {
            coeffs.push_back(fe(rng() & mask, n));
        }
        const FieldElement x = fe(rng() & mask, n);
        FieldElement by_monomials = fe(0, n);
        for (unsigned i = 0; i < k; ++i) {
            by_monomials = gf_add(
                by_monomials, gf_mul(coeffs[i], gf_pow(x, i, m), m));
        }
        CHECK(poly_eval(coeffs, x, m) == by_monomials);
    }
}
