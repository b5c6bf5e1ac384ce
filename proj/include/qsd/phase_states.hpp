// phase_states.hpp
// Direct construction of binary-phase and complex-phase state vectors from a
// phase function table.

#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

namespace qsd {

// 2^n complex amplitudes of unit norm, indexed by n-bit strings (bit i of the
// index is coordinate i of the string).
struct StateVector {
    unsigned n = 0;
    std::vector<std::complex<double>> amplitudes;

    std::size_t dim() const { return amplitudes.size(); }
    double norm() const;
    std::complex<double> inner_product(const StateVector& other) const;
};

// A table of 2^n phase values with resolution `modulus` (2 for binary phase,
// 2^n for complex phase). Entries must lie in {0,...,modulus-1}.
struct PhaseFunction {
    std::vector<std::uint64_t> table;
    std::uint64_t modulus = 2;

    unsigned qubit_count() const;
    void validate() const;
};

// amplitude(x) = 2^{-n/2} * (-1)^{f(x)}; requires f.modulus == 2. Amplitudes
// are exactly real.
StateVector gen_binary_phase(const PhaseFunction& f);

// amplitude(x) = 2^{-n/2} * exp(2*pi*i*f(x) / 2^n); requires
// f.modulus == 2^n. Each phase angle is computed directly from the rational
// f(x)/2^n rather than by accumulating root-of-unity products.
StateVector gen_complex_phase(const PhaseFunction& f);

// CSV with header "index,re,im", one row per basis state, index ascending.
void write_state_csv(std::ostream& out, const StateVector& state);
StateVector read_state_csv(std::istream& in);

}  // namespace qsd
