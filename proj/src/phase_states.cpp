#include "qsd/phase_states.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qsd {

double StateVector::norm() const {
    double sum = 0.0;
    for (const auto& a : amplitudes) {
        sum += std::norm(a);
    }
    return std::sqrt(sum);
}

std::complex<double> StateVector::inner_product(const StateVector& other) const {
    if (amplitudes.size() != other.amplitudes.size()) {
        throw std::invalid_argument("StateVector: dimension mismatch");
    }
    std::complex<double> acc = 0.0;
    for (std::size_t i = 0; i < amplitudes.size(); ++i) {
        acc += std::conj(amplitudes[i]) * other.amplitudes[i];
    }
    return acc;
}

unsigned PhaseFunction::qubit_count() const {
    const std::size_t size = table.size();
    if (size == 0 || !std::has_single_bit(size)) {
        throw std::invalid_argument("PhaseFunction: table size must be 2^n");
    }
    return static_cast<unsigned>(std::countr_zero(size));
}

void PhaseFunction::validate() const {
    (void)qubit_count();
    for (std::uint64_t v : table) {
        if (v >= modulus) {
            throw std::invalid_argument(
                "PhaseFunction: table entry outside {0,...,modulus-1}");
        }
    }
}

StateVector gen_binary_phase(const PhaseFunction& f) {
    f.validate();
    if (f.modulus != 2) {
        throw std::invalid_argument("gen_binary_phase: modulus must be 2");
    }
    const unsigned n = f.qubit_count();
    const double amp = std::pow(2.0, -static_cast<double>(n) / 2.0);
    StateVector state{n, {}};
    state.amplitudes.reserve(f.table.size());
    for (std::uint64_t v : f.table) {
        state.amplitudes.emplace_back(v ? -amp : amp, 0.0);
    }
    return state;
}

StateVector gen_complex_phase(const PhaseFunction& f) {
    f.validate();
    const unsigned n = f.qubit_count();
    if (f.modulus != (1ULL << n)) {
        throw std::invalid_argument("gen_complex_phase: modulus must be 2^n");
    }
    const double amp = std::pow(2.0, -static_cast<double>(n) / 2.0);
    StateVector state{n, {}};
    state.amplitudes.reserve(f.table.size());
    for (std::uint64_t v : f.table) {
        const double angle = 2.0 * std::numbers::pi *
                             (static_cast<double>(v) /
                              static_cast<double>(f.modulus));
        state.amplitudes.push_back(std::polar(amp, angle));
    }
    return state;
}

void write_state_csv(std::ostream& out, const StateVector& state) {
    out << "index,re,im\n";
    char buf[64];
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g", i,
                      state.amplitudes[i].real(), state.amplitudes[i].imag());
        out << buf << '\n';
    }
}

StateVector read_state_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "index,re,im") {
        throw std::runtime_error("state csv: missing 'index,re,im' header");
    }
    StateVector state;
    std::size_t expected = 0;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        std::size_t index = 0;
        double re = 0.0;
        double im = 0.0;
        char c1 = 0;
        char c2 = 0;
        if (!(row >> index >> c1 >> re >> c2 >> im) || c1 != ',' || c2 != ',') {
            throw std::runtime_error("state csv: malformed row: " + line);
        }
        if (index != expected) {
            throw std::runtime_error("state csv: indices must ascend from 0");
        }
        state.amplitudes.emplace_back(re, im);
        ++expected;
    }
    if (state.amplitudes.empty() ||
        !std::has_single_bit(state.amplitudes.size())) {
        throw std::runtime_error("state csv: row count must be 2^n");
    }
    state.n = static_cast<unsigned>(std::countr_zero(state.amplitudes.size()));
    return state;
}

}  // namespace qsd
