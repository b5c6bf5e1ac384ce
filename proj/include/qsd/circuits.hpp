// circuits.hpp
// Classical circuits over {NOT, XOR, AND, TOFFOLI}, their compilation to
// Toffoli-only form, synthesis of phase-kickback HT generation circuits, a
// basis-state simulator for HT circuits, depth/size accounting, and the
// polynomial-evaluator circuit for the k-wise independent family.
//
// Wire convention for classical circuits: inputs occupy wires
// 0..input_count-1, ancillas follow with declared initial constants.
// Gate semantics on wire values:
//   NOT t      : t ^= 1
//   XOR a t    : t ^= a
//   AND a b t  : t ^= a & b   (builders keep the target a fresh 0 ancilla)
//   TOF a b t  : t ^= a & b   (controls may coincide, acting as a CNOT; this
//                              is what makes a single shared constant-1 wire
//                              sufficient for compiling NOT)

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qsd/phase_states.hpp"

namespace qsd::circuits {

enum class GateKind { Not, Xor, And, Toffoli };

struct Gate {
    GateKind kind = GateKind::Toffoli;
    unsigned a = 0;
    unsigned b = 0;
    unsigned target = 0;

    friend bool operator==(const Gate&, const Gate&) = default;
};

struct ClassicalCircuit {
    unsigned input_count = 0;
    std::vector<int> ancilla_init;  // wire input_count + i starts at this bit
    std::vector<Gate> gates;
    std::vector<unsigned> outputs;

    unsigned wire_count() const {
        return input_count + static_cast<unsigned>(ancilla_init.size());
    }
    void validate() const;
};

// Final value of every wire on the given input assignment (bit i of x feeds
// input wire i).
std::vector<int> evaluate(const ClassicalCircuit& c, std::uint64_t x);

// Output wires packed into an integer, bit i = outputs[i].
std::uint64_t eval_outputs(const ClassicalCircuit& c, std::uint64_t x);

struct Metrics {
    std::size_t size = 0;
    std::size_t depth = 0;
};

// Gate count and layered depth: gates touching disjoint wire sets may share
// a layer; assignment is greedy earliest-layer.
Metrics circuit_metrics(const ClassicalCircuit& c);

// Semantically equivalent Toffoli-only circuit:
//   NOT t     -> TOF c1 c1 t
//   XOR a t   -> TOF c1 a  t
//   AND a b t -> TOF a  b  t
// where c1 is a shared constant-1 ancilla (an existing never-written init-1
// ancilla if present, else a fresh one appended on demand). One gate per
// gate, so size is preserved exactly.
ClassicalCircuit compile_to_toffoli(const ClassicalCircuit& c);

// Circuit computing the boolean function with the given truth table
// (table[x] in {0,1}, size 2^n), via its XOR-of-ANDs normal form with
// temporary ancillas uncomputed and reused across monomials.
ClassicalCircuit truth_table_circuit(unsigned n,
                                     const std::vector<int>& table);

// Circuit evaluating a degree-(k-1) polynomial over GF(2^n) under the
// deterministic modulus for n. Inputs are the point x (wires 0..n-1)
// followed by the k coefficients c_0..c_{k-1} (n wires each); outputs are
// the n result wires. Powers of x come from a repeated-squaring chain,
// monomials from balanced product trees, and the term sum from XOR trees;
// fan-out goes through copy trees so depth stays polylogarithmic.
// Requires n <= 16 and k <= 64.
ClassicalCircuit build_kwise_circuit(unsigned n, unsigned k);

// Pins the trailing input wires to constants, turning them into leading
// ancillas. Wire indices, gates and outputs are unchanged; only the
// input/ancilla split moves. Fixing the coefficient wires of a
// build_kwise_circuit output to a sampled key yields the keyed function's
// circuit, ready for build_gbin_circuit once a single output is selected.
ClassicalCircuit bind_inputs(const ClassicalCircuit& c, unsigned keep,
                             const std::vector<int>& values);

// One parallel layer of Hadamards followed by Toffoli gates only. Qubits:
// data 0..data_count-1, the kickback qubit at index data_count (initially
// |1>), then ancillas with the declared constants.
struct HTCircuit {
    unsigned data_count = 0;
    std::vector<int> ancilla_init;
    std::vector<unsigned> hadamard_targets;
    std::vector<Gate> body;  // GateKind::Toffoli only

    unsigned kick_qubit() const { return data_count; }
    unsigned qubit_count() const {
        return data_count + 1 + static_cast<unsigned>(ancilla_init.size());
    }
    void validate() const;
};

// Phase-kickback generation circuit for the single-output classical circuit
// fc: Hadamards on the data qubits and on the kickback qubit, then the
// compiled Toffoli body of fc, a CNOT of the output wire into the kickback
// qubit, and the mirrored body to return every ancilla to its constant.
HTCircuit build_gbin_circuit(const ClassicalCircuit& fc);

// Simulates the HT circuit (at most 20 qubits): applies the Hadamard layer
// by tensor expansion, then each Toffoli as a basis permutation. Verifies
// that the ancillas sit at their declared constants and the kickback qubit
// factors out (throws std::runtime_error otherwise, which signals a
// compilation bug), and returns the state of the data qubits.
StateVector simulate_ht(const HTCircuit& c);

// size counts Hadamard and Toffoli gates alike; the Hadamard layer is the
// first layer by definition of the circuit class, so depth = 1 + layered
// body depth (or just the body depth when there are no Hadamards).
Metrics circuit_metrics(const HTCircuit& c);

// Text formats. Classical circuits:
//     INPUTS n / ANCILLA b (one per ancilla) / OUTPUT w... / gate lines
// HT circuits:
//     "QUBITS m; CONST1 w...; DATA 0..n-1; KICK q", then "H q" and
//     "TOF a b c" lines.
// '#' starts a comment; parse errors carry 1-based line numbers.
std::string to_text(const ClassicalCircuit& c);
std::string to_text(const HTCircuit& c);
ClassicalCircuit parse_classical(std::istream& in);
HTCircuit parse_ht(std::istream& in);

}  // namespace qsd::circuits
