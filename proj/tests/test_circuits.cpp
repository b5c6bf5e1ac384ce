#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qsd/circuits.hpp"
#include "qsd/kwise.hpp"
#include "qsd/phase_states.hpp"

using namespace qsd;
using namespace qsd::circuits;

namespace {

// random circuit over the full gate set; AND targets are fresh 0 ancillas
ClassicalCircuit random_circuit(unsigned inputs, unsigned gate_count,
                                std::mt19937_64& rng) {
    ClassicalCircuit c;
    c.input_count = inputs;
    c.ancilla_init = {0, 1};  // one scratch wire, one preset constant
    auto wire = [&]() { return static_cast<unsigned>(rng() % c.wire_count()); };
    for (unsigned g = 0; g < gate_count; ++g) {
        switch (rng() % 4) {
            case 0: {
                const unsigned t = wire();
                c.gates.push_back({GateKind::Not, t, t, t});
                break;
            }
            case 1: {
                const unsigned a = wire();
                unsigned t = wire();
                while (t == a) {
                    t = wire();
                }
                c.gates.push_back({GateKind::Xor, a, 0, t});
                break;
            }
            case 2: {
                const unsigned a = wire();
                const unsigned b = wire();
                c.ancilla_init.push_back(0);
                c.gates.push_back({GateKind::And, a, b, c.wire_count() - 1});
                break;
            }
            default: {
                const unsigned a = wire();
                const unsigned b = wire();
                unsigned t = wire();
                while (t == a || t == b) {
                    t = wire();
                }
                c.gates.push_back({GateKind::Toffoli, a, b, t});
                break;
            }
        }
    }
    c.outputs = {static_cast<unsigned>(rng() % c.wire_count())};
    c.validate();
    return c;
}

ClassicalCircuit and_circuit() {
    // f(x0, x1) = x0 & x1 into a fresh ancilla
    ClassicalCircuit c;
    c.input_count = 2;
    c.ancilla_init = {0};
    c.gates.push_back({GateKind::And, 0, 1, 2});
    c.outputs = {2};
    return c;
}

}  // namespace

TEST_CASE("evaluate semantics") {
    ClassicalCircuit c;
    c.input_count = 2;
    c.ancilla_init = {0, 1};
    c.gates = {
        {GateKind::And, 0, 1, 2},   // w2 = x0 & x1
        {GateKind::Xor, 3, 0, 2},   // w2 ^= 1
        {GateKind::Not, 0, 0, 3},   // w3 = 0
    };
    c.outputs = {2, 3};
    for (std::uint64_t x = 0; x < 4; ++x) {
        const auto wires = evaluate(c, x);
        const int x0 = static_cast<int>(x & 1);
        const int x1 = static_cast<int>((x >> 1) & 1);
        CHECK(wires[2] == ((x0 & x1) ^ 1));
        CHECK(wires[3] == 0);
        CHECK(eval_outputs(c, x) ==
              static_cast<std::uint64_t>((x0 & x1) ^ 1));
    }
    CHECK_THROWS_AS(evaluate(c, 4), std::invalid_argument);
}

TEST_CASE("validate rejects malformed gates") {
    ClassicalCircuit c;
    c.input_count = 1;
    c.gates = {{GateKind::Xor, 0, 0, 0}};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.gates = {{GateKind::Toffoli, 0, 1, 1}};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.gates = {{GateKind::Not, 0, 0, 5}};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("compile_to_toffoli maps NOT through two constant-1 controls") {
    ClassicalCircuit c;
    c.input_count = 1;
    c.ancilla_init = {};
    c.gates = {{GateKind::Not, 0, 0, 0}};
    const ClassicalCircuit compiled = compile_to_toffoli(c);
    REQUIRE(compiled.gates.size() == 1);
    CHECK(compiled.gates[0].kind == GateKind::Toffoli);
    CHECK(compiled.gates[0].a == compiled.gates[0].b);  // shared constant wire
    CHECK(compiled.ancilla_init.back() == 1);
    for (std::uint64_t x = 0; x < 2; ++x) {
        CHECK(evaluate(compiled, x)[0] == evaluate(c, x)[0]);
    }
}

TEST_CASE("AND into a zero ancilla is a plain Toffoli") {
    const ClassicalCircuit c = and_circuit();
    const ClassicalCircuit compiled = compile_to_toffoli(c);
    REQUIRE(compiled.gates.size() == 1);
    CHECK(compiled.gates[0] == Gate{GateKind::Toffoli, 0, 1, 2});
    for (std::uint64_t x = 0; x < 4; ++x) {
        CHECK(eval_outputs(compiled, x) == ((x & 1) & (x >> 1)));
    }
}

TEST_CASE("compiled circuits agree with the originals on every input") {
    std::mt19937_64 rng(2024);
    for (unsigned inputs : {2u, 4u, 7u, 10u}) {
        for (int trial = 0; trial < 6; ++trial) {
            const ClassicalCircuit c = random_circuit(inputs, 50, rng);
            const ClassicalCircuit compiled = compile_to_toffoli(c);
            CHECK(compiled.gates.size() == c.gates.size());
            for (const Gate& g : compiled.gates) {
                CHECK(g.kind == GateKind::Toffoli);
            }
            for (std::uint64_t x = 0; x < (1ULL << inputs); ++x) {
                const auto original = evaluate(c, x);
                const auto mapped = evaluate(compiled, x);
                for (std::size_t w = 0; w < original.size(); ++w) {
                    CHECK(mapped[w] == original[w]);
                }
            }
        }
    }
}

TEST_CASE("a Toffoli body followed by its mirror is the identity") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
        const unsigned inputs = 2 + static_cast<unsigned>(rng() % 3);
        ClassicalCircuit c = compile_to_toffoli(random_circuit(inputs, 30, rng));
        if (c.wire_count() > 12) {
            continue;
        }
        ClassicalCircuit doubled = c;
        doubled.gates.insert(doubled.gates.end(), c.gates.rbegin(),
                             c.gates.rend());
        for (std::uint64_t x = 0; x < (1ULL << inputs); ++x) {
            const auto wires = evaluate(doubled, x);
            for (unsigned i = 0; i < inputs; ++i) {
                CHECK(wires[i] == static_cast<int>((x >> i) & 1));
            }
            for (std::size_t i = 0; i < c.ancilla_init.size(); ++i) {
                CHECK(wires[c.input_count + i] == c.ancilla_init[i]);
            }
        }
    }
}

TEST_CASE("truth_table_circuit computes every 3-input function") {
    for (unsigned n = 1; n <= 3; ++n) {
        const std::uint64_t size = 1ULL << n;
        for (std::uint64_t f = 0; f < (1ULL << size); ++f) {
            std::vector<int> table(size);
            for (std::uint64_t x = 0; x < size; ++x) {
                table[x] = static_cast<int>((f >> x) & 1);
            }
            const ClassicalCircuit c = truth_table_circuit(n, table);
            for (std::uint64_t x = 0; x < size; ++x) {
                CHECK(eval_outputs(c, x) ==
                      static_cast<std::uint64_t>(table[x]));
            }
        }
    }
}

TEST_CASE("circuit_metrics") {
    ClassicalCircuit empty;
    empty.input_count = 2;
    CHECK(circuit_metrics(empty).size == 0);
    CHECK(circuit_metrics(empty).depth == 0);

    const ClassicalCircuit one = and_circuit();
    CHECK(circuit_metrics(one).size == 1);
    CHECK(circuit_metrics(one).depth == 1);

    // two gates on disjoint wires share a layer, a dependent third does not
    ClassicalCircuit c;
    c.input_count = 4;
    c.ancilla_init = {0, 0};
    c.gates = {
        {GateKind::And, 0, 1, 4},
        {GateKind::And, 2, 3, 5},
        {GateKind::Xor, 4, 0, 5},
    };
    CHECK(circuit_metrics(c).size == 3);
    CHECK(circuit_metrics(c).depth == 2);
}

TEST_CASE("build_gbin_circuit on the AND function") {
    const HTCircuit ht = build_gbin_circuit(and_circuit());
    ht.validate();
    CHECK(ht.data_count == 2);
    const StateVector state = simulate_ht(ht);
    // expected: (|00> + |01> + |10> - |11>) / 2
    CHECK(state.amplitudes[0].real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(state.amplitudes[1].real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(state.amplitudes[2].real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(state.amplitudes[3].real() == doctest::Approx(-0.5).epsilon(1e-12));

    // matches the direct generator on the AND truth table
    const PhaseFunction f{{0, 0, 0, 1}, 2};
    const StateVector direct = gen_binary_phase(f);
    CHECK(std::abs(state.inner_product(direct)) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("gbin depth is the body depth plus the Hadamard layer") {
    std::vector<int> table{0, 1, 1, 0, 0, 1, 0, 1};
    const ClassicalCircuit fc = truth_table_circuit(3, table);
    const HTCircuit ht = build_gbin_circuit(fc);
    const Metrics m = circuit_metrics(ht);
    ClassicalCircuit body_only;
    body_only.input_count = ht.qubit_count();
    body_only.gates = ht.body;
    CHECK(m.depth == circuit_metrics(body_only).depth + 1);
    CHECK(m.size == ht.body.size() + ht.data_count + 1);
}

TEST_CASE("gbin matches gen_binary_phase for every truth table, n <= 2") {
    for (unsigned n = 1; n <= 2; ++n) {
        const std::uint64_t size = 1ULL << n;
        for (std::uint64_t f = 0; f < (1ULL << size); ++f) {
            std::vector<int> table(size);
            PhaseFunction pf{std::vector<std::uint64_t>(size), 2};
            for (std::uint64_t x = 0; x < size; ++x) {
                table[x] = static_cast<int>((f >> x) & 1);
                pf.table[x] = table[x];
            }
            const StateVector simulated =
                simulate_ht(build_gbin_circuit(truth_table_circuit(n, table)));
            const StateVector direct = gen_binary_phase(pf);
            CHECK(std::abs(simulated.inner_product(direct)) ==
                  doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("gbin matches gen_binary_phase for random 4-qubit functions") {
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> table(16);
        PhaseFunction pf{std::vector<std::uint64_t>(16), 2};
        for (std::size_t x = 0; x < 16; ++x) {
            table[x] = static_cast<int>(rng() & 1);
            pf.table[x] = table[x];
        }
        const HTCircuit ht = build_gbin_circuit(truth_table_circuit(4, table));
        REQUIRE(ht.qubit_count() <= 20);
        const StateVector simulated = simulate_ht(ht);
        CHECK(std::abs(simulated.inner_product(gen_binary_phase(pf))) ==
              doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("simulate_ht basics and error paths") {
    // empty body, Hadamards on the data qubits only
    HTCircuit plus;
    plus.data_count = 3;
    plus.hadamard_targets = {0, 1, 2};
    const StateVector state = simulate_ht(plus);
    for (const auto& a : state.amplitudes) {
        CHECK(a.real() == doctest::Approx(std::pow(0.5, 1.5)).epsilon(1e-12));
    }
    CHECK(std::abs(state.norm() - 1.0) < 1e-12);

    // an ancilla left holding data is flagged
    HTCircuit bad;
    bad.data_count = 1;
    bad.ancilla_init = {0};
    bad.hadamard_targets = {0};
    bad.body = {{GateKind::Toffoli, 0, 0, 2}};  // ancilla = data bit
    CHECK_THROWS_AS(simulate_ht(bad), std::runtime_error);

    // kick entangled with data is flagged
    HTCircuit kicked;
    kicked.data_count = 1;
    kicked.hadamard_targets = {0};
    kicked.body = {{GateKind::Toffoli, 0, 0, 1}};
    CHECK_THROWS_AS(simulate_ht(kicked), std::runtime_error);

    HTCircuit big;
    big.data_count = 20;
    CHECK_THROWS_AS(simulate_ht(big), std::invalid_argument);
}

TEST_CASE("HT metrics count the Hadamard layer as one layer") {
    HTCircuit c;
    c.data_count = 2;
    c.hadamard_targets = {0, 1, 2};
    CHECK(circuit_metrics(c).size == 3);
    CHECK(circuit_metrics(c).depth == 1);
    c.body.push_back({GateKind::Toffoli, 0, 1, 2});
    CHECK(circuit_metrics(c).size == 4);
    CHECK(circuit_metrics(c).depth == 2);
}

TEST_CASE("kwise circuit matches eval_full on every key and input at n=2,k=2") {
    const ClassicalCircuit c = build_kwise_circuit(2, 2);
    CHECK(c.input_count == 6);  // x plus two 2-bit coefficients
    for (std::uint64_t keybits = 0; keybits < 16; ++keybits) {
        const kwise::KWiseKey key{2, 2, {keybits & 3, (keybits >> 2) & 3}};
        for (std::uint64_t x = 0; x < 4; ++x) {
            const std::uint64_t packed = x | (keybits << 2);
            CHECK(eval_outputs(c, packed) == kwise::eval_full(key, x));
        }
    }
}

TEST_CASE("kwise circuit matches eval_full on random keys at (3,3) and (4,2)") {
    std::mt19937_64 rng(555);
    for (const auto& [n, k] : std::vector<std::pair<unsigned, unsigned>>{
             {3, 3}, {4, 2}}) {
        const ClassicalCircuit c = build_kwise_circuit(n, k);
        const std::uint64_t mask = (1ULL << n) - 1;
        for (int trial = 0; trial < 40; ++trial) {
            kwise::KWiseKey key{n, k, {}};
            std::uint64_t keybits = 0;
            for (unsigned i = 0; i < k; ++i) {
                const std::uint64_t coeff = rng() & mask;
                key.coeffs.push_back(coeff);
                keybits |= coeff << (i * n);
            }
            const std::uint64_t x = rng() & mask;
            CHECK(eval_outputs(c, x | (keybits << n)) ==
                  kwise::eval_full(key, x));
        }
    }
}

TEST_CASE("k=1 kwise circuit is the constant with no gates") {
    const ClassicalCircuit c = build_kwise_circuit(3, 1);
    CHECK(c.gates.empty());
    CHECK(circuit_metrics(c).depth == 0);
    CHECK(eval_outputs(c, 0b101000) == 0b101);  // x=000, c0=101
}

TEST_CASE("kwise circuit depth is nondecreasing in k (measured, n=8)") {
    std::size_t previous = 0;
    for (unsigned k : {2u, 4u, 8u, 16u, 32u}) {
        const Metrics m = circuit_metrics(build_kwise_circuit(8, k));
        CHECK(m.depth >= previous);
        previous = m.depth;
        MESSAGE("n=8 k=", k, " size=", m.size, " depth=", m.depth,
                " depth/log2k=", static_cast<double>(m.depth) /
                                     std::log2(static_cast<double>(k)));
    }
}

TEST_CASE("binding key wires turns the kwise circuit into the keyed function") {
    std::mt19937_64 rng(8080);
    for (const auto& [n, k] : std::vector<std::pair<unsigned, unsigned>>{
             {2, 2}, {3, 2}, {2, 3}}) {
        const ClassicalCircuit generic = build_kwise_circuit(n, k);
        const std::uint64_t mask = (1ULL << n) - 1;
        for (int trial = 0; trial < 8; ++trial) {
            kwise::KWiseKey key{n, k, {}};
            std::vector<int> key_bits;
            for (unsigned i = 0; i < k; ++i) {
                const std::uint64_t coeff = rng() & mask;
                key.coeffs.push_back(coeff);
                for (unsigned bit = 0; bit < n; ++bit) {
                    key_bits.push_back(static_cast<int>((coeff >> bit) & 1));
                }
            }
            const ClassicalCircuit bound = bind_inputs(generic, n, key_bits);
            CHECK(bound.input_count == n);
            for (std::uint64_t x = 0; x <= mask; ++x) {
                CHECK(eval_outputs(bound, x) == kwise::eval_full(key, x));
            }

            // selecting the low output bit gives a gbin-ready circuit
            ClassicalCircuit bit_circuit = bound;
            bit_circuit.outputs = {bound.outputs[0]};
            const HTCircuit ht = build_gbin_circuit(bit_circuit);
            ClassicalCircuit body;
            body.input_count = ht.qubit_count();
            body.gates = ht.body;
            CHECK(circuit_metrics(ht).depth ==
                  circuit_metrics(body).depth + 1);
        }
    }
    CHECK_THROWS_AS(
        bind_inputs(build_kwise_circuit(2, 2), 2, std::vector<int>{1}),
        std::invalid_argument);
}

TEST_CASE("classical circuit text round trip") {
    std::mt19937_64 rng(777);
    const ClassicalCircuit c = random_circuit(4, 25, rng);
    const std::string text = to_text(c);
    std::istringstream in(text);
    const ClassicalCircuit parsed = parse_classical(in);
    CHECK(to_text(parsed) == text);
    CHECK(parsed.input_count == c.input_count);
    CHECK(parsed.ancilla_init == c.ancilla_init);
    CHECK(parsed.outputs == c.outputs);
    CHECK(parsed.gates == c.gates);
}

TEST_CASE("HT circuit text round trip") {
    const HTCircuit ht = build_gbin_circuit(and_circuit());
    const std::string text = to_text(ht);
    std::istringstream in(text);
    const HTCircuit parsed = parse_ht(in);
    CHECK(to_text(parsed) == text);

    // simulation agrees after the round trip
    const StateVector a = simulate_ht(ht);
    const StateVector b = simulate_ht(parsed);
    CHECK(std::abs(a.inner_product(b)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("parse errors carry line numbers") {
    std::istringstream bad1("INPUTS 2\nFROB 1\n");
    CHECK_THROWS_WITH_AS(parse_classical(bad1),
                         doctest::Contains("line 2"), std::runtime_error);

    std::istringstream bad2("QUBITS 4; DATA 0..1; KICK 2\nTOF 0 1 3\nH 0\n");
    CHECK_THROWS_WITH_AS(parse_ht(bad2), doctest::Contains("line 3"),
                         std::runtime_error);
}

TEST_CASE("gbin rejects multi-output circuits") {
    ClassicalCircuit c = and_circuit();
    c.outputs = {0, 2};
    CHECK_THROWS_AS(build_gbin_circuit(c), std::invalid_argument);
}
