#include "qsd/circuits.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qsd/gf2n.hpp"

namespace qsd::circuits {

namespace {

// wires a gate touches (reads or writes), deduplicated
void touched_wires(const Gate& g, unsigned out[3], unsigned& count) {
    count = 0;
    auto add = [&](unsigned w) {
        for (unsigned i = 0; i < count; ++i) {
            if (out[i] == w) {
                return;
            }
        }
        out[count++] = w;
    };
    switch (g.kind) {
        case GateKind::Not:
            add(g.target);
            break;
        case GateKind::Xor:
            add(g.a);
            add(g.target);
            break;
        case GateKind::And:
        case GateKind::Toffoli:
            add(g.a);
            add(g.b);
            add(g.target);
            break;
    }
}

std::size_t layered_depth(const std::vector<Gate>& gates, unsigned wires) {
    std::vector<std::size_t> last(wires, 0);
    std::size_t depth = 0;
    unsigned touched[3];
    unsigned count = 0;
    for (const Gate& g : gates) {
        touched_wires(g, touched, count);
        std::size_t layer = 0;
        for (unsigned i = 0; i < count; ++i) {
            layer = std::max(layer, last[touched[i]]);
        }
        ++layer;
        for (unsigned i = 0; i < count; ++i) {
            last[touched[i]] = layer;
        }
        depth = std::max(depth, layer);
    }
    return depth;
}

}  // namespace

void ClassicalCircuit::validate() const {
    const unsigned wires = wire_count();
    for (std::size_t i = 0; i < gates.size(); ++i) {
        const Gate& g = gates[i];
        const auto bad = [&](const char* why) {
            throw std::invalid_argument("circuit gate " + std::to_string(i) +
                                        ": " + why);
        };
        switch (g.kind) {
            case GateKind::Not:
                if (g.target >= wires) {
                    bad("target out of range");
                }
                break;
            case GateKind::Xor:
                if (g.a >= wires || g.target >= wires) {
                    bad("wire out of range");
                }
                if (g.a == g.target) {
                    bad("XOR source equals target");
                }
                break;
            case GateKind::And:
            case GateKind::Toffoli:
                if (g.a >= wires || g.b >= wires || g.target >= wires) {
                    bad("wire out of range");
                }
                if (g.target == g.a || g.target == g.b) {
                    bad("target collides with a control");
                }
                break;
        }
    }
    for (unsigned w : outputs) {
        if (w >= wires) {
            throw std::invalid_argument("circuit output wire out of range");
        }
    }
}

std::vector<int> evaluate(const ClassicalCircuit& c, std::uint64_t x) {
    if (c.input_count < 64 && (x >> c.input_count) != 0) {
        throw std::invalid_argument("evaluate: input exceeds input_count bits");
    }
    std::vector<int> wires(c.wire_count(), 0);
    for (unsigned i = 0; i < c.input_count; ++i) {
        wires[i] = static_cast<int>((x >> i) & 1);
    }
    for (std::size_t i = 0; i < c.ancilla_init.size(); ++i) {
        wires[c.input_count + i] = c.ancilla_init[i] ? 1 : 0;
    }
    for (const Gate& g : c.gates) {
        switch (g.kind) {
            case GateKind::Not:
                wires[g.target] ^= 1;
                break;
            case GateKind::Xor:
                wires[g.target] ^= wires[g.a];
                break;
            case GateKind::And:
            case GateKind::Toffoli:
                wires[g.target] ^= wires[g.a] & wires[g.b];
                break;
        }
    }
    return wires;
}

std::uint64_t eval_outputs(const ClassicalCircuit& c, std::uint64_t x) {
    const std::vector<int> wires = evaluate(c, x);
    std::uint64_t out = 0;
    for (std::size_t i = 0; i < c.outputs.size(); ++i) {
        out |= static_cast<std::uint64_t>(wires[c.outputs[i]]) << i;
    }
    return out;
}

Metrics circuit_metrics(const ClassicalCircuit& c) {
    return {c.gates.size(), layered_depth(c.gates, c.wire_count())};
}

ClassicalCircuit compile_to_toffoli(const ClassicalCircuit& c) {
    c.validate();
    ClassicalCircuit out;
    out.input_count = c.input_count;
    out.ancilla_init = c.ancilla_init;
    out.outputs = c.outputs;

    // a constant-1 wire must never be a target anywhere
    std::vector<bool> targeted(c.wire_count(), false);
    for (const Gate& g : c.gates) {
        targeted[g.target] = true;
    }
    std::optional<unsigned> const1;
    for (std::size_t i = 0; i < c.ancilla_init.size(); ++i) {
        if (c.ancilla_init[i] == 1 && !targeted[c.input_count + i]) {
            const1 = c.input_count + static_cast<unsigned>(i);
            break;
        }
    }
    auto shared_one = [&]() {
        if (!const1) {
            out.ancilla_init.push_back(1);
            const1 = out.wire_count() - 1;
        }
        return *const1;
    };

    out.gates.reserve(c.gates.size());
    for (const Gate& g : c.gates) {
        switch (g.kind) {
            case GateKind::Not: {
                const unsigned one = shared_one();
                out.gates.push_back({GateKind::Toffoli, one, one, g.target});
                break;
            }
            case GateKind::Xor: {
                const unsigned one = shared_one();
                out.gates.push_back({GateKind::Toffoli, one, g.a, g.target});
                break;
            }
            case GateKind::And:
            case GateKind::Toffoli:
                out.gates.push_back({GateKind::Toffoli, g.a, g.b, g.target});
                break;
        }
    }
    return out;
}

ClassicalCircuit truth_table_circuit(unsigned n,
                                     const std::vector<int>& table) {
    if (n < 1 || n > 20 || table.size() != (1ULL << n)) {
        throw std::invalid_argument("truth_table_circuit: table size must be 2^n");
    }
    for (int v : table) {
        if (v != 0 && v != 1) {
            throw std::invalid_argument("truth_table_circuit: entries must be bits");
        }
    }
    // Moebius transform: algebraic normal form coefficients
    std::vector<int> anf = table;
    for (unsigned i = 0; i < n; ++i) {
        for (std::uint64_t x = 0; x < anf.size(); ++x) {
            if (x & (1ULL << i)) {
                anf[x] ^= anf[x ^ (1ULL << i)];
            }
        }
    }

    unsigned max_chain = 0;
    for (std::uint64_t mono = 0; mono < anf.size(); ++mono) {
        if (anf[mono]) {
            max_chain = std::max(
                max_chain, static_cast<unsigned>(std::popcount(mono)));
        }
    }

    ClassicalCircuit c;
    c.input_count = n;
    const unsigned out = n;
    c.ancilla_init.assign(1 + (max_chain > 1 ? max_chain - 1 : 0), 0);
    c.outputs = {out};

    for (std::uint64_t mono = 0; mono < anf.size(); ++mono) {
        if (!anf[mono]) {
            continue;
        }
        std::vector<unsigned> bits;
        for (unsigned i = 0; i < n; ++i) {
            if (mono & (1ULL << i)) {
                bits.push_back(i);
            }
        }
        if (bits.empty()) {
            c.gates.push_back({GateKind::Not, out, out, out});
        } else if (bits.size() == 1) {
            c.gates.push_back({GateKind::Xor, bits[0], 0, out});
        } else {
            // AND-chain into temporaries, tap the product, then mirror the
            // chain so the temporaries return to zero for the next monomial
            std::vector<Gate> chain;
            unsigned temp = out + 1;
            chain.push_back({GateKind::And, bits[0], bits[1], temp});
            for (std::size_t i = 2; i < bits.size(); ++i) {
                chain.push_back({GateKind::And, temp, bits[i], temp + 1});
                ++temp;
            }
            c.gates.insert(c.gates.end(), chain.begin(), chain.end());
            c.gates.push_back({GateKind::Xor, temp, 0, out});
            c.gates.insert(c.gates.end(), chain.rbegin(), chain.rend());
        }
    }
    c.validate();
    return c;
}

// ---------------------------------------------------------------------------
// k-wise evaluator circuit

namespace {

using Reg = std::vector<unsigned>;  // n wires, least significant first

class Builder {
  public:
    explicit Builder(unsigned inputs) { circuit.input_count = inputs; }

    unsigned fresh0() {
        circuit.ancilla_init.push_back(0);
        return circuit.wire_count() - 1;
    }
    void xor_gate(unsigned src, unsigned tgt) {
        circuit.gates.push_back({GateKind::Xor, src, 0, tgt});
    }
    void and_gate(unsigned a, unsigned b, unsigned tgt) {
        circuit.gates.push_back({GateKind::And, a, b, tgt});
    }
    unsigned copy_of(unsigned w) {
        const unsigned f = fresh0();
        xor_gate(w, f);
        return f;
    }

    // balanced XOR of the sources into a fresh accumulator
    unsigned xor_tree(const std::vector<unsigned>& srcs) {
        if (srcs.empty()) {
            return fresh0();
        }
        return tree(srcs, 0, srcs.size());
    }

    // `readers` wires carrying w's value (w itself serves as the first);
    // copies are made in doubling rounds so depth is log(readers)
    std::vector<unsigned> fanout(unsigned w, std::size_t readers) {
        std::vector<unsigned> holders{w};
        while (holders.size() < readers) {
            const std::size_t have = holders.size();
            for (std::size_t i = 0; i < have && holders.size() < readers; ++i) {
                holders.push_back(copy_of(holders[i]));
            }
        }
        return holders;
    }

    ClassicalCircuit circuit;

  private:
    unsigned tree(const std::vector<unsigned>& s, std::size_t lo,
                  std::size_t hi) {
        if (hi - lo == 1) {
            return copy_of(s[lo]);
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        const unsigned left = tree(s, lo, mid);
        const unsigned right = tree(s, mid, hi);
        xor_gate(right, left);
        return left;
    }
};

// bit patterns of x^s mod m for s in [0, 2n-1)
std::vector<std::uint64_t> reduction_table(unsigned n) {
    const auto m = gf2n::find_modulus(n);
    const std::uint64_t mask = (n >= 64) ? ~0ULL : (1ULL << n) - 1;
    std::vector<std::uint64_t> red(2 * n - 1);
    for (unsigned s = 0; s < n; ++s) {
        red[s] = 1ULL << s;
    }
    for (unsigned s = n; s + 1 < 2 * n; ++s) {
        red[s] = red[s - 1] << 1;
        if ((red[s] >> n) & 1) {
            red[s] = (red[s] & mask) ^ m.low_bits;
        }
    }
    return red;
}

// squaring is GF(2)-linear: output bit b collects input bits i with
// red[2i] bit b set
Reg square_reg(Builder& builder, const Reg& in,
               const std::vector<std::uint64_t>& red) {
    const unsigned n = static_cast<unsigned>(in.size());
    std::vector<std::vector<unsigned>> sources(n);
    std::vector<std::size_t> readers(n, 0);
    for (unsigned i = 0; i < n; ++i) {
        readers[i] = static_cast<std::size_t>(std::popcount(red[2 * i]));
    }
    std::vector<std::vector<unsigned>> holders(n);
    for (unsigned i = 0; i < n; ++i) {
        holders[i] = builder.fanout(in[i], std::max<std::size_t>(readers[i], 1));
    }
    std::vector<std::size_t> used(n, 0);
    for (unsigned b = 0; b < n; ++b) {
        for (unsigned i = 0; i < n; ++i) {
            if ((red[2 * i] >> b) & 1) {
                sources[b].push_back(holders[i][used[i]++]);
            }
        }
    }
    Reg out(n);
    for (unsigned b = 0; b < n; ++b) {
        out[b] = builder.xor_tree(sources[b]);
    }
    return out;
}

Reg multiply_reg(Builder& builder, const Reg& a, const Reg& b,
                 const std::vector<std::uint64_t>& red) {
    const unsigned n = static_cast<unsigned>(a.size());
    const auto a_holders = [&] {
        std::vector<std::vector<unsigned>> h(n);
        for (unsigned i = 0; i < n; ++i) {
            h[i] = builder.fanout(a[i], n);
        }
        return h;
    }();
    const auto b_holders = [&] {
        std::vector<std::vector<unsigned>> h(n);
        for (unsigned j = 0; j < n; ++j) {
            h[j] = builder.fanout(b[j], n);
        }
        return h;
    }();

    // one AND per partial product; all n^2 of them are wire-disjoint
    std::vector<std::vector<unsigned>> partial(n, std::vector<unsigned>(n));
    for (unsigned i = 0; i < n; ++i) {
        for (unsigned j = 0; j < n; ++j) {
            const unsigned p = builder.fresh0();
            builder.and_gate(a_holders[i][j], b_holders[j][i], p);
            partial[i][j] = p;
        }
    }

    std::vector<std::vector<unsigned>> sources(n);
    for (unsigned i = 0; i < n; ++i) {
        for (unsigned j = 0; j < n; ++j) {
            const std::uint64_t pattern = red[i + j];
            const auto copies = builder.fanout(
                partial[i][j],
                std::max<std::size_t>(std::popcount(pattern), 1));
            std::size_t used = 0;
            for (unsigned bit = 0; bit < n; ++bit) {
                if ((pattern >> bit) & 1) {
                    sources[bit].push_back(copies[used++]);
                }
            }
        }
    }
    Reg out(n);
    for (unsigned bit = 0; bit < n; ++bit) {
        out[bit] = builder.xor_tree(sources[bit]);
    }
    return out;
}

Reg product_tree(Builder& builder, std::vector<Reg> factors,
                 const std::vector<std::uint64_t>& red) {
    while (factors.size() > 1) {
        std::vector<Reg> next;
        std::size_t i = 0;
        for (; i + 1 < factors.size(); i += 2) {
            next.push_back(
                multiply_reg(builder, factors[i], factors[i + 1], red));
        }
        if (i < factors.size()) {
            next.push_back(std::move(factors[i]));
        }
        factors = std::move(next);
    }
    return factors[0];
}

}  // namespace

ClassicalCircuit build_kwise_circuit(unsigned n, unsigned k) {
    if (n < 1 || n > 16 || k < 1 || k > 64) {
        throw std::invalid_argument(
            "build_kwise_circuit: requires 1 <= n <= 16, 1 <= k <= 64");
    }
    Builder builder(n + k * n);
    Reg x(n);
    for (unsigned i = 0; i < n; ++i) {
        x[i] = i;
    }
    std::vector<Reg> coeff(k, Reg(n));
    for (unsigned i = 0; i < k; ++i) {
        for (unsigned bit = 0; bit < n; ++bit) {
            coeff[i][bit] = n + i * n + bit;
        }
    }
    if (k == 1) {
        builder.circuit.outputs = coeff[0];
        builder.circuit.validate();
        return builder.circuit;
    }

    const auto red = reduction_table(n);
    const unsigned max_power = k - 1;
    const unsigned levels =
        63 - static_cast<unsigned>(std::countl_zero(std::uint64_t{max_power}));

    // readers of the power register x^{2^j}: the next squaring plus one per
    // monomial containing bit j
    std::vector<std::size_t> readers(levels + 1, 0);
    for (unsigned j = 0; j <= levels; ++j) {
        if (j < levels) {
            readers[j] += 1;
        }
        for (unsigned i = 1; i <= max_power; ++i) {
            if ((i >> j) & 1) {
                readers[j] += 1;
            }
        }
    }

    std::vector<std::vector<Reg>> power_copies(levels + 1);
    std::vector<std::size_t> taken(levels + 1, 0);
    auto make_copies = [&](unsigned j, const Reg& reg) {
        power_copies[j].assign(readers[j], Reg(n));
        for (unsigned bit = 0; bit < n; ++bit) {
            const auto holders = builder.fanout(
                reg[bit], std::max<std::size_t>(readers[j], 1));
            for (std::size_t r = 0; r < readers[j]; ++r) {
                power_copies[j][r][bit] = holders[r];
            }
        }
    };
    auto take_copy = [&](unsigned j) -> const Reg& {
        return power_copies[j][taken[j]++];
    };

    make_copies(0, x);
    for (unsigned j = 1; j <= levels; ++j) {
        make_copies(j, square_reg(builder, take_copy(j - 1), red));
    }

    // terms c_i * x^i; term 0 is the constant coefficient itself
    std::vector<Reg> terms;
    terms.push_back(coeff[0]);
    for (unsigned i = 1; i <= max_power; ++i) {
        std::vector<Reg> factors;
        for (unsigned j = 0; j <= levels; ++j) {
            if ((i >> j) & 1) {
                factors.push_back(take_copy(j));
            }
        }
        const Reg monomial = product_tree(builder, std::move(factors), red);
        terms.push_back(multiply_reg(builder, coeff[i], monomial, red));
    }

    Reg result(n);
    for (unsigned bit = 0; bit < n; ++bit) {
        std::vector<unsigned> sources;
        sources.reserve(terms.size());
        for (const Reg& term : terms) {
            sources.push_back(term[bit]);
        }
        result[bit] = builder.xor_tree(sources);
    }
    builder.circuit.outputs = result;
    builder.circuit.validate();
    return builder.circuit;
}

ClassicalCircuit bind_inputs(const ClassicalCircuit& c, unsigned keep,
                             const std::vector<int>& values) {
    if (keep > c.input_count ||
        values.size() != c.input_count - keep) {
        throw std::invalid_argument(
            "bind_inputs: values must cover exactly the dropped inputs");
    }
    for (int v : values) {
        if (v != 0 && v != 1) {
            throw std::invalid_argument("bind_inputs: constants must be bits");
        }
    }
    ClassicalCircuit out = c;
    out.input_count = keep;
    out.ancilla_init.clear();
    out.ancilla_init.insert(out.ancilla_init.end(), values.begin(),
                            values.end());
    out.ancilla_init.insert(out.ancilla_init.end(), c.ancilla_init.begin(),
                            c.ancilla_init.end());
    out.validate();
    return out;
}

// ---------------------------------------------------------------------------
// HT circuits

void HTCircuit::validate() const {
    const unsigned qubits = qubit_count();
    if (data_count < 1) {
        throw std::invalid_argument("ht: need at least one data qubit");
    }
    std::vector<bool> seen(qubits, false);
    for (unsigned q : hadamard_targets) {
        if (q >= qubits) {
            throw std::invalid_argument("ht: Hadamard target out of range");
        }
        if (seen[q]) {
            throw std::invalid_argument("ht: duplicate Hadamard target");
        }
        seen[q] = true;
    }
    for (std::size_t i = 0; i < body.size(); ++i) {
        const Gate& g = body[i];
        if (g.kind != GateKind::Toffoli) {
            throw std::invalid_argument("ht: body must contain only Toffoli gates");
        }
        if (g.a >= qubits || g.b >= qubits || g.target >= qubits) {
            throw std::invalid_argument("ht: body gate " + std::to_string(i) +
                                        " wire out of range");
        }
        if (g.target == g.a || g.target == g.b) {
            throw std::invalid_argument("ht: body gate " + std::to_string(i) +
                                        " target collides with a control");
        }
    }
}

HTCircuit build_gbin_circuit(const ClassicalCircuit& fc) {
    if (fc.outputs.size() != 1) {
        throw std::invalid_argument(
            "build_gbin_circuit: circuit must have a single output bit");
    }
    ClassicalCircuit compiled = compile_to_toffoli(fc);

    // shared constant-1 wire for the kickback CNOT
    std::vector<bool> targeted(compiled.wire_count(), false);
    for (const Gate& g : compiled.gates) {
        targeted[g.target] = true;
    }
    std::optional<unsigned> const1;
    for (std::size_t i = 0; i < compiled.ancilla_init.size(); ++i) {
        if (compiled.ancilla_init[i] == 1 &&
            !targeted[compiled.input_count + i]) {
            const1 = compiled.input_count + static_cast<unsigned>(i);
            break;
        }
    }
    if (!const1) {
        compiled.ancilla_init.push_back(1);
        const1 = compiled.wire_count() - 1;
    }

    const unsigned n = compiled.input_count;
    const unsigned kick = n;
    const auto remap = [n](unsigned w) { return w < n ? w : w + 1; };

    HTCircuit ht;
    ht.data_count = n;
    ht.ancilla_init = compiled.ancilla_init;
    for (unsigned q = 0; q <= n; ++q) {
        ht.hadamard_targets.push_back(q);  // data qubits and the kick qubit
    }
    ht.body.reserve(2 * compiled.gates.size() + 1);
    for (const Gate& g : compiled.gates) {
        ht.body.push_back(
            {GateKind::Toffoli, remap(g.a), remap(g.b), remap(g.target)});
    }
    ht.body.push_back({GateKind::Toffoli, remap(*const1),
                       remap(compiled.outputs[0]), kick});
    for (auto it = compiled.gates.rbegin(); it != compiled.gates.rend(); ++it) {
        ht.body.push_back(
            {GateKind::Toffoli, remap(it->a), remap(it->b), remap(it->target)});
    }
    ht.validate();
    return ht;
}

StateVector simulate_ht(const HTCircuit& c) {
    c.validate();
    const unsigned qubits = c.qubit_count();
    if (qubits > 20) {
        throw std::invalid_argument("simulate_ht: qubit budget is 20");
    }
    const unsigned n = c.data_count;
    const unsigned kick = c.kick_qubit();

    std::uint64_t hmask = 0;
    for (unsigned q : c.hadamard_targets) {
        if (q > kick) {
            throw std::invalid_argument(
                "simulate_ht: Hadamard on an ancilla is not supported");
        }
        hmask |= 1ULL << q;
    }

    std::uint64_t init = 1ULL << kick;
    for (std::size_t i = 0; i < c.ancilla_init.size(); ++i) {
        if (c.ancilla_init[i]) {
            init |= 1ULL << (kick + 1 + i);
        }
    }

    // Hadamard layer on the initial basis state: uniform magnitude over the
    // target subcube, sign (-1)^{<assignment, init>} on the targets
    const std::uint64_t dim = 1ULL << qubits;
    const unsigned h = static_cast<unsigned>(std::popcount(hmask));
    const double mag = std::pow(2.0, -static_cast<double>(h) / 2.0);
    std::vector<std::complex<double>> amp(dim);
    for (std::uint64_t z = 0; z < dim; ++z) {
        if ((z & ~hmask) == (init & ~hmask)) {
            const bool neg = std::popcount(z & init & hmask) % 2 != 0;
            amp[z] = {neg ? -mag : mag, 0.0};
        }
    }

    for (const Gate& g : c.body) {
        const std::uint64_t abit = 1ULL << g.a;
        const std::uint64_t bbit = 1ULL << g.b;
        const std::uint64_t tbit = 1ULL << g.target;
        for (std::uint64_t z = 0; z < dim; ++z) {
            if ((z & abit) && (z & bbit) && !(z & tbit)) {
                std::swap(amp[z], amp[z | tbit]);
            }
        }
    }

    // the ancillas must sit at their declared constants
    const std::uint64_t anc_mask = dim - 1 - ((1ULL << (kick + 1)) - 1);
    const std::uint64_t anc_pattern = init & anc_mask;
    double off_mass = 0.0;
    for (std::uint64_t z = 0; z < dim; ++z) {
        if ((z & anc_mask) != anc_pattern) {
            off_mass += std::norm(amp[z]);
        }
    }
    if (off_mass > 1e-12) {
        throw std::runtime_error(
            "simulate_ht: ancillas entangled with data (compilation bug)");
    }

    const std::uint64_t kick_bit = 1ULL << kick;
    StateVector psi{n, std::vector<std::complex<double>>(1ULL << n)};
    if (hmask & kick_bit) {
        // kick qubit must factor as |0> + (-1)^{init} |1> up to global phase
        const double sign = (init & kick_bit) ? -1.0 : 1.0;
        const double sqrt2 = std::sqrt(2.0);
        for (std::uint64_t x = 0; x < (1ULL << n); ++x) {
            const std::complex<double> c0 = amp[x | anc_pattern];
            const std::complex<double> c1 = amp[x | anc_pattern | kick_bit];
            if (std::abs(c1 - sign * c0) > 1e-10) {
                throw std::runtime_error(
                    "simulate_ht: kickback qubit entangled with data");
            }
            psi.amplitudes[x] = sqrt2 * c0;
        }
    } else {
        double mass0 = 0.0;
        double mass1 = 0.0;
        for (std::uint64_t x = 0; x < (1ULL << n); ++x) {
            mass0 += std::norm(amp[x | anc_pattern]);
            mass1 += std::norm(amp[x | anc_pattern | kick_bit]);
        }
        if (std::min(mass0, mass1) > 1e-12) {
            throw std::runtime_error(
                "simulate_ht: kickback qubit entangled with data");
        }
        const std::uint64_t kb = mass1 > mass0 ? kick_bit : 0;
        for (std::uint64_t x = 0; x < (1ULL << n); ++x) {
            psi.amplitudes[x] = amp[x | anc_pattern | kb];
        }
    }
    if (std::abs(psi.norm() - 1.0) > 1e-9) {
        throw std::runtime_error("simulate_ht: output state is not normalized");
    }
    return psi;
}

Metrics circuit_metrics(const HTCircuit& c) {
    Metrics m;
    m.size = c.hadamard_targets.size() + c.body.size();
    m.depth = (c.hadamard_targets.empty() ? 0 : 1) +
              layered_depth(c.body, c.qubit_count());
    return m;
}

// ---------------------------------------------------------------------------
// text formats

std::string to_text(const ClassicalCircuit& c) {
    std::ostringstream out;
    out << "INPUTS " << c.input_count << '\n';
    for (int init : c.ancilla_init) {
        out << "ANCILLA " << init << '\n';
    }
    if (!c.outputs.empty()) {
        out << "OUTPUT";
        for (unsigned w : c.outputs) {
            out << ' ' << w;
        }
        out << '\n';
    }
    for (const Gate& g : c.gates) {
        switch (g.kind) {
            case GateKind::Not:
                out << "NOT " << g.target << '\n';
                break;
            case GateKind::Xor:
                out << "XOR " << g.a << ' ' << g.target << '\n';
                break;
            case GateKind::And:
                out << "AND " << g.a << ' ' << g.b << ' ' << g.target << '\n';
                break;
            case GateKind::Toffoli:
                out << "TOF " << g.a << ' ' << g.b << ' ' << g.target << '\n';
                break;
        }
    }
    return out.str();
}

std::string to_text(const HTCircuit& c) {
    std::ostringstream out;
    out << "QUBITS " << c.qubit_count();
    std::vector<unsigned> const1;
    for (std::size_t i = 0; i < c.ancilla_init.size(); ++i) {
        if (c.ancilla_init[i]) {
            const1.push_back(c.kick_qubit() + 1 + static_cast<unsigned>(i));
        }
    }
    if (!const1.empty()) {
        out << "; CONST1";
        for (unsigned w : const1) {
            out << ' ' << w;
        }
    }
    out << "; DATA 0.." << (c.data_count - 1);
    out << "; KICK " << c.kick_qubit() << '\n';
    std::vector<unsigned> targets = c.hadamard_targets;
    std::sort(targets.begin(), targets.end());
    for (unsigned q : targets) {
        out << "H " << q << '\n';
    }
    for (const Gate& g : c.body) {
        out << "TOF " << g.a << ' ' << g.b << ' ' << g.target << '\n';
    }
    return out.str();
}

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& why) {
    throw std::runtime_error("line " + std::to_string(line) + ": " + why);
}

std::string strip_comment(const std::string& line) {
    const auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

bool parse_unsigned(const std::string& token, unsigned& out) {
    if (token.empty()) {
        return false;
    }
    unsigned long v = 0;
    for (char ch : token) {
        if (ch < '0' || ch > '9') {
            return false;
        }
        v = v * 10 + static_cast<unsigned long>(ch - '0');
        if (v > 0xffffffffUL) {
            return false;
        }
    }
    out = static_cast<unsigned>(v);
    return true;
}

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> tokens;
    std::string tok;
    while (in >> tok) {
        tokens.push_back(tok);
    }
    return tokens;
}

}  // namespace

ClassicalCircuit parse_classical(std::istream& in) {
    ClassicalCircuit c;
    bool have_inputs = false;
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto tokens = tokenize(strip_comment(raw));
        if (tokens.empty()) {
            continue;
        }
        const std::string& op = tokens[0];
        auto want = [&](std::size_t argc) {
            if (tokens.size() != argc + 1) {
                parse_fail(lineno, op + " expects " + std::to_string(argc) +
                                       " argument(s)");
            }
        };
        auto arg = [&](std::size_t i) {
            unsigned v = 0;
            if (!parse_unsigned(tokens[i], v)) {
                parse_fail(lineno, "bad number '" + tokens[i] + "'");
            }
            return v;
        };
        if (op == "INPUTS") {
            want(1);
            if (have_inputs) {
                parse_fail(lineno, "duplicate INPUTS line");
            }
            c.input_count = arg(1);
            have_inputs = true;
        } else if (op == "ANCILLA") {
            want(1);
            const unsigned v = arg(1);
            if (v > 1) {
                parse_fail(lineno, "ancilla constant must be 0 or 1");
            }
            c.ancilla_init.push_back(static_cast<int>(v));
        } else if (op == "OUTPUT") {
            if (tokens.size() < 2) {
                parse_fail(lineno, "OUTPUT expects at least one wire");
            }
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                c.outputs.push_back(arg(i));
            }
        } else if (op == "NOT") {
            want(1);
            const unsigned t = arg(1);
            c.gates.push_back({GateKind::Not, t, t, t});
        } else if (op == "XOR") {
            want(2);
            c.gates.push_back({GateKind::Xor, arg(1), 0, arg(2)});
        } else if (op == "AND") {
            want(3);
            c.gates.push_back({GateKind::And, arg(1), arg(2), arg(3)});
        } else if (op == "TOF") {
            want(3);
            c.gates.push_back({GateKind::Toffoli, arg(1), arg(2), arg(3)});
        } else {
            parse_fail(lineno, "unknown directive '" + op + "'");
        }
    }
    if (!have_inputs) {
        throw std::runtime_error("line 1: missing INPUTS line");
    }
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("circuit invalid: ") + e.what());
    }
    return c;
}

HTCircuit parse_ht(std::istream& in) {
    std::string raw;
    std::size_t lineno = 0;
    // header line: QUBITS m; CONST1 w...; DATA 0..j; KICK q
    std::string header;
    while (std::getline(in, raw)) {
        ++lineno;
        header = strip_comment(raw);
        if (!tokenize(header).empty()) {
            break;
        }
    }
    if (header.empty()) {
        throw std::runtime_error("line 1: missing header line");
    }

    unsigned qubits = 0;
    unsigned data_hi = 0;
    unsigned kick = 0;
    bool have_qubits = false;
    bool have_data = false;
    bool have_kick = false;
    std::vector<unsigned> const1;

    std::istringstream segs(header);
    std::string seg;
    while (std::getline(segs, seg, ';')) {
        const auto tokens = tokenize(seg);
        if (tokens.empty()) {
            continue;
        }
        if (tokens[0] == "QUBITS" && tokens.size() == 2) {
            if (!parse_unsigned(tokens[1], qubits)) {
                parse_fail(lineno, "bad QUBITS count");
            }
            have_qubits = true;
        } else if (tokens[0] == "CONST1") {
            for (std::size_t i = 1; i < tokens.size(); ++i) {
                unsigned w = 0;
                if (!parse_unsigned(tokens[i], w)) {
                    parse_fail(lineno, "bad CONST1 wire");
                }
                const1.push_back(w);
            }
        } else if (tokens[0] == "DATA" && tokens.size() == 2) {
            const auto dots = tokens[1].find("..");
            unsigned lo = 0;
            if (dots == std::string::npos ||
                !parse_unsigned(tokens[1].substr(0, dots), lo) ||
                !parse_unsigned(tokens[1].substr(dots + 2), data_hi) ||
                lo != 0) {
                parse_fail(lineno, "DATA must be of the form 0..j");
            }
            have_data = true;
        } else if (tokens[0] == "KICK" && tokens.size() == 2) {
            if (!parse_unsigned(tokens[1], kick)) {
                parse_fail(lineno, "bad KICK wire");
            }
            have_kick = true;
        } else {
            parse_fail(lineno, "bad header segment '" + seg + "'");
        }
    }
    if (!have_qubits || !have_data || !have_kick) {
        parse_fail(lineno, "header needs QUBITS, DATA and KICK");
    }
    if (kick != data_hi + 1 || kick >= qubits) {
        parse_fail(lineno, "KICK must be the qubit after the data range");
    }

    HTCircuit c;
    c.data_count = data_hi + 1;
    c.ancilla_init.assign(qubits - c.data_count - 1, 0);
    for (unsigned w : const1) {
        if (w <= kick || w >= qubits) {
            parse_fail(lineno, "CONST1 wire must be an ancilla");
        }
        c.ancilla_init[w - kick - 1] = 1;
    }

    bool body_started = false;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto tokens = tokenize(strip_comment(raw));
        if (tokens.empty()) {
            continue;
        }
        auto arg = [&](std::size_t i) {
            unsigned v = 0;
            if (!parse_unsigned(tokens[i], v)) {
                parse_fail(lineno, "bad number '" + tokens[i] + "'");
            }
            return v;
        };
        if (tokens[0] == "H" && tokens.size() == 2) {
            if (body_started) {
                parse_fail(lineno, "Hadamard after a Toffoli breaks the HT form");
            }
            c.hadamard_targets.push_back(arg(1));
        } else if (tokens[0] == "TOF" && tokens.size() == 4) {
            body_started = true;
            c.body.push_back({GateKind::Toffoli, arg(1), arg(2), arg(3)});
        } else {
            parse_fail(lineno, "unknown line '" + tokens[0] + "'");
        }
    }
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("circuit invalid: ") + e.what());
    }
    return c;
}

}  // namespace qsd::circuits
