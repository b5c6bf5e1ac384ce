// qsd: command-line front end for phase-state ensembles, their moment
// matrices, the spectral verification suite, and HT generation circuits.
//
// Exit codes: 0 success, 1 assertion failure, 2 usage or parse error.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qsd/circuits.hpp"
#include "qsd/kwise.hpp"
#include "qsd/moments.hpp"
#include "qsd/phase_states.hpp"
#include "qsd/spectral.hpp"
#include "qsd/tuples.hpp"

namespace {

constexpr int kExitAssertion = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AssertionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::uint64_t> read_table_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open table file: " + path);
    }
    std::vector<std::uint64_t> table;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.resize(hash);
        }
        std::istringstream row(line);
        std::uint64_t v = 0;
        while (row >> v) {
            table.push_back(v);
        }
    }
    if (table.empty()) {
        throw UsageError("table file holds no values: " + path);
    }
    return table;
}

void write_text_output(const std::optional<std::string>& path,
                       const std::string& text) {
    if (path) {
        std::ofstream out(*path);
        if (!out) {
            throw UsageError("cannot open output file: " + *path);
        }
        out << text;
    } else {
        std::cout << text;
    }
}

// ---------------------------------------------------------------------------

struct GenStateOptions {
    unsigned n = 0;
    std::string phase = "binary";
    std::optional<unsigned> k;
    std::uint64_t seed = 0;
    std::optional<std::string> table_path;
    std::optional<std::string> out_path;
};

int cmd_gen_state(const GenStateOptions& opt) {
    if (opt.n < 1 || opt.n > 20) {
        throw UsageError("gen-state: --n must be in [1, 20]");
    }
    const std::uint64_t size = 1ULL << opt.n;
    const std::uint64_t modulus = opt.phase == "binary" ? 2 : size;

    qsd::PhaseFunction f;
    f.modulus = modulus;
    if (opt.table_path) {
        f.table = read_table_file(*opt.table_path);
        if (f.table.size() != size) {
            throw UsageError("gen-state: table must have exactly 2^n entries");
        }
    } else {
        if (!opt.k) {
            throw UsageError("gen-state: need either --table or --k");
        }
        const auto key = qsd::kwise::sample_key(opt.n, *opt.k, opt.seed);
        f.table.resize(size);
        for (std::uint64_t x = 0; x < size; ++x) {
            f.table[x] = opt.phase == "binary"
                             ? static_cast<std::uint64_t>(
                                   qsd::kwise::eval_bit(key, x))
                             : qsd::kwise::eval_full(key, x);
        }
    }
    try {
        f.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("gen-state: ") + e.what());
    }

    const qsd::StateVector state = opt.phase == "binary"
                                       ? qsd::gen_binary_phase(f)
                                       : qsd::gen_complex_phase(f);
    std::ostringstream csv;
    qsd::write_state_csv(csv, state);
    write_text_output(opt.out_path, csv.str());

    double max_imag = 0.0;
    for (const auto& a : state.amplitudes) {
        max_imag = std::max(max_imag, std::abs(a.imag()));
    }
    std::ostream& diag = opt.out_path ? std::cout : std::cerr;
    char buf[128];
    std::snprintf(buf, sizeof buf, "norm=%.15f max|imag|=%.3g dim=%llu\n",
                  state.norm(), max_imag,
                  static_cast<unsigned long long>(state.dim()));
    diag << buf;
    return 0;
}

// ---------------------------------------------------------------------------

struct VerifyOptions {
    std::vector<unsigned> t_values;
    std::vector<unsigned> n_values;
    std::optional<std::string> out_path;
    std::string format = "json";
    double tol_rank = 1e-9;
    double tol_eig = 1e-10;
};

int cmd_verify(const VerifyOptions& opt) {
    std::vector<std::pair<unsigned, unsigned>> grid;
    for (unsigned t : opt.t_values) {
        for (unsigned n : opt.n_values) {
            if (t < 1 || n < 1 || t * n > 12) {
                throw UsageError("verify: need t >= 1, n >= 1, t*n <= 12");
            }
            if (t >= (1ULL << n)) {
                throw UsageError(
                    "verify: t must be strictly smaller than 2^n");
            }
            grid.emplace_back(t, n);
        }
    }
    qsd::spectral::VerifyTolerances tol;
    tol.rank_tol = opt.tol_rank;
    tol.eig_tol = opt.tol_eig;

    std::vector<qsd::spectral::BoundsReport> reports;
    std::vector<std::string> failures;
    for (const auto& [t, n] : grid) {
        const auto report = qsd::spectral::verify_all(t, n, tol);
        std::fprintf(stderr, "[%s] t=%u n=%u\n",
                     report.pass() ? "PASS" : "FAIL", t, n);
        if (!report.pass()) {
            std::string which;
            if (!report.pass_rank) which += " rank";
            if (!report.pass_eigenvalue_floor) which += " eigenvalue_floor";
            if (!report.pass_binary_complex) which += " binary_complex";
            if (!report.pass_complex_haar) which += " complex_haar";
            if (!report.pass_binary_haar) which += " binary_haar";
            if (!report.pass_triangle) which += " triangle";
            failures.push_back("t=" + std::to_string(t) +
                               " n=" + std::to_string(n) + ":" + which);
        }
        reports.push_back(report);
    }

    std::string text;
    if (opt.format == "csv") {
        text = qsd::spectral::reports_to_csv(reports);
    } else {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& report : reports) {
            arr.push_back(
                nlohmann::json::parse(qsd::spectral::report_to_json(report)));
        }
        text = arr.dump(2) + "\n";
    }
    write_text_output(opt.out_path, text);

    if (!failures.empty()) {
        for (const auto& f : failures) {
            std::fprintf(stderr, "verify failed: %s\n", f.c_str());
        }
        return kExitAssertion;
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct ClassesOptions {
    unsigned t = 0;
    unsigned n = 0;
    std::string kind = "permutation";
    std::optional<std::string> out_path;
};

int cmd_classes(const ClassesOptions& opt) {
    if (opt.t < 1 || opt.n < 1 || opt.t * opt.n > 16) {
        throw UsageError("classes: need t >= 1, n >= 1, t*n <= 16");
    }
    const std::uint64_t space = 1ULL << (opt.t * opt.n);
    nlohmann::json j;
    j["t"] = opt.t;
    j["n"] = opt.n;
    j["kind"] = opt.kind;

    const auto tuple_json = [&](const qsd::tuples::TupleIndex& x) {
        return nlohmann::json(x.entries);
    };

    if (opt.kind == "permutation") {
        const auto classes =
            qsd::tuples::enumerate_permutation_classes(opt.t, opt.n);
        const std::uint64_t expected = qsd::tuples::binomial(
            (1ULL << opt.n) + opt.t - 1, opt.t);
        std::uint64_t total = 0;
        std::uint64_t distinct = 0;
        nlohmann::json list = nlohmann::json::array();
        for (const auto& cls : classes) {
            total += cls.size;
            if (qsd::tuples::histogram(qsd::tuples::TupleIndex{cls.multiset})
                    .size() == opt.t) {
                ++distinct;
            }
            list.push_back({{"kind", "permutation"},
                            {"canonical", cls.multiset},
                            {"size", cls.size},
                            {"sentinel", tuple_json(cls.sentinel)}});
        }
        j["count"] = classes.size();
        j["expected_count"] = expected;
        j["all_distinct_count"] = distinct;
        j["expected_all_distinct_count"] =
            qsd::tuples::binomial(1ULL << opt.n, opt.t);
        j["classes"] = std::move(list);
        if (classes.size() != expected || total != space ||
            distinct != qsd::tuples::binomial(1ULL << opt.n, opt.t)) {
            write_text_output(opt.out_path, j.dump(2) + "\n");
            throw AssertionError("classes: enumeration counts are off");
        }
    } else if (opt.kind == "stabilization") {
        const auto classes =
            qsd::tuples::enumerate_stabilization_classes(opt.t, opt.n);
        std::uint64_t total = 0;
        std::uint64_t trivial = 0;
        nlohmann::json list = nlohmann::json::array();
        for (const auto& cls : classes) {
            total += cls.size;
            if (cls.trivial()) {
                ++trivial;
            }
            nlohmann::json members = nlohmann::json::array();
            for (const auto& member : cls.members) {
                members.push_back({{"kind", "permutation"},
                                   {"canonical", member.multiset},
                                   {"size", member.size},
                                   {"sentinel", tuple_json(member.sentinel)}});
            }
            list.push_back({{"kind", "stabilization"},
                            {"canonical", cls.odd},
                            {"size", cls.size},
                            {"sentinel", tuple_json(cls.sentinel)},
                            {"members", std::move(members)}});
        }
        j["count"] = classes.size();
        j["trivial_count"] = trivial;
        j["classes"] = std::move(list);
        if (total != space) {
            write_text_output(opt.out_path, j.dump(2) + "\n");
            throw AssertionError("classes: sizes do not partition the space");
        }
    } else {
        throw UsageError("classes: --kind must be permutation or stabilization");
    }
    write_text_output(opt.out_path, j.dump(2) + "\n");
    return 0;
}

// ---------------------------------------------------------------------------

struct DumpOptions {
    std::string what = "rho_binary";
    unsigned t = 0;
    unsigned n = 0;
    std::optional<std::string> out_path;
};

int cmd_dump(const DumpOptions& opt) {
    using qsd::moments::MomentMatrix;
    try {
        const MomentMatrix m = [&] {
            if (opt.what == "rho_binary") {
                return MomentMatrix::rho_binary(opt.t, opt.n);
            }
            if (opt.what == "rho_complex") {
                return MomentMatrix::rho_complex(opt.t, opt.n);
            }
            if (opt.what == "rho_diff") {
                return MomentMatrix::rho_diff(opt.t, opt.n);
            }
            return MomentMatrix::rho_haar(opt.t, opt.n);
        }();
        std::ostringstream csv;
        m.write_coo_csv(csv);
        write_text_output(opt.out_path, csv.str());
        std::fprintf(stderr, "%s t=%u n=%u dim=%llu nnz=%llu\n",
                     m.label().c_str(), opt.t, opt.n,
                     static_cast<unsigned long long>(m.dim()),
                     static_cast<unsigned long long>(m.nonzero_count()));
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("dump: ") + e.what());
    }
    return 0;
}

// ---------------------------------------------------------------------------

struct CircuitOptions {
    std::string action;
    std::optional<std::string> in_path;
    std::optional<std::string> table_path;
    std::optional<std::string> out_path;
    unsigned n = 0;
    unsigned k = 0;
};

qsd::circuits::ClassicalCircuit load_classical(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open circuit file: " + path);
    }
    try {
        return qsd::circuits::parse_classical(in);
    } catch (const std::runtime_error& e) {
        throw UsageError(path + ": " + e.what());
    }
}

qsd::circuits::HTCircuit load_ht(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open circuit file: " + path);
    }
    try {
        return qsd::circuits::parse_ht(in);
    } catch (const std::runtime_error& e) {
        throw UsageError(path + ": " + e.what());
    }
}

nlohmann::json metrics_json(const qsd::circuits::Metrics& m) {
    return {{"size", m.size}, {"depth", m.depth}};
}

int cmd_circuit(const CircuitOptions& opt) {
    using namespace qsd::circuits;
    if (opt.action == "compile") {
        if (!opt.in_path) {
            throw UsageError("circuit compile: --in is required");
        }
        const ClassicalCircuit compiled =
            compile_to_toffoli(load_classical(*opt.in_path));
        write_text_output(opt.out_path, to_text(compiled));
        std::cerr << metrics_json(circuit_metrics(compiled)).dump() << '\n';
        return 0;
    }
    if (opt.action == "gbin") {
        ClassicalCircuit fc;
        if (opt.in_path) {
            fc = load_classical(*opt.in_path);
        } else if (opt.table_path && opt.n >= 1) {
            const auto raw = read_table_file(*opt.table_path);
            if (raw.size() != (1ULL << opt.n)) {
                throw UsageError("circuit gbin: table must have 2^n entries");
            }
            std::vector<int> table;
            for (std::uint64_t v : raw) {
                if (v > 1) {
                    throw UsageError("circuit gbin: table entries must be bits");
                }
                table.push_back(static_cast<int>(v));
            }
            fc = truth_table_circuit(opt.n, table);
        } else {
            throw UsageError("circuit gbin: need --in, or --table with --n");
        }
        try {
            const HTCircuit ht = build_gbin_circuit(fc);
            write_text_output(opt.out_path, to_text(ht));
            std::cerr << metrics_json(circuit_metrics(ht)).dump() << '\n';
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("circuit gbin: ") + e.what());
        }
        return 0;
    }
    if (opt.action == "simulate") {
        if (!opt.in_path) {
            throw UsageError("circuit simulate: --in is required");
        }
        const qsd::StateVector state = simulate_ht(load_ht(*opt.in_path));
        std::ostringstream csv;
        qsd::write_state_csv(csv, state);
        write_text_output(opt.out_path, csv.str());
        std::fprintf(stderr, "norm=%.15f dim=%llu\n", state.norm(),
                     static_cast<unsigned long long>(state.dim()));
        return 0;
    }
    if (opt.action == "kwise-circuit") {
        if (opt.n < 1 || opt.k < 1) {
            throw UsageError("circuit kwise-circuit: --n and --k are required");
        }
        try {
            const ClassicalCircuit c = build_kwise_circuit(opt.n, opt.k);
            if (opt.out_path) {
                write_text_output(opt.out_path, to_text(c));
            }
            std::cout << metrics_json(circuit_metrics(c)).dump() << '\n';
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string("circuit kwise-circuit: ") + e.what());
        }
        return 0;
    }
    throw UsageError("circuit: unknown action '" + opt.action + "'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"phase-state ensembles, moment matrices, and HT circuits"};
    app.require_subcommand(1);

    GenStateOptions gen;
    auto* gen_cmd = app.add_subcommand("gen-state",
                                       "construct a phase state vector (CSV)");
    gen_cmd->add_option("--n", gen.n, "qubit count")->required();
    gen_cmd->add_option("--phase", gen.phase, "binary|complex")
        ->check(CLI::IsMember({"binary", "complex"}));
    gen_cmd->add_option("--k", gen.k, "k-wise key length (kwise source)");
    gen_cmd->add_option("--seed", gen.seed, "RNG seed for the kwise source");
    gen_cmd->add_option("--table", gen.table_path, "phase table file");
    gen_cmd->add_option("--out", gen.out_path, "output CSV path");

    VerifyOptions verify;
    auto* verify_cmd =
        app.add_subcommand("verify", "run the spectral bound verification");
    verify_cmd->add_option("--t", verify.t_values, "copy counts")
        ->required()
        ->delimiter(',');
    verify_cmd->add_option("--n", verify.n_values, "qubit counts")
        ->required()
        ->delimiter(',');
    verify_cmd->add_option("--out", verify.out_path, "report output path");
    verify_cmd->add_option("--format", verify.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    verify_cmd->add_option("--tol-rank", verify.tol_rank,
                           "relative eigenvalue cutoff for rank");
    verify_cmd->add_option("--tol-eig", verify.tol_eig,
                           "slack below the eigenvalue floor");

    ClassesOptions classes;
    auto* classes_cmd =
        app.add_subcommand("classes", "dump equivalence class descriptors");
    classes_cmd->add_option("--t", classes.t, "tuple length")->required();
    classes_cmd->add_option("--n", classes.n, "bits per string")->required();
    classes_cmd->add_option("--kind", classes.kind,
                            "permutation|stabilization")
        ->check(CLI::IsMember({"permutation", "stabilization"}));
    classes_cmd->add_option("--out", classes.out_path, "output path");

    DumpOptions dump;
    auto* dump_cmd = app.add_subcommand(
        "dump", "write a moment matrix as coordinate-list CSV");
    dump_cmd
        ->add_option("--what", dump.what,
                     "rho_binary|rho_complex|rho_diff|rho_haar")
        ->check(CLI::IsMember(
            {"rho_binary", "rho_complex", "rho_diff", "rho_haar"}));
    dump_cmd->add_option("--t", dump.t, "copy count")->required();
    dump_cmd->add_option("--n", dump.n, "qubit count")->required();
    dump_cmd->add_option("--out", dump.out_path, "output path");

    CircuitOptions circuit;
    auto* circuit_cmd =
        app.add_subcommand("circuit", "compile, synthesize and simulate");
    circuit_cmd
        ->add_option("action", circuit.action,
                     "compile|gbin|simulate|kwise-circuit")
        ->required();
    circuit_cmd->add_option("--in", circuit.in_path, "input circuit file");
    circuit_cmd->add_option("--table", circuit.table_path,
                            "truth table file (gbin)");
    circuit_cmd->add_option("--out", circuit.out_path, "output path");
    circuit_cmd->add_option("--n", circuit.n, "input bits");
    circuit_cmd->add_option("--k", circuit.k, "key length");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (gen_cmd->parsed()) {
            return cmd_gen_state(gen);
        }
        if (verify_cmd->parsed()) {
            return cmd_verify(verify);
        }
        if (classes_cmd->parsed()) {
            return cmd_classes(classes);
        }
        if (dump_cmd->parsed()) {
            return cmd_dump(dump);
        }
        if (circuit_cmd->parsed()) {
            return cmd_circuit(circuit);
        }
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const AssertionError& e) {
        std::fprintf(stderr, "assertion failed: %s\n", e.what());
        return kExitAssertion;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitAssertion;
    }
    return kExitUsage;
}
