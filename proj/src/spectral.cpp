#include "qsd/spectral.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qsd::spectral {

using moments::MomentMatrix;

double Spectrum::min() const {
    return eigenvalues.empty() ? 0.0 : eigenvalues.back();
}

double Spectrum::sum() const {
    double s = 0.0;
    for (double v : eigenvalues) {
        s += v;
    }
    return s;
}

double Spectrum::abs_sum() const {
    double s = 0.0;
    for (double v : eigenvalues) {
        s += std::abs(v);
    }
    return s;
}

namespace {

Spectrum spectrum_of_dense(Eigen::MatrixXcd dense, std::string source) {
    double herm_err = 0.0;
    for (Eigen::Index i = 0; i < dense.rows(); ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            herm_err = std::max(
                herm_err, std::abs(dense(i, j) - std::conj(dense(j, i))));
        }
    }
    if (herm_err > 1e-12) {
        throw std::invalid_argument("spectral: matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
        dense, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("spectral: eigensolver failed to converge");
    }
    Spectrum spec;
    spec.dim = static_cast<std::uint64_t>(dense.rows());
    spec.source = std::move(source);
    spec.eigenvalues.assign(solver.eigenvalues().data(),
                            solver.eigenvalues().data() + dense.rows());
    std::sort(spec.eigenvalues.rbegin(), spec.eigenvalues.rend());
    return spec;
}

Eigen::MatrixXcd to_eigen(const MomentMatrix& m, double sign) {
    if (m.dim() > 4096) {
        throw std::invalid_argument("spectral: bounded at dim <= 4096");
    }
    Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(
        static_cast<Eigen::Index>(m.dim()), static_cast<Eigen::Index>(m.dim()));
    for (std::uint64_t r = 0; r < m.dim(); ++r) {
        for (const auto& e : m.row(r)) {
            dense(static_cast<Eigen::Index>(r), e.col) = sign * e.value;
        }
    }
    return dense;
}

double ipow(double base, std::uint64_t e) {
    double acc = 1.0;
    while (e != 0) {
        if (e & 1) {
            acc *= base;
        }
        base *= base;
        e >>= 1;
    }
    return acc;
}

}  // namespace

Spectrum hermitian_spectrum(const MomentMatrix& m) {
    return spectrum_of_dense(to_eigen(m, 1.0), m.label());
}

Spectrum difference_spectrum(const MomentMatrix& a, const MomentMatrix& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("spectral: dimension mismatch");
    }
    Eigen::MatrixXcd dense = to_eigen(a, 1.0);
    for (std::uint64_t r = 0; r < b.dim(); ++r) {
        for (const auto& e : b.row(r)) {
            dense(static_cast<Eigen::Index>(r), e.col) -= e.value;
        }
    }
    return spectrum_of_dense(std::move(dense),
                             a.label() + " - " + b.label());
}

double trace_distance(const Spectrum& difference) {
    return 0.5 * difference.abs_sum();
}

double trace_distance(const MomentMatrix& a, const MomentMatrix& b) {
    return trace_distance(difference_spectrum(a, b));
}

int numeric_rank(const Spectrum& spectrum, double tol) {
    double max_abs = 0.0;
    for (double v : spectrum.eigenvalues) {
        max_abs = std::max(max_abs, std::abs(v));
    }
    if (max_abs == 0.0) {
        return 0;
    }
    int rank = 0;
    for (double v : spectrum.eigenvalues) {
        if (std::abs(v) > tol * max_abs) {
            ++rank;
        }
    }
    return rank;
}

int numeric_rank(const MomentMatrix& m, double tol) {
    return numeric_rank(hermitian_spectrum(m), tol);
}

std::uint64_t rank_bound(unsigned t, unsigned n) {
    if (t < 1 || n < 1 || n > 64 || (n < 64 && t >= (1ULL << n))) {
        throw std::invalid_argument("spectral: need 1 <= t <= 2^n - 1");
    }
    if (t == 1) {
        return 0;  // both binomials equal 2^n
    }
    if (n >= 64) {
        // binomial(2^64 + t - 1, t) with t >= 2 cannot fit 64 bits
        throw std::overflow_error("spectral: rank bound exceeds 64 bits");
    }
    const std::uint64_t field = 1ULL << n;
    return tuples::binomial(field + t - 1, t) - tuples::binomial(field, t);
}

double eigenvalue_floor(unsigned t, unsigned n) {
    double factorial = 1.0;
    for (unsigned i = 2; i <= t; ++i) {
        factorial *= i;
    }
    return std::ldexp(-factorial, -static_cast<int>(t * n));
}

double binary_complex_bound(unsigned t, unsigned n) {
    const double field = std::ldexp(1.0, static_cast<int>(n));
    double upper = 1.0;
    double lower = 1.0;
    for (unsigned i = 1; i + 1 <= t; ++i) {
        upper *= 1.0 + static_cast<double>(i) / field;
        lower *= 1.0 - static_cast<double>(i) / field;
    }
    return upper - lower;
}

double complex_haar_closed_form(unsigned t, unsigned n) {
    const double field = std::ldexp(1.0, static_cast<int>(n));
    double complex_side = 1.0;
    double haar_side = 1.0;
    for (unsigned i = 1; i + 1 <= t; ++i) {
        complex_side *= 1.0 - static_cast<double>(i) / field;
        haar_side *= 1.0 - 2.0 * static_cast<double>(i) /
                               (field + static_cast<double>(i));
    }
    return complex_side - haar_side;
}

double binary_haar_bound(unsigned t, unsigned n) {
    return std::ldexp(4.0 * static_cast<double>(t) * static_cast<double>(t),
                      -static_cast<int>(n));
}

double det_product_formula(unsigned t, unsigned n, double lambda) {
    const double scale = std::ldexp(1.0, -static_cast<int>(t * n));
    const auto stab_classes = tuples::enumerate_stabilization_classes(t, n);

    if (std::abs(lambda) <= 1e-12) {
        throw std::domain_error("spectral: lambda in singular set");
    }
    for (const auto& stab : stab_classes) {
        for (const auto& p : stab.members) {
            if (std::abs(lambda + static_cast<double>(p.size) * scale) <=
                1e-12) {
                throw std::domain_error("spectral: lambda in singular set");
            }
        }
    }

    double det = 1.0;
    for (const auto& stab : stab_classes) {
        if (stab.trivial()) {
            det *= ipow(-lambda, stab.size);
            continue;
        }
        // locate the permutation class holding the stabilization sentinel
        const std::uint64_t stab_sentinel = tuples::pack_tuple(stab.sentinel, n);
        std::size_t sentinel_class = 0;
        for (std::size_t i = 0; i < stab.members.size(); ++i) {
            if (tuples::pack_tuple(stab.members[i].sentinel, n) ==
                stab_sentinel) {
                sentinel_class = i;
                break;
            }
        }
        const std::uint64_t member_count = stab.members.size();
        det *= ipow(-lambda, stab.size - member_count);
        double cross_sum = 0.0;
        for (std::size_t i = 0; i < stab.members.size(); ++i) {
            if (i == sentinel_class) {
                continue;
            }
            const double weight =
                static_cast<double>(stab.members[i].size) * scale;
            det *= -lambda - weight;
            cross_sum += weight / (lambda + weight);
        }
        const double sentinel_weight =
            static_cast<double>(stab.members[sentinel_class].size) * scale;
        det *= -lambda + (lambda + sentinel_weight) * cross_sum;
    }
    return det;
}

BoundsReport verify_all(unsigned t, unsigned n, const VerifyTolerances& tol) {
    if (t < 1 || n < 1 || t * n > 12) {
        throw std::invalid_argument(
            "spectral: verify_all requires t >= 1, n >= 1, t*n <= 12");
    }
    const MomentMatrix binary = MomentMatrix::rho_binary(t, n);
    const MomentMatrix complex_phase = MomentMatrix::rho_complex(t, n);
    const MomentMatrix haar = MomentMatrix::rho_haar(t, n);

    BoundsReport report;
    report.t = t;
    report.n = n;
    report.dim = binary.dim();

    const Spectrum diff_spec = difference_spectrum(binary, complex_phase);
    report.rank_observed = numeric_rank(diff_spec, tol.rank_tol);
    report.lambda_min_observed = diff_spec.min();
    report.td_binary_complex = trace_distance(diff_spec);
    report.td_complex_haar =
        trace_distance(difference_spectrum(complex_phase, haar));
    report.td_binary_haar = trace_distance(difference_spectrum(binary, haar));

    report.rank_bound = rank_bound(t, n);
    report.eigenvalue_floor = eigenvalue_floor(t, n);
    report.binary_complex_bound = binary_complex_bound(t, n);
    report.complex_haar_closed_form = complex_haar_closed_form(t, n);
    report.binary_haar_bound = binary_haar_bound(t, n);

    report.pass_rank =
        report.rank_observed <= static_cast<long long>(report.rank_bound);
    report.pass_eigenvalue_floor =
        report.lambda_min_observed >= report.eigenvalue_floor - tol.eig_tol;
    report.pass_binary_complex =
        report.td_binary_complex <= report.binary_complex_bound + tol.td_tol;
    report.pass_complex_haar =
        std::abs(report.td_complex_haar - report.complex_haar_closed_form) <=
        tol.td_tol;
    report.pass_binary_haar =
        report.td_binary_haar <=
        std::min(report.binary_haar_bound,
                 report.binary_complex_bound + report.complex_haar_closed_form) +
            tol.td_tol;
    report.pass_triangle =
        report.td_binary_haar <=
        report.td_binary_complex + report.td_complex_haar + 1e-12;
    return report;
}

std::string report_to_json(const BoundsReport& r) {
    nlohmann::json j;
    j["t"] = r.t;
    j["n"] = r.n;
    j["dim"] = r.dim;
    j["rank_observed"] = r.rank_observed;
    j["rank_bound"] = r.rank_bound;
    j["lambda_min_observed"] = r.lambda_min_observed;
    j["eigenvalue_floor"] = r.eigenvalue_floor;
    j["td_binary_complex"] = r.td_binary_complex;
    j["td_complex_haar"] = r.td_complex_haar;
    j["td_binary_haar"] = r.td_binary_haar;
    j["binary_complex_bound"] = r.binary_complex_bound;
    j["complex_haar_closed_form"] = r.complex_haar_closed_form;
    j["binary_haar_bound"] = r.binary_haar_bound;
    j["passes"] = {
        {"rank", r.pass_rank},
        {"eigenvalue_floor", r.pass_eigenvalue_floor},
        {"binary_complex", r.pass_binary_complex},
        {"complex_haar", r.pass_complex_haar},
        {"binary_haar", r.pass_binary_haar},
        {"triangle", r.pass_triangle},
    };
    j["pass"] = r.pass();
    return j.dump(2);
}

std::string reports_to_csv(const std::vector<BoundsReport>& reports) {
    std::ostringstream out;
    out << "t,n,dim,rank_observed,rank_bound,lambda_min,eigenvalue_floor,"
           "td_binary_complex,td_complex_haar,td_binary_haar,"
           "binary_complex_bound,complex_haar_closed_form,binary_haar_bound,pass\n";
    char buf[64];
    auto num = [&buf](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (const auto& r : reports) {
        out << r.t << ',' << r.n << ',' << r.dim << ',' << r.rank_observed
            << ',' << r.rank_bound << ',' << num(r.lambda_min_observed) << ','
            << num(r.eigenvalue_floor) << ',' << num(r.td_binary_complex)
            << ',' << num(r.td_complex_haar) << ',' << num(r.td_binary_haar)
            << ',' << num(r.binary_complex_bound) << ','
            << num(r.complex_haar_closed_form) << ','
            << num(r.binary_haar_bound) << ',' << (r.pass() ? "true" : "false")
            << '\n';
    }
    return out.str();
}

}  // namespace qsd::spectral
