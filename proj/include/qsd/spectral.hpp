// spectral.hpp
// Eigenvalue analysis of the moment matrices, trace distances, the
// closed-form bounds, the determinant product formula for the difference
// matrix, and the combined verification report.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsd/moments.hpp"

namespace qsd::spectral {

struct Spectrum {
    std::vector<double> eigenvalues;  // sorted descending
    std::uint64_t dim = 0;
    std::string source;

    double min() const;
    double sum() const;
    double abs_sum() const;
};

// Full real spectrum of a Hermitian moment matrix (dim <= 4096, hermiticity
// verified within 1e-12; throws std::invalid_argument otherwise).
Spectrum hermitian_spectrum(const moments::MomentMatrix& m);

// Spectrum of a - b without materializing both dense matrices separately.
Spectrum difference_spectrum(const moments::MomentMatrix& a,
                             const moments::MomentMatrix& b);

// (1/2) * sum |lambda_i(a - b)|
double trace_distance(const moments::MomentMatrix& a,
                      const moments::MomentMatrix& b);
double trace_distance(const Spectrum& difference);

// Number of eigenvalues with |lambda| > tol * max|lambda|; 0 for the zero
// matrix.
int numeric_rank(const Spectrum& spectrum, double tol = 1e-9);
int numeric_rank(const moments::MomentMatrix& m, double tol = 1e-9);

// binomial(2^n + t - 1, t) - binomial(2^n, t), the rank bound for the
// difference matrix; exact integer arithmetic, throws std::overflow_error
// past 64 bits. Requires 1 <= t <= 2^n - 1.
std::uint64_t rank_bound(unsigned t, unsigned n);

// -t!/2^{tn}, the lower bound on the spectrum of the difference matrix.
double eigenvalue_floor(unsigned t, unsigned n);

// prod_{i<t}(1 + i/2^n) - prod_{i<t}(1 - i/2^n): bound on
// td(rho_binary, rho_complex).
double binary_complex_bound(unsigned t, unsigned n);

// prod_{i<t}(1 - i/2^n) - prod_{i<t}(1 - 2i/(2^n + i)): the exact value of
// td(rho_complex, rho_haar).
double complex_haar_closed_form(unsigned t, unsigned n);

// 4t^2/2^n: bound on td(rho_binary, rho_haar).
double binary_haar_bound(unsigned t, unsigned n);

// det(rho_diff - lambda*I) evaluated from the per-class triangularized
// product: trivial stabilization classes contribute (-lambda)^{|S|};
// a non-trivial class with permutation classes P_1..P_k (P_S holding the
// class sentinel) contributes (-lambda)^{|S|-k}
// * prod_{P != P_S} (-lambda - |P|/2^{tn})
// * (-lambda + (lambda + |P_S|/2^{tn})
//       * sum_{P != P_S} (|P|/2^{tn}) / (lambda + |P|/2^{tn})).
// lambda must stay 1e-12 away from the singular set
// {-|P|/2^{tn}} union {0}; throws std::domain_error otherwise.
double det_product_formula(unsigned t, unsigned n, double lambda);

struct VerifyTolerances {
    double rank_tol = 1e-9;   // relative eigenvalue cutoff for numeric rank
    double eig_tol = 1e-10;   // slack below the eigenvalue floor
    double td_tol = 1e-9;     // slack on trace-distance bounds/equalities
};

struct BoundsReport {
    unsigned t = 0;
    unsigned n = 0;
    std::uint64_t dim = 0;

    int rank_observed = 0;
    std::uint64_t rank_bound = 0;
    double lambda_min_observed = 0.0;
    double eigenvalue_floor = 0.0;

    double td_binary_complex = 0.0;
    double td_complex_haar = 0.0;
    double td_binary_haar = 0.0;
    double binary_complex_bound = 0.0;
    double complex_haar_closed_form = 0.0;
    double binary_haar_bound = 0.0;

    bool pass_rank = false;
    bool pass_eigenvalue_floor = false;
    bool pass_binary_complex = false;
    bool pass_complex_haar = false;
    bool pass_binary_haar = false;
    bool pass_triangle = false;

    bool pass() const {
        return pass_rank && pass_eigenvalue_floor && pass_binary_complex &&
               pass_complex_haar && pass_binary_haar && pass_triangle;
    }
};

// Builds all four matrices, runs the spectral checks, and fills the report.
// Failed assertions are reported through the pass flags, never dropped.
// Requires t*n <= 12 (full dense spectral work) and t <= 2^n - 1.
BoundsReport verify_all(unsigned t, unsigned n,
                        const VerifyTolerances& tol = {});

std::string report_to_json(const BoundsReport& report);
std::string reports_to_csv(const std::vector<BoundsReport>& reports);

}  // namespace qsd::spectral
