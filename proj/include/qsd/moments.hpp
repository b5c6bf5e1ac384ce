// moments.hpp
// Exact t-copy moment matrices of the phase-state ensembles and of the Haar
// average, built from the combinatorial pair predicates, plus an independent
// brute-force expectation oracle for individual entries.
//
// All four matrices live on the index space ({0,1}^n)^t packed with x_1 most
// significant; dimensions are 2^{tn}. The two phase matrices and their
// difference have entries in {0, 2^{-tn}} exactly.

#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qsd/tuples.hpp"

namespace qsd::moments {

class MomentMatrix {
  public:
    struct Entry {
        std::uint32_t col;
        std::complex<double> value;
    };

    // entry(x,y) = 2^{-tn} iff x, y are permutations of each other.
    // Requires 1 <= t <= 2^n - 1 (the root-of-unity cancellation needs
    // t < 2^n) and t*n <= 16.
    static MomentMatrix rho_complex(unsigned t, unsigned n);

    // entry(x,y) = 2^{-tn} iff x, y are stabilizations of each other.
    static MomentMatrix rho_binary(unsigned t, unsigned n);

    // rho_binary - rho_complex: entry 2^{-tn} exactly on remote
    // stabilization pairs, zero elsewhere.
    static MomentMatrix rho_diff(unsigned t, unsigned n);

    // Haar t-copy average: the symmetric-subspace projector normalized by
    // binomial(2^n + t - 1, t), built by summing the t! coordinate
    // permutation operators. Requires t <= 8 and t*n <= 16.
    static MomentMatrix rho_haar(unsigned t, unsigned n);

    unsigned t() const { return t_; }
    unsigned n() const { return n_; }
    std::uint64_t dim() const { return dim_; }
    const std::string& label() const { return label_; }

    const std::vector<Entry>& row(std::uint64_t r) const { return rows_[r]; }
    std::complex<double> entry(std::uint64_t row, std::uint64_t col) const;

    std::complex<double> trace() const;
    std::uint64_t nonzero_count() const;
    bool is_hermitian(double tol) const;

    // Row-major dense view; guarded at dim <= 4096.
    std::vector<std::complex<double>> dense() const;

    // this - other, with exactly cancelling entries dropped.
    MomentMatrix subtract(const MomentMatrix& other, std::string label) const;

    // Coordinate-list CSV: a "dim,<dim>" header line, then "row,col,re,im".
    void write_coo_csv(std::ostream& out) const;

  private:
    MomentMatrix(unsigned t, unsigned n, std::string label);

    unsigned t_ = 0;
    unsigned n_ = 0;
    std::uint64_t dim_ = 0;
    std::string label_;
    std::vector<std::vector<Entry>> rows_;  // each sorted by column
};

// Exact classification of a brute-force entry expectation.
enum class OracleValue { zero, one, other };

struct OracleResult {
    std::complex<double> value;  // includes the 2^{-tn} scale
    OracleValue exact = OracleValue::other;
};

// The expectation 2^{-tn} * E_f[omega_d^{sum f(x_i) - sum f(y_i)}] over a
// uniformly random f on the distinct strings of (x,y), computed by
// enumerating all d^m assignments (m = number of distinct strings, bounded
// by d^m <= 2^24). d must be 2 or 2^n. Never consults the pair predicates.
//
// The `exact` flag is decided in integer arithmetic from the residue counts
// of the exponent: `one` iff every assignment lands on residue 0, `zero` iff
// the counts satisfy cnt[r] == cnt[r + d/2] for all r (which forces the
// root-of-unity sum to vanish identically).
OracleResult entry_oracle_detail(unsigned t, unsigned n,
                                 const tuples::TupleIndex& x,
                                 const tuples::TupleIndex& y, std::uint64_t d);

std::complex<double> entry_oracle(unsigned t, unsigned n,
                                  const tuples::TupleIndex& x,
                                  const tuples::TupleIndex& y, std::uint64_t d);

}  // namespace qsd::moments
