#include "qsd/moments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace qsd::moments {

using tuples::TupleIndex;

namespace {

void check_scale(unsigned t, unsigned n, bool need_t_below_field) {
    if (t < 1 || n < 1 || t * n > 16) {
        throw std::invalid_argument(
            "moments: requires t >= 1, n >= 1, t*n <= 16");
    }
    if (need_t_below_field && t >= (1ULL << n)) {
        throw std::invalid_argument(
            "moments: t must be strictly smaller than 2^n");
    }
}

// All distinct orderings of a multiset, packed; ascending by construction.
std::vector<std::uint32_t> packed_orderings(std::vector<std::uint64_t> sorted,
                                            unsigned n) {
    std::vector<std::uint32_t> packed;
    do {
        packed.push_back(static_cast<std::uint32_t>(
            tuples::pack_tuple(TupleIndex{sorted}, n)));
    } while (std::next_permutation(sorted.begin(), sorted.end()));
    return packed;
}

}  // namespace

MomentMatrix::MomentMatrix(unsigned t, unsigned n, std::string label)
    : t_(t), n_(n), dim_(1ULL << (t * n)), label_(std::move(label)) {
    rows_.resize(dim_);
}

MomentMatrix MomentMatrix::rho_complex(unsigned t, unsigned n) {
    check_scale(t, n, true);
    MomentMatrix m(t, n, "rho_complex");
    const std::complex<double> value(std::ldexp(1.0, -static_cast<int>(t * n)),
                                     0.0);
    for (const auto& cls : tuples::enumerate_permutation_classes(t, n)) {
        const auto cols = packed_orderings(cls.multiset, n);
        std::vector<Entry> row;
        row.reserve(cols.size());
        for (std::uint32_t c : cols) {
            row.push_back({c, value});
        }
        for (std::uint32_t r : cols) {
            m.rows_[r] = row;
        }
    }
    return m;
}

MomentMatrix MomentMatrix::rho_binary(unsigned t, unsigned n) {
    check_scale(t, n, true);
    MomentMatrix m(t, n, "rho_binary");
    const std::complex<double> value(std::ldexp(1.0, -static_cast<int>(t * n)),
                                     0.0);
    for (const auto& stab : tuples::enumerate_stabilization_classes(t, n)) {
        std::vector<std::uint32_t> cols;
        cols.reserve(stab.size);
        for (const auto& member : stab.members) {
            const auto packed = packed_orderings(member.multiset, n);
            cols.insert(cols.end(), packed.begin(), packed.end());
        }
        std::sort(cols.begin(), cols.end());
        std::vector<Entry> row;
        row.reserve(cols.size());
        for (std::uint32_t c : cols) {
            row.push_back({c, value});
        }
        for (std::uint32_t r : cols) {
            m.rows_[r] = row;
        }
    }
    return m;
}

MomentMatrix MomentMatrix::rho_diff(unsigned t, unsigned n) {
    return rho_binary(t, n).subtract(rho_complex(t, n), "rho_diff");
}

MomentMatrix MomentMatrix::rho_haar(unsigned t, unsigned n) {
    check_scale(t, n, false);
    if (t > 8) {
        throw std::invalid_argument("moments: rho_haar bounded at t <= 8");
    }
    MomentMatrix m(t, n, "rho_haar");

    std::uint64_t t_factorial = 1;
    for (unsigned i = 2; i <= t; ++i) {
        t_factorial *= i;
    }
    const std::uint64_t sym_dim = tuples::binomial((1ULL << n) + t - 1, t);
    const double norm =
        1.0 / (static_cast<double>(t_factorial) * static_cast<double>(sym_dim));

    std::vector<unsigned> perm(t);
    for (std::uint64_t r = 0; r < m.dim_; ++r) {
        const TupleIndex x = tuples::unpack_tuple(r, t, n);
        for (unsigned i = 0; i < t; ++i) {
            perm[i] = i;
        }
        std::vector<std::uint32_t> images;
        images.reserve(t_factorial);
        do {
            TupleIndex permuted;
            permuted.entries.resize(t);
            for (unsigned i = 0; i < t; ++i) {
                permuted.entries[i] = x.entries[perm[i]];
            }
            images.push_back(
                static_cast<std::uint32_t>(tuples::pack_tuple(permuted, n)));
        } while (std::next_permutation(perm.begin(), perm.end()));
        std::sort(images.begin(), images.end());

        auto& row = m.rows_[r];
        for (std::size_t i = 0; i < images.size();) {
            std::size_t j = i;
            while (j < images.size() && images[j] == images[i]) {
                ++j;
            }
            row.push_back({images[i],
                           std::complex<double>(
                               static_cast<double>(j - i) * norm, 0.0)});
            i = j;
        }
    }
    return m;
}

std::complex<double> MomentMatrix::entry(std::uint64_t row,
                                         std::uint64_t col) const {
    const auto& r = rows_[row];
    const auto it = std::lower_bound(
        r.begin(), r.end(), col,
        [](const Entry& e, std::uint64_t c) { return e.col < c; });
    if (it != r.end() && it->col == col) {
        return it->value;
    }
    return {0.0, 0.0};
}

std::complex<double> MomentMatrix::trace() const {
    std::complex<double> sum = 0.0;
    for (std::uint64_t r = 0; r < dim_; ++r) {
        sum += entry(r, r);
    }
    return sum;
}

std::uint64_t MomentMatrix::nonzero_count() const {
    std::uint64_t count = 0;
    for (const auto& row : rows_) {
        count += row.size();
    }
    return count;
}

bool MomentMatrix::is_hermitian(double tol) const {
    for (std::uint64_t r = 0; r < dim_; ++r) {
        for (const Entry& e : rows_[r]) {
            if (std::abs(entry(e.col, r) - std::conj(e.value)) > tol) {
                return false;
            }
        }
    }
    return true;
}

std::vector<std::complex<double>> MomentMatrix::dense() const {
    if (dim_ > 4096) {
        throw std::invalid_argument(
            "moments: dense view bounded at dim <= 4096");
    }
    std::vector<std::complex<double>> out(dim_ * dim_);
    for (std::uint64_t r = 0; r < dim_; ++r) {
        for (const Entry& e : rows_[r]) {
            out[r * dim_ + e.col] = e.value;
        }
    }
    return out;
}

MomentMatrix MomentMatrix::subtract(const MomentMatrix& other,
                                    std::string label) const {
    if (dim_ != other.dim_ || t_ != other.t_ || n_ != other.n_) {
        throw std::invalid_argument("moments: shape mismatch in subtract");
    }
    MomentMatrix out(t_, n_, std::move(label));
    for (std::uint64_t r = 0; r < dim_; ++r) {
        const auto& a = rows_[r];
        const auto& b = other.rows_[r];
        auto& dst = out.rows_[r];
        std::size_t i = 0;
        std::size_t j = 0;
        while (i < a.size() || j < b.size()) {
            if (j == b.size() || (i < a.size() && a[i].col < b[j].col)) {
                dst.push_back(a[i]);
                ++i;
            } else if (i == a.size() || b[j].col < a[i].col) {
                dst.push_back({b[j].col, -b[j].value});
                ++j;
            } else {
                const std::complex<double> v = a[i].value - b[j].value;
                if (v != std::complex<double>(0.0, 0.0)) {
                    dst.push_back({a[i].col, v});
                }
                ++i;
                ++j;
            }
        }
    }
    return out;
}

void MomentMatrix::write_coo_csv(std::ostream& out) const {
    out << "dim," << dim_ << '\n';
    out << "row,col,re,im\n";
    char buf[96];
    for (std::uint64_t r = 0; r < dim_; ++r) {
        for (const Entry& e : rows_[r]) {
            std::snprintf(buf, sizeof buf, "%llu,%u,%.17g,%.17g",
                          static_cast<unsigned long long>(r), e.col,
                          e.value.real(), e.value.imag());
            out << buf << '\n';
        }
    }
}

OracleResult entry_oracle_detail(unsigned t, unsigned n, const TupleIndex& x,
                                 const TupleIndex& y, std::uint64_t d) {
    check_scale(t, n, true);
    if (d != 2 && d != (1ULL << n)) {
        throw std::invalid_argument("moments: phase modulus must be 2 or 2^n");
    }
    if (x.entries.size() != t || y.entries.size() != t) {
        throw std::invalid_argument("moments: tuple length must equal t");
    }

    // signed multiplicity difference per distinct string
    std::map<std::uint64_t, long long> diff;
    for (std::uint64_t s : x.entries) {
        if (s >= (1ULL << n)) {
            throw std::invalid_argument("moments: tuple entry out of range");
        }
        ++diff[s];
    }
    for (std::uint64_t s : y.entries) {
        if (s >= (1ULL << n)) {
            throw std::invalid_argument("moments: tuple entry out of range");
        }
        --diff[s];
    }
    std::vector<std::uint64_t> coeff;  // normalized to [0, d)
    coeff.reserve(diff.size());
    for (const auto& [s, c] : diff) {
        coeff.push_back(static_cast<std::uint64_t>(
            ((c % static_cast<long long>(d)) + static_cast<long long>(d)) %
            static_cast<long long>(d)));
    }
    const unsigned m = static_cast<unsigned>(coeff.size());

    double assignments = 1.0;
    for (unsigned i = 0; i < m; ++i) {
        assignments *= static_cast<double>(d);
    }
    if (assignments > static_cast<double>(1ULL << 24)) {
        throw std::invalid_argument("moments: oracle enumeration too large");
    }
    const std::uint64_t total = static_cast<std::uint64_t>(assignments);

    // Enumerate every assignment of f on the m distinct strings, tallying the
    // exponent residue.
    std::vector<std::uint64_t> counts(d, 0);
    std::vector<std::uint64_t> value(m, 0);
    std::vector<std::uint64_t> partial(m + 1, 0);
    unsigned level = 0;
    for (;;) {
        if (level == m) {
            ++counts[partial[m]];
            // backtrack to the deepest level that can still advance
            while (level > 0 && value[level - 1] + 1 == d) {
                value[--level] = 0;
            }
            if (level == 0) {
                break;
            }
            --level;
            ++value[level];
        }
        partial[level + 1] = (partial[level] + coeff[level] * value[level]) % d;
        ++level;
    }

    OracleResult result;
    const double scale = std::ldexp(1.0, -static_cast<int>(t * n));
    if (counts[0] == total) {
        result.exact = OracleValue::one;
        result.value = {scale, 0.0};
        return result;
    }
    bool balanced = true;
    for (std::uint64_t r = 0; r < d / 2; ++r) {
        if (counts[r] != counts[r + d / 2]) {
            balanced = false;
            break;
        }
    }
    if (balanced) {
        // sum_r cnt[r] w^r = sum_{r<d/2} cnt[r] (w^r + w^{r+d/2}) = 0, since
        // w^{d/2} = -1; exact in integer arithmetic
        result.exact = OracleValue::zero;
        result.value = {0.0, 0.0};
        return result;
    }
    result.exact = OracleValue::other;
    std::complex<double> sum = 0.0;
    for (std::uint64_t r = 0; r < d; ++r) {
        if (counts[r] != 0) {
            const double angle = 2.0 * std::numbers::pi *
                                 (static_cast<double>(r) /
                                  static_cast<double>(d));
            sum += static_cast<double>(counts[r]) *
                   std::complex<double>(std::cos(angle), std::sin(angle));
        }
    }
    result.value = sum * (scale / static_cast<double>(total));
    return result;
}

std::complex<double> entry_oracle(unsigned t, unsigned n, const TupleIndex& x,
                                  const TupleIndex& y, std::uint64_t d) {
    return entry_oracle_detail(t, n, x, y, d).value;
}

}  // namespace qsd::moments
