#include "qsd/tuples.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace qsd::tuples {

namespace {

void check_scale(unsigned t, unsigned n) {
    if (t < 1 || n < 1 || t * n > 16) {
        throw std::invalid_argument(
            "tuples: enumeration requires t >= 1, n >= 1, t*n <= 16");
    }
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw std::overflow_error("tuples: 64-bit overflow");
    }
    return r;
}

}  // namespace

std::uint64_t pack_tuple(const TupleIndex& x, unsigned n) {
    std::uint64_t packed = 0;
    for (std::uint64_t entry : x.entries) {
        if (entry >> n) {
            throw std::invalid_argument("tuples: entry exceeds n bits");
        }
        packed = (packed << n) | entry;
    }
    return packed;
}

TupleIndex unpack_tuple(std::uint64_t packed, unsigned t, unsigned n) {
    const std::uint64_t mask = (1ULL << n) - 1;
    TupleIndex x;
    x.entries.resize(t);
    for (unsigned i = t; i-- > 0;) {
        x.entries[i] = packed & mask;
        packed >>= n;
    }
    return x;
}

Histogram histogram(const TupleIndex& x) {
    Histogram h;
    for (std::uint64_t entry : x.entries) {
        ++h[entry];
    }
    return h;
}

OddSet odd_set(const TupleIndex& x) {
    OddSet odd;
    for (const auto& [s, count] : histogram(x)) {
        if (count % 2 == 1) {
            odd.push_back(s);  // map iteration is already sorted
        }
    }
    return odd;
}

bool is_permutation_pair(const TupleIndex& x, const TupleIndex& y) {
    if (x.entries.size() != y.entries.size()) {
        throw std::invalid_argument("tuples: tuple lengths differ");
    }
    return histogram(x) == histogram(y);
}

bool is_stabilization_pair(const TupleIndex& x, const TupleIndex& y) {
    if (x.entries.size() != y.entries.size()) {
        throw std::invalid_argument("tuples: tuple lengths differ");
    }
    return odd_set(x) == odd_set(y);
}

bool is_remote_stabilization_pair(const TupleIndex& x, const TupleIndex& y) {
    return is_stabilization_pair(x, y) && !is_permutation_pair(x, y);
}

std::uint64_t permutation_class_size(const Histogram& h) {
    unsigned t = 0;
    for (const auto& [s, count] : h) {
        t += count;
    }
    std::uint64_t numerator = 1;
    for (unsigned i = 2; i <= t; ++i) {
        numerator = checked_mul(numerator, i);
    }
    for (const auto& [s, count] : h) {
        for (unsigned i = 2; i <= count; ++i) {
            numerator /= i;
        }
    }
    return numerator;
}

namespace {

PermutationClass make_permutation_class(std::vector<std::uint64_t> multiset) {
    PermutationClass cls;
    cls.sentinel.entries.assign(multiset.rbegin(), multiset.rend());
    Histogram h;
    for (std::uint64_t s : multiset) {
        ++h[s];
    }
    cls.size = permutation_class_size(h);
    cls.multiset = std::move(multiset);
    return cls;
}

}  // namespace

std::vector<PermutationClass> enumerate_permutation_classes(unsigned t,
                                                            unsigned n) {
    check_scale(t, n);
    const std::uint64_t domain = 1ULL << n;
    std::vector<PermutationClass> classes;
    std::vector<std::uint64_t> multiset(t, 0);  // nondecreasing odometer
    for (;;) {
        classes.push_back(make_permutation_class(multiset));
        bool advanced = false;
        for (unsigned i = t; i-- > 0;) {
            if (multiset[i] + 1 < domain) {
                const std::uint64_t v = multiset[i] + 1;
                for (unsigned j = i; j < t; ++j) {
                    multiset[j] = v;
                }
                advanced = true;
                break;
            }
        }
        if (!advanced) {
            break;
        }
    }
    return classes;
}

std::vector<StabilizationClass> enumerate_stabilization_classes(unsigned t,
                                                                unsigned n) {
    std::map<OddSet, StabilizationClass> grouped;
    for (PermutationClass& cls : enumerate_permutation_classes(t, n)) {
        TupleIndex canonical{cls.multiset};
        StabilizationClass& stab = grouped[odd_set(canonical)];
        stab.size += cls.size;
        if (stab.members.empty() ||
            pack_tuple(cls.sentinel, n) > pack_tuple(stab.sentinel, n)) {
            stab.sentinel = cls.sentinel;
        }
        stab.members.push_back(std::move(cls));
    }
    std::vector<StabilizationClass> classes;
    classes.reserve(grouped.size());
    for (auto& [odd, stab] : grouped) {
        stab.odd = odd;
        classes.push_back(std::move(stab));
    }
    return classes;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) {
        return 0;
    }
    if (k > n - k) {
        k = n - k;
    }
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        std::uint64_t factor = n - k + i;
        std::uint64_t div = i;
        const std::uint64_t g1 = std::gcd(result, div);
        result /= g1;
        div /= g1;
        const std::uint64_t g2 = std::gcd(factor, div);
        factor /= g2;
        div /= g2;
        // div is 1 now: i | result*factor and both gcds were maximal
        result = checked_mul(result, factor);
    }
    return result;
}

}  // namespace qsd::tuples
