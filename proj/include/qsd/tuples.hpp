// tuples.hpp
// Equivalence-relation machinery over t-tuples of n-bit strings: histograms,
// odd sets, the permutation / stabilization / remote-stabilization predicates,
// class enumeration with sizes and sentinels.
//
// A tuple (x_1,...,x_t) is ordered with x_1 most significant; packing follows
// that order, so lexicographic comparison of tuples equals numeric comparison
// of packed values.

#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace qsd::tuples {

struct TupleIndex {
    std::vector<std::uint64_t> entries;  // length t, each entry < 2^n

    friend bool operator==(const TupleIndex&, const TupleIndex&) = default;
};

// string -> multiplicity of the tuple's entries; multiplicities sum to t
using Histogram = std::map<std::uint64_t, unsigned>;

// strings of odd multiplicity, sorted ascending
using OddSet = std::vector<std::uint64_t>;

std::uint64_t pack_tuple(const TupleIndex& x, unsigned n);
TupleIndex unpack_tuple(std::uint64_t packed, unsigned t, unsigned n);

Histogram histogram(const TupleIndex& x);
OddSet odd_set(const TupleIndex& x);

// x, y are permutations of each other iff their histograms are equal
bool is_permutation_pair(const TupleIndex& x, const TupleIndex& y);

// x, y are stabilizations of each other iff every string appears an even
// number of times in their concatenation, equivalently Odd(x) == Odd(y)
bool is_stabilization_pair(const TupleIndex& x, const TupleIndex& y);

// stabilizations that are not permutations
bool is_remote_stabilization_pair(const TupleIndex& x, const TupleIndex& y);

// t! / prod_s multiplicity(s)!  (number of distinct orderings of the multiset)
std::uint64_t permutation_class_size(const Histogram& h);

struct PermutationClass {
    std::vector<std::uint64_t> multiset;  // canonical: nondecreasing
    std::uint64_t size = 0;
    TupleIndex sentinel;                  // lexicographically largest member
};

struct StabilizationClass {
    OddSet odd;
    std::uint64_t size = 0;               // total tuples in the class
    TupleIndex sentinel;
    std::vector<PermutationClass> members;

    bool trivial() const { return members.size() == 1; }
};

// One class per multiset of size t over {0,1}^n; the count is
// binomial(2^n + t - 1, t). Requires t*n <= 16.
std::vector<PermutationClass> enumerate_permutation_classes(unsigned t,
                                                            unsigned n);

// Permutation classes grouped by their Odd set. Requires t*n <= 16.
std::vector<StabilizationClass> enumerate_stabilization_classes(unsigned t,
                                                                unsigned n);

// Exact binomial coefficient; throws std::overflow_error if the value (or an
// intermediate product) exceeds 64 bits.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

}  // namespace qsd::tuples
