#include "qsd/kwise.hpp"

#include <nlohmann/json.hpp>

#include <random>
#include <stdexcept>

namespace qsd::kwise {

using gf2n::FieldElement;
using gf2n::FieldModulus;

KWiseKey sample_key(unsigned n, unsigned k, std::uint64_t seed) {
    if (n < 1 || n > 64 || k < 1) {
        throw std::invalid_argument("kwise: need n in [1, 64] and k >= 1");
    }
    std::mt19937_64 rng(seed);
    const std::uint64_t mask = n >= 64 ? ~0ULL : (1ULL << n) - 1;
    KWiseKey key{n, k, {}};
    key.coeffs.reserve(k);
    for (unsigned i = 0; i < k; ++i) {
        key.coeffs.push_back(rng() & mask);
    }
    return key;
}

std::uint64_t eval_full(const KWiseKey& key, std::uint64_t x) {
    const FieldModulus m = gf2n::find_modulus(key.n);
    std::vector<FieldElement> coeffs;
    coeffs.reserve(key.coeffs.size());
    for (std::uint64_t c : key.coeffs) {
        coeffs.push_back(gf2n::make_element(c, key.n));
    }
    return gf2n::poly_eval(coeffs, gf2n::make_element(x, key.n), m).bits;
}

int eval_bit(const KWiseKey& key, std::uint64_t x) {
    return static_cast<int>(eval_full(key, x) & 1);
}

namespace {

// Advances `subset` (strictly increasing indices into {0,...,univ-1}) to the
// next combination; returns false after the last one.
bool next_subset(std::vector<unsigned>& subset, unsigned univ) {
    const unsigned k = static_cast<unsigned>(subset.size());
    for (unsigned i = k; i-- > 0;) {
        if (subset[i] < univ - (k - i)) {
            ++subset[i];
            for (unsigned j = i + 1; j < k; ++j) {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    return false;
}

}  // namespace

KWiseReport verify_kwise_exhaustive(unsigned n, unsigned k) {
    if (n < 1 || k < 1 || n * k > 16) {
        throw std::invalid_argument("kwise: exhaustive check requires nk <= 16");
    }
    const std::uint64_t domain = 1ULL << n;
    const std::uint64_t key_count = 1ULL << (n * k);
    const std::uint64_t tuple_count = 1ULL << (n * k);  // output tuples

    KWiseReport report;
    report.keys_checked = key_count;

    if (k > domain) {
        // no k distinct inputs exist; the property holds vacuously
        report.pass = true;
        return report;
    }

    // subsets * keys gathers; keep the check in the "seconds" regime
    double subset_count = 1.0;
    for (unsigned i = 0; i < k; ++i) {
        subset_count *= static_cast<double>(domain - i) / (i + 1);
    }
    if (subset_count * static_cast<double>(key_count) > 5e8) {
        throw std::invalid_argument("kwise: instance too large to enumerate");
    }

    const FieldModulus m = gf2n::find_modulus(n);

    // Evaluate every key on the whole domain once.
    std::vector<std::uint16_t> tables(key_count * domain);
    std::vector<FieldElement> coeffs(k, FieldElement{0, n});
    for (std::uint64_t keybits = 0; keybits < key_count; ++keybits) {
        for (unsigned i = 0; i < k; ++i) {
            coeffs[i] =
                gf2n::make_element((keybits >> (i * n)) & (domain - 1), n);
        }
        for (std::uint64_t x = 0; x < domain; ++x) {
            tables[keybits * domain + x] = static_cast<std::uint16_t>(
                gf2n::poly_eval(coeffs, gf2n::make_element(x, n), m).bits);
        }
    }

    const double target = 1.0 / static_cast<double>(tuple_count);
    double worst = 0.0;
    bool pass = true;

    std::vector<unsigned> subset(k);
    for (unsigned i = 0; i < k; ++i) {
        subset[i] = i;
    }
    std::vector<std::uint32_t> counts(tuple_count);
    do {
        ++report.subsets_checked;
        std::fill(counts.begin(), counts.end(), 0);
        for (std::uint64_t keybits = 0; keybits < key_count; ++keybits) {
            std::uint64_t tuple = 0;
            for (unsigned i = 0; i < k; ++i) {
                tuple |= static_cast<std::uint64_t>(
                             tables[keybits * domain + subset[i]])
                         << (i * n);
            }
            ++counts[tuple];
        }
        // exact k-wise independence <=> every tuple hit by the same number
        // of keys, i.e. key_count / tuple_count of them (here exactly 1)
        for (std::uint64_t tuple = 0; tuple < tuple_count; ++tuple) {
            const double frac = static_cast<double>(counts[tuple]) /
                                static_cast<double>(key_count);
            const double dev = frac > target ? frac - target : target - frac;
            if (dev > worst) {
                worst = dev;
            }
            if (counts[tuple] * tuple_count != key_count) {
                pass = false;
            }
        }
    } while (next_subset(subset, static_cast<unsigned>(domain)));

    report.pass = pass;
    report.worst_deviation = worst;
    return report;
}

std::string key_to_json(const KWiseKey& key) {
    nlohmann::json j;
    j["n"] = key.n;
    j["k"] = key.k;
    j["coeffs"] = key.coeffs;
    return j.dump();
}

KWiseKey key_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    KWiseKey key;
    key.n = j.at("n").get<unsigned>();
    key.k = j.at("k").get<unsigned>();
    key.coeffs = j.at("coeffs").get<std::vector<std::uint64_t>>();
    if (key.k != key.coeffs.size()) {
        throw std::invalid_argument("kwise: coeffs length must equal k");
    }
    return key;
}

}  // namespace qsd::kwise
