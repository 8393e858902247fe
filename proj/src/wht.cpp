#include "qgi/wht.hpp"

#include <bit>

namespace qgi {

std::string_view to_string(Ordering o) { return o == Ordering::natural ? "natural" : "sequency"; }

Ordering parse_ordering(std::string_view s) {
    if (s == "natural") return Ordering::natural;
    if (s == "sequency") return Ordering::sequency;
    throw SpecError("unknown ordering '" + std::string(s) + "' (expected natural|sequency)");
}

std::vector<long> sequency_permutation(long d) {
    if (!is_power_of_two(d)) throw DimensionError("dimension " + std::to_string(d) + " is not a power of two");
    const int bits = std::countr_zero(static_cast<unsigned long>(d));
    std::vector<long> perm(d);
    for (long k = 0; k < d; ++k) {
        // Sylvester row with k sign changes is the bit reversal of gray(k).
        unsigned long g = static_cast<unsigned long>(k) ^ (static_cast<unsigned long>(k) >> 1);
        unsigned long r = 0;
        for (int b = 0; b < bits; ++b)
            if (g & (1ul << b)) r |= 1ul << (bits - 1 - b);
        perm[k] = static_cast<long>(r);
    }
    return perm;
}

OrthoMatrix hadamard_matrix(long d, Ordering ordering) {
    if (!is_power_of_two(d)) throw DimensionError("dimension " + std::to_string(d) + " is not a power of two");
    OrthoMatrix h;
    h.dim = d;
    h.ordering = ordering;
    if (ordering == Ordering::natural) {
        h.natural_row.resize(d);
        for (long i = 0; i < d; ++i) h.natural_row[i] = i;
    } else {
        h.natural_row = sequency_permutation(d);
    }
    const double a = 1.0 / std::sqrt(static_cast<double>(d));
    h.entries.resize(d, d);
    for (long n = 0; n < d; ++n) {
        const unsigned long row = static_cast<unsigned long>(h.natural_row[n]);
        for (long x = 0; x < d; ++x) {
            // Sylvester: H(i, x) = (-1)^{popcount(i & x)}
            const bool negative = std::popcount(row & static_cast<unsigned long>(x)) % 2 == 1;
            h.entries(n, x) = negative ? -a : a;
        }
    }
    return h;
}

RealField basis_mask(long j, const OrthoMatrix& h) {
    const long d = h.dim;
    if (j < 0 || j >= d * d)
        throw IndexError("mask index " + std::to_string(j) + " outside [0, " + std::to_string(d * d) + ")");
    const long n = j / d;
    const long m = j % d;
    const double a = 1.0 / static_cast<double>(d);
    RealField mask(d, d);
    for (long c = 0; c < d; ++c)
        for (long r = 0; r < d; ++r) mask(r, c) = h.sign(n, r) * h.sign(m, c) * a;
    return mask;
}

int sign_changes(const OrthoMatrix& h, long n) {
    int changes = 0;
    for (long x = 1; x < h.dim; ++x)
        if (h.sign(n, x) != h.sign(n, x - 1)) ++changes;
    return changes;
}

}  // namespace qgi
