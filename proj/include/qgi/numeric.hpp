#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "qgi/types.hpp"

namespace qgi {

/// Balanced-tree summation; error grows with log n and the result is independent of how the
/// caller partitions the data.
template <typename T>
T pairwise_sum(std::span<const T> xs) {
    if (xs.size() <= 8) {
        T acc{};
        for (const T& x : xs) acc += x;
        return acc;
    }
    const std::size_t mid = xs.size() / 2;
    return pairwise_sum(xs.first(mid)) + pairwise_sum(xs.subspan(mid));
}

template <typename Derived>
typename Derived::Scalar pairwise_sum(const Eigen::DenseBase<Derived>& v) {
    using Scalar = typename Derived::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> tmp = v.reshaped();
    return pairwise_sum(std::span<const Scalar>(tmp.data(), static_cast<std::size_t>(tmp.size())));
}

inline double median(std::vector<double> xs) {
    if (xs.empty()) throw DataError("median of an empty set");
    const std::size_t mid = xs.size() / 2;
    std::nth_element(xs.begin(), xs.begin() + static_cast<long>(mid), xs.end());
    const double hi = xs[mid];
    if (xs.size() % 2 == 1) return hi;
    const double lo = *std::max_element(xs.begin(), xs.begin() + static_cast<long>(mid));
    return 0.5 * (lo + hi);
}

/// Values of `f` where `mask` is set, column-major order.
inline std::vector<double> masked_values(const RealField& f, const Mask& mask) {
    std::vector<double> out;
    for (long c = 0; c < f.cols(); ++c)
        for (long r = 0; r < f.rows(); ++r)
            if (mask(r, c)) out.push_back(f(r, c));
    return out;
}

}  // namespace qgi
