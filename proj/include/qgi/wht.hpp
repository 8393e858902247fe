#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qgi/types.hpp"

namespace qgi {

enum class Ordering { natural, sequency };

std::string_view to_string(Ordering o);
Ordering parse_ordering(std::string_view s);

/// Normalized Walsh-Hadamard matrix. Row n is the basis vector h_n; entries are +-1/sqrt(d).
struct OrthoMatrix {
    long dim = 1;
    Ordering ordering = Ordering::natural;
    RealField entries;
    /// natural_row[n] is the Sylvester row that sits at position n under this ordering.
    std::vector<long> natural_row;

    /// Sign of entry (n, x): +1 or -1.
    int sign(long n, long x) const { return entries(n, x) > 0.0 ? 1 : -1; }
};

OrthoMatrix hadamard_matrix(long d, Ordering ordering = Ordering::natural);

/// Row permutation taking natural (Sylvester) order to sequency order.
std::vector<long> sequency_permutation(long d);

/// M_j = h_n (x) h_m with j = n*d + m; entries are exactly +-1/d.
RealField basis_mask(long j, const OrthoMatrix& h);

/// Number of sign changes along row n.
int sign_changes(const OrthoMatrix& h, long n);

namespace detail {

// Unnormalized in-place butterfly over n elements spaced `stride` apart.
template <typename Scalar>
void fwht_kernel(Scalar* data, long n, long stride) {
    for (long half = 1; half < n; half *= 2) {
        for (long i = 0; i < n; i += 2 * half) {
            for (long k = i; k < i + half; ++k) {
                Scalar& a = data[k * stride];
                Scalar& b = data[(k + half) * stride];
                const Scalar u = a;
                a = u + b;
                b = u - b;
            }
        }
    }
}

template <typename Scalar>
void fwht2_natural_inplace(Field<Scalar>& y) {
    const long d = y.rows();
    for (long c = 0; c < d; ++c) fwht_kernel(y.data() + c * d, d, 1);
    for (long r = 0; r < d; ++r) fwht_kernel(y.data() + r, d, d);
    y *= Scalar(1.0 / static_cast<double>(d));
}

inline void check_square(long rows, long cols, const OrthoMatrix& h) {
    if (rows != h.dim || cols != h.dim)
        throw DimensionError("field is " + std::to_string(rows) + "x" + std::to_string(cols) +
                             ", transform expects " + std::to_string(h.dim) + "x" +
                             std::to_string(h.dim));
}

}  // namespace detail

/// Fast separable transform H X H^T in O(d^2 log d). Entry (n, m) equals <M_{n*d+m}|X>.
template <typename Derived>
Field<typename Derived::Scalar> fwht2(const Eigen::MatrixBase<Derived>& x, const OrthoMatrix& h) {
    using Scalar = typename Derived::Scalar;
    detail::check_square(x.rows(), x.cols(), h);
    Field<Scalar> y = x;
    detail::fwht2_natural_inplace(y);
    if (h.ordering == Ordering::natural) return y;
    const long d = h.dim;
    Field<Scalar> out(d, d);
    for (long m = 0; m < d; ++m)
        for (long n = 0; n < d; ++n) out(n, m) = y(h.natural_row[n], h.natural_row[m]);
    return out;
}

/// Inverse of fwht2: H^T Y H, i.e. sum_j Y_j M_j.
template <typename Derived>
Field<typename Derived::Scalar> ifwht2(const Eigen::MatrixBase<Derived>& y, const OrthoMatrix& h) {
    using Scalar = typename Derived::Scalar;
    detail::check_square(y.rows(), y.cols(), h);
    Field<Scalar> x(h.dim, h.dim);
    if (h.ordering == Ordering::natural) {
        x = y;
    } else {
        for (long m = 0; m < h.dim; ++m)
            for (long n = 0; n < h.dim; ++n) x(h.natural_row[n], h.natural_row[m]) = y(n, m);
    }
    detail::fwht2_natural_inplace(x);
    return x;
}

/// Row-major flattening of a coefficient grid: element (n, m) goes to j = n*d + m.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> flatten(const Eigen::MatrixBase<Derived>& g) {
    using Scalar = typename Derived::Scalar;
    Field<Scalar> t = g.transpose();
    return Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>(t.data(), t.size());
}

template <typename Derived>
Field<typename Derived::Scalar> unflatten(const Eigen::MatrixBase<Derived>& v, long d) {
    using Scalar = typename Derived::Scalar;
    if (v.size() != d * d)
        throw DimensionError("vector of length " + std::to_string(v.size()) + " is not " +
                             std::to_string(d) + "^2");
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> tmp = v;
    return Eigen::Map<const Field<Scalar>>(tmp.data(), d, d).transpose();
}

}  // namespace qgi
