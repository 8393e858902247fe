#pragma once

// Brute-force reference implementations. None of these call the library's transforms.

#include <bit>
#include <complex>
#include <random>

#include "qgi/types.hpp"

namespace oracle {

using qgi::Complex;
using qgi::ComplexField;
using qgi::RealField;

// Unnormalized Sylvester matrix by block recursion H_2d = [[H, H], [H, -H]].
inline Eigen::MatrixXd sylvester(long d) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Ones(1, 1);
    while (h.rows() < d) {
        const long k = h.rows();
        Eigen::MatrixXd next(2 * k, 2 * k);
        next << h, h, h, -h;
        h = next;
    }
    return h;
}

inline int count_sign_changes(const Eigen::RowVectorXd& row) {
    int n = 0;
    for (long i = 1; i < row.size(); ++i) n += (row[i] > 0) != (row[i - 1] > 0);
    return n;
}

// Rows of the Sylvester matrix sorted by sign-change count.
inline Eigen::MatrixXd sequency_sorted(long d) {
    const Eigen::MatrixXd s = sylvester(d);
    Eigen::MatrixXd out(d, d);
    for (long r = 0; r < d; ++r) {
        const int changes = count_sign_changes(s.row(r));
        out.row(changes) = s.row(r);
    }
    return out;
}

// M_j = h_n ⊗ h_m with j = n*d + m, normalized to unit norm.
inline RealField mask(long j, const Eigen::MatrixXd& unnormalized_rows) {
    const long d = unnormalized_rows.rows();
    const long n = j / d, m = j % d;
    RealField out(d, d);
    for (long r = 0; r < d; ++r)
        for (long c = 0; c < d; ++c) out(r, c) = unnormalized_rows(n, r) * unnormalized_rows(m, c) / d;
    return out;
}

template <class A, class B>
Complex inner(const A& mask, const B& x) {
    Complex acc = 0.0;
    for (long r = 0; r < mask.rows(); ++r)
        for (long c = 0; c < mask.cols(); ++c) acc += std::conj(Complex(mask(r, c))) * Complex(x(r, c));
    return acc;
}

inline ComplexField random_complex(long d, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd;
    ComplexField f(d, d);
    for (long c = 0; c < d; ++c)
        for (long r = 0; r < d; ++r) f(r, c) = Complex(nd(gen), nd(gen));
    return f;
}

inline ComplexField normalized(const ComplexField& f) { return f / std::sqrt(f.cwiseAbs2().sum()); }

template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& a) {
    return a.size() ? static_cast<double>(a.cwiseAbs().maxCoeff()) : 0.0;
}

}  // namespace oracle
