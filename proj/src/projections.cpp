#include "qgi/projections.hpp"

#include <charconv>

#include "qgi/keyed_rng.hpp"

namespace qgi {
namespace {

void check_index(long j, long n) {
    if (j < 0 || j >= n)
        throw IndexError("mask index " + std::to_string(j) + " outside [0, " + std::to_string(n) + ")");
}

// Builds T_j from the sign pattern of M_j so every entry is one of two exact values.
ProjectionMask from_signs(long j, const RealField& basis, ProjectionKind kind) {
    const long d = basis.rows();
    const double dd = static_cast<double>(d);
    ProjectionMask t{j, kind, ComplexField(d, d)};
    if (kind == ProjectionKind::cos) {
        const Complex on(std::sqrt(2.0) / dd, 0.0);
        t.entries = (basis.array() > 0.0).select(ComplexField::Constant(d, d, on), ComplexField::Zero(d, d));
    } else {
        const double a = 1.0 / (std::sqrt(2.0) * dd);
        t.entries = (basis.array() > 0.0)
                        .select(ComplexField::Constant(d, d, Complex(a, a)),
                                ComplexField::Constant(d, d, Complex(-a, a)));
    }
    return t;
}

RealField pairwise_synthesize(const RandomBasis& rb, const Eigen::VectorXd& a, long lo, long hi) {
    const long d = rb.dim;
    if (hi - lo <= 8) {
        RealField acc = RealField::Zero(d, d);
        for (long j = lo; j < hi; ++j) {
            if (a[j] == 0.0) continue;
            const double w = a[j] / static_cast<double>(d);
            for (long col = 0; col < d; ++col)
                for (long row = 0; row < d; ++row) acc(row, col) += rb.sign(j, row, col) * w;
        }
        return acc;
    }
    const long mid = lo + (hi - lo) / 2;
    return pairwise_synthesize(rb, a, lo, mid) + pairwise_synthesize(rb, a, mid, hi);
}

}  // namespace

std::string_view to_string(ProjectionKind k) { return k == ProjectionKind::cos ? "cos" : "sin"; }

ProjectionKind parse_projection_kind(std::string_view s) {
    if (s == "cos") return ProjectionKind::cos;
    if (s == "sin") return ProjectionKind::sin;
    throw SpecError("unknown projection kind '" + std::string(s) + "' (expected cos|sin)");
}

int RandomBasis::sign(long j, long row, long col) const {
    if (j == 0) return 1;
    const std::uint64_t pixel = static_cast<std::uint64_t>(row * dim + col);
    return (keyed_draw(seed, {static_cast<std::uint64_t>(j), pixel}) >> 63) ? -1 : 1;
}

RealField RandomBasis::mask(long j) const {
    check_index(j, count());
    const double a = 1.0 / static_cast<double>(dim);
    RealField m(dim, dim);
    for (long col = 0; col < dim; ++col)
        for (long row = 0; row < dim; ++row) m(row, col) = sign(j, row, col) * a;
    return m;
}

RandomBasis random_basis(long count, long d, std::uint64_t seed) {
    if (d < 1) throw SpecError("random basis dimension must be positive");
    if (count != d * d)
        throw SpecError("random basis needs N = d^2 = " + std::to_string(d * d) + " masks, got " +
                        std::to_string(count));
    return {d, seed};
}

std::string to_string(const BasisSpec& b) {
    if (b.is_hadamard()) return "hadamard/" + std::string(to_string(b.ordering));
    return "random/" + std::to_string(b.seed);
}

BasisSpec parse_basis(std::string_view s, long d) {
    const auto slash = s.find('/');
    const std::string_view head = s.substr(0, slash);
    const std::string_view tail = slash == std::string_view::npos ? std::string_view{} : s.substr(slash + 1);
    if (head == "hadamard") {
        if (!is_power_of_two(d)) throw DimensionError("Hadamard basis needs a power-of-two dimension");
        return BasisSpec::hadamard(d, tail.empty() ? Ordering::natural : parse_ordering(tail));
    }
    if (head == "random") {
        std::uint64_t seed = 0;
        if (!tail.empty()) {
            auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), seed);
            if (ec != std::errc() || ptr != tail.data() + tail.size())
                throw SpecError("bad random basis seed '" + std::string(tail) + "'");
        }
        return BasisSpec::random(d, seed);
    }
    throw SpecError("unknown basis '" + std::string(s) + "' (expected hadamard/<ordering> or random/<seed>)");
}

RealField basis_element(const BasisSpec& b, long j) {
    if (b.is_hadamard()) return basis_mask(j, b.matrix());
    return b.random_set().mask(j);
}

ProjectionMask cos_mask(long j, const OrthoMatrix& h) { return from_signs(j, basis_mask(j, h), ProjectionKind::cos); }
ProjectionMask sin_mask(long j, const OrthoMatrix& h) { return from_signs(j, basis_mask(j, h), ProjectionKind::sin); }
ProjectionMask cos_mask(long j, const BasisSpec& b) { return from_signs(j, basis_element(b, j), ProjectionKind::cos); }
ProjectionMask sin_mask(long j, const BasisSpec& b) { return from_signs(j, basis_element(b, j), ProjectionKind::sin); }

ProjectionMask projection_mask(long j, const BasisSpec& b, ProjectionKind kind) {
    return kind == ProjectionKind::cos ? cos_mask(j, b) : sin_mask(j, b);
}

Eigen::VectorXcd overlaps(const BasisSpec& b, const ComplexField& x) {
    if (x.rows() != b.dim || x.cols() != b.dim)
        throw DimensionError("field is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                             ", basis expects " + std::to_string(b.dim));
    if (b.is_hadamard()) return flatten(fwht2(x, b.matrix()));

    const RandomBasis rb = b.random_set();
    const long d = b.dim;
    const double a = 1.0 / static_cast<double>(d);
    Eigen::VectorXcd out(rb.count());
    RealField m(d, d);
    for (long j = 0; j < rb.count(); ++j) {
        for (long col = 0; col < d; ++col)
            for (long row = 0; row < d; ++row) m(row, col) = rb.sign(j, row, col) * a;
        out[j] = (m.cast<Complex>().array() * x.array()).sum();
    }
    return out;
}

RealField synthesize(const BasisSpec& b, const Eigen::VectorXd& a) {
    if (a.size() != b.count())
        throw DimensionError("coefficient vector has " + std::to_string(a.size()) + " entries, basis has " +
                             std::to_string(b.count()));
    if (b.is_hadamard()) return ifwht2(unflatten(a, b.dim), b.matrix());
    return pairwise_synthesize(b.random_set(), a, 0, a.size());
}

Eigen::MatrixXd mask_matrix(const BasisSpec& b) {
    const long n = b.count();
    Eigen::MatrixXd a(n, n);
    for (long j = 0; j < n; ++j) a.row(j) = flatten(basis_element(b, j)).transpose();
    return a;
}

}  // namespace qgi
