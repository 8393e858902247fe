#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "qgi/types.hpp"
#include "qgi/wht.hpp"

namespace qgi {

enum class ProjectionKind { cos, sin };

std::string_view to_string(ProjectionKind k);
ProjectionKind parse_projection_kind(std::string_view s);

/// T_j^cos = (M_j + M_0)/sqrt(2) or T_j^sin = (M_j + i M_0)/sqrt(2).
struct ProjectionMask {
    long index = 0;
    ProjectionKind kind = ProjectionKind::cos;
    ComplexField entries;
};

/// Square set of d*d random +-1/sqrt(N) masks keyed by (seed, j, pixel); mask 0 is the
/// uniform reference M_0.
struct RandomBasis {
    long dim = 1;
    std::uint64_t seed = 0;

    long count() const { return dim * dim; }
    /// +1 or -1 for pixel (row, col) of mask j.
    int sign(long j, long row, long col) const;
    RealField mask(long j) const;
};

RandomBasis random_basis(long count, long d, std::uint64_t seed);

/// Which complete basis a measurement was taken in.
struct BasisSpec {
    enum class Type { hadamard, random };

    Type type = Type::hadamard;
    long dim = 1;
    Ordering ordering = Ordering::natural;
    std::uint64_t seed = 0;

    static BasisSpec hadamard(long d, Ordering o = Ordering::natural) { return {Type::hadamard, d, o, 0}; }
    static BasisSpec random(long d, std::uint64_t seed) { return {Type::random, d, Ordering::natural, seed}; }

    long count() const { return dim * dim; }
    bool is_hadamard() const { return type == Type::hadamard; }
    OrthoMatrix matrix() const { return hadamard_matrix(dim, ordering); }
    RandomBasis random_set() const { return random_basis(count(), dim, seed); }

    bool operator==(const BasisSpec&) const = default;
};

/// "hadamard/natural", "hadamard/sequency" or "random/<seed>".
std::string to_string(const BasisSpec& b);
BasisSpec parse_basis(std::string_view s, long d);

RealField basis_element(const BasisSpec& b, long j);

ProjectionMask cos_mask(long j, const OrthoMatrix& h);
ProjectionMask sin_mask(long j, const OrthoMatrix& h);
ProjectionMask cos_mask(long j, const BasisSpec& b);
ProjectionMask sin_mask(long j, const BasisSpec& b);
ProjectionMask projection_mask(long j, const BasisSpec& b, ProjectionKind kind);

/// All overlaps <M_j|X>, index j. Hadamard bases use one fwht2 pass.
Eigen::VectorXcd overlaps(const BasisSpec& b, const ComplexField& x);

/// sum_j a_j M_j. Random bases accumulate pairwise over j so the result does not depend on
/// evaluation order beyond rounding of a balanced tree.
RealField synthesize(const BasisSpec& b, const Eigen::VectorXd& a);

/// N×N matrix whose row j is M_j flattened row-major over pixels.
Eigen::MatrixXd mask_matrix(const BasisSpec& b);

}  // namespace qgi
