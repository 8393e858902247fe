#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "qgi/types.hpp"
#include "qgi/wht.hpp"

namespace qgi {

enum class ObjectKind {
    flat,
    double_slit_amplitude,
    annulus_amplitude,
    pi_slit_phase,
    azimuthal_ring_phase,
    spiral_flower_phase,
    from_file,
};

std::string_view to_string(ObjectKind k);
ObjectKind parse_object_kind(std::string_view s);

/// Test-object description. Unset geometry is filled by resolve() with defaults scaled to d.
/// Lengths are in pixels; columns are integer pixel indices.
struct ObjectSpec {
    ObjectKind kind = ObjectKind::flat;
    std::optional<double> illumination_radius;
    std::optional<long> slit_center;
    std::optional<long> slit_width;
    std::optional<long> slit_gap;
    std::optional<double> inner_radius;
    std::optional<double> outer_radius;
    int petals = 6;
    int bands = 3;
    double phase_depth = kPi;
    std::string path;
};

/// Fills defaults and validates against a d×d grid. Throws SpecError naming the bad field.
ObjectSpec resolve(const ObjectSpec& spec, long d);

/// Unit-amplitude object (not normalized), zero outside the illumination disc.
ComplexField make_object(const ObjectSpec& spec, long d);

/// Pixels whose centre lies within `radius` of the grid centre.
Mask illumination_support(long d, double radius);

/// Zeroes entries outside the centred disc; does not renormalize.
ComplexField apply_illumination(const ComplexField& object, double radius);

ComplexField normalize(const ComplexField& object);

/// Polar angle about the grid centre in [0, 2pi); x is the column, y the row.
RealField polar_angle(long d);
RealField radial_distance(long d);

/// Columns [first, last] of the single slit, or of one of the two double slits.
struct ColumnRange {
    long first;
    long last;
    bool contains(long c) const { return c >= first && c <= last; }
};
ColumnRange slit_columns(const ObjectSpec& resolved);
std::pair<ColumnRange, ColumnRange> double_slit_columns(const ObjectSpec& resolved);

/// Object expansion in an orthonormal Walsh basis: c_j = <M_j|O> = sqrt(p_j) e^{i alpha_j}.
/// Grids are indexed (n, m) with j = n*d + m.
struct SpectralDecomposition {
    ComplexField coefficients;
    RealField probabilities;
    RealField phases;

    long dim() const { return coefficients.rows(); }
    double p(long j) const { return probabilities(j / dim(), j % dim()); }
    double alpha(long j) const { return phases(j / dim(), j % dim()); }
    Complex c(long j) const { return coefficients(j / dim(), j % dim()); }
};

SpectralDecomposition decompose(const ComplexField& object, const OrthoMatrix& h);

/// sum_j sqrt(p_j) e^{i alpha_j} M_j.
ComplexField compose(const SpectralDecomposition& s, const OrthoMatrix& h);

}  // namespace qgi
