#include "qgi/scene.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "qgi/field_io.hpp"

namespace qgi {
namespace {

constexpr std::array<std::pair<ObjectKind, std::string_view>, 7> kKindNames{{
    {ObjectKind::flat, "flat"},
    {ObjectKind::double_slit_amplitude, "double-slit-amplitude"},
    {ObjectKind::annulus_amplitude, "annulus-amplitude"},
    {ObjectKind::pi_slit_phase, "pi-slit-phase"},
    {ObjectKind::azimuthal_ring_phase, "azimuthal-ring-phase"},
    {ObjectKind::spiral_flower_phase, "spiral-flower-phase"},
    {ObjectKind::from_file, "from-file"},
}};

// Exact for the common steps so that arg() of a pi step is exactly pi.
Complex phasor(double phi) {
    if (phi == 0.0) return {1.0, 0.0};
    if (phi == kPi || phi == -kPi) return {-1.0, 0.0};
    return {std::cos(phi), std::sin(phi)};
}

bool uses_slit(ObjectKind k) {
    return k == ObjectKind::pi_slit_phase || k == ObjectKind::double_slit_amplitude;
}

bool uses_annulus(ObjectKind k) {
    return k == ObjectKind::annulus_amplitude || k == ObjectKind::azimuthal_ring_phase ||
           k == ObjectKind::spiral_flower_phase;
}

void require(bool ok, const std::string& field, const std::string& why) {
    if (!ok) throw SpecError("object." + field + ": " + why);
}

}  // namespace

std::string_view to_string(ObjectKind k) {
    for (const auto& [kind, name] : kKindNames)
        if (kind == k) return name;
    return "?";
}

ObjectKind parse_object_kind(std::string_view s) {
    for (const auto& [kind, name] : kKindNames)
        if (name == s) return kind;
    throw SpecError("object.kind: unknown kind '" + std::string(s) + "'");
}

ObjectSpec resolve(const ObjectSpec& spec, long d) {
    if (d < 1) throw SpecError("d: dimension must be positive");
    const double dd = static_cast<double>(d);
    ObjectSpec r = spec;
    if (!r.illumination_radius) r.illumination_radius = r.kind == ObjectKind::flat ? dd : 0.45 * dd;
    require(*r.illumination_radius >= 0.0, "illumination_radius", "must be nonnegative");

    if (!r.slit_center) r.slit_center = d / 2;
    if (!r.slit_width) r.slit_width = std::max(1L, d / 8);
    if (!r.slit_gap) r.slit_gap = std::max(2L, d / 8);
    if (!r.inner_radius) r.inner_radius = 0.25 * dd;
    if (!r.outer_radius) r.outer_radius = 0.4 * dd;

    if (uses_slit(r.kind)) {
        require(*r.slit_width >= 1, "slit_width", "must be at least 1 pixel");
        require(*r.slit_gap >= 0, "slit_gap", "must be nonnegative");
        if (r.kind == ObjectKind::pi_slit_phase) {
            const ColumnRange s = slit_columns(r);
            require(s.first >= 0 && s.last < d, "slit_width", "slit extends outside the grid");
        } else {
            const auto [left, right] = double_slit_columns(r);
            require(left.first >= 0 && right.last < d, "slit_gap", "slits extend outside the grid");
        }
    }
    if (uses_annulus(r.kind)) {
        require(*r.inner_radius >= 0.0, "inner_radius", "must be nonnegative");
        require(*r.outer_radius > *r.inner_radius, "outer_radius", "must exceed inner_radius");
        require(*r.outer_radius <= 0.5 * dd, "outer_radius", "annulus does not fit inside the grid");
    }
    require(r.petals >= 1, "petals", "must be at least 1");
    require(r.bands >= 1, "bands", "must be at least 1");
    require(std::isfinite(r.phase_depth), "phase_depth", "must be finite");
    if (r.kind == ObjectKind::from_file) require(!r.path.empty(), "path", "required for from-file objects");
    return r;
}

ColumnRange slit_columns(const ObjectSpec& s) {
    const long first = *s.slit_center - *s.slit_width / 2;
    return {first, first + *s.slit_width - 1};
}

std::pair<ColumnRange, ColumnRange> double_slit_columns(const ObjectSpec& s) {
    const long left_end = *s.slit_center - *s.slit_gap / 2;  // exclusive
    const long right_start = left_end + *s.slit_gap;
    return {{left_end - *s.slit_width, left_end - 1}, {right_start, right_start + *s.slit_width - 1}};
}

RealField polar_angle(long d) {
    const double c = grid_center(d);
    RealField theta(d, d);
    for (long col = 0; col < d; ++col)
        for (long row = 0; row < d; ++row) {
            double t = std::atan2(row - c, col - c);
            if (t < 0.0) t += kTwoPi;
            theta(row, col) = t;
        }
    return theta;
}

RealField radial_distance(long d) {
    const double c = grid_center(d);
    RealField rho(d, d);
    for (long col = 0; col < d; ++col)
        for (long row = 0; row < d; ++row) rho(row, col) = std::hypot(row - c, col - c);
    return rho;
}

Mask illumination_support(long d, double radius) {
    const double c = grid_center(d);
    Mask m(d, d);
    for (long col = 0; col < d; ++col)
        for (long row = 0; row < d; ++row) {
            const double dy = row - c;
            const double dx = col - c;
            m(row, col) = dx * dx + dy * dy <= radius * radius;
        }
    return m;
}

ComplexField apply_illumination(const ComplexField& object, double radius) {
    if (object.rows() != object.cols()) throw DimensionError("object must be square");
    const Mask disc = illumination_support(object.rows(), radius);
    return disc.select(object, ComplexField::Zero(object.rows(), object.cols()));
}

ComplexField normalize(const ComplexField& object) {
    const double norm = object.norm();
    if (!(norm > 0.0)) throw DataError("cannot normalize a zero field");
    return object / norm;
}

ComplexField make_object(const ObjectSpec& spec, long d) {
    const ObjectSpec s = resolve(spec, d);
    ComplexField o = ComplexField::Ones(d, d);
    const RealField theta = polar_angle(d);
    const RealField rho = radial_distance(d);
    auto in_annulus = [&](long row, long col) {
        return rho(row, col) >= *s.inner_radius && rho(row, col) <= *s.outer_radius;
    };

    switch (s.kind) {
        case ObjectKind::flat:
            break;
        case ObjectKind::double_slit_amplitude: {
            const auto [left, right] = double_slit_columns(s);
            for (long col = 0; col < d; ++col)
                if (!left.contains(col) && !right.contains(col)) o.col(col).setZero();
            break;
        }
        case ObjectKind::annulus_amplitude:
            for (long col = 0; col < d; ++col)
                for (long row = 0; row < d; ++row)
                    if (!in_annulus(row, col)) o(row, col) = 0.0;
            break;
        case ObjectKind::pi_slit_phase: {
            const ColumnRange slit = slit_columns(s);
            const Complex step = phasor(s.phase_depth);
            for (long col = slit.first; col <= slit.last; ++col) o.col(col).setConstant(step);
            break;
        }
        case ObjectKind::azimuthal_ring_phase:
            for (long col = 0; col < d; ++col)
                for (long row = 0; row < d; ++row)
                    if (in_annulus(row, col)) o(row, col) = phasor(theta(row, col));
            break;
        case ObjectKind::spiral_flower_phase: {
            const double width = *s.outer_radius - *s.inner_radius;
            for (long col = 0; col < d; ++col)
                for (long row = 0; row < d; ++row) {
                    if (!in_annulus(row, col)) continue;
                    const long band = std::min<long>(
                        s.bands - 1, static_cast<long>((rho(row, col) - *s.inner_radius) / width * s.bands));
                    const double offset = static_cast<double>(band) * kPi / s.petals;
                    o(row, col) = phasor(wrap_phase(s.petals * theta(row, col) + offset));
                }
            break;
        }
        case ObjectKind::from_file: {
            o = read_complex_field(s.path);
            if (o.rows() != d) throw SpecError("object.path: file holds a " + std::to_string(o.rows()) +
                                               "x" + std::to_string(o.rows()) + " field, expected d=" +
                                               std::to_string(d));
            break;
        }
    }
    return apply_illumination(o, *s.illumination_radius);
}

SpectralDecomposition decompose(const ComplexField& object, const OrthoMatrix& h) {
    SpectralDecomposition s;
    s.coefficients = fwht2(object, h);
    s.probabilities = s.coefficients.cwiseAbs2();
    s.phases = s.coefficients.unaryExpr([](const Complex& c) { return wrap_phase(std::arg(c)); });
    return s;
}

ComplexField compose(const SpectralDecomposition& s, const OrthoMatrix& h) {
    ComplexField c(s.dim(), s.dim());
    for (long m = 0; m < s.dim(); ++m)
        for (long n = 0; n < s.dim(); ++n)
            c(n, m) = std::polar(std::sqrt(s.probabilities(n, m)), s.phases(n, m));
    return ifwht2(c, h);
}

}  // namespace qgi
