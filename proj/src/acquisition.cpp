#include "qgi/acquisition.hpp"

#include <random>

#include "qgi/keyed_rng.hpp"
#include "qgi/numeric.hpp"

namespace qgi {
namespace {

constexpr double kNormTolerance = 1e-9;

void check_object(const ComplexField& object, const BasisSpec& basis) {
    if (object.rows() != basis.dim || object.cols() != basis.dim)
        throw DimensionError("object is " + std::to_string(object.rows()) + "x" + std::to_string(object.cols()) +
                             ", basis expects " + std::to_string(basis.dim));
    if (std::abs(object.squaredNorm() - 1.0) > kNormTolerance)
        throw DataError("object must be normalized (sum |O|^2 = " + std::to_string(object.squaredNorm()) + ")");
}

}  // namespace

MeasurementSeries measure_exact(const ComplexField& object, const BasisSpec& basis, ProjectionKind kind) {
    check_object(object, basis);
    const Eigen::VectorXcd c = overlaps(basis, object);
    // <T_j|O> = (c_j + c_0)/sqrt2 for cos, (c_j - i c_0)/sqrt2 for sin.
    const Complex ref = kind == ProjectionKind::cos ? c[0] : Complex(0.0, -1.0) * c[0];
    MeasurementSeries s;
    s.kind = kind;
    s.basis = basis;
    s.values = ((c.array() + ref).abs2() * 0.5).matrix();
    return s;
}

MeasurementSeries measure_per_mask(const ComplexField& object, const BasisSpec& basis, ProjectionKind kind) {
    check_object(object, basis);
    MeasurementSeries s;
    s.kind = kind;
    s.basis = basis;
    s.values.resize(basis.count());
    for (long j = 0; j < basis.count(); ++j) {
        const ProjectionMask t = projection_mask(j, basis, kind);
        s.values[j] = std::norm((t.entries.conjugate().array() * object.array()).sum());
    }
    return s;
}

double predicted_probability(ProjectionKind kind, double p0, double pj, double alpha0, double alphaj,
                             const ProbabilityConvention& conv) {
    const double delta = conv.phase_difference ? alphaj - alpha0 : alphaj + alpha0;
    const double cross = std::sqrt(p0 * pj);
    if (kind == ProjectionKind::cos) return 0.5 * p0 + 0.5 * pj + cross * std::cos(delta);
    return 0.5 * p0 + conv.sine_pj_coefficient * pj + conv.sine_cross_sign * cross * std::sin(delta);
}

ResidualReport decompose_probability(const MeasurementSeries& series, const SpectralDecomposition& decomposition,
                                     const ProbabilityConvention& conv) {
    if (!series.exact()) throw DataError("probability decomposition needs an exact-mode series");
    if (decomposition.dim() != series.dim() || series.count() != series.dim() * series.dim())
        throw DimensionError("series and decomposition dimensions differ");
    ResidualReport report;
    const double p0 = decomposition.p(0);
    const double a0 = decomposition.alpha(0);
    for (long j = 0; j < series.count(); ++j) {
        const double predicted =
            predicted_probability(series.kind, p0, decomposition.p(j), a0, decomposition.alpha(j), conv);
        const double r = std::abs(series.values[j] - predicted);
        if (r > report.max_abs_residual) {
            report.max_abs_residual = r;
            report.worst_index = j;
        }
    }
    return report;
}

MeasurementSeries sample_counts(const MeasurementSeries& series, double total_flux, std::uint64_t seed,
                                double dark_rate) {
    if (!series.exact()) throw DataError("counts can only be sampled from an exact-mode series");
    if (!(total_flux > 0.0) || !std::isfinite(total_flux)) throw SpecError("flux must be positive and finite");
    if (!(dark_rate >= 0.0)) throw SpecError("dark rate must be nonnegative");
    const double total = pairwise_sum(series.values);
    if (!(total > 0.0)) throw DataError("series has no signal to sample");

    MeasurementSeries out = series;
    out.flux = total_flux;
    out.seed = seed;
    out.dark_rate = dark_rate;
    for (long j = 0; j < series.count(); ++j) {
        const double mean = total_flux * series.values[j] / total + dark_rate;
        if (mean <= 0.0) {
            out.values[j] = 0.0;
            continue;
        }
        std::mt19937_64 gen(keyed_draw(seed, {static_cast<std::uint64_t>(j)}));
        std::poisson_distribution<long long> poisson(mean);
        out.values[j] = static_cast<double>(poisson(gen));
    }
    return out;
}

double series_mean(const MeasurementSeries& series) {
    return pairwise_sum(series.values) / static_cast<double>(series.count());
}

}  // namespace qgi
