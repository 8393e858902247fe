#pragma once

#include <cstdint>
#include <optional>

#include "qgi/projections.hpp"
#include "qgi/scene.hpp"

namespace qgi {

/// One bucket value per projection mask, index j.
struct MeasurementSeries {
    ProjectionKind kind = ProjectionKind::cos;
    BasisSpec basis;
    Eigen::VectorXd values;
    /// Expected total counts for sampled series; empty for exact probabilities.
    std::optional<double> flux;
    std::optional<std::uint64_t> seed;
    double dark_rate = 0.0;

    long dim() const { return basis.dim; }
    long count() const { return values.size(); }
    bool exact() const { return !flux.has_value(); }
};

/// v_j = |<T_j|O>|^2 for every mask. Hadamard bases take all <M_j|O> from one fwht2 and form
/// the cos/sin combinations from them.
MeasurementSeries measure_exact(const ComplexField& object, const BasisSpec& basis, ProjectionKind kind);

/// Same quantity computed mask by mask from explicit T_j grids. O(N^2); reference path.
MeasurementSeries measure_per_mask(const ComplexField& object, const BasisSpec& basis, ProjectionKind kind);

/// Algebraic conventions for the expansion of |c_j|^2 into p_j, alpha_j terms.
struct ProbabilityConvention {
    /// Delta alpha_j = alpha_j - alpha_0 when true, alpha_j + alpha_0 otherwise.
    bool phase_difference = true;
    /// Sign of the sqrt(p0 pj) sin(Delta alpha) cross term in the sine channel.
    double sine_cross_sign = -1.0;
    /// Coefficient of p_j in the sine channel.
    double sine_pj_coefficient = 0.5;

    static ProbabilityConvention standard() { return {}; }
    static ProbabilityConvention all_alternatives() { return {false, +1.0, 1.0}; }
};

double predicted_probability(ProjectionKind kind, double p0, double pj, double alpha0, double alphaj,
                             const ProbabilityConvention& conv = ProbabilityConvention::standard());

struct ResidualReport {
    double max_abs_residual = 0.0;
    long worst_index = 0;
};

/// Checks every exact v_j against the closed-form term expansion.
ResidualReport decompose_probability(const MeasurementSeries& series, const SpectralDecomposition& decomposition,
                                     const ProbabilityConvention& conv = ProbabilityConvention::standard());

/// Poisson counts with mean total_flux * v_j / sum(v) + dark_rate, drawn independently per j from a
/// generator keyed by (seed, j).
MeasurementSeries sample_counts(const MeasurementSeries& series, double total_flux, std::uint64_t seed,
                                double dark_rate = 0.0);

/// Mean of the series values by pairwise summation.
double series_mean(const MeasurementSeries& series);

}  // namespace qgi
