#pragma once

#include <optional>
#include <string_view>

#include "qgi/acquisition.hpp"

namespace qgi {

/// Mean-subtracted correlation image (1/N) sum_j (v_j - <v>) M_j for one channel.
struct GhostImage {
    enum class Provenance { measured, closed_form };

    ProjectionKind channel = ProjectionKind::cos;
    RealField values;
    Provenance provenance = Provenance::measured;
    BasisSpec basis;
    /// True when counts were divided by their total before reconstruction.
    bool normalized_counts = false;
};

/// Wrapped phase map; entries outside `support` are not meaningful and are stored as 0.
struct PhaseImage {
    RealField phase;
    Mask support;

    long dim() const { return phase.rows(); }
};

/// Sign relating the sine-channel correlation term to +Im(O e^{-i alpha_0}). For
/// T_j = (M_j + i M_0)/sqrt2 the cross term enters as -sin(Delta alpha_j).
inline constexpr double kSineChannelSign = -1.0;

/// Values a reconstruction sees: exact probabilities as-is, counts divided by their total.
Eigen::VectorXd reconstruction_values(const MeasurementSeries& series);

GhostImage ghost_image(const MeasurementSeries& series);

/// The three contributions to the correlation image:
///   GI = (term1 + term2 - term3) / N
/// term1 = sqrt(p0)|O|cos(arg O - alpha0) for cos, -sqrt(p0)|O|sin(arg O - alpha0) for sin;
/// term2 = (1/2) sum_j p_j M_j, the Walsh transform of the probability grid;
/// term3 = g R_0, the DC pixel with g = sqrt(N)(<p_j>/2 +- <sqrt(p0 p_j) cos|sin Delta alpha_j>).
struct GhostImageTerms {
    ProjectionKind channel = ProjectionKind::cos;
    RealField term1;
    RealField term2;
    RealField term3;
    double g = 0.0;
    double p0 = 0.0;
    double alpha0 = 0.0;

    RealField total() const;
    /// Sum of all exact v_j for this channel, N p0/2 + sqrt(N) g.
    double series_total() const;
};

GhostImageTerms closed_form_terms(const ComplexField& object, const OrthoMatrix& h, ProjectionKind channel);
GhostImage closed_form_gi(const ComplexField& object, const OrthoMatrix& h, ProjectionKind channel);

/// Per-index estimate of p_j/2 from a paired cos/sin series. The two channels share
/// p0/2 + p_j/2 and their cross terms are the real and imaginary parts of c_j conj(c_0), so
/// s = p_j/2 solves 2s^2 - 2s(Vc + Vs + p0) + Vc^2 + Vs^2 = 0 with Vc = v_cos - p0/2,
/// Vs = v_sin - p0/2. The smaller root is exact whenever p0 > 2 p_j.
struct SpectrumEstimate {
    Eigen::VectorXd half_probabilities;  // in cos-channel units
    double p0 = 0.0;
    /// Factor putting the sine series on the cosine series' scale (v_sin,0 = p0 exactly).
    double sin_to_cos = 1.0;
};

/// Empty when the DC reference carries no signal (p0 = 0).
std::optional<SpectrumEstimate> estimate_spectrum(const MeasurementSeries& cos_series,
                                                  const MeasurementSeries& sin_series);

enum class ArtifactMode { analytic, heuristic };

std::string_view to_string(ArtifactMode m);
ArtifactMode parse_artifact_mode(std::string_view s);

struct ArtifactContext {
    /// Ground truth, required by analytic mode.
    std::optional<ComplexField> truth;
    /// Illumination disc; pixels outside it carry no object signal and set the background.
    std::optional<Mask> illumination;
    /// Measured series; when present heuristic mode subtracts the estimated spectral term.
    std::optional<MeasurementSeries> cos_series;
    std::optional<MeasurementSeries> sin_series;
    double sine_sign = kSineChannelSign;
};

/// Fields proportional to Re(O e^{-i alpha0}) and Im(O e^{-i alpha0}).
struct ChannelPair {
    RealField re;
    RealField im;
};

/// analytic: subtract the closed-form term2 and term3 of the true object (simulation only).
/// heuristic: uses measured data only. Subtracts the synthesized spectrum estimate when
/// series are supplied, replaces the (0,0) DC pixel with its neighbour mean, then removes the
/// median background of the region outside the illumination disc.
ChannelPair remove_artifact(const GhostImage& gi_cos, const GhostImage& gi_sin, ArtifactMode mode,
                            const ArtifactContext& context);

/// Direct solve for Re/Im channels from paired series through the dual of the mask basis.
/// Works for any complete basis; for Hadamard masks the dual is the basis itself. Output is
/// scaled like remove_artifact's (i.e. divided by N).
ChannelPair solve_channels(const MeasurementSeries& cos_series, const MeasurementSeries& sin_series,
                           double sine_sign = kSineChannelSign);

/// phase = atan2(im, re) on `support`, restricted to pixels whose magnitude exceeds
/// rel_threshold times the largest magnitude.
PhaseImage combine_phase(const RealField& re, const RealField& im, const std::optional<Mask>& support = std::nullopt,
                         double rel_threshold = 1e-9);

/// arg(O) on |O| > rel_threshold * max|O|.
PhaseImage phase_of(const ComplexField& field, double rel_threshold = 1e-9);

struct DenoiseParams {
    /// Odd median window; 1 disables filtering.
    int window = 1;
    /// Pixels outside this disc are dropped from the support.
    std::optional<Mask> illumination;
    /// Re-reference the phase so its circular mean on the support is zero.
    bool remove_offset = false;
};

/// Phase-aware median: cos and sin of the phase are filtered separately over valid neighbours
/// and recombined, so the branch cut does not bias the result.
PhaseImage denoise(const PhaseImage& phase, const DenoiseParams& params);

}  // namespace qgi
