#include "qgi/reconstruction.hpp"

#include <vector>

#include "qgi/numeric.hpp"

namespace qgi {
namespace {

void check_pair(const GhostImage& c, const GhostImage& s) {
    if (c.channel != ProjectionKind::cos || s.channel != ProjectionKind::sin)
        throw DataError("expected one cos and one sin ghost image");
    if (c.values.rows() != s.values.rows() || c.values.cols() != s.values.cols())
        throw DimensionError("cos and sin images differ in size");
}

void check_series_pair(const MeasurementSeries& c, const MeasurementSeries& s) {
    if (c.kind != ProjectionKind::cos || s.kind != ProjectionKind::sin)
        throw DataError("expected one cos and one sin series");
    if (!(c.basis == s.basis)) throw DataError("cos and sin series were taken in different bases");
    if (c.count() != s.count()) throw DimensionError("cos and sin series differ in length");
}

}  // namespace

Eigen::VectorXd reconstruction_values(const MeasurementSeries& series) {
    if (series.count() != series.basis.count())
        throw DimensionError("series has " + std::to_string(series.count()) + " values, basis has " +
                             std::to_string(series.basis.count()) + " masks");
    if (series.exact()) return series.values;
    const double total = pairwise_sum(series.values);
    if (!(total > 0.0)) throw DataError("count series sums to zero");
    return series.values / total;
}

GhostImage ghost_image(const MeasurementSeries& series) {
    const Eigen::VectorXd v = reconstruction_values(series);
    const double mean = pairwise_sum(v) / static_cast<double>(v.size());
    GhostImage gi;
    gi.channel = series.kind;
    gi.basis = series.basis;
    gi.normalized_counts = !series.exact();
    gi.values = synthesize(series.basis, (v.array() - mean).matrix()) / static_cast<double>(v.size());
    return gi;
}

RealField GhostImageTerms::total() const {
    const double n = static_cast<double>(term1.size());
    return (term1 + term2 - term3) / n;
}

double GhostImageTerms::series_total() const {
    const double n = static_cast<double>(term1.size());
    return n * p0 / 2.0 + std::sqrt(n) * g;
}

GhostImageTerms closed_form_terms(const ComplexField& object, const OrthoMatrix& h, ProjectionKind channel) {
    const SpectralDecomposition s = decompose(object, h);
    const long d = h.dim;
    const long n = d * d;
    GhostImageTerms t;
    t.channel = channel;
    t.p0 = s.p(0);
    t.alpha0 = s.alpha(0);
    const double root_p0 = std::sqrt(t.p0);

    t.term1.resize(d, d);
    for (long c = 0; c < d; ++c)
        for (long r = 0; r < d; ++r) {
            const double mag = std::abs(object(r, c));
            const double rel = std::arg(object(r, c)) - t.alpha0;
            t.term1(r, c) = channel == ProjectionKind::cos ? root_p0 * mag * std::cos(rel)
                                                           : kSineChannelSign * root_p0 * mag * std::sin(rel);
        }

    t.term2 = 0.5 * ifwht2(s.probabilities, h);

    std::vector<double> cross(n);
    for (long j = 0; j < n; ++j) {
        const double delta = s.alpha(j) - t.alpha0;
        const double amp = std::sqrt(t.p0 * s.p(j));
        cross[j] = channel == ProjectionKind::cos ? amp * std::cos(delta) : kSineChannelSign * amp * std::sin(delta);
    }
    const double mean_p = pairwise_sum(s.probabilities) / static_cast<double>(n);
    const double mean_cross = pairwise_sum(std::span<const double>(cross)) / static_cast<double>(n);
    t.g = std::sqrt(static_cast<double>(n)) * (0.5 * mean_p + mean_cross);
    t.term3 = RealField::Zero(d, d);
    t.term3(0, 0) = t.g;
    return t;
}

GhostImage closed_form_gi(const ComplexField& object, const OrthoMatrix& h, ProjectionKind channel) {
    GhostImage gi;
    gi.channel = channel;
    gi.provenance = GhostImage::Provenance::closed_form;
    gi.basis = BasisSpec::hadamard(h.dim, h.ordering);
    gi.values = closed_form_terms(object, h, channel).total();
    return gi;
}

std::optional<SpectrumEstimate> estimate_spectrum(const MeasurementSeries& cos_series,
                                                  const MeasurementSeries& sin_series) {
    check_series_pair(cos_series, sin_series);
    const Eigen::VectorXd vc = reconstruction_values(cos_series);
    const Eigen::VectorXd vs = reconstruction_values(sin_series);
    if (!(vc[0] > 0.0) || !(vs[0] > 0.0)) return std::nullopt;

    SpectrumEstimate est;
    est.p0 = 0.5 * vc[0];
    est.sin_to_cos = est.p0 / vs[0];
    const Eigen::ArrayXd a = vc.array() - 0.5 * est.p0;
    const Eigen::ArrayXd b = vs.array() * est.sin_to_cos - 0.5 * est.p0;
    const Eigen::ArrayXd lin = a + b + est.p0;
    const Eigen::ArrayXd disc = (lin.square() - 2.0 * (a.square() + b.square())).max(0.0);
    est.half_probabilities = (0.5 * (lin - disc.sqrt())).max(0.0).matrix();
    return est;
}

std::string_view to_string(ArtifactMode m) { return m == ArtifactMode::analytic ? "analytic" : "heuristic"; }

ArtifactMode parse_artifact_mode(std::string_view s) {
    if (s == "analytic") return ArtifactMode::analytic;
    if (s == "heuristic") return ArtifactMode::heuristic;
    throw SpecError("unknown artifact mode '" + std::string(s) + "' (expected analytic|heuristic)");
}

ChannelPair remove_artifact(const GhostImage& gi_cos, const GhostImage& gi_sin, ArtifactMode mode,
                            const ArtifactContext& ctx) {
    check_pair(gi_cos, gi_sin);
    const long d = gi_cos.values.rows();
    const double n = static_cast<double>(gi_cos.values.size());
    ChannelPair out{gi_cos.values, gi_sin.values};

    if (mode == ArtifactMode::analytic) {
        if (!ctx.truth) throw SpecError("analytic artifact removal needs the ground-truth object");
        if (!gi_cos.basis.is_hadamard()) throw SpecError("analytic artifact removal needs a Hadamard basis");
        const OrthoMatrix h = gi_cos.basis.matrix();
        for (auto [gi, field] : {std::pair{&gi_cos, &out.re}, std::pair{&gi_sin, &out.im}}) {
            const GhostImageTerms t = closed_form_terms(*ctx.truth, h, gi->channel);
            RealField artifact = (t.term2 - t.term3) / n;
            if (gi->normalized_counts) artifact /= t.series_total();
            *field -= artifact;
        }
        out.im *= ctx.sine_sign;
        return out;
    }

    if (ctx.cos_series && ctx.sin_series) {
        if (const auto est = estimate_spectrum(*ctx.cos_series, *ctx.sin_series)) {
            const Eigen::VectorXd& s = est->half_probabilities;
            const double mean = pairwise_sum(s) / static_cast<double>(s.size());
            const RealField spectral = synthesize(ctx.cos_series->basis, (s.array() - mean).matrix()) / n;
            out.re -= spectral;
            out.im -= spectral / est->sin_to_cos;
        }
    }
    if (d >= 2) {
        for (RealField* f : {&out.re, &out.im}) (*f)(0, 0) = ((*f)(0, 1) + (*f)(1, 0) + (*f)(1, 1)) / 3.0;
    }
    if (ctx.illumination) {
        const Mask outside = !ctx.illumination->array();
        if (outside.count() > 0) {
            for (RealField* f : {&out.re, &out.im}) f->array() -= median(masked_values(*f, outside));
        }
    }
    out.im *= ctx.sine_sign;
    return out;
}

ChannelPair solve_channels(const MeasurementSeries& cos_series, const MeasurementSeries& sin_series,
                           double sine_sign) {
    const auto est = estimate_spectrum(cos_series, sin_series);
    if (!est) throw DataError("DC reference carries no signal; the channels cannot be separated");
    const Eigen::VectorXd vc = reconstruction_values(cos_series);
    const Eigen::VectorXd vs = reconstruction_values(sin_series);
    const Eigen::VectorXd& s = est->half_probabilities;
    const Eigen::VectorXd u_re = (vc.array() - 0.5 * est->p0 - s.array()).matrix();
    const Eigen::VectorXd u_im =
        (sine_sign * (vs.array() * est->sin_to_cos - 0.5 * est->p0 - s.array())).matrix();

    const BasisSpec& basis = cos_series.basis;
    const double n = static_cast<double>(basis.count());
    if (basis.is_hadamard()) return {synthesize(basis, u_re) / n, synthesize(basis, u_im) / n};

    constexpr long kMaxDenseMasks = 4096;
    if (basis.count() > kMaxDenseMasks)
        throw SpecError("dual-basis solve is limited to N <= " + std::to_string(kMaxDenseMasks) + " masks");
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(mask_matrix(basis));
    if (!(lu.rcond() > 1e-13)) throw DataError("random mask set is numerically singular");
    Eigen::MatrixXd rhs(basis.count(), 2);
    rhs << u_re, u_im;
    const Eigen::MatrixXd x = lu.solve(rhs) / n;
    return {unflatten(x.col(0), basis.dim), unflatten(x.col(1), basis.dim)};
}

PhaseImage combine_phase(const RealField& re, const RealField& im, const std::optional<Mask>& support,
                         double rel_threshold) {
    if (re.rows() != im.rows() || re.cols() != im.cols()) throw DimensionError("re and im fields differ in size");
    if (support && (support->rows() != re.rows() || support->cols() != re.cols()))
        throw DimensionError("support mask size differs from the fields");
    const RealField mag = (re.array().square() + im.array().square()).sqrt().matrix();
    const double cut = rel_threshold * (mag.size() > 0 ? mag.maxCoeff() : 0.0);
    PhaseImage p;
    p.phase = RealField::Zero(re.rows(), re.cols());
    p.support = mag.array() > cut;
    if (support) p.support = p.support && support->array();
    for (long c = 0; c < re.cols(); ++c)
        for (long r = 0; r < re.rows(); ++r)
            if (p.support(r, c)) p.phase(r, c) = wrap_phase(std::atan2(im(r, c), re(r, c)));
    return p;
}

PhaseImage phase_of(const ComplexField& field, double rel_threshold) {
    return combine_phase(field.real(), field.imag(), std::nullopt, rel_threshold);
}

PhaseImage denoise(const PhaseImage& in, const DenoiseParams& params) {
    if (params.window < 1 || params.window % 2 == 0)
        throw SpecError("denoise.window must be a positive odd integer, got " + std::to_string(params.window));
    PhaseImage out = in;
    if (params.illumination) {
        if (params.illumination->rows() != in.dim()) throw DimensionError("illumination mask size differs");
        out.support = out.support && params.illumination->array();
    }
    const long d = in.dim();
    const long k = params.window / 2;
    if (k > 0) {
        const RealField cs = in.phase.array().cos();
        const RealField sn = in.phase.array().sin();
        std::vector<double> cw, sw;
        for (long c = 0; c < d; ++c)
            for (long r = 0; r < d; ++r) {
                if (!out.support(r, c)) continue;
                cw.clear();
                sw.clear();
                for (long cc = std::max(0L, c - k); cc <= std::min(d - 1, c + k); ++cc)
                    for (long rr = std::max(0L, r - k); rr <= std::min(d - 1, r + k); ++rr)
                        if (out.support(rr, cc)) {
                            cw.push_back(cs(rr, cc));
                            sw.push_back(sn(rr, cc));
                        }
                const double mc = median(cw);
                const double ms = median(sw);
                if (mc != 0.0 || ms != 0.0) out.phase(r, c) = std::atan2(ms, mc);
            }
    }
    if (params.remove_offset && out.support.count() > 0) {
        double sc = 0.0, ss = 0.0;
        for (long c = 0; c < d; ++c)
            for (long r = 0; r < d; ++r)
                if (out.support(r, c)) {
                    sc += std::cos(out.phase(r, c));
                    ss += std::sin(out.phase(r, c));
                }
        const double offset = std::atan2(ss, sc);
        out.phase = out.phase.unaryExpr([offset](double x) { return wrap_phase(x - offset); });
    }
    for (long c = 0; c < d; ++c)
        for (long r = 0; r < d; ++r)
            out.phase(r, c) = out.support(r, c) ? wrap_phase(out.phase(r, c)) : 0.0;
    return out;
}

}  // namespace qgi
