#include "qgi/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

#include "qgi/io.hpp"

namespace qgi {
namespace {

void check_pairing(const MeasurementSeries& c, const MeasurementSeries& s) {
    if (c.kind != ProjectionKind::cos || s.kind != ProjectionKind::sin)
        throw DataError("channel mismatch: expected one cos and one sin series");
    if (!(c.basis == s.basis)) throw DataError("channel mismatch: series use different bases or sizes");
    if (c.exact() != s.exact()) throw DataError("channel mismatch: one series is exact, the other sampled");
    if (c.count() != s.count()) throw DataError("channel mismatch: series lengths differ");
}

}  // namespace

ComplexField generate_object(const RunConfig& config) { return normalize(make_object(config.object, config.d)); }

ChannelSeries acquire(const ComplexField& object, const RunConfig& config) {
    const BasisSpec basis = config.basis();
    if (object.rows() != basis.dim) throw DimensionError("object is " + std::to_string(object.rows()) + "x" +
                                                         std::to_string(object.cols()) + ", config expects d=" +
                                                         std::to_string(basis.dim));
    ChannelSeries out{measure_exact(object, basis, ProjectionKind::cos), measure_exact(object, basis, ProjectionKind::sin)};
    if (const auto& a = config.acquisition; a.flux) {
        out.cos = sample_counts(out.cos, *a.flux, a.seed, a.dark_rate);
        out.sin = sample_counts(out.sin, *a.flux, a.seed + 1, a.dark_rate);
    }
    return out;
}

Reconstruction reconstruct(const ChannelSeries& series, const RunConfig& config, const std::optional<ComplexField>& truth) {
    check_pairing(series.cos, series.sin);
    const long d = series.cos.dim();
    const auto& rc = config.reconstruction;
    const Mask disc = illumination_support(d, *resolve(config.object, d).illumination_radius);

    Reconstruction r;
    r.gi_cos = ghost_image(series.cos);
    r.gi_sin = ghost_image(series.sin);
    if (!series.cos.basis.is_hadamard() && rc.random_solver == RandomSolver::dual) {
        r.channels = solve_channels(series.cos, series.sin, rc.sine_sign);
    } else {
        ArtifactContext ctx;
        ctx.truth = truth;
        ctx.illumination = disc;
        ctx.cos_series = series.cos;
        ctx.sin_series = series.sin;
        ctx.sine_sign = rc.sine_sign;
        r.channels = remove_artifact(r.gi_cos, r.gi_sin, rc.artifact_mode, ctx);
    }
    const PhaseImage raw = combine_phase(r.channels.re, r.channels.im, disc);
    r.phase = denoise(raw, DenoiseParams{config.denoise.window, disc, config.denoise.remove_offset});
    return r;
}

Analysis analyze(const PhaseImage& phase, const PhaseImage& truth, const RunConfig& config) {
    if (phase.dim() != truth.dim())
        throw DimensionError("phase map is " + std::to_string(phase.dim()) + "x" + std::to_string(phase.dim()) +
                             ", truth is " + std::to_string(truth.dim()) + "x" + std::to_string(truth.dim()));
    RunConfig c = config;
    c.d = phase.dim();
    Analysis a;
    a.rmse = phase_rmse(phase, truth);
    a.offset = phase_offset(phase, truth);
    a.horizontal = cross_section_horizontal(phase, std::min(c.analysis_row(), c.d - 1));
    a.steps = step_positions(a.horizontal);
    a.azimuthal = cross_section_azimuthal(phase, c.analysis_radius(), c.analysis.samples);
    if (a.azimuthal.size() >= 2) a.azimuthal_fit = fit_line(a.azimuthal.coords, unwrap(a.azimuthal).values);
    return a;
}

std::vector<std::pair<std::string, std::string>> report_entries(const Analysis& a) {
    std::vector<std::pair<std::string, std::string>> e{
        {"phase_rmse", format_double(a.rmse)},
        {"phase_offset", format_double(a.offset)},
        {"horizontal_samples", std::to_string(a.horizontal.size())},
        {"azimuthal_samples", std::to_string(a.azimuthal.size())},
    };
    std::string steps;
    for (double s : a.steps) steps += (steps.empty() ? "" : " ") + format_double(s);
    e.emplace_back("horizontal_steps", steps.empty() ? "none" : steps);
    if (a.azimuthal_fit) {
        e.emplace_back("azimuthal_slope", format_double(a.azimuthal_fit->slope));
        e.emplace_back("azimuthal_intercept", format_double(a.azimuthal_fit->intercept));
    }
    return e;
}

std::string sha256_hex(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw DataError("cannot open " + file.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream hex;
    for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return hex.str();
}

void write_manifest(const std::filesystem::path& dir, const std::vector<std::filesystem::path>& files) {
    std::vector<std::string> names;
    for (const auto& f : files) names.push_back(std::filesystem::relative(f, dir).generic_string());
    std::sort(names.begin(), names.end());
    std::ofstream out(dir / "manifest.txt");
    if (!out) throw DataError("cannot write manifest in " + dir.string());
    for (const auto& n : names) out << sha256_hex(dir / n) << "  " << n << '\n';
}

}  // namespace qgi
