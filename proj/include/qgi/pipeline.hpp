#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qgi/analysis.hpp"
#include "qgi/config.hpp"

namespace qgi {

/// Normalized object for a resolved config.
ComplexField generate_object(const RunConfig& config);

struct ChannelSeries {
    MeasurementSeries cos;
    MeasurementSeries sin;
};

/// Exact or sampled cos/sin series. The two channels draw from seeds seed and seed + 1.
ChannelSeries acquire(const ComplexField& object, const RunConfig& config);

struct Reconstruction {
    GhostImage gi_cos;
    GhostImage gi_sin;
    ChannelPair channels;
    PhaseImage phase;  // after denoise
};

/// Ghost images, then artifact removal (or the dual solve for random masks), phase combination
/// on the illumination disc and denoising. Throws DataError when the two series do not pair up.
Reconstruction reconstruct(const ChannelSeries& series, const RunConfig& config,
                           const std::optional<ComplexField>& truth = std::nullopt);

struct Analysis {
    double rmse = 0.0;
    double offset = 0.0;
    CrossSection horizontal;
    CrossSection azimuthal;
    std::vector<double> steps;
    std::optional<LineFit> azimuthal_fit;
};

/// Throws DimensionError when the maps differ in size.
Analysis analyze(const PhaseImage& phase, const PhaseImage& truth, const RunConfig& config);

std::vector<std::pair<std::string, std::string>> report_entries(const Analysis& a);

std::string sha256_hex(const std::filesystem::path& file);

/// "sha256  relative/path" lines, one per file, sorted by path.
void write_manifest(const std::filesystem::path& dir, const std::vector<std::filesystem::path>& files);

}  // namespace qgi
