#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "qgi/projections.hpp"
#include "qgi/reconstruction.hpp"
#include "qgi/scene.hpp"

namespace qgi {

enum class RandomSolver { dual, correlation };

std::string_view to_string(RandomSolver s);
RandomSolver parse_random_solver(std::string_view s);

struct AcquisitionConfig {
    /// Total counts; unset means exact probabilities.
    std::optional<double> flux;
    std::uint64_t seed = 1;
    double dark_rate = 0.0;
};

struct ReconstructionConfig {
    ArtifactMode artifact_mode = ArtifactMode::heuristic;
    RandomSolver random_solver = RandomSolver::dual;
    double sine_sign = kSineChannelSign;
};

struct DenoiseConfig {
    int window = 1;
    bool remove_offset = false;
};

struct AnalysisConfig {
    /// Horizontal cross-section row; defaults to d/2.
    std::optional<long> row;
    /// Azimuthal cross-section radius; defaults to the annulus midline or d/4.
    std::optional<double> radius;
    int samples = 64;
};

struct RunConfig {
    long d = 32;
    ObjectSpec object;
    BasisSpec::Type basis_type = BasisSpec::Type::hadamard;
    Ordering ordering = Ordering::natural;
    std::uint64_t basis_seed = 1;
    AcquisitionConfig acquisition;
    ReconstructionConfig reconstruction;
    DenoiseConfig denoise;
    AnalysisConfig analysis;
    std::string output_dir = "out";

    BasisSpec basis() const;
    long analysis_row() const;
    double analysis_radius() const;
};

/// Parses JSON text. Unknown keys, wrong types and conflicting settings raise SpecError naming
/// the offending key. Absent keys keep their defaults.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

/// Checks cross-field consistency and fills object geometry; throws SpecError.
RunConfig resolve(const RunConfig& config);

/// Fully resolved JSON (every key present), suitable for re-loading.
std::string dump_config(const RunConfig& config);

}  // namespace qgi
