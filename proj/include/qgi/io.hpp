#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "qgi/analysis.hpp"
#include "qgi/field_io.hpp"

namespace qgi {

// Series file:
//   # d=<int> basis=<hadamard/natural|hadamard/sequency|random/<seed>> kind=<cos|sin> flux=<exact|x> seed=<none|n> dark=<x>
//   0,<value>
//   ...
//   N-1,<value>
void write_series(std::ostream& out, const MeasurementSeries& s);
MeasurementSeries read_series(std::istream& in);
void write_series(const std::filesystem::path& path, const MeasurementSeries& s);
MeasurementSeries read_series(const std::filesystem::path& path);

/// Phase maps use the field format with kind=phase; invalid pixels are stored as NaN.
void write_phase(const std::filesystem::path& path, const PhaseImage& p);
PhaseImage read_phase(const std::filesystem::path& path);
PhaseImage to_phase_image(const RawField& raw);

using Raster = Eigen::Matrix<std::uint16_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Binary 16-bit PGM: "P5\n<w> <h>\n65535\n" then big-endian samples.
void write_pgm(std::ostream& out, const Raster& r);
void write_pgm(const std::filesystem::path& path, const Raster& r);
Raster read_pgm(std::istream& in);

/// Valid pixels map linearly from (-pi, pi] onto [1, 65535]; invalid pixels are 0.
Raster phase_raster(const PhaseImage& p);
/// Linear min-max stretch onto [0, 65535].
Raster intensity_raster(const RealField& f);

enum class MaskSymbols { basis, cos, sin };

/// Text grid of one mask: "1"/"-1" for basis masks, "1"/"0" for cos masks (SLM grating on/off),
/// "1+i"/"1-i" for sin masks. Preceded by a "# mask ..." header line.
void write_mask_text(std::ostream& out, const BasisSpec& basis, long j, MaskSymbols symbols);

/// "key: value" lines.
void write_report(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& entries);

/// Two-column "coord,phase" rows, no header.
void write_cross_section(std::ostream& out, const CrossSection& cs);

std::string format_double(double x);

}  // namespace qgi
