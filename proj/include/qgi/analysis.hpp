#pragma once

#include <vector>

#include "qgi/reconstruction.hpp"

namespace qgi {

struct CrossSection {
    enum class Kind { horizontal, azimuthal };

    Kind kind = Kind::horizontal;
    /// Pixel column for horizontal traces, azimuth in radians for azimuthal ones. Strictly increasing.
    std::vector<double> coords;
    std::vector<double> values;
    bool unwrapped = false;

    std::size_t size() const { return coords.size(); }
};

/// Valid pixels of one row. Throws IndexError for a row outside the grid, DataError if no
/// pixel of the row is valid.
CrossSection cross_section_horizontal(const PhaseImage& phase, long row);

/// Samples at azimuth 2 pi k / samples on a circle about the grid centre; nearest pixel by
/// default, bilinear interpolation of (cos, sin) on request. Invalid samples are skipped.
CrossSection cross_section_azimuthal(const PhaseImage& phase, double radius, int samples, bool bilinear = false);

/// Removes 2 pi jumps so consecutive values differ by at most pi.
CrossSection unwrap(const CrossSection& section);

/// Circular RMSE after removing the global offset; the offset is the circular mean of the
/// wrapped differences on the common support.
double phase_rmse(const PhaseImage& recovered, const PhaseImage& truth);

/// Global offset used by phase_rmse.
double phase_offset(const PhaseImage& recovered, const PhaseImage& truth);

double pearson(const RealField& a, const RealField& b, const Mask& mask);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Coordinates midway between neighbouring samples whose wrapped difference exceeds threshold.
std::vector<double> step_positions(const CrossSection& section, double threshold = kPi / 2);

}  // namespace qgi
