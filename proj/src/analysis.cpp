#include "qgi/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qgi {
namespace {

void check_same(const PhaseImage& a, const PhaseImage& b) {
    if (a.dim() != b.dim()) throw DimensionError("phase images differ in size");
}

std::vector<double> wrapped_differences(const PhaseImage& rec, const PhaseImage& truth) {
    check_same(rec, truth);
    std::vector<double> diffs;
    for (long c = 0; c < rec.dim(); ++c)
        for (long r = 0; r < rec.dim(); ++r)
            if (rec.support(r, c) && truth.support(r, c)) diffs.push_back(wrap_phase(rec.phase(r, c) - truth.phase(r, c)));
    if (diffs.empty()) throw DataError("recovered and truth supports do not intersect");
    return diffs;
}

double circular_mean(const std::vector<double>& xs) {
    double s = 0.0, c = 0.0;
    for (double x : xs) {
        s += std::sin(x);
        c += std::cos(x);
    }
    return std::atan2(s, c);
}

}  // namespace

CrossSection cross_section_horizontal(const PhaseImage& phase, long row) {
    if (row < 0 || row >= phase.dim())
        throw IndexError("row " + std::to_string(row) + " outside [0, " + std::to_string(phase.dim()) + ")");
    CrossSection cs;
    cs.kind = CrossSection::Kind::horizontal;
    for (long c = 0; c < phase.dim(); ++c)
        if (phase.support(row, c)) {
            cs.coords.push_back(static_cast<double>(c));
            cs.values.push_back(phase.phase(row, c));
        }
    if (cs.coords.empty()) throw DataError("row " + std::to_string(row) + " has no valid pixels");
    return cs;
}

CrossSection cross_section_azimuthal(const PhaseImage& phase, double radius, int samples, bool bilinear) {
    const long d = phase.dim();
    const double c = grid_center(d);
    if (!(radius > 0.0) || c + radius > d - 0.5)
        throw SpecError("radius " + std::to_string(radius) + " does not fit inside the grid");
    if (samples < 1) throw SpecError("samples must be positive");

    CrossSection cs;
    cs.kind = CrossSection::Kind::azimuthal;
    for (int k = 0; k < samples; ++k) {
        const double theta = kTwoPi * k / samples;
        const double x = c + radius * std::cos(theta);
        const double y = c + radius * std::sin(theta);
        if (!bilinear) {
            const long col = std::clamp(std::lround(x), 0L, d - 1);
            const long row = std::clamp(std::lround(y), 0L, d - 1);
            if (!phase.support(row, col)) continue;
            cs.coords.push_back(theta);
            cs.values.push_back(phase.phase(row, col));
            continue;
        }
        const long c0 = std::clamp(static_cast<long>(std::floor(x)), 0L, d - 2);
        const long r0 = std::clamp(static_cast<long>(std::floor(y)), 0L, d - 2);
        const double fx = x - c0, fy = y - r0;
        double sc = 0.0, ss = 0.0, wsum = 0.0;
        for (int dr = 0; dr < 2; ++dr)
            for (int dc = 0; dc < 2; ++dc) {
                if (!phase.support(r0 + dr, c0 + dc)) continue;
                const double w = (dc ? fx : 1.0 - fx) * (dr ? fy : 1.0 - fy);
                sc += w * std::cos(phase.phase(r0 + dr, c0 + dc));
                ss += w * std::sin(phase.phase(r0 + dr, c0 + dc));
                wsum += w;
            }
        if (wsum <= 0.0) continue;
        cs.coords.push_back(theta);
        cs.values.push_back(std::atan2(ss, sc));
    }
    return cs;
}

CrossSection unwrap(const CrossSection& section) {
    CrossSection out = section;
    out.unwrapped = true;
    for (std::size_t i = 1; i < out.values.size(); ++i)
        out.values[i] = out.values[i - 1] + wrap_phase(section.values[i] - section.values[i - 1]);
    return out;
}

double phase_offset(const PhaseImage& recovered, const PhaseImage& truth) {
    return circular_mean(wrapped_differences(recovered, truth));
}

double phase_rmse(const PhaseImage& recovered, const PhaseImage& truth) {
    const std::vector<double> diffs = wrapped_differences(recovered, truth);
    const double beta = circular_mean(diffs);
    double acc = 0.0;
    for (double x : diffs) {
        const double e = wrap_phase(x - beta);
        acc += e * e;
    }
    return std::sqrt(acc / static_cast<double>(diffs.size()));
}

double pearson(const RealField& a, const RealField& b, const Mask& mask) {
    if (a.rows() != b.rows() || a.cols() != b.cols() || mask.rows() != a.rows() || mask.cols() != a.cols())
        throw DimensionError("pearson inputs differ in size");
    const long n = mask.count();
    if (n < 2) throw DataError("pearson needs at least two samples");
    double ma = 0.0, mb = 0.0;
    for (long c = 0; c < a.cols(); ++c)
        for (long r = 0; r < a.rows(); ++r)
            if (mask(r, c)) {
                ma += a(r, c);
                mb += b(r, c);
            }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (long c = 0; c < a.cols(); ++c)
        for (long r = 0; r < a.rows(); ++r)
            if (mask(r, c)) {
                const double x = a(r, c) - ma, y = b(r, c) - mb;
                sab += x * y;
                saa += x * x;
                sbb += y * y;
            }
    if (saa <= 0.0 || sbb <= 0.0) throw DataError("pearson of a constant signal is undefined");
    return sab / std::sqrt(saa * sbb);
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DataError("line fit needs two or more paired samples");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    if (sxx <= 0.0) throw DataError("line fit needs distinct x values");
    const double slope = sxy / sxx;
    return {slope, my - slope * mx};
}

std::vector<double> step_positions(const CrossSection& section, double threshold) {
    std::vector<double> steps;
    for (std::size_t i = 1; i < section.size(); ++i)
        if (std::abs(wrap_phase(section.values[i] - section.values[i - 1])) > threshold)
            steps.push_back(0.5 * (section.coords[i] + section.coords[i - 1]));
    return steps;
}

}  // namespace qgi
