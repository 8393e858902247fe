#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qgi {

using Complex = std::complex<double>;

/// Dense d×d grid. Row index is the image y coordinate, column index is x.
template <typename Scalar>
using Field = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using ComplexField = Field<Complex>;
using RealField = Field<double>;
using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DimensionError : Error {
    using Error::Error;
};
struct IndexError : Error {
    using Error::Error;
};
/// Invalid user-supplied parameters (object spec, config, flags).
struct SpecError : Error {
    using Error::Error;
};
/// Malformed or inconsistent input data.
struct DataError : Error {
    using Error::Error;
};

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Wraps an angle to (-pi, pi].
inline double wrap_phase(double x) {
    double r = std::remainder(x, kTwoPi);
    return r <= -kPi ? r + kTwoPi : r;
}

inline constexpr bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

/// Geometric centre of a d×d grid in pixel-centre coordinates.
inline double grid_center(long d) { return 0.5 * static_cast<double>(d) - 0.5; }

}  // namespace qgi
