#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "qgi/types.hpp"

namespace qgi {

/// Binary grid file: "GCF1\n", "d=<int> kind=<complex|real|phase>\n", then d*d row-major
/// little-endian float64 values (re, im interleaved for complex).
enum class FieldKind { complex, real, phase };

std::string_view to_string(FieldKind k);

struct RawField {
    FieldKind kind = FieldKind::complex;
    ComplexField complex;  // kind == complex
    RealField real;        // kind == real or phase (NaN marks invalid phase pixels)
    long dim() const { return kind == FieldKind::complex ? complex.rows() : real.rows(); }
};

void write_field(std::ostream& out, const ComplexField& f);
void write_field(std::ostream& out, const RealField& f, FieldKind kind = FieldKind::real);
RawField read_field(std::istream& in);

void write_field(const std::filesystem::path& path, const ComplexField& f);
void write_field(const std::filesystem::path& path, const RealField& f, FieldKind kind = FieldKind::real);
RawField read_field(const std::filesystem::path& path);

/// Reads a complex field; real payloads are promoted.
ComplexField read_complex_field(const std::filesystem::path& path);

}  // namespace qgi
