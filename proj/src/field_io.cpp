#include "qgi/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace qgi {
namespace {

constexpr std::string_view kMagic = "GCF1";
constexpr long kMaxDim = 1 << 14;

void put_f64(std::ostream& out, double v) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    char buf[8];
    std::memcpy(buf, &bits, 8);
    out.write(buf, 8);
}

double get_f64(std::istream& in) {
    char buf[8];
    if (!in.read(buf, 8)) throw DataError("field payload truncated");
    std::uint64_t bits;
    std::memcpy(&bits, buf, 8);
    if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
    return std::bit_cast<double>(bits);
}

void write_header(std::ostream& out, long d, FieldKind kind) {
    out << kMagic << '\n' << "d=" << d << " kind=" << to_string(kind) << '\n';
}

FieldKind parse_kind(const std::string& s) {
    if (s == "complex") return FieldKind::complex;
    if (s == "real") return FieldKind::real;
    if (s == "phase") return FieldKind::phase;
    throw DataError("unknown field kind '" + s + "'");
}

}  // namespace

std::string_view to_string(FieldKind k) {
    switch (k) {
        case FieldKind::complex: return "complex";
        case FieldKind::real: return "real";
        case FieldKind::phase: return "phase";
    }
    return "?";
}

void write_field(std::ostream& out, const ComplexField& f) {
    if (f.rows() != f.cols()) throw DimensionError("field must be square");
    write_header(out, f.rows(), FieldKind::complex);
    for (long r = 0; r < f.rows(); ++r)
        for (long c = 0; c < f.cols(); ++c) {
            put_f64(out, f(r, c).real());
            put_f64(out, f(r, c).imag());
        }
}

void write_field(std::ostream& out, const RealField& f, FieldKind kind) {
    if (kind == FieldKind::complex) throw DataError("real payload cannot be written as kind=complex");
    if (f.rows() != f.cols()) throw DimensionError("field must be square");
    write_header(out, f.rows(), kind);
    for (long r = 0; r < f.rows(); ++r)
        for (long c = 0; c < f.cols(); ++c) put_f64(out, f(r, c));
}

RawField read_field(std::istream& in) {
    std::string magic;
    if (!std::getline(in, magic) || magic != kMagic) throw DataError("not a GCF1 field file");
    std::string header;
    if (!std::getline(in, header)) throw DataError("missing field header line");
    std::istringstream hs(header);
    std::string tok;
    long d = -1;
    std::string kind;
    while (hs >> tok) {
        if (tok.rfind("d=", 0) == 0) {
            try {
                d = std::stol(tok.substr(2));
            } catch (const std::exception&) {
                throw DataError("bad dimension in header: " + tok);
            }
        } else if (tok.rfind("kind=", 0) == 0) {
            kind = tok.substr(5);
        } else {
            throw DataError("unexpected header token '" + tok + "'");
        }
    }
    if (d <= 0 || d > kMaxDim) throw DataError("bad or missing dimension in field header");
    RawField raw;
    raw.kind = parse_kind(kind);
    if (raw.kind == FieldKind::complex) {
        raw.complex.resize(d, d);
        for (long r = 0; r < d; ++r)
            for (long c = 0; c < d; ++c) {
                const double re = get_f64(in);
                const double im = get_f64(in);
                raw.complex(r, c) = Complex(re, im);
            }
    } else {
        raw.real.resize(d, d);
        for (long r = 0; r < d; ++r)
            for (long c = 0; c < d; ++c) raw.real(r, c) = get_f64(in);
    }
    if (in.peek() != std::char_traits<char>::eof()) throw DataError("trailing bytes after field payload");
    return raw;
}

void write_field(const std::filesystem::path& path, const ComplexField& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    write_field(out, f);
}

void write_field(const std::filesystem::path& path, const RealField& f, FieldKind kind) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    write_field(out, f, kind);
}

RawField read_field(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    return read_field(in);
}

ComplexField read_complex_field(const std::filesystem::path& path) {
    RawField raw = read_field(path);
    if (raw.kind == FieldKind::complex) return raw.complex;
    if (raw.kind == FieldKind::phase) throw DataError(path.string() + " holds a phase map, not a field");
    return raw.real.cast<Complex>();
}

}  // namespace qgi
