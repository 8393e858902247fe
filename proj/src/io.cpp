#include "qgi/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace qgi {
namespace {

std::map<std::string, std::string> parse_header_tokens(const std::string& line) {
    if (line.empty() || line[0] != '#') throw DataError("series file must start with a '#' header line");
    std::istringstream in(line.substr(1));
    std::map<std::string, std::string> kv;
    std::string tok;
    while (in >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw DataError("malformed header token '" + tok + "'");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return kv;
}

double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw DataError("bad " + what + " '" + s + "'");
    return v;
}

long parse_long(const std::string& s, const std::string& what) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw DataError("bad " + what + " '" + s + "'");
    return v;
}

const std::string& require_key(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw DataError("series header lacks '" + key + "'");
    return it->second;
}

}  // namespace

std::string format_double(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

void write_series(std::ostream& out, const MeasurementSeries& s) {
    out << "# d=" << s.dim() << " basis=" << to_string(s.basis) << " kind=" << to_string(s.kind)
        << " flux=" << (s.flux ? format_double(*s.flux) : std::string("exact"))
        << " seed=" << (s.seed ? std::to_string(*s.seed) : std::string("none")) << " dark=" << format_double(s.dark_rate)
        << '\n';
    for (long j = 0; j < s.count(); ++j) out << j << ',' << format_double(s.values[j]) << '\n';
}

MeasurementSeries read_series(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw DataError("empty series file");
    const auto kv = parse_header_tokens(line);
    const long d = parse_long(require_key(kv, "d"), "dimension");
    if (d < 1 || d > (1 << 14)) throw DataError("series dimension out of range");

    MeasurementSeries s;
    try {
        s.basis = parse_basis(require_key(kv, "basis"), d);
        s.kind = parse_projection_kind(require_key(kv, "kind"));
    } catch (const SpecError& e) {
        throw DataError(std::string("series header: ") + e.what());
    } catch (const DimensionError& e) {
        throw DataError(std::string("series header: ") + e.what());
    }
    const std::string& flux = require_key(kv, "flux");
    if (flux != "exact") s.flux = parse_double(flux, "flux");
    const std::string& seed = require_key(kv, "seed");
    if (seed != "none") s.seed = static_cast<std::uint64_t>(parse_long(seed, "seed"));
    if (auto it = kv.find("dark"); it != kv.end()) s.dark_rate = parse_double(it->second, "dark rate");

    const long n = d * d;
    s.values.resize(n);
    long row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw DataError("series row " + std::to_string(row) + " lacks a comma");
        const long j = parse_long(line.substr(0, comma), "index");
        if (j != row) throw DataError("series rows must be in ascending j; expected " + std::to_string(row));
        if (row >= n) throw DataError("series has more than N = " + std::to_string(n) + " rows");
        const double v = parse_double(line.substr(comma + 1), "value");
        if (!std::isfinite(v) || v < 0.0) throw DataError("series value at j=" + std::to_string(j) + " is not a finite nonnegative real");
        s.values[row++] = v;
    }
    if (row != n) throw DataError("series has " + std::to_string(row) + " rows, expected " + std::to_string(n));
    return s;
}

void write_series(const std::filesystem::path& path, const MeasurementSeries& s) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    write_series(out, s);
}

MeasurementSeries read_series(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return read_series(in);
}

void write_phase(const std::filesystem::path& path, const PhaseImage& p) {
    const RealField payload =
        p.support.select(p.phase, RealField::Constant(p.dim(), p.dim(), std::numeric_limits<double>::quiet_NaN()));
    write_field(path, payload, FieldKind::phase);
}

PhaseImage to_phase_image(const RawField& raw) {
    if (raw.kind == FieldKind::complex) return phase_of(raw.complex);
    if (raw.kind != FieldKind::phase) throw DataError("expected a phase or complex field, got kind=real");
    PhaseImage p;
    p.support = raw.real.array().isFinite();
    p.phase = p.support.select(raw.real, RealField::Zero(raw.real.rows(), raw.real.cols()));
    return p;
}

PhaseImage read_phase(const std::filesystem::path& path) { return to_phase_image(read_field(path)); }

void write_pgm(std::ostream& out, const Raster& r) {
    out << "P5\n" << r.cols() << ' ' << r.rows() << "\n65535\n";
    for (long row = 0; row < r.rows(); ++row)
        for (long col = 0; col < r.cols(); ++col) {
            const std::uint16_t v = r(row, col);
            const char bytes[2] = {static_cast<char>(v >> 8), static_cast<char>(v & 0xff)};
            out.write(bytes, 2);
        }
}

void write_pgm(const std::filesystem::path& path, const Raster& r) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path.string() + " for writing");
    write_pgm(out, r);
}

Raster read_pgm(std::istream& in) {
    std::string magic;
    long w = 0, h = 0, maxval = 0;
    if (!(in >> magic >> w >> h >> maxval) || magic != "P5") throw DataError("not a binary PGM");
    if (maxval != 65535) throw DataError("only 16-bit PGM is supported");
    in.get();
    Raster r(h, w);
    for (long row = 0; row < h; ++row)
        for (long col = 0; col < w; ++col) {
            unsigned char b[2];
            if (!in.read(reinterpret_cast<char*>(b), 2)) throw DataError("PGM payload truncated");
            r(row, col) = static_cast<std::uint16_t>((b[0] << 8) | b[1]);
        }
    return r;
}

Raster phase_raster(const PhaseImage& p) {
    Raster r = Raster::Zero(p.phase.rows(), p.phase.cols());
    for (long c = 0; c < r.cols(); ++c)
        for (long row = 0; row < r.rows(); ++row)
            if (p.support(row, c)) {
                const double t = (p.phase(row, c) + kPi) / kTwoPi;  // (0, 1]
                r(row, c) = static_cast<std::uint16_t>(1 + std::lround(t * 65534.0));
            }
    return r;
}

Raster intensity_raster(const RealField& f) {
    Raster r = Raster::Zero(f.rows(), f.cols());
    if (f.size() == 0) return r;
    const double lo = f.minCoeff();
    const double hi = f.maxCoeff();
    if (!(hi > lo)) return r;
    for (long c = 0; c < f.cols(); ++c)
        for (long row = 0; row < f.rows(); ++row)
            r(row, c) = static_cast<std::uint16_t>(std::lround((f(row, c) - lo) / (hi - lo) * 65535.0));
    return r;
}

void write_mask_text(std::ostream& out, const BasisSpec& basis, long j, MaskSymbols symbols) {
    const RealField m = basis_element(basis, j);
    const char* kind = symbols == MaskSymbols::basis ? "basis" : symbols == MaskSymbols::cos ? "cos" : "sin";
    out << "# mask j=" << j << " d=" << basis.dim << " basis=" << to_string(basis) << " kind=" << kind << '\n';
    for (long row = 0; row < m.rows(); ++row) {
        for (long col = 0; col < m.cols(); ++col) {
            const bool positive = m(row, col) > 0.0;
            if (col > 0) out << ' ';
            switch (symbols) {
                case MaskSymbols::basis: out << (positive ? "1" : "-1"); break;
                case MaskSymbols::cos: out << (positive ? "1" : "0"); break;
                case MaskSymbols::sin: out << (positive ? "1+i" : "1-i"); break;
            }
        }
        out << '\n';
    }
}

void write_report(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& entries) {
    for (const auto& [k, v] : entries) out << k << ": " << v << '\n';
}

void write_cross_section(std::ostream& out, const CrossSection& cs) {
    for (std::size_t i = 0; i < cs.size(); ++i) out << format_double(cs.coords[i]) << ',' << format_double(cs.values[i]) << '\n';
}

}  // namespace qgi
