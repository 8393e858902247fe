#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qgi/io.hpp"
#include "qgi/pipeline.hpp"

namespace fs = std::filesystem;
using namespace qgi;

namespace {

struct Overrides {
    std::string config_path;
    std::optional<long> d;
    std::optional<std::string> kind;
    std::optional<double> illumination_radius;
    std::optional<long> slit_center, slit_width, slit_gap;
    std::optional<double> inner_radius, outer_radius;
    std::optional<int> petals, bands;
    std::optional<double> phase_depth;
    std::optional<std::string> object_path;
    std::optional<std::string> basis, ordering;
    std::optional<std::uint64_t> basis_seed;
    std::optional<std::string> mode;
    std::optional<double> flux;
    std::optional<std::uint64_t> seed;
    std::optional<double> dark_rate;
    std::optional<std::string> artifact_mode, random_solver;
    std::optional<double> sine_sign;
    std::optional<int> window;
    std::optional<bool> remove_offset;
    std::optional<long> row;
    std::optional<double> radius;
    std::optional<int> samples;
    std::optional<std::string> out;
};

void add_config_options(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    cmd->add_option("--d", o.d, "grid size (power of two)");
    cmd->add_option("--kind", o.kind, "object kind");
    cmd->add_option("--illumination-radius", o.illumination_radius);
    cmd->add_option("--slit-center", o.slit_center);
    cmd->add_option("--slit-width", o.slit_width);
    cmd->add_option("--slit-gap", o.slit_gap);
    cmd->add_option("--inner-radius", o.inner_radius);
    cmd->add_option("--outer-radius", o.outer_radius);
    cmd->add_option("--petals", o.petals);
    cmd->add_option("--bands", o.bands);
    cmd->add_option("--phase-depth", o.phase_depth);
    cmd->add_option("--object-path", o.object_path, "field file for kind from-file");
    cmd->add_option("--basis", o.basis, "hadamard or random");
    cmd->add_option("--ordering", o.ordering, "natural or sequency");
    cmd->add_option("--basis-seed", o.basis_seed);
    cmd->add_option("--mode", o.mode, "exact or sampled");
    cmd->add_option("--flux", o.flux, "total counts per channel");
    cmd->add_option("--seed", o.seed, "sampling seed");
    cmd->add_option("--dark-rate", o.dark_rate);
    cmd->add_option("--artifact-mode", o.artifact_mode, "analytic or heuristic");
    cmd->add_option("--random-solver", o.random_solver, "dual or correlation");
    cmd->add_option("--sine-sign", o.sine_sign);
    cmd->add_option("--window", o.window, "odd median window");
    cmd->add_option("--remove-offset", o.remove_offset);
    cmd->add_option("--row", o.row, "horizontal cross-section row");
    cmd->add_option("--radius", o.radius, "azimuthal cross-section radius");
    cmd->add_option("--samples", o.samples, "azimuthal samples");
    cmd->add_option("--out", o.out, "output directory");
}

RunConfig build_config(const Overrides& o) {
    RunConfig c = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
    if (o.d) c.d = *o.d;
    if (o.kind) c.object.kind = parse_object_kind(*o.kind);
    if (o.illumination_radius) c.object.illumination_radius = o.illumination_radius;
    if (o.slit_center) c.object.slit_center = o.slit_center;
    if (o.slit_width) c.object.slit_width = o.slit_width;
    if (o.slit_gap) c.object.slit_gap = o.slit_gap;
    if (o.inner_radius) c.object.inner_radius = o.inner_radius;
    if (o.outer_radius) c.object.outer_radius = o.outer_radius;
    if (o.petals) c.object.petals = *o.petals;
    if (o.bands) c.object.bands = *o.bands;
    if (o.phase_depth) c.object.phase_depth = *o.phase_depth;
    if (o.object_path) c.object.path = *o.object_path;
    if (o.basis) {
        if (*o.basis == "hadamard") c.basis_type = BasisSpec::Type::hadamard;
        else if (*o.basis == "random") c.basis_type = BasisSpec::Type::random;
        else throw SpecError("basis.type: unknown type '" + *o.basis + "' (expected hadamard or random)");
    }
    if (o.ordering) {
        try {
            c.ordering = parse_ordering(*o.ordering);
        } catch (const SpecError& e) {
            throw SpecError(std::string("basis.ordering: ") + e.what());
        }
    }
    if (o.basis_seed) c.basis_seed = *o.basis_seed;
    if (o.flux) c.acquisition.flux = o.flux;
    if (o.mode) {
        if (*o.mode == "exact") {
            if (o.flux) throw SpecError("acquisition.flux: conflicts with acquisition.mode 'exact'");
            c.acquisition.flux.reset();
        } else if (*o.mode == "sampled") {
            if (!c.acquisition.flux) throw SpecError("acquisition.flux: required when acquisition.mode is 'sampled'");
        } else {
            throw SpecError("acquisition.mode: unknown mode '" + *o.mode + "' (expected exact or sampled)");
        }
    }
    if (o.seed) c.acquisition.seed = *o.seed;
    if (o.dark_rate) c.acquisition.dark_rate = *o.dark_rate;
    try {
        if (o.artifact_mode) c.reconstruction.artifact_mode = parse_artifact_mode(*o.artifact_mode);
    } catch (const SpecError& e) {
        throw SpecError(std::string("reconstruction.artifact_mode: ") + e.what());
    }
    try {
        if (o.random_solver) c.reconstruction.random_solver = parse_random_solver(*o.random_solver);
    } catch (const SpecError& e) {
        throw SpecError(std::string("reconstruction.random_solver: ") + e.what());
    }
    if (o.sine_sign) c.reconstruction.sine_sign = *o.sine_sign;
    if (o.window) c.denoise.window = *o.window;
    if (o.remove_offset) c.denoise.remove_offset = *o.remove_offset;
    if (o.row) c.analysis.row = o.row;
    if (o.radius) c.analysis.radius = o.radius;
    if (o.samples) c.analysis.samples = *o.samples;
    if (o.out) c.output_dir = *o.out;
    return c;
}

class Outputs {
public:
    explicit Outputs(const RunConfig& c) : dir_(c.output_dir) { fs::create_directories(dir_); }

    fs::path path(const std::string& name) {
        files_.push_back(dir_ / name);
        return files_.back();
    }
    void text(const std::string& name, const std::string& content) {
        std::ofstream out(path(name));
        if (!out) throw DataError("cannot write " + (dir_ / name).string());
        out << content;
    }
    void config(const RunConfig& c) { text("config.resolved.json", dump_config(c)); }
    void manifest() const { write_manifest(dir_, files_); }

private:
    fs::path dir_;
    std::vector<fs::path> files_;
};

void write_object(Outputs& out, const ComplexField& object) {
    write_field(out.path("object.gcf"), object);
    write_pgm(out.path("object_phase.pgm"), phase_raster(phase_of(object)));
}

void write_series_pair(Outputs& out, const ChannelSeries& s) {
    write_series(out.path("series_cos.csv"), s.cos);
    write_series(out.path("series_sin.csv"), s.sin);
}

void write_reconstruction(Outputs& out, const Reconstruction& r) {
    write_field(out.path("gi_cos.gcf"), r.gi_cos.values);
    write_field(out.path("gi_sin.gcf"), r.gi_sin.values);
    write_field(out.path("re.gcf"), r.channels.re);
    write_field(out.path("im.gcf"), r.channels.im);
    write_phase(out.path("phase.gcf"), r.phase);
    write_pgm(out.path("gi_cos.pgm"), intensity_raster(r.gi_cos.values));
    write_pgm(out.path("gi_sin.pgm"), intensity_raster(r.gi_sin.values));
    write_pgm(out.path("re.pgm"), intensity_raster(r.channels.re));
    write_pgm(out.path("im.pgm"), intensity_raster(r.channels.im));
    write_pgm(out.path("phase.pgm"), phase_raster(r.phase));
}

void write_analysis(Outputs& out, const Analysis& a) {
    std::ostringstream report, horizontal, azimuthal;
    write_report(report, report_entries(a));
    write_cross_section(horizontal, a.horizontal);
    write_cross_section(azimuthal, a.azimuthal);
    out.text("report.txt", report.str());
    out.text("cross_horizontal.csv", horizontal.str());
    out.text("cross_azimuthal.csv", azimuthal.str());
}

MaskSymbols parse_mask_symbols(const std::string& s) {
    if (s == "basis") return MaskSymbols::basis;
    if (s == "cos") return MaskSymbols::cos;
    if (s == "sin") return MaskSymbols::sin;
    throw SpecError("mask kind: unknown '" + s + "' (expected basis, cos or sin)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum ghost imaging of phase objects: simulation and reconstruction"};
    app.require_subcommand(1);

    Overrides gen_o, masks_o, acq_o, rec_o, ana_o, pipe_o;

    auto* gen = app.add_subcommand("gen-object", "write a test object and a phase preview");
    add_config_options(gen, gen_o);

    auto* masks = app.add_subcommand("gen-masks", "export projection masks as text grids");
    add_config_options(masks, masks_o);
    std::string mask_kind = "basis";
    std::optional<long> mask_index;
    masks->add_option("--mask-kind", mask_kind, "basis, cos or sin");
    masks->add_option("--index", mask_index, "single mask index (default: all)");

    auto* acq = app.add_subcommand("acquire", "measure cos and sin series of an object");
    add_config_options(acq, acq_o);
    std::string object_file;
    acq->add_option("--object", object_file, "object field file")->required()->check(CLI::ExistingFile);

    auto* rec = app.add_subcommand("reconstruct", "recover the phase from a cos/sin series pair");
    add_config_options(rec, rec_o);
    std::string cos_file, sin_file, rec_truth;
    rec->add_option("--cos", cos_file, "cos series file")->required()->check(CLI::ExistingFile);
    rec->add_option("--sin", sin_file, "sin series file")->required()->check(CLI::ExistingFile);
    rec->add_option("--truth", rec_truth, "object field, needed by analytic mode")->check(CLI::ExistingFile);

    auto* ana = app.add_subcommand("analyze", "compare a phase map with ground truth");
    add_config_options(ana, ana_o);
    std::string phase_file, ana_truth;
    ana->add_option("--phase", phase_file, "recovered phase file")->required()->check(CLI::ExistingFile);
    ana->add_option("--truth", ana_truth, "ground-truth object or phase file")->required()->check(CLI::ExistingFile);

    auto* pipe = app.add_subcommand("pipeline", "run every stage and write a manifest");
    add_config_options(pipe, pipe_o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (gen->parsed()) {
            RunConfig c = resolve(build_config(gen_o));
            Outputs out(c);
            write_object(out, generate_object(c));
            out.config(c);
        } else if (masks->parsed()) {
            RunConfig c = resolve(build_config(masks_o));
            const MaskSymbols symbols = parse_mask_symbols(mask_kind);
            const BasisSpec basis = c.basis();
            if (mask_index && (*mask_index < 0 || *mask_index >= basis.count()))
                throw IndexError("mask index " + std::to_string(*mask_index) + " outside [0, " +
                                 std::to_string(basis.count()) + ")");
            Outputs out(c);
            std::ofstream f(out.path("masks_" + mask_kind + ".txt"));
            const long first = mask_index.value_or(0);
            const long last = mask_index ? *mask_index + 1 : basis.count();
            for (long j = first; j < last; ++j) {
                if (j > first) f << '\n';
                write_mask_text(f, basis, j, symbols);
            }
            f.close();
            out.config(c);
        } else if (acq->parsed()) {
            RunConfig c = build_config(acq_o);
            const ComplexField object = normalize(read_complex_field(object_file));
            c.d = object.rows();
            c = resolve(c);
            Outputs out(c);
            write_series_pair(out, acquire(object, c));
            out.config(c);
        } else if (rec->parsed()) {
            RunConfig c = build_config(rec_o);
            ChannelSeries s{read_series(fs::path(cos_file)), read_series(fs::path(sin_file))};
            c.d = s.cos.dim();
            c = resolve(c);
            std::optional<ComplexField> truth;
            if (!rec_truth.empty()) truth = normalize(read_complex_field(rec_truth));
            if (c.reconstruction.artifact_mode == ArtifactMode::analytic && !truth)
                throw SpecError("reconstruction.artifact_mode: analytic mode needs --truth");
            Outputs out(c);
            write_reconstruction(out, reconstruct(s, c, truth));
            out.config(c);
        } else if (ana->parsed()) {
            RunConfig c = build_config(ana_o);
            const PhaseImage phase = read_phase(phase_file);
            const PhaseImage truth = to_phase_image(read_field(fs::path(ana_truth)));
            c.d = phase.dim();
            c = resolve(c);
            Outputs out(c);
            write_analysis(out, analyze(phase, truth, c));
            out.config(c);
        } else if (pipe->parsed()) {
            RunConfig c = resolve(build_config(pipe_o));
            Outputs out(c);
            const ComplexField object = generate_object(c);
            write_object(out, object);
            const ChannelSeries series = acquire(object, c);
            write_series_pair(out, series);
            const Reconstruction r = reconstruct(series, c, object);
            write_reconstruction(out, r);
            write_analysis(out, analyze(r.phase, phase_of(object), c));
            out.config(c);
            out.manifest();
        }
    } catch (const SpecError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const IndexError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
