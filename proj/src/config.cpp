#include "qgi/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace qgi {
namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw SpecError(where + ": expected an object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [k, v] : j.items())
        if (!keys.count(k)) throw SpecError((where.empty() ? k : where + "." + k) + ": unknown key");
}

template <class T>
T get_as(const json& j, const std::string& name) {
    try {
        if constexpr (std::is_same_v<T, std::string>) {
            if (!j.is_string()) throw SpecError(name + ": expected a string");
        } else if constexpr (std::is_same_v<T, bool>) {
            if (!j.is_boolean()) throw SpecError(name + ": expected true or false");
        } else if constexpr (std::is_integral_v<T>) {
            if (!j.is_number_integer()) throw SpecError(name + ": expected an integer");
            if (std::is_unsigned_v<T> && j.get<long long>() < 0) throw SpecError(name + ": must be nonnegative");
        } else {
            if (!j.is_number()) throw SpecError(name + ": expected a number");
        }
        return j.get<T>();
    } catch (const json::exception& e) {
        throw SpecError(name + ": " + e.what());
    }
}

template <class T, class F>
auto wrap_spec(const std::string& name, F&& f) {
    try {
        return f();
    } catch (const SpecError& e) {
        const std::string msg = e.what();
        if (msg.rfind(name, 0) == 0) throw;
        throw SpecError(name + ": " + msg);
    }
}

template <class T>
void read_opt(const json& obj, const char* key, const std::string& prefix, std::optional<T>& dst) {
    if (auto it = obj.find(key); it != obj.end() && !it->is_null()) dst = get_as<T>(*it, prefix + key);
}

template <class T>
void read_val(const json& obj, const char* key, const std::string& prefix, T& dst) {
    if (auto it = obj.find(key); it != obj.end()) dst = get_as<T>(*it, prefix + key);
}

json opt_json(const auto& o) { return o ? json(*o) : json(nullptr); }

}  // namespace

std::string_view to_string(RandomSolver s) { return s == RandomSolver::dual ? "dual" : "correlation"; }

RandomSolver parse_random_solver(std::string_view s) {
    if (s == "dual") return RandomSolver::dual;
    if (s == "correlation") return RandomSolver::correlation;
    throw SpecError("unknown solver '" + std::string(s) + "' (expected dual or correlation)");
}

BasisSpec RunConfig::basis() const {
    return basis_type == BasisSpec::Type::hadamard ? BasisSpec::hadamard(d, ordering) : BasisSpec::random(d, basis_seed);
}

long RunConfig::analysis_row() const { return analysis.row.value_or(d / 2); }

double RunConfig::analysis_radius() const {
    if (analysis.radius) return *analysis.radius;
    if (object.kind == ObjectKind::annulus_amplitude || object.kind == ObjectKind::azimuthal_ring_phase) {
        const ObjectSpec r = qgi::resolve(object, d);
        return 0.5 * (*r.inner_radius + *r.outer_radius);
    }
    return d / 4.0;
}

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SpecError(std::string("config: ") + e.what());
    }
    reject_unknown(root, "", {"d", "object", "basis", "acquisition", "reconstruction", "denoise", "analysis", "output_dir"});

    RunConfig c;
    read_val(root, "d", "", c.d);
    read_val(root, "output_dir", "", c.output_dir);

    if (auto it = root.find("object"); it != root.end()) {
        const json& o = *it;
        reject_unknown(o, "object",
                       {"kind", "illumination_radius", "slit_center", "slit_width", "slit_gap", "inner_radius",
                        "outer_radius", "petals", "bands", "phase_depth", "path"});
        if (auto k = o.find("kind"); k != o.end())
            c.object.kind = wrap_spec<ObjectKind>("object.kind", [&] { return parse_object_kind(get_as<std::string>(*k, "object.kind")); });
        read_opt(o, "illumination_radius", "object.", c.object.illumination_radius);
        read_opt(o, "slit_center", "object.", c.object.slit_center);
        read_opt(o, "slit_width", "object.", c.object.slit_width);
        read_opt(o, "slit_gap", "object.", c.object.slit_gap);
        read_opt(o, "inner_radius", "object.", c.object.inner_radius);
        read_opt(o, "outer_radius", "object.", c.object.outer_radius);
        read_val(o, "petals", "object.", c.object.petals);
        read_val(o, "bands", "object.", c.object.bands);
        read_val(o, "phase_depth", "object.", c.object.phase_depth);
        read_val(o, "path", "object.", c.object.path);
    }

    if (auto it = root.find("basis"); it != root.end()) {
        const json& b = *it;
        reject_unknown(b, "basis", {"type", "ordering", "seed"});
        if (auto t = b.find("type"); t != b.end()) {
            const std::string s = get_as<std::string>(*t, "basis.type");
            if (s == "hadamard") c.basis_type = BasisSpec::Type::hadamard;
            else if (s == "random") c.basis_type = BasisSpec::Type::random;
            else throw SpecError("basis.type: unknown type '" + s + "' (expected hadamard or random)");
        }
        if (auto o = b.find("ordering"); o != b.end())
            c.ordering = wrap_spec<Ordering>("basis.ordering", [&] { return parse_ordering(get_as<std::string>(*o, "basis.ordering")); });
        read_val(b, "seed", "basis.", c.basis_seed);
    }

    if (auto it = root.find("acquisition"); it != root.end()) {
        const json& a = *it;
        reject_unknown(a, "acquisition", {"mode", "flux", "seed", "dark_rate"});
        read_opt(a, "flux", "acquisition.", c.acquisition.flux);
        if (auto m = a.find("mode"); m != a.end()) {
            const std::string mode = get_as<std::string>(*m, "acquisition.mode");
            if (mode == "exact") {
                if (c.acquisition.flux)
                    throw SpecError("acquisition.flux: conflicts with acquisition.mode 'exact'");
            } else if (mode == "sampled") {
                if (!c.acquisition.flux) throw SpecError("acquisition.flux: required when acquisition.mode is 'sampled'");
            } else {
                throw SpecError("acquisition.mode: unknown mode '" + mode + "' (expected exact or sampled)");
            }
        }
        read_val(a, "seed", "acquisition.", c.acquisition.seed);
        read_val(a, "dark_rate", "acquisition.", c.acquisition.dark_rate);
    }

    if (auto it = root.find("reconstruction"); it != root.end()) {
        const json& r = *it;
        reject_unknown(r, "reconstruction", {"artifact_mode", "random_solver", "sine_sign"});
        if (auto m = r.find("artifact_mode"); m != r.end())
            c.reconstruction.artifact_mode = wrap_spec<ArtifactMode>(
                "reconstruction.artifact_mode",
                [&] { return parse_artifact_mode(get_as<std::string>(*m, "reconstruction.artifact_mode")); });
        if (auto s = r.find("random_solver"); s != r.end())
            c.reconstruction.random_solver = wrap_spec<RandomSolver>(
                "reconstruction.random_solver",
                [&] { return parse_random_solver(get_as<std::string>(*s, "reconstruction.random_solver")); });
        read_val(r, "sine_sign", "reconstruction.", c.reconstruction.sine_sign);
    }

    if (auto it = root.find("denoise"); it != root.end()) {
        reject_unknown(*it, "denoise", {"window", "remove_offset"});
        read_val(*it, "window", "denoise.", c.denoise.window);
        read_val(*it, "remove_offset", "denoise.", c.denoise.remove_offset);
    }

    if (auto it = root.find("analysis"); it != root.end()) {
        reject_unknown(*it, "analysis", {"row", "radius", "samples"});
        read_opt(*it, "row", "analysis.", c.analysis.row);
        read_opt(*it, "radius", "analysis.", c.analysis.radius);
        read_val(*it, "samples", "analysis.", c.analysis.samples);
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("config: cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

RunConfig resolve(const RunConfig& config) {
    RunConfig c = config;
    if (!is_power_of_two(c.d)) throw SpecError("d: " + std::to_string(c.d) + " is not a power of two");
    if (c.d > 4096) throw SpecError("d: " + std::to_string(c.d) + " exceeds 4096");
    c.object = qgi::resolve(c.object, c.d);
    if (c.acquisition.flux && !(*c.acquisition.flux > 0.0 && std::isfinite(*c.acquisition.flux)))
        throw SpecError("acquisition.flux: must be positive and finite");
    if (!(c.acquisition.dark_rate >= 0.0)) throw SpecError("acquisition.dark_rate: must be nonnegative");
    if (c.acquisition.dark_rate > 0.0 && !c.acquisition.flux)
        throw SpecError("acquisition.dark_rate: requires sampled acquisition (set acquisition.flux)");
    if (c.reconstruction.sine_sign != 1.0 && c.reconstruction.sine_sign != -1.0)
        throw SpecError("reconstruction.sine_sign: must be +1 or -1");
    if (c.denoise.window < 1 || c.denoise.window % 2 == 0)
        throw SpecError("denoise.window: must be a positive odd integer");
    if (c.analysis.samples < 1) throw SpecError("analysis.samples: must be positive");
    if (c.analysis.row && (*c.analysis.row < 0 || *c.analysis.row >= c.d))
        throw SpecError("analysis.row: outside the grid");
    if (c.analysis.radius && !(*c.analysis.radius > 0.0)) throw SpecError("analysis.radius: must be positive");
    if (c.basis_type == BasisSpec::Type::random && c.d > 64)
        throw SpecError("basis.type: random masks are limited to d <= 64");
    if (c.output_dir.empty()) throw SpecError("output_dir: must not be empty");
    return c;
}

std::string dump_config(const RunConfig& c) {
    json j;
    j["d"] = c.d;
    j["object"] = {
        {"kind", std::string(to_string(c.object.kind))},
        {"illumination_radius", opt_json(c.object.illumination_radius)},
        {"slit_center", opt_json(c.object.slit_center)},
        {"slit_width", opt_json(c.object.slit_width)},
        {"slit_gap", opt_json(c.object.slit_gap)},
        {"inner_radius", opt_json(c.object.inner_radius)},
        {"outer_radius", opt_json(c.object.outer_radius)},
        {"petals", c.object.petals},
        {"bands", c.object.bands},
        {"phase_depth", c.object.phase_depth},
        {"path", c.object.path},
    };
    j["basis"] = {{"type", c.basis_type == BasisSpec::Type::hadamard ? "hadamard" : "random"},
                  {"ordering", std::string(to_string(c.ordering))},
                  {"seed", c.basis_seed}};
    j["acquisition"] = {{"mode", c.acquisition.flux ? "sampled" : "exact"},
                        {"flux", opt_json(c.acquisition.flux)},
                        {"seed", c.acquisition.seed},
                        {"dark_rate", c.acquisition.dark_rate}};
    j["reconstruction"] = {{"artifact_mode", std::string(to_string(c.reconstruction.artifact_mode))},
                           {"random_solver", std::string(to_string(c.reconstruction.random_solver))},
                           {"sine_sign", c.reconstruction.sine_sign}};
    j["denoise"] = {{"window", c.denoise.window}, {"remove_offset", c.denoise.remove_offset}};
    j["analysis"] = {{"row", c.analysis_row()}, {"radius", c.analysis_radius()}, {"samples", c.analysis.samples}};
    j["output_dir"] = c.output_dir;
    return j.dump(2) + "\n";
}

}  // namespace qgi
