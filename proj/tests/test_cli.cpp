#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include "qgi/io.hpp"

namespace fs = std::filesystem;
using namespace qgi;

namespace {

const fs::path kWork = fs::temp_directory_path() / "qgi_cli_test";

struct Run {
    int code;
    std::string err;
};

Run run_qgi(const std::string& args) {
    const fs::path err = kWork / "stderr.txt";
    const std::string cmd = std::string(QGI_BINARY) + " " + args + " > /dev/null 2> " + err.string();
    const int status = std::system(cmd.c_str());
    std::ifstream in(err);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

long data_rows(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    long n = 0;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') ++n;
    return n;
}

std::string dir(const std::string& name) { return (kWork / name).string(); }

std::map<std::string, std::string> report(const fs::path& p) {
    std::map<std::string, std::string> kv;
    std::ifstream in(p);
    std::string line;
    while (std::getline(in, line)) {
        const auto colon = line.find(": ");
        if (colon != std::string::npos) kv[line.substr(0, colon)] = line.substr(colon + 2);
    }
    return kv;
}

struct Setup {
    Setup() {
        fs::remove_all(kWork);
        fs::create_directories(kWork);
    }
};
const Setup setup;

}  // namespace

TEST_CASE("gen-object") {
    REQUIRE(run_qgi("gen-object --kind pi-slit-phase --d 32 --out " + dir("slit")).code == 0);
    const std::string header = "GCF1\nd=32 kind=complex\n";
    CHECK(fs::file_size(kWork / "slit/object.gcf") == header.size() + 32 * 32 * 16);
    CHECK(slurp(kWork / "slit/object.gcf").rfind(header, 0) == 0);
    CHECK(slurp(kWork / "slit/object_phase.pgm").rfind("P5\n32 32\n65535\n", 0) == 0);
    CHECK(fs::exists(kWork / "slit/config.resolved.json"));

    REQUIRE(run_qgi("gen-object --kind spiral-flower-phase --d 128 --out " + dir("flower")).code == 0);
    std::ifstream pgm(kWork / "flower/object_phase.pgm", std::ios::binary);
    const Raster r = read_pgm(pgm);
    std::set<std::uint16_t> levels(r.data(), r.data() + r.size());
    CHECK(levels.size() >= 3);

    const Run bad = run_qgi("gen-object --kind zebra --out " + dir("bad"));
    CHECK(bad.code == 2);
    CHECK(bad.err.find("object.kind") != std::string::npos);
    CHECK(run_qgi("gen-object --d 12 --out " + dir("bad")).code == 2);
    CHECK(run_qgi("gen-object --frobnicate").code == 2);
    CHECK(run_qgi("").code == 2);
    CHECK(run_qgi("--help").code == 0);
}

TEST_CASE("config files and overrides") {
    std::ofstream(kWork / "cfg.json") << R"({"d": 8, "object": {"kind": "annulus-amplitude"}, "output_dir": ")"
                                      << dir("cfg") << "\"}";
    REQUIRE(run_qgi("gen-object --config " + dir("cfg.json")).code == 0);
    const std::string resolved = slurp(kWork / "cfg/config.resolved.json");
    CHECK(resolved.find("\"annulus-amplitude\"") != std::string::npos);
    CHECK(resolved.find("\"inner_radius\": 2.0") != std::string::npos);

    REQUIRE(run_qgi("gen-object --config " + dir("cfg.json") + " --d 16").code == 0);
    CHECK(slurp(kWork / "cfg/object.gcf").rfind("GCF1\nd=16 kind=complex\n", 0) == 0);

    std::ofstream(kWork / "unknown.json") << R"({"d": 8, "colour": "red"})";
    const Run r = run_qgi("gen-object --config " + dir("unknown.json"));
    CHECK(r.code == 2);
    CHECK(r.err.find("colour") != std::string::npos);
    CHECK(run_qgi("gen-object --config " + dir("missing.json")).code == 2);
}

TEST_CASE("gen-masks") {
    REQUIRE(run_qgi("gen-masks --d 4 --mask-kind cos --out " + dir("masks")).code == 0);
    const std::string text = slurp(kWork / "masks/masks_cos.txt");
    long headers = 0;
    for (std::size_t p = text.find("# mask"); p != std::string::npos; p = text.find("# mask", p + 1)) ++headers;
    CHECK(headers == 16);
    REQUIRE(run_qgi("gen-masks --d 2 --index 3 --out " + dir("mask3")).code == 0);
    CHECK(slurp(kWork / "mask3/masks_basis.txt") == "# mask j=3 d=2 basis=hadamard/natural kind=basis\n1 -1\n-1 1\n");
    CHECK(run_qgi("gen-masks --d 2 --index 4 --out " + dir("mask3")).code == 2);
    CHECK(run_qgi("gen-masks --d 2 --mask-kind tan --out " + dir("mask3")).code == 2);
}

TEST_CASE("acquire") {
    REQUIRE(run_qgi("gen-object --kind pi-slit-phase --d 16 --out " + dir("obj16")).code == 0);
    const std::string obj = dir("obj16") + "/object.gcf";

    REQUIRE(run_qgi("acquire --object " + obj + " --out " + dir("acq1")).code == 0);
    CHECK(data_rows(kWork / "acq1/series_cos.csv") == 256);
    CHECK(data_rows(kWork / "acq1/series_sin.csv") == 256);

    REQUIRE(run_qgi("acquire --object " + obj + " --out " + dir("acq2")).code == 0);
    CHECK(slurp(kWork / "acq1/series_cos.csv") == slurp(kWork / "acq2/series_cos.csv"));
    CHECK(slurp(kWork / "acq1/series_sin.csv") == slurp(kWork / "acq2/series_sin.csv"));

    REQUIRE(run_qgi("acquire --object " + obj + " --flux 1e5 --seed 3 --out " + dir("s1")).code == 0);
    REQUIRE(run_qgi("acquire --object " + obj + " --flux 1e5 --seed 3 --out " + dir("s2")).code == 0);
    REQUIRE(run_qgi("acquire --object " + obj + " --flux 1e5 --seed 4 --out " + dir("s3")).code == 0);
    CHECK(slurp(kWork / "s1/series_cos.csv") == slurp(kWork / "s2/series_cos.csv"));
    CHECK(slurp(kWork / "s1/series_cos.csv") != slurp(kWork / "s3/series_cos.csv"));

    CHECK(run_qgi("acquire --object " + obj + " --mode exact --flux 10 --out " + dir("bad")).code == 2);
    CHECK(run_qgi("acquire --object " + obj + " --mode sampled --out " + dir("bad")).code == 2);
    CHECK(run_qgi("acquire --object " + obj + " --flux 0 --out " + dir("bad")).code == 2);
    CHECK(run_qgi("acquire --object " + dir("nope.gcf") + " --out " + dir("bad")).code == 2);

    std::ofstream(kWork / "garbage.gcf") << "not a field";
    CHECK(run_qgi("acquire --object " + dir("garbage.gcf") + " --out " + dir("bad")).code == 3);
}

TEST_CASE("reconstruct and analyze") {
    REQUIRE(run_qgi("gen-object --kind pi-slit-phase --d 16 --out " + dir("r16")).code == 0);
    const std::string obj = dir("r16") + "/object.gcf";
    REQUIRE(run_qgi("acquire --object " + obj + " --out " + dir("r16")).code == 0);
    const std::string series = " --cos " + dir("r16") + "/series_cos.csv --sin " + dir("r16") + "/series_sin.csv";

    REQUIRE(run_qgi("reconstruct" + series + " --artifact-mode analytic --truth " + obj + " --out " + dir("rec")).code == 0);
    for (const char* f : {"gi_cos.gcf", "gi_sin.gcf", "re.gcf", "im.gcf", "phase.gcf"}) CHECK(fs::exists(kWork / "rec" / f));
    for (const char* f : {"gi_cos.pgm", "gi_sin.pgm", "re.pgm", "im.pgm", "phase.pgm"})
        CHECK(slurp(kWork / "rec" / f).rfind("P5\n16 16\n65535\n", 0) == 0);

    REQUIRE(run_qgi("analyze --phase " + dir("rec") + "/phase.gcf --truth " + obj + " --out " + dir("ana")).code == 0);
    auto kv = report(kWork / "ana/report.txt");
    REQUIRE(kv.count("phase_rmse"));
    CHECK(std::stod(kv["phase_rmse"]) < 1e-6);
    // Slit columns 6..7 at d=16: edges at 5.5 and 7.5.
    std::istringstream steps(kv["horizontal_steps"]);
    std::vector<double> pos{std::istream_iterator<double>(steps), {}};
    REQUIRE(pos.size() == 2);
    CHECK(std::abs(pos[0] - 5.5) <= 1.0);
    CHECK(std::abs(pos[1] - 7.5) <= 1.0);

    CHECK(run_qgi("reconstruct" + series + " --artifact-mode analytic --out " + dir("bad")).code == 2);
    CHECK(run_qgi("reconstruct --cos " + dir("r16") + "/series_cos.csv --sin " + dir("missing.csv") + " --out " + dir("bad")).code == 2);
    CHECK(run_qgi("reconstruct --cos " + dir("r16") + "/series_cos.csv --sin " + dir("r16") + "/series_cos.csv --out " +
              dir("bad"))
              .code == 3);

    REQUIRE(run_qgi("gen-object --kind flat --d 8 --out " + dir("r8")).code == 0);
    REQUIRE(run_qgi("acquire --object " + dir("r8") + "/object.gcf --out " + dir("r8")).code == 0);
    CHECK(run_qgi("reconstruct --cos " + dir("r16") + "/series_cos.csv --sin " + dir("r8") + "/series_sin.csv --out " +
              dir("bad"))
              .code == 3);

    REQUIRE(run_qgi("analyze --phase " + obj + " --truth " + obj + " --out " + dir("self")).code == 0);
    CHECK(std::stod(report(kWork / "self/report.txt")["phase_rmse"]) == 0.0);
    CHECK(run_qgi("analyze --phase " + dir("rec") + "/phase.gcf --truth " + dir("r8") + "/object.gcf --out " + dir("bad")).code == 3);
}

TEST_CASE("analyze ring: azimuthal CSV has one row per sample") {
    REQUIRE(run_qgi("gen-object --kind azimuthal-ring-phase --d 32 --out " + dir("ring")).code == 0);
    const std::string obj = dir("ring") + "/object.gcf";
    REQUIRE(run_qgi("analyze --kind azimuthal-ring-phase --phase " + obj + " --truth " + obj + " --samples 48 --out " +
                dir("ring_ana"))
                .code == 0);
    CHECK(data_rows(kWork / "ring_ana/cross_azimuthal.csv") == 48);
    CHECK(std::stod(report(kWork / "ring_ana/report.txt")["azimuthal_slope"]) == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("pipeline writes a manifest and is deterministic") {
    const std::string args = "pipeline --kind pi-slit-phase --d 16 --flux 1e6 --seed 5 --window 3 --out " + dir("pipe");
    REQUIRE(run_qgi(args).code == 0);
    const std::string first = slurp(kWork / "pipe/manifest.txt");
    REQUIRE(run_qgi(args).code == 0);
    CHECK(slurp(kWork / "pipe/manifest.txt") == first);

    std::istringstream lines(first);
    std::string hash, name;
    std::set<std::string> listed;
    while (lines >> hash >> name) {
        CHECK(hash.size() == 64);
        CHECK(fs::exists(kWork / "pipe" / name));
        listed.insert(name);
    }
    for (const auto& e : fs::directory_iterator(kWork / "pipe"))
        if (e.path().filename() != "manifest.txt") CHECK(listed.count(e.path().filename().string()) == 1);
    CHECK(listed.count("config.resolved.json") == 1);
    CHECK(listed.count("series_cos.csv") == 1);
    CHECK(listed.count("report.txt") == 1);
}
