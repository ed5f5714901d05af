#include "vcarl/carleson.hpp"
#include "vcarl/config.hpp"
#include "vcarl/io.hpp"

#include "doctest.h"
#include "json.hpp"

#include <sys/wait.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace vcarl;
namespace fs = std::filesystem;

namespace {

const std::string kCli = VCARL_CLI_PATH;
const std::string kData = VCARL_TEST_DATA;

struct Run {
    int code = -1;
    std::string out, err;
    nlohmann::json json() const { return nlohmann::json::parse(out); }
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name)
{
    fs::path d = fs::temp_directory_path() / ("vcarl_cli_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

Run run(const std::string& args, const fs::path& dir)
{
    fs::path o = dir / "stdout.txt", e = dir / "stderr.txt";
    std::string cmd = "'" + kCli + "' " + args + " > '" + o.string() + "' 2> '" + e.string() + "'";
    int st = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    r.out = slurp(o);
    r.err = slurp(e);
    return r;
}

fs::path write_config(const fs::path& dir, const std::string& text)
{
    fs::path p = dir / "run.cfg";
    std::ofstream(p) << text;
    return p;
}

std::string data(const std::string& name) { return "'" + kData + "/" + name + "'"; }

// max over all partitions of the grid, by enumeration of subsets of interior points
double enumerate_max(const std::vector<cplx>& P, double r)
{
    const std::size_t m = P.size();
    double best = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << (m - 2)); ++mask) {
        double s = 0.0;
        std::size_t prev = 0;
        for (std::size_t i = 1; i < m; ++i) {
            if (i < m - 1 && !(mask >> (i - 1) & 1)) continue;
            s += std::pow(std::abs(P[i] - P[prev]), r);
            prev = i;
        }
        best = std::max(best, std::pow(s, 1.0 / r));
    }
    return best;
}

} // namespace

TEST_CASE("cli defaults round trip through the parser")
{
    fs::path d = scratch("defaults");
    Run r = run("defaults", d);
    REQUIRE(r.code == 0);
    RunConfig parsed = RunConfig::parse(r.out);
    RunConfig base;
    CHECK(parsed.n == base.n);
    CHECK(parsed.M == base.M);
    CHECK(parsed.omega == base.omega);
    CHECK(parsed.tau == base.tau);
    CHECK(parsed.recon_ratio == base.recon_ratio);
    CHECK(parsed.seed == base.seed);
    CHECK(r.out == default_config_text());
    fs::path cfg = write_config(d, r.out);
    Run again = run("defaults --config '" + cfg.string() + "'", d);
    CHECK(again.code == 0);
}

TEST_CASE("cli carleson on zero and on a single jump")
{
    fs::path d = scratch("carleson");
    Run z = run("carleson " + data("zero.csv") + " --out-dir '" + d.string() + "'", d);
    REQUIRE(z.code == 0);
    CHECK(z.json()["max"].get<double>() == 0.0);
    SampledSignal cz = read_signal_csv((d / "carleson.csv").string());
    CHECK(cz.size() == 64);
    for (const auto& s : cz.samples) CHECK(s == cplx(0.0, 0.0));
    CHECK(fs::exists(d / "carleson.json"));

    fs::path cfg = write_config(d, "freq.M = 2\nband.omega = 200\n");
    Run j = run("carleson " + data("fixture_f.csv") + " --config '" + cfg.string() + "' --out-dir '" + d.string() + "'", d);
    REQUIRE(j.code == 0);
    SampledSignal f = read_signal_csv(kData + "/fixture_f.csv");
    SampledSignal c = read_signal_csv((d / "carleson.csv").string());
    REQUIRE(c.size() == f.size());
    FourierView view(f);
    FrequencyGrid grid = FrequencyGrid::uniform(-200.0, 200.0, 2);
    for (std::size_t k = 0; k < f.size(); k += 7) {
        std::vector<cplx> P = partial_sums_at(view, grid, f.x(k));
        CHECK(c.samples[k].real() == doctest::Approx(std::abs(P[1] - P[0])).epsilon(1e-12));
    }
}

TEST_CASE("cli carleson golden values against enumeration")
{
    fs::path d = scratch("golden");
    fs::path cfg = write_config(d, "freq.M = 7\nband.omega = 300\nexponent.r = 2.5\n");
    Run r = run("carleson " + data("fixture_f.csv") + " --config '" + cfg.string() + "' --out-dir '" + d.string() + "'", d);
    REQUIRE(r.code == 0);
    auto j = r.json();
    CHECK(j["r"].get<double>() == 2.5);
    CHECK(j["grid"].size() == 7);
    CHECK(j["probes"].size() == 5);
    SampledSignal f = read_signal_csv(kData + "/fixture_f.csv");
    SampledSignal c = read_signal_csv((d / "carleson.csv").string());
    FourierView view(f);
    FrequencyGrid grid = FrequencyGrid::uniform(-300.0, 300.0, 7);
    double mx = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        double want = enumerate_max(partial_sums_at(view, grid, f.x(k)), 2.5);
        CHECK(c.samples[k].real() == doctest::Approx(want).epsilon(1e-12));
        mx = std::max(mx, want);
    }
    CHECK(j["max"].get<double>() == doctest::Approx(mx).epsilon(1e-12));
}

TEST_CASE("cli sparse certificate, zero g and determinism")
{
    fs::path d = scratch("sparse");
    fs::path d2 = d / "second";
    std::string args = "sparse " + data("fixture_f.csv") + " " + data("fixture_g.csv") + " --seed 5";
    Run a = run(args + " --out-dir '" + d.string() + "'", d);
    REQUIRE(a.code == 0);
    fs::create_directories(d2);
    Run b = run(args + " --out-dir '" + d2.string() + "'", d2);
    REQUIRE(b.code == 0);
    CHECK(a.out == b.out);
    CHECK(slurp(d / "sparse.json") == slurp(d2 / "sparse.json"));

    auto j = a.json();
    CHECK(j["pass"].get<bool>());
    CHECK(j["seed"].get<std::uint64_t>() == 5);
    for (const char* key : {"packing", "nesting", "disjoint", "eta_bound", "size_decay"})
        CHECK(j["certificate"][key].get<bool>());
    CHECK(j["collection"]["eta"].get<double>() >= (1.0 - std::ldexp(1.0, -12)) / 3.0);
    CHECK(std::isfinite(j["verification"]["ratio"].get<double>()));

    // zero g on the same grid
    SampledSignal g = read_signal_csv(kData + "/fixture_g.csv");
    for (auto& s : g.samples) s = 0.0;
    write_signal_csv((d / "zero_g.csv").string(), g);
    Run z = run("sparse " + data("fixture_f.csv") + " '" + (d / "zero_g.csv").string() + "' --out-dir '" + d.string() + "'", d);
    REQUIRE(z.code == 0);
    CHECK(z.json()["verification"]["lhs"].get<double>() == 0.0);
    CHECK(z.json()["verification"]["ratio"].get<double>() == 0.0);

    Run mismatch = run("sparse " + data("fixture_f.csv") + " " + data("zero.csv") + " --out-dir '" + d.string() + "'", d);
    CHECK(mismatch.code == 3);
}

TEST_CASE("cli reconstruct flags an unresolvable interval")
{
    fs::path d = scratch("recon");
    Run r = run("reconstruct 0 1 --out-dir '" + d.string() + "'", d);
    REQUIRE(r.code == 0);
    CHECK(r.json()["low_confidence"].get<bool>());

    Run wide = run("reconstruct -400 -100 --out-dir '" + d.string() + "'", d);
    REQUIRE(wide.code == 0);
    auto j = wide.json();
    CHECK(!j["low_confidence"].get<bool>());
    CHECK(j["middle_max_error"].get<double>() < 2e-2);
    CHECK(j["outside_max_error"].get<double>() < 1e-3);
    CHECK(fs::exists(d / "reconstruct.csv"));

    Run half = run("reconstruct -inf 0 --out-dir '" + d.string() + "'", d);
    CHECK(half.code == 0);
    CHECK(run("reconstruct 5 1", d).code == 2);
    CHECK(run("reconstruct abc 1", d).code == 2);
}

TEST_CASE("cli weights and exit codes")
{
    fs::path d = scratch("weights");
    Run w = run("weights --out-dir '" + d.string() + "'", d);
    CHECK(w.code == 0);
    auto j = w.json();
    CHECK(j["rows"].size() == 4);
    CHECK(j["pass"].get<bool>());
    CHECK(fs::exists(d / "weights.csv"));

    fs::path bad_t = write_config(d, "exponent.t = 3\n");
    CHECK(run("weights --config '" + bad_t.string() + "'", d).code == 2);

    CHECK(run("", d).code == 2);
    CHECK(run("nonsense", d).code == 2);
    CHECK(run("carleson", d).code == 2);
    CHECK(run("carleson '" + (d / "missing.csv").string() + "'", d).code == 3);
    std::ofstream(d / "bad.csv") << "x,re,im\n0,1,0\n0.5,1\n2,zz,0\n";
    CHECK(run("carleson '" + (d / "bad.csv").string() + "'", d).code == 3);
    fs::path unknown = write_config(d, "no.such.key = 1\n");
    CHECK(run("carleson " + data("zero.csv") + " --config '" + unknown.string() + "'", d).code == 2);
    CHECK(run("carleson " + data("zero.csv") + " --threads 0", d).code == 2);
    Run help = run("--help", d);
    CHECK(help.code == 0);
    CHECK(help.out.find("sparse") != std::string::npos);
}
