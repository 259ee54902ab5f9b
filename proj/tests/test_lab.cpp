#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "vwlab/lab.hpp"

using namespace vwlab;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

const char* kSweep = R"(
[shape]
preset = ellipse
a = 2
b = 1

[numerics]
panels = 64

[blobs]
spacing = 0.3
core = 0.15

[physics]
eps = 0.2, 0.1
alpha = 2
gamma = 6.283185307179586
ell0 = 0.5, 0.5
r0 = 1
rho = 4

[time]
T = 0.02
dt = 0.005
dt_eps_power = 2
sample_every = 2
snapshot_every = 2

[patch.ring]
kind = annulus
center = 0.2, -0.1
r_in = 1
r_out = 2
)";

std::string slurp(const fs::path& p)
{
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name)
{
    const auto p = fs::temp_directory_path() / ("vwlab_test_" + name);
    fs::remove_all(p);
    return p;
}

}  // namespace

TEST_CASE("config parsing")
{
    const auto c = parse_config(kSweep);
    CHECK(c.shape.preset == "ellipse");
    CHECK(c.eps == std::vector<double>{0.2, 0.1});
    CHECK(c.patches.size() == 1);
    CHECK(c.patches[0].center == Vec2(0.2, -0.1));
    CHECK(c.ell0 == Vec2(0.5, 0.5));
    CHECK(c.snapshot_every == 2);

    // round trip through the writer
    const auto d = parse_config(format_config(c));
    CHECK(format_config(d) == format_config(c));

    // the per-eps step divides the sampling period
    for (double e : c.eps) {
        const double dt = c.dt_for(e);
        const double n = c.sample_period() / dt;
        CHECK(std::abs(n - std::round(n)) < 1e-12);
        CHECK(dt <= c.dt * std::pow(e / 0.2, 2) * (1 + 1e-12));
    }

    std::string bad = kSweep;
    CHECK_THROWS_AS(parse_config(bad.replace(bad.find("0.2, 0.1"), 8, "0.1, 0.2")), ConfigError);
    bad = kSweep;
    CHECK_THROWS_AS(parse_config(bad.replace(bad.find("ellipse"), 7, "square")), ConfigError);
    bad = kSweep;
    CHECK_THROWS_AS(parse_config(bad.replace(bad.find("r_in = 1"), 8, "r_in = x")), ConfigError);
    bad = kSweep;
    CHECK_THROWS_AS(parse_config(bad.replace(bad.find("r_in = 1"), 8, "r_in = 0.1")), ConfigError);
    CHECK_THROWS_AS(parse_config(std::string(kSweep) + "\n[extras]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/vwlab.ini"), ConfigError);
}

TEST_CASE("compare")
{
    LimitRun lim;
    CoupledRun cr;
    lim.summary.blobs = cr.summary.blobs = 2;
    cr.summary.eps = 0.1;
    for (int k = 0; k < 4; ++k) {
        LimitSample ls{0.1 * k, Vec2(k, 0), Vec2::Zero(), 1, 2};
        lim.rows.push_back(ls);
        lim.blobs.push_back({Vec2(1, 0), Vec2(0, 1)});
        CoupledSample cs{};
        cs.t = 0.1 * k;
        cs.h = ls.h;
        cr.rows.push_back(cs);
        cr.lab_blobs.push_back(lim.blobs.back());
    }
    auto same = compare(cr, lim);
    CHECK(same.sup_h == 0.0);
    CHECK(same.sup_w == 0.0);

    const Vec2 d(0.3, -0.4);
    for (auto& r : cr.rows)
        r.h += d;
    for (auto& b : cr.lab_blobs)
        for (auto& x : b)
            x += d;
    auto shifted = compare(cr, lim);
    CHECK(shifted.sup_h == doctest::Approx(0.5));
    CHECK(shifted.sup_w == doctest::Approx(0.5));

    cr.summary.blobs = 3;
    CHECK_THROWS_AS(compare(cr, lim), ConfigError);
}

TEST_CASE("stationary configuration")
{
    ExperimentConfig c;
    c.shape.preset = "ellipse";
    c.panels = 64;
    c.eps = {0.2, 0.1};
    c.gamma = 0.0;
    c.T = 0.05;
    c.dt = 0.01;
    c.out_dir = scratch("rest").string();
    const auto rep = converge(c, 1, false);
    CHECK_FALSE(rep.any_aborted);
    for (const auto& r : rep.rows) {
        CHECK(r.sup_h == 0.0);
        CHECK(r.sup_w == 0.0);
    }
    for (const auto& s : rep.runs) {
        CHECK(s.max_velocity == 0.0);
        CHECK(s.energy_drift == 0.0);
    }
    CHECK(fs::exists(fs::path(c.out_dir) / "report.json"));
    CHECK(fs::exists(fs::path(c.out_dir) / "data_dictionary.md"));
    CHECK_FALSE(fs::exists(fs::path(c.out_dir) / "aborted"));
}

TEST_CASE("disk orbit against the reduced ODE")
{
    ExperimentConfig c;
    c.shape.preset = "disk";
    c.panels = 128;
    c.gamma = 2 * pi;
    c.ell0 = Vec2(1.0, 0.0);
    c.energy = false;
    const auto unit = unit_potentials(c);
    for (double e : {0.1, 0.05}) {
        const double M = oracle::disk_mass(e, 2.0, 1.0);
        const double period = 2 * pi * M / c.gamma;
        c.eps = {e};
        c.dt = period / 200;
        c.T = period;
        const auto run = run_coupled(c, e, unit, "");
        const auto o = oracle::disk_orbit(M, c.gamma, c.ell0, period);
        const double radius = M / c.gamma;
        CHECK((run.rows.back().h - o.h).norm() < 0.01 * radius);
        CHECK((run.rows.back().ell - o.ell).norm() < 0.01);
    }
}

TEST_CASE("aborted runs keep partial artifacts")
{
    auto c = parse_config(kSweep);
    c.rho = 2.05;
    c.T = 0.2;
    c.snapshot_every = 0;
    c.out_dir = scratch("abort").string();
    const auto runs = simulate_coupled(c, 1, false);
    bool any = false;
    for (const auto& r : runs) {
        if (!r.summary.aborted)
            continue;
        any = true;
        CHECK(r.summary.reason == "annulus-exit");
        CHECK(r.summary.t_end < c.T);
        CHECK(fs::exists(fs::path(c.out_dir) / ("coupled_" + r.summary.name + ".csv")));
    }
    CHECK(any);
    const auto marker = slurp(fs::path(c.out_dir) / "aborted");
    CHECK(marker.find("annulus-exit") != std::string::npos);

    // a blob placed on the body
    auto d = parse_config(kSweep);
    d.T = 0.01;
    d.patches[0].center = Vec2(0.0, 0.0);
    d.patches[0].r_in = 0.5;
    d.eps = {0.2};
    CHECK_THROWS_AS(run_coupled(d, 0.2, unit_potentials(d), ""), ConfigError);
}

TEST_CASE("identical configs give identical files")
{
    auto c = parse_config(kSweep);
    c.out_dir = scratch("det_a").string();
    converge(c, 1, false);
    c.out_dir = scratch("det_b").string();
    converge(c, 3, false);
    for (const char* f : {"coupled_eps0.2.csv", "coupled_eps0.1.csv", "limit.csv", "compare.csv",
                          "blobs_coupled_eps0.1.csv", "blobs_limit.csv", "report.json"}) {
        const auto a = slurp(scratch("").parent_path() / "vwlab_test_det_a" / f);
        const auto b = slurp(fs::path(c.out_dir) / f);
        CHECK_MESSAGE(!a.empty(), f);
        CHECK_MESSAGE(a == b, f);
    }
    const auto header = slurp(fs::path(c.out_dir) / "coupled_eps0.1.csv").substr(0, 80);
    CHECK(header.rfind("t,h1,h2,theta,l1,l2,r,energy,gamma,rho_min,rho_max\n", 0) == 0);
}

TEST_CASE("identity check")
{
    ExperimentConfig c;
    const auto rep = check(c, 256);
    INFO(rep.table());
    CHECK(rep.items.size() > 30);
    CHECK(rep.all_pass());
}
