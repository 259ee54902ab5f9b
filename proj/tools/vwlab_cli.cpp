#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "vwlab/lab.hpp"
#include "vwlab/normal_form.hpp"
#include "vwlab/parallel.hpp"

using namespace vwlab;
namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config;
    std::string out;
    int threads = 1;
    bool verbose = false;
    int panels = 512;
};

ExperimentConfig load(const Options& o)
{
    ExperimentConfig c = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
    if (!o.out.empty())
        c.out_dir = o.out;
    return c;
}

int check_identities(const Options& o)
{
    const auto c = load(o);
    const auto rep = check(c, o.panels);
    std::cout << rep.table();
    fs::create_directories(c.out_dir);
    nlohmann::json j;
    for (const auto& i : rep.items)
        j["items"].push_back({{"group", i.group}, {"item", i.name}, {"error", i.error}, {"tol", i.tol},
                              {"pass", i.pass()}});
    j["failures"] = rep.failures();
    std::ofstream(fs::path(c.out_dir) / "identities.json") << j.dump(2) << "\n";
    return rep.all_pass() ? kExitOk : kExitCheckFailed;
}

int potentials(const Options& o)
{
    const auto c = load(o);
    const auto ps = unit_potentials(c);
    const auto md = ps->mass_data(c.m1, c.J1);
    nlohmann::json j;
    j["shape"] = c.shape.preset;
    j["panels"] = c.panels;
    for (int i = 0; i < 5; ++i)
        for (int k = 0; k < 5; ++k)
            j["m"][i].push_back(md.m(i, k));
    j["xi"] = {md.xi.x(), md.xi.y()};
    j["eta"] = {md.eta.x(), md.eta.y()};
    j["area"] = md.moments.area;
    j["x_G"] = {md.moments.xg.x(), md.moments.xg.y()};
    j["m6"] = md.moments.m6;
    j["m7"] = md.moments.m7;
    j["raw_asymmetry"] = md.raw_asymmetry;
    fs::create_directories(c.out_dir);
    std::ofstream(fs::path(c.out_dir) / "potentials.json") << j.dump(2) << "\n";
    std::cout << fmt::format("added mass (unit body, {} panels)\n", c.panels);
    for (int i = 0; i < 5; ++i) {
        for (int k = 0; k < 5; ++k)
            std::cout << fmt::format("{:>14.8f}", md.m(i, k));
        std::cout << "\n";
    }
    std::cout << fmt::format("xi = ({:.10f}, {:.10f})  eta = ({:.10f}, {:.10f})\n", md.xi.x(), md.xi.y(),
                             md.eta.x(), md.eta.y());
    return kExitOk;
}

int simulate_coupled_cmd(const Options& o)
{
    const auto c = load(o);
    const auto runs = simulate_coupled(c, o.threads, o.verbose);
    bool aborted = false;
    for (const auto& r : runs) {
        const auto& s = r.summary;
        std::cout << fmt::format("{:<10} steps {:>7}  t_end {:.4g}  energy drift {:.3e}  max|l|+eps|r| {:.4g}{}\n",
                                 s.name, s.steps, s.t_end, s.energy_drift, s.max_velocity,
                                 s.aborted ? "  ABORTED: " + s.reason : "");
        aborted = aborted || s.aborted;
    }
    return aborted ? kExitAborted : kExitOk;
}

int simulate_limit_cmd(const Options& o)
{
    const auto c = load(o);
    fs::create_directories(c.out_dir);
    fs::remove(fs::path(c.out_dir) / "aborted");
    write_data_dictionary(c.out_dir);
    set_thread_count(o.threads);
    const auto r = run_limit(c, c.out_dir);
    std::cout << fmt::format("limit      steps {:>7}  t_end {:.4g}{}\n", r.summary.steps, r.summary.t_end,
                             r.summary.aborted ? "  ABORTED: " + r.summary.reason : "");
    return r.summary.aborted ? kExitAborted : kExitOk;
}

int converge_cmd(const Options& o)
{
    const auto c = load(o);
    const auto rep = converge(c, o.threads, o.verbose);
    std::cout << fmt::format("{:>8} {:>12} {:>12} {:>8}\n", "eps", "sup|h-h0|", "sup dist w", "t");
    for (const auto& r : rep.rows)
        std::cout << fmt::format("{:>8g} {:>12.4e} {:>12.4e} {:>8.4g}\n", r.eps, r.sup_h, r.sup_w, r.t_common);
    std::cout << fmt::format("slopes: h {:.3f}  w {:.3f}; decreasing: h {}  w {}\n", rep.slope_h, rep.slope_w,
                             rep.h_decreasing, rep.w_decreasing);
    return rep.any_aborted ? kExitAborted : kExitOk;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Small rigid body in a 2D perfect fluid with vorticity: simulations and checks"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", o.config, "experiment file (INI)");
        if (needs_config)
            opt->required()->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output directory (overrides output.dir)");
        sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
        sub->add_flag("--verbose", o.verbose, "progress on stderr");
    };
    auto* ci = app.add_subcommand("check-identities", "contour identities, mass invariants and golden values");
    common(ci, false);
    ci->add_option("--panels", o.panels, "boundary nodes")->check(CLI::Range(16, 1 << 14));
    auto* po = app.add_subcommand("potentials", "Kirchhoff potentials and added mass of the configured shape");
    common(po, true);
    auto* sc = app.add_subcommand("simulate-coupled", "body and fluid for every eps in the config");
    common(sc, true);
    auto* sl = app.add_subcommand("simulate-limit", "point vortex and background vorticity");
    common(sl, true);
    auto* cv = app.add_subcommand("converge", "eps sweep compared against the limit system");
    common(cv, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (ci->parsed())
            return check_identities(o);
        if (po->parsed())
            return potentials(o);
        if (sc->parsed())
            return simulate_coupled_cmd(o);
        if (sl->parsed())
            return simulate_limit_cmd(o);
        if (cv->parsed())
            return converge_cmd(o);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitOk;
}
