#include "vwlab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

namespace vwlab {

namespace pt = boost::property_tree;

namespace {

std::vector<double> numbers(const std::string& s, const std::string& key)
{
    std::vector<std::string> parts;
    boost::split(parts, s, boost::is_any_of(", "), boost::token_compress_on);
    std::vector<double> out;
    for (auto p : parts) {
        boost::trim(p);
        if (p.empty())
            continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(p, &used));
            if (used != p.size())
                throw std::invalid_argument(p);
        } catch (const std::exception&) {
            throw ConfigError(fmt::format("{}: '{}' is not a number", key, p));
        }
    }
    return out;
}

template <class T>
T get(const pt::ptree& t, const std::string& key, T fallback)
{
    const auto v = t.get_optional<std::string>(key);
    if (!v)
        return fallback;
    const auto xs = numbers(*v, key);
    if (xs.size() != 1)
        throw ConfigError(key + ": expected one value");
    if constexpr (std::is_integral_v<T>) {
        if (xs[0] != std::floor(xs[0]))
            throw ConfigError(key + ": expected an integer");
        return static_cast<T>(xs[0]);
    } else {
        return xs[0];
    }
}

Vec2 get_vec(const pt::ptree& t, const std::string& key, Vec2 fallback)
{
    const auto v = t.get_optional<std::string>(key);
    if (!v)
        return fallback;
    const auto xs = numbers(*v, key);
    if (xs.size() != 2)
        throw ConfigError(key + ": expected two values");
    return Vec2(xs[0], xs[1]);
}

std::vector<ShapeSpec::Mode> parse_modes(const std::string& s)
{
    std::vector<ShapeSpec::Mode> out;
    std::vector<std::string> items;
    boost::split(items, s, boost::is_any_of(","));
    for (auto item : items) {
        boost::trim(item);
        if (item.empty())
            continue;
        std::vector<std::string> f;
        boost::split(f, item, boost::is_any_of(":"));
        if (f.size() != 3)
            throw ConfigError("shape.modes: expected order:cos:sin, got '" + item + "'");
        const auto v = numbers(f[0] + " " + f[1] + " " + f[2], "shape.modes");
        out.push_back({static_cast<int>(v[0]), v[1], v[2]});
    }
    return out;
}

bool finite(const Vec2& v) { return std::isfinite(v.x()) && std::isfinite(v.y()); }

}  // namespace

ShapeSpec ShapeConfig::build() const
{
    try {
        if (preset == "disk")
            return ShapeSpec::disk(radius);
        if (preset == "ellipse")
            return ShapeSpec::ellipse(a, b);
        if (preset == "perturbed-disk") {
            const auto base = ShapeSpec::perturbed_disk(radius, modes);
            return ShapeSpec::from_coefficients(base.coefficients(), mass_offset, "perturbed-disk");
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("shape: ") + e.what());
    }
    throw ConfigError("shape.preset: unknown preset '" + preset + "'");
}

double ExperimentConfig::dt_for(double e) const
{
    const double target = dt * std::pow(e / eps.front(), dt_eps_power);
    const double period = sample_period();
    const double sub = std::max(1.0, std::ceil(period / target - 1e-9));
    return period / sub;
}

void ExperimentConfig::validate() const
{
    auto need = [](bool ok, const std::string& what) {
        if (!ok)
            throw ConfigError(what);
    };
    need(panels >= 16, "numerics.panels must be at least 16");
    need(spacing > 0 && std::isfinite(spacing), "blobs.spacing must be positive");
    need(core > 0 && std::isfinite(core), "blobs.core must be positive");
    need(!eps.empty(), "physics.eps must list at least one value");
    for (std::size_t i = 0; i < eps.size(); ++i) {
        need(eps[i] > 0 && std::isfinite(eps[i]), "physics.eps values must be positive");
        if (i > 0)
            need(eps[i] < eps[i - 1], "physics.eps must be strictly decreasing");
    }
    need(std::isfinite(alpha) && alpha >= 0, "physics.alpha must be finite and non-negative");
    need(m1 > 0 && J1 > 0 && std::isfinite(m1) && std::isfinite(J1), "physics.m1 and J1 must be positive");
    need(std::isfinite(gamma) && std::isfinite(r0) && finite(ell0), "physics values must be finite");
    need(T > 0 && std::isfinite(T), "time.T must be positive");
    need(dt > 0 && dt <= T, "time.dt must be in (0, T]");
    need(std::isfinite(dt_eps_power), "time.dt_eps_power must be finite");
    need(sample_every >= 1, "time.sample_every must be at least 1");
    need(snapshot_every >= 0, "time.snapshot_every must be non-negative");
    need(rho > 1, "physics.rho must exceed 1");
    for (const auto& p : patches) {
        need(finite(p.center) && std::isfinite(p.density), "patch values must be finite");
        const double lo = p.kind == PatchSpec::Kind::Disk ? 0.0 : p.r_in;
        need(lo >= 0 && p.r_out > lo, "patch radii must satisfy 0 <= r_in < r_out");
        // support separated from the largest body
        const double inner = p.kind == PatchSpec::Kind::Disk || p.center.norm() > p.r_in
                                 ? p.center.norm() - p.r_out
                                 : p.r_in - p.center.norm();
        const double body = eps.front() * shape.build().circumradius();
        need(inner > body, fmt::format("patch support (inner radius {:.4g}) meets the body of size {:.4g}", inner, body));
    }
    shape.build();
}

ExperimentConfig parse_config(const std::string& text)
{
    pt::ptree t;
    std::istringstream in(text);
    try {
        pt::read_ini(in, t);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    ExperimentConfig c;
    const pt::ptree none;
    auto section = [&](const std::string& s) -> const pt::ptree& {
        const auto o = t.get_child_optional(s);
        return o ? *o : none;
    };
    static const std::vector<std::string> known = {"shape", "numerics", "blobs", "physics", "time", "output"};
    for (const auto& [name, child] : t) {
        if (name.rfind("patch", 0) == 0)
            continue;
        if (std::find(known.begin(), known.end(), name) == known.end())
            throw ConfigError("unknown section [" + name + "]");
    }

    const auto& sh = section("shape");
    c.shape.preset = sh.get<std::string>("preset", c.shape.preset);
    c.shape.radius = get(sh, "radius", c.shape.radius);
    c.shape.a = get(sh, "a", c.shape.a);
    c.shape.b = get(sh, "b", c.shape.b);
    if (auto m = sh.get_optional<std::string>("modes"))
        c.shape.modes = parse_modes(*m);
    c.shape.mass_offset = get_vec(sh, "mass_offset", c.shape.mass_offset);

    c.panels = get(section("numerics"), "panels", c.panels);
    const auto& bl = section("blobs");
    c.spacing = get(bl, "spacing", c.spacing);
    c.core = get(bl, "core", c.core);

    const auto& ph = section("physics");
    if (auto e = ph.get_optional<std::string>("eps"))
        c.eps = numbers(*e, "physics.eps");
    c.alpha = get(ph, "alpha", c.alpha);
    c.m1 = get(ph, "m1", c.m1);
    c.J1 = get(ph, "J1", c.J1);
    c.gamma = get(ph, "gamma", c.gamma);
    c.ell0 = get_vec(ph, "ell0", c.ell0);
    c.r0 = get(ph, "r0", c.r0);
    c.rho = get(ph, "rho", c.rho);

    const auto& tm = section("time");
    c.T = get(tm, "T", c.T);
    c.dt = get(tm, "dt", c.dt);
    c.dt_eps_power = get(tm, "dt_eps_power", c.dt_eps_power);
    c.sample_every = get(tm, "sample_every", c.sample_every);
    c.snapshot_every = get(tm, "snapshot_every", c.snapshot_every);
    c.energy = get(tm, "energy", 1) != 0;

    const auto& out = section("output");
    c.out_dir = out.get<std::string>("dir", c.out_dir);
    c.cache_dir = out.get<std::string>("cache", c.cache_dir);
    c.seed = get<std::uint64_t>(out, "seed", c.seed);

    for (const auto& [name, p] : t) {
        if (name.rfind("patch", 0) != 0)
            continue;
        PatchSpec s;
        const auto kind = p.get<std::string>("kind", "annulus");
        if (kind == "annulus")
            s.kind = PatchSpec::Kind::Annulus;
        else if (kind == "disk")
            s.kind = PatchSpec::Kind::Disk;
        else
            throw ConfigError("[" + name + "] kind must be annulus or disk");
        s.center = get_vec(p, "center", s.center);
        s.r_in = get(p, "r_in", s.kind == PatchSpec::Kind::Disk ? 0.0 : s.r_in);
        s.r_out = get(p, "r_out", s.r_out);
        s.density = get(p, "density", s.density);
        c.patches.push_back(s);
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream f(path);
    if (!f)
        throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string format_config(const ExperimentConfig& c)
{
    auto list = [](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += fmt::format("{}{:.17g}", i ? ", " : "", v[i]);
        return s;
    };
    std::string s;
    s += fmt::format("[shape]\npreset = {}\nradius = {:.17g}\na = {:.17g}\nb = {:.17g}\n", c.shape.preset,
                     c.shape.radius, c.shape.a, c.shape.b);
    if (!c.shape.modes.empty()) {
        s += "modes = ";
        for (std::size_t i = 0; i < c.shape.modes.size(); ++i)
            s += fmt::format("{}{}:{:.17g}:{:.17g}", i ? ", " : "", c.shape.modes[i].order,
                             c.shape.modes[i].cos_amp, c.shape.modes[i].sin_amp);
        s += "\n";
    }
    s += fmt::format("mass_offset = {:.17g}, {:.17g}\n\n", c.shape.mass_offset.x(), c.shape.mass_offset.y());
    s += fmt::format("[numerics]\npanels = {}\n\n", c.panels);
    s += fmt::format("[blobs]\nspacing = {:.17g}\ncore = {:.17g}\n\n", c.spacing, c.core);
    s += fmt::format("[physics]\neps = {}\nalpha = {:.17g}\nm1 = {:.17g}\nJ1 = {:.17g}\ngamma = {:.17g}\n",
                     list(c.eps), c.alpha, c.m1, c.J1, c.gamma);
    s += fmt::format("ell0 = {:.17g}, {:.17g}\nr0 = {:.17g}\nrho = {:.17g}\n\n", c.ell0.x(), c.ell0.y(), c.r0, c.rho);
    s += fmt::format("[time]\nT = {:.17g}\ndt = {:.17g}\ndt_eps_power = {:.17g}\nsample_every = {}\n"
                     "snapshot_every = {}\nenergy = {}\n\n",
                     c.T, c.dt, c.dt_eps_power, c.sample_every, c.snapshot_every, c.energy ? 1 : 0);
    s += fmt::format("[output]\ndir = {}\n", c.out_dir);
    if (!c.cache_dir.empty())
        s += fmt::format("cache = {}\n", c.cache_dir);
    s += fmt::format("seed = {}\n", c.seed);
    for (std::size_t i = 0; i < c.patches.size(); ++i) {
        const auto& p = c.patches[i];
        s += fmt::format("\n[patch.{}]\nkind = {}\ncenter = {:.17g}, {:.17g}\nr_in = {:.17g}\nr_out = {:.17g}\n"
                         "density = {:.17g}\n",
                         i, p.kind == PatchSpec::Kind::Disk ? "disk" : "annulus", p.center.x(), p.center.y(),
                         p.r_in, p.r_out, p.density);
    }
    return s;
}

}  // namespace vwlab
