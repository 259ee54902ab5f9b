#include "vwlab/limit_system.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "vwlab/parallel.hpp"

namespace vwlab {

Vec2 point_vortex_velocity(double gamma, const Vec2& h, const Vec2& x)
{
    const Vec2 d = x - h;
    return gamma * perp(d) / (2 * std::numbers::pi * d.squaredNorm());
}

VortexWaveRhs vw_rhs(const VortexWaveState& s)
{
    const double lim2 = 25 * s.w.core * s.w.core;
    for (const auto& x : s.w.pos)
        if ((x - s.h).squaredNorm() <= lim2)
            throw std::domain_error("vortex blob within five core radii of the point vortex");
    VortexWaveRhs r;
    r.dh = velocity_free_space(s.w, s.h);
    r.blob_velocity = self_velocities(s.w);
    parallel_for(s.w.size(), [&](std::size_t j) {
        r.blob_velocity[j] += point_vortex_velocity(s.gamma, s.h, s.w.pos[j]);
    });
    return r;
}

VortexWaveState vw_step(const VortexWaveState& s, double dt)
{
    if (!(dt > 0))
        throw std::invalid_argument("time step must be positive");
    const std::size_t n = s.w.size();
    auto stage = [&](const VortexWaveRhs& k, double c) {
        VortexWaveState y = s;
        y.h += c * k.dh;
        for (std::size_t j = 0; j < n; ++j)
            y.w.pos[j] += c * k.blob_velocity[j];
        return y;
    };
    const auto k1 = vw_rhs(s);
    const auto k2 = vw_rhs(stage(k1, dt / 2));
    const auto k3 = vw_rhs(stage(k2, dt / 2));
    const auto k4 = vw_rhs(stage(k3, dt));
    VortexWaveState out = s;
    out.h += dt / 6 * (k1.dh + 2 * k2.dh + 2 * k3.dh + k4.dh);
    for (std::size_t j = 0; j < n; ++j)
        out.w.pos[j] += dt / 6 *
                        (k1.blob_velocity[j] + 2 * k2.blob_velocity[j] + 2 * k3.blob_velocity[j] +
                         k4.blob_velocity[j]);
    out.t = s.t + dt;
    return out;
}

std::pair<double, double> support_annulus(const BlobField& w, const Vec2& center)
{
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& x : w.pos) {
        const double d = (x - center).norm();
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    return {lo, hi};
}

std::pair<double, double> support_annulus(const VortexWaveState& s)
{
    return support_annulus(s.w, s.h);
}

LimitSample limit_sample(const VortexWaveState& s)
{
    const auto [lo, hi] = support_annulus(s);
    return {s.t, s.h, velocity_free_space(s.w, s.h), lo, hi};
}

void write_limit_csv(const std::string& path, const std::vector<LimitSample>& rows)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << "t,h1,h2,dh1,dh2,rho_min,rho_max\n";
    for (const auto& r : rows)
        out << fmt::format("{:.10g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.t, r.h.x(),
                           r.h.y(), r.dh.x(), r.dh.y(), r.rho_min, r.rho_max);
}

}  // namespace vwlab
