#include <doctest.h>

#include <cmath>
#include <numbers>

#include "vwlab/limit_system.hpp"

using namespace vwlab;
using std::numbers::pi;

namespace {

VortexWaveState pair_state(double gamma, double d)
{
    VortexWaveState s;
    s.gamma = gamma;
    s.h = Vec2(0.2, -0.1);
    s.w.core = 0.01;
    s.w.frame = Frame::Lab;
    s.w.pos = {s.h + Vec2(d, 0)};
    s.w.circ = {gamma};
    return s;
}

VortexWaveState annulus_state()
{
    VortexWaveState s;
    s.gamma = 2 * pi;
    PatchSpec p;
    p.center = Vec2(0.3, 0.0);
    p.r_in = 1.0;
    p.r_out = 2.0;
    s.w = fill_patches({p}, 0.2, 0.15, Frame::Lab);
    return s;
}

VortexWaveState run(VortexWaveState s, double T, int steps)
{
    for (int k = 0; k < steps; ++k)
        s = vw_step(s, T / steps);
    return s;
}

}  // namespace

TEST_CASE("vortex-wave right-hand side")
{
    VortexWaveState s;
    s.gamma = 1.0;
    s.h = Vec2(1, 2);
    CHECK(vw_rhs(s).dh.norm() == 0.0);

    PatchSpec ring;
    ring.center = s.h;
    ring.r_in = 1.0;
    ring.r_out = 1.5;
    s.w = fill_patches({ring}, 0.1, 0.2, Frame::Lab);
    CHECK(vw_rhs(s).dh.norm() < 1e-14);

    auto far = pair_state(0.5, 3.0);
    far.w.circ = {1.2};
    const auto r = vw_rhs(far);
    CHECK(r.dh.norm() == doctest::Approx(1.2 / (2 * pi * 3.0)).epsilon(1e-12));
    // h' is the free-space field of w at h, bit for bit
    CHECK(r.dh == velocity_free_space(far.w, far.h));
    CHECK((r.blob_velocity[0] - point_vortex_velocity(0.5, far.h, far.w.pos[0])).norm() < 1e-15);

    auto close = pair_state(1.0, 0.04);
    CHECK_THROWS_AS(vw_rhs(close), std::domain_error);
}

TEST_CASE("vortex-wave stepping")
{
    VortexWaveState s;
    s.h = Vec2(0.4, 0.1);
    s.gamma = 3.0;
    CHECK(run(s, 1.0, 10).h == s.h);

    // equal pair rotates about its midpoint with period 2 pi^2 d^2 / Gamma
    const double d = 1.0, G = 2 * pi;
    auto p = pair_state(G, d);
    const double T = 2 * pi * pi * d * d / G;
    const auto end = run(p, T, 400);
    CHECK((end.h - p.h).norm() < 1e-3 * pi * d);
    CHECK((end.w.pos[0] - p.w.pos[0]).norm() < 1e-3 * pi * d);
    const auto half = run(p, T / 2, 200);
    CHECK((half.h - p.w.pos[0]).norm() < 1e-3 * d);
    const auto [lo, hi] = support_annulus(half);
    CHECK(lo == doctest::Approx(d).epsilon(0.01));
    CHECK(hi == doctest::Approx(d).epsilon(0.01));
    CHECK(half.w.total_circulation() == p.w.total_circulation());
}

TEST_CASE("vortex-wave self-convergence")
{
    const auto s = annulus_state();
    const auto a = run(s, 1.0, 20);
    const auto b = run(s, 1.0, 40);
    const auto c = run(s, 1.0, 80);
    auto dist = [](const VortexWaveState& x, const VortexWaveState& y) {
        double e = (x.h - y.h).norm();
        for (std::size_t j = 0; j < x.w.size(); ++j)
            e = std::max(e, (x.w.pos[j] - y.w.pos[j]).norm());
        return e;
    };
    const double ratio = dist(a, b) / dist(b, c);
    CHECK(ratio > 16 * 0.8);
    CHECK(ratio < 16 * 1.2);

    // circulation-weighted centroid
    auto centroid = [](const VortexWaveState& x) {
        Vec2 m = x.gamma * x.h;
        for (std::size_t j = 0; j < x.w.size(); ++j)
            m += x.w.circ[j] * x.w.pos[j];
        return Vec2(m / (x.gamma + x.w.total_circulation()));
    };
    const Vec2 c0 = centroid(s);
    CHECK((centroid(c) - c0).norm() < 1e-4 * std::max(1.0, c0.norm()));
}

TEST_CASE("support annulus")
{
    VortexWaveState s;
    auto [lo0, hi0] = support_annulus(s);
    CHECK(std::isinf(lo0));
    CHECK(hi0 == 0.0);
    s.w.pos = {Vec2(1, 0)};
    s.w.circ = {1.0};
    auto [lo1, hi1] = support_annulus(s);
    CHECK(lo1 == 1.0);
    CHECK(hi1 == 1.0);
    s.w.pos.clear();
    s.w.circ.clear();
    for (int k = 0; k < 12; ++k) {
        s.w.pos.push_back(2.0 * Vec2(std::cos(k * pi / 6), std::sin(k * pi / 6)));
        s.w.circ.push_back(0.1);
    }
    auto [lo2, hi2] = support_annulus(s);
    CHECK(lo2 == doctest::Approx(2.0));
    CHECK(hi2 == doctest::Approx(2.0));
}
