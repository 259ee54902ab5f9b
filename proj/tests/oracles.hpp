#pragma once

#include <cmath>
#include <numbers>

#include "vwlab/geometry.hpp"

namespace oracle {

using vwlab::Vec2;

struct DiskOrbit {
    Vec2 h, ell;
};

// m l' = gamma l^perp, h' = l, integrated by RK4 on its own grid
inline DiskOrbit disk_orbit(double mass, double gamma, Vec2 ell, double T, int steps = 20000)
{
    Vec2 h = Vec2::Zero();
    const double dt = T / steps, w = gamma / mass;
    auto f = [w](const Vec2& l) { return Vec2(w * vwlab::perp(l)); };
    for (int k = 0; k < steps; ++k) {
        const Vec2 a1 = f(ell), b1 = ell;
        const Vec2 a2 = f(ell + dt / 2 * a1), b2 = ell + dt / 2 * a1;
        const Vec2 a3 = f(ell + dt / 2 * a2), b3 = ell + dt / 2 * a2;
        const Vec2 a4 = f(ell + dt * a3), b4 = ell + dt * a3;
        ell += dt / 6 * (a1 + 2 * a2 + 2 * a3 + a4);
        h += dt / 6 * (b1 + 2 * b2 + 2 * b3 + b4);
    }
    return {h, ell};
}

inline double disk_mass(double eps, double alpha, double m1, double radius = 1.0)
{
    return std::pow(eps, alpha) * m1 + eps * eps * std::numbers::pi * radius * radius;
}

}  // namespace oracle
