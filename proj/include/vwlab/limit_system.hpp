#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vwlab/biotsavart.hpp"

namespace vwlab {

// Point vortex of strength gamma at h carried by, and carrying, a lab-frame blob field.
struct VortexWaveState {
    Vec2 h = Vec2::Zero();
    BlobField w;
    double gamma = 0.0;
    double t = 0.0;
};

struct VortexWaveRhs {
    Vec2 dh = Vec2::Zero();
    std::vector<Vec2> blob_velocity;
};

Vec2 point_vortex_velocity(double gamma, const Vec2& h, const Vec2& x);

VortexWaveRhs vw_rhs(const VortexWaveState& s);
VortexWaveState vw_step(const VortexWaveState& s, double dt);

// (min, max) of |x_j - h|; (+inf, 0) for an empty field
std::pair<double, double> support_annulus(const VortexWaveState& s);
std::pair<double, double> support_annulus(const BlobField& w, const Vec2& center);

struct LimitSample {
    double t;
    Vec2 h, dh;
    double rho_min, rho_max;
};

LimitSample limit_sample(const VortexWaveState& s);
void write_limit_csv(const std::string& path, const std::vector<LimitSample>& rows);

}  // namespace vwlab
