#pragma once

#include <vector>

#include "vwlab/coupled_system.hpp"

namespace vwlab {

// Background flow at the body center and the modulated velocities built from it.
struct ModulationData {
    Vec2 K0 = Vec2::Zero();
    double a = 0.0, b = 0.0;  // DK0 = [[-a, b], [b, a]]
    Vec2 ell_tilde = Vec2::Zero();
    Vec3 p_tilde = Vec3::Zero();  // (l~, eps r)
    Vec3 p_hat = Vec3::Zero();    // (l, eps r)
    Vec3 p_check = Vec3::Zero();  // (l - K0, eps r)
    bool valid = true;            // false when a blob sits within five cores of the origin

    Mat2 DK0() const { return (Mat2() << -a, b, b, a).finished(); }
};

ModulationData modulation(const CoupledState& s);

// (l_a, w_a) x (l_b, w_b) = (w_a l_b^perp - w_b l_a^perp, l_a^perp . l_b)
Vec3 cross(const Vec3& pa, const Vec3& pb);

struct StructureTensors {
    double m1 = 1.0;
    Mat3 Mg = Mat3::Identity();
    Mat3 Ma = Mat3::Zero();
    Mat2 Mflat = Mat2::Zero();
    Vec3 mu = Vec3::Zero(), mu_hat = Vec3::Zero(), mu_check = Vec3::Zero();
    Vec3 B = Vec3::Zero();  // (xi^perp, -1)

    static StructureTensors from(const MassData& md);
};

enum class Lambda { G, Under, A };

// quadratic form <L, p, p>
Vec3 apply_lambda(const StructureTensors& st, Lambda which, const Vec3& p);
// symmetric bilinear extension by polarization
Vec3 apply_lambda(const StructureTensors& st, Lambda which, const Vec3& p, const Vec3& q);

// (0, 0, xi.(DK0 xi) + a eta1 - b eta2)
Vec3 weakly_gyroscopic_G(const ModulationData& m, const MassData& md);
Vec3 F_under(const ModulationData& m, const StructureTensors& st);

// closed-form small-body approximations of B, C_a and C_b at the current state
struct Expansion {
    Vec3 B = Vec3::Zero();
    Vec3 Ca = Vec3::Zero();
    Vec3 Cb = Vec3::Zero();
};
Expansion expansions(const CoupledState& s, const ModulationData& m);
Vec3 expansion_B(const CoupledState& s);
Expansion expansion_C(const CoupledState& s);

// boundary field K0 + DK0 x + sum (l - K0)_i dPhi_i - a dPhi4 - b dPhi5 at node j
Vec2 v_sharp_boundary(const CoupledState& s, const ModulationData& m, int j);
// L2 norm over the scaled boundary of v_sharp + r dPhi3 - v~
double v_sharp_defect(const CoupledState& s);

struct TrajectoryPoint {
    double t = 0.0;
    double theta = 0.0;
    double r = 0.0;
    ModulationData mod;
};
using Trajectory = std::vector<TrajectoryPoint>;

TrajectoryPoint trajectory_point(const CoupledState& s);

struct ResidualReport {
    std::vector<double> t;
    std::vector<Vec3> F;          // implied normal-form remainder
    std::vector<double> weight;   // 1 + |p~| + eps |p~|^2
    double C = 0.0;               // max |F| / weight
    double C_coarse = 0.0;        // same with the doubled stencil
    bool noisy = false;           // the two stencils disagree by more than 10%
    double C_gyro = 0.0;          // max |int p~.G| / (eps (1 + t + int |p~|^2))
    double C_modulation = 0.0;    // max |(K0 + eps DK0 xi)' + r K0^perp| / (1 + |p~|)
};

// uniform sampling required; derivatives by centered differences
ResidualReport normal_form_residual(const Trajectory& tr, const CoupledModel& model, double gamma);

// max over interior samples of |P (Q (M p~' + gyroscopic)) - P ((eps^a Mg Q + eps^2 Q Ma) p~)'|
double rotated_mass_identity_check(const Trajectory& tr, const CoupledModel& model);

}  // namespace vwlab
