#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vwlab/biotsavart.hpp"
#include "vwlab/potential.hpp"

namespace vwlab {

// Everything fixed along a run: shape at scale eps, masses, factorized inertia.
struct CoupledModel {
    std::shared_ptr<const ScaledPotentials> sp;
    MassData md;  // unit scale, with m1 and J1
    double eps = 0.1, alpha = 2.0, m1 = 1.0, J1 = 1.0;
    Mat3 M = Mat3::Identity();  // eps^alpha I M_g I + M_a^eps
    Eigen::LDLT<Mat3> M_ldlt;
    std::vector<std::string> warnings;

    double mass() const;     // m^eps
    double inertia() const;  // J^eps
};
using ModelPtr = std::shared_ptr<const CoupledModel>;

ModelPtr make_model(PotentialPtr unit, double eps, double alpha, double m1, double J1);

struct CoupledState {
    ModelPtr model;
    double gamma = 0.0;
    Placement place;
    Vec2 ell = Vec2::Zero();
    double r = 0.0;
    BlobField omega;  // body frame
    double t = 0.0;

    Vec3 p() const { return Vec3(ell.x(), ell.y(), r); }
};

struct CoupledInit {
    PotentialPtr unit;
    double eps = 0.1, alpha = 2.0, m1 = 1.0, J1 = 1.0;
    std::vector<PatchSpec> patches;
    double spacing = 0.1;
    double core = 0.2;
    double gamma = 0.0;
    Vec2 ell0 = Vec2::Zero();
    double r0 = 0.0;
};

// throws std::invalid_argument when the scaled body does not fit in half the inner support radius
CoupledState init_coupled(const CoupledInit& in);

struct ForceBreakdown {
    Vec3 B = Vec3::Zero();
    Vec3 Ca = Vec3::Zero(), Cb = Vec3::Zero(), Cc = Vec3::Zero();
    Vec3 coriolis = Vec3::Zero();
    Vec3 accel = Vec3::Zero();  // (l', r')
    double residual = 0.0;      // |M accel + B + C + coriolis|

    Vec3 C() const { return Ca + Cb + Cc; }
};

Vec3 force_B(const CoupledState& s, const BodyFrameVelocity& bf);
void force_C(const CoupledState& s, const BodyFrameVelocity& bf, Vec3& Ca, Vec3& Cb, Vec3& Cc);
ForceBreakdown accelerations(const CoupledState& s, const BodyFrameVelocity& bf);
ForceBreakdown accelerations(const CoupledState& s);

class RunAborted : public std::runtime_error {
public:
    RunAborted(std::string reason, const std::string& what)
        : std::runtime_error(what), reason_(std::move(reason))
    {
    }
    const std::string& reason() const { return reason_; }

private:
    std::string reason_;
};

struct CoupledDerivative {
    std::vector<Vec2> dX;
    Vec2 dell = Vec2::Zero();
    double dr = 0.0, dtheta = 0.0;
    Vec2 dh = Vec2::Zero();
    ForceBreakdown forces;
};

CoupledDerivative coupled_rhs(const CoupledState& s);

// One RK4 step of blobs, (l, r), theta and h together. Throws RunAborted (collision, dt-guard).
CoupledState coupled_step(const CoupledState& s, double dt);

double total_energy(const CoupledState& s);

struct LabView {
    Vec2 h, dh;
    double theta;
    BlobField w;
    std::function<Vec2(const Vec2&)> u;  // lab-frame fluid velocity
};

LabView lab_frame_view(const CoupledState& s);

struct CoupledSample {
    double t;
    Vec2 h;
    double theta;
    Vec2 ell;
    double r, energy, gamma, rho_min, rho_max;
};

CoupledSample coupled_sample(const CoupledState& s, bool with_energy = true);
void write_coupled_csv(const std::string& path, const std::vector<CoupledSample>& rows);

}  // namespace vwlab
