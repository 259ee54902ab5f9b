#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "vwlab/geometry.hpp"
#include "vwlab/potential.hpp"

namespace vwlab {

enum class Frame { Body, Lab };
std::string frame_name(Frame f);

struct BlobField {
    std::vector<Vec2> pos;
    std::vector<double> circ;
    double core = 0.1;
    Frame frame = Frame::Body;

    std::size_t size() const { return pos.size(); }
    bool empty() const { return pos.empty(); }
    double total_circulation() const;
};

// dK = [[-a, b], [b, a]]
struct GradientSample {
    double a = 0.0;
    double b = 0.0;
    bool valid = true;

    Mat2 matrix() const { return (Mat2() << -a, b, b, a).finished(); }
};

struct PatchSpec {
    enum class Kind { Annulus, Disk };
    Kind kind = Kind::Annulus;
    Vec2 center = Vec2::Zero();
    double r_in = 0.0;
    double r_out = 1.0;
    double density = 1.0;
};

// Polar lattice of rings with spacing close to s; ring weights integrate each patch exactly.
BlobField fill_patches(const std::vector<PatchSpec>& patches, double spacing, double core,
                       Frame frame = Frame::Body);

// Gaussian core: (1 - exp(-r^2/delta^2)) d^perp / (2 pi r^2), exact beyond 5 delta
inline Vec2 blob_kernel(const Vec2& d, double delta)
{
    const double r2 = d.squaredNorm();
    if (r2 == 0.0)
        return Vec2::Zero();
    const double x = r2 / (delta * delta);
    const double s = x > 25.0 ? 1.0 : -std::expm1(-x);
    return (s / (2 * std::numbers::pi * r2)) * perp(d);
}
// stream function of the kernel, ln r^2 + E1(r^2/delta^2) over 4 pi
double blob_stream(double r2, double delta);

Vec2 velocity_free_space(const BlobField& field, const Vec2& x);
std::vector<Vec2> velocity_free_space(const BlobField& field, const std::vector<Vec2>& xs);
// free-space velocity at the blob centers (pairwise antisymmetric sum)
std::vector<Vec2> self_velocities(const BlobField& field);
double stream_free_space(const BlobField& field, const Vec2& x);
GradientSample velocity_gradient(const BlobField& field, const Vec2& x);

// Body-frame fluid velocity v = K_H[w] + gamma H + l1 dPhi1 + l2 dPhi2 + r dPhi3 at body scale.
class BodyFrameVelocity {
public:
    struct BlobSample {
        Vec2 free;             // K_R2 at the blob
        Vec2 correction;       // gradient of the Neumann lift of -K_R2.n
        Vec2 grad_phi[3];
        Vec2 H;
        Vec2 v;
    };

    BodyFrameVelocity(const ScaledPotentials& sp, const BlobField& field, double gamma,
                      const Vec2& ell, double r);

    Vec2 K_H(const Vec2& x) const;
    Vec2 v(const Vec2& x) const;
    Vec2 v_tilde(const Vec2& x) const;
    Vec2 v_boundary(int j) const;
    Vec2 v_tilde_boundary(int j) const;
    Vec2 K_H_boundary(int j) const;
    const std::vector<BlobSample>& blob_samples() const { return samples_; }
    const ScaledPotentials& potentials() const { return sp_; }

private:
    const ScaledPotentials& sp_;
    const BlobField& field_;
    double gamma_, r_;
    Vec2 ell_;
    NeumannSolution lift_;
    std::vector<Vec2> free_b_;
    std::vector<BlobSample> samples_;
};

// lowest-level boundary correction of a free field with nodal normal data -K.n
Vec2 hydrodynamic_velocity(const ScaledPotentials& sp, const BlobField& field, const Vec2& x);

struct AdvectResult {
    BlobField field;
    int halvings = 0;
    int substeps = 1;
};

using VelocityFunctional = std::function<std::vector<Vec2>(const std::vector<Vec2>&)>;

// RK4 for positions; a step that leaves a blob inside the body is retried with dt/2
AdvectResult advect(const BlobField& field, const VelocityFunctional& velocity, double dt,
                    const std::function<bool(const Vec2&)>& inside = nullptr,
                    int max_halvings = 5);

}  // namespace vwlab
