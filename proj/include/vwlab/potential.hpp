#pragma once

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vwlab/contour.hpp"
#include "vwlab/geometry.hpp"

namespace vwlab {

using MeshPtr = std::shared_ptr<const BoundaryMesh>;

// Dense Nystrom operators of the single layer potential with G = ln|x-y| / 2pi.
class LayerOperators {
public:
    explicit LayerOperators(MeshPtr mesh);

    const MeshPtr& mesh() const { return mesh_; }
    // boundary values of S sigma (log singularity handled by Kress quadrature)
    const Eigen::MatrixXd& single_layer() const { return S_; }
    // exterior normal trace along nu = -n is (I/2 + K') sigma
    const Eigen::MatrixXd& trace_operator() const { return A_; }

    // d_n u = g with n into the solid, u -> 0 at infinity
    Eigen::VectorXd neumann_density(const Eigen::VectorXd& g) const;
    // S sigma + c = f, int sigma = 0: bounded exterior Dirichlet solution
    Eigen::VectorXd dirichlet_density(const Eigen::VectorXd& f, double& c) const;
    // S sigma - c = 0, int sigma = 1
    Eigen::VectorXd equilibrium_density(double& c) const;

private:
    MeshPtr mesh_;
    Eigen::MatrixXd S_, A_;
    Eigen::PartialPivLU<Eigen::MatrixXd> neumann_lu_, dirichlet_lu_, equilibrium_lu_;
};

// Single layer potential of a nodal density, evaluated anywhere in the fluid.
class LayerField {
public:
    LayerField() = default;
    LayerField(MeshPtr mesh, Eigen::VectorXd density);

    const MeshPtr& mesh() const { return mesh_; }
    const Eigen::VectorXd& density() const { return density_; }
    double potential(const Vec2& x) const;
    Vec2 gradient(const Vec2& x) const;

private:
    struct Fine {
        std::vector<Vec2> nodes;
        std::vector<double> mass;  // density * weight
    };
    const Fine& refined(int factor) const;
    int factor_for(const Vec2& x) const;
    // number of far-field terms at x, 0 when x is too close
    int far_terms(const Vec2& x) const;

    MeshPtr mesh_;
    Eigen::VectorXd density_;
    std::vector<double> mass_;
    std::vector<cplx> moments_;  // sum of mass z^k
    double panel_ = 0.0;
    double reach_ = 0.0;
    mutable std::shared_ptr<std::mutex> mutex_ = std::make_shared<std::mutex>();
    mutable std::shared_ptr<std::map<int, Fine>> fine_ = std::make_shared<std::map<int, Fine>>();
};

class NeumannSolution {
public:
    NeumannSolution() = default;
    NeumannSolution(const LayerOperators& ops, const Eigen::VectorXd& g);
    NeumannSolution(const LayerOperators& ops, const Eigen::VectorXd& g,
                    const Eigen::VectorXd& density);

    double potential(const Vec2& x) const { return layer_.potential(x); }
    Vec2 gradient(const Vec2& x) const { return layer_.gradient(x); }

    const Eigen::VectorXd& density() const { return layer_.density(); }
    const Eigen::VectorXd& data() const { return data_; }
    const Eigen::VectorXd& boundary_potential() const { return phi_b_; }
    const std::vector<Vec2>& boundary_gradient() const { return grad_b_; }
    // max |d_n u - g| over the nodes
    double residual() const { return residual_; }

private:
    void finish(const LayerOperators& ops);

    LayerField layer_;
    Eigen::VectorXd data_, phi_b_;
    std::vector<Vec2> grad_b_;
    double residual_ = 0.0;
};

NeumannSolution solve_exterior_neumann(const LayerOperators& ops, const Eigen::VectorXd& g,
                                       bool check_compatibility = true);

// Unit-circulation exterior field tangent to the boundary, H = grad^perp Psi_H.
class HarmonicField {
public:
    HarmonicField() = default;
    explicit HarmonicField(const LayerOperators& ops);
    HarmonicField(const LayerOperators& ops, const Eigen::VectorXd& density, double c);

    Vec2 value(const Vec2& x) const { return perp(layer_.gradient(x)); }
    double stream(const Vec2& x) const { return layer_.potential(x) - c_; }
    const std::vector<Vec2>& boundary_values() const { return h_b_; }
    const Eigen::VectorXd& density() const { return layer_.density(); }
    double constant() const { return c_; }

private:
    LayerField layer_;
    double c_ = 0.0;
    std::vector<Vec2> h_b_;
};

struct MassData {
    Eigen::Matrix<double, 5, 5> m = Eigen::Matrix<double, 5, 5>::Zero();
    double raw_asymmetry = 0.0;
    MomentSet moments;
    Vec2 xi = Vec2::Zero();
    Vec2 eta = Vec2::Zero();
    double m1 = 1.0;  // genuine mass at unit scale
    double J1 = 1.0;  // genuine inertia at unit scale

    Mat3 Ma() const { return m.topLeftCorner<3, 3>(); }
    Mat2 Mflat() const { return m.topLeftCorner<2, 2>(); }
    Mat3 Mg() const;
    Vec3 mu() const;
    Vec3 mu_hat() const;
    Vec3 mu_check() const;
    // m_ij at scale eps
    double mij(int i, int j, double eps) const;
    Mat3 Ma_eps(double eps) const;
    // eps^alpha I_eps M_g I_eps + eps^2 I_eps M_a I_eps
    Mat3 total_mass(double eps, double alpha) const;
};

struct MomentIntegrals {
    cplx z, zbar, absz2, z2;
};
MomentIntegrals moment_integrals(const BoundaryMesh& mesh, const std::vector<Vec2>& boundary_field);

// c_k = (1/2 pi i) int_{|z|=R} fhat z^{k-1} dz for k = 1..kmax
std::vector<cplx> laurent_coefficients(const std::function<Vec2(const Vec2&)>& field,
                                       const BoundaryMesh& mesh, int kmax, double radius = 0.0,
                                       int samples = 512);

class PotentialSet {
public:
    static std::shared_ptr<const PotentialSet> compute(const ShapeSpec& shape, int n);
    // reuses a cache file keyed by shape hash and N when present
    static std::shared_ptr<const PotentialSet> load_or_compute(const ShapeSpec& shape, int n,
                                                               const std::string& cache_dir);
    void save(const std::string& path) const;
    static std::shared_ptr<const PotentialSet> load(const ShapeSpec& shape, int n,
                                                    const std::string& path);
    static std::string cache_name(const ShapeSpec& shape, int n);

    const MeshPtr& mesh() const { return ops_->mesh(); }
    const LayerOperators& operators() const { return *ops_; }
    const HarmonicField& H() const { return H_; }
    // i = 0..4 for Phi_1..Phi_5
    const NeumannSolution& phi(int i) const { return phi_[i]; }

    MassData mass_data(double m1 = 1.0, double J1 = 1.0) const;

private:
    PotentialSet() = default;

    std::shared_ptr<const LayerOperators> ops_;
    HarmonicField H_;
    std::array<NeumannSolution, 5> phi_;
};

using PotentialPtr = std::shared_ptr<const PotentialSet>;

// The unit set viewed at body scale eps.
class ScaledPotentials {
public:
    ScaledPotentials(PotentialPtr unit, double eps);

    double eps() const { return eps_; }
    const PotentialSet& unit() const { return *unit_; }
    const PotentialPtr& unit_ptr() const { return unit_; }
    int size() const { return unit_->mesh()->size(); }

    Vec2 node(int j) const { return eps_ * unit_->mesh()->nodes()[j]; }
    const Vec2& normal(int j) const { return unit_->mesh()->normals()[j]; }
    const Vec2& tangent(int j) const { return unit_->mesh()->tangents()[j]; }
    double weight(int j) const { return eps_ * unit_->mesh()->weights()[j]; }
    double kirchhoff(int i, int j) const;
    bool inside(const Vec2& x) const { return unit_->mesh()->contains(x / eps_); }
    double distance_to(const Vec2& x) const { return eps_ * unit_->mesh()->distance_to(x / eps_); }

    double phi(int i, const Vec2& x) const;
    Vec2 grad_phi(int i, const Vec2& x) const;
    Vec2 grad_phi_boundary(int i, int j) const;
    Vec2 H(const Vec2& x) const;
    Vec2 H_boundary(int j) const;
    double psi_H(const Vec2& x) const;

    // gradient field of the exterior Neumann problem with data g at the scaled nodes
    NeumannSolution solve_neumann(const Eigen::VectorXd& g) const;
    Vec2 neumann_gradient(const NeumannSolution& s, const Vec2& x) const { return s.gradient(x / eps_); }
    Vec2 neumann_boundary_gradient(const NeumannSolution& s, int j) const
    {
        return s.boundary_gradient()[j];
    }
    double neumann_potential(const NeumannSolution& s, const Vec2& x) const
    {
        return eps_ * s.potential(x / eps_);
    }

private:
    PotentialPtr unit_;
    double eps_;
};

// Contour identities that need the potentials (Laurent and complex moments).
IdentityReport potential_identities(const PotentialSet& ps, const MassData& md, double tol = 1e-6);

}  // namespace vwlab
