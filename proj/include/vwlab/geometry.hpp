#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace vwlab {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using cplx = std::complex<double>;

inline Vec2 perp(const Vec2& v) { return Vec2(-v.y(), v.x()); }
inline cplx to_complex(const Vec2& v) { return {v.x(), v.y()}; }
inline Vec2 to_vec(cplx z) { return Vec2(z.real(), z.imag()); }
// f1 - i f2
inline cplx hat(const Vec2& f) { return {f.x(), -f.y()}; }

Mat2 rotation(double theta);

// Smooth closed curve z(t) = sum_k c_k exp(ikt), t in [0, 2pi), counterclockwise.
class ShapeSpec {
public:
    struct Mode {
        int order;
        double cos_amp;
        double sin_amp;
    };

    static ShapeSpec disk(double radius);
    static ShapeSpec ellipse(double a, double b);
    // r(t) = R + sum (a_m cos(mt) + b_m sin(mt))
    static ShapeSpec perturbed_disk(double radius, const std::vector<Mode>& modes);
    // mass_center_offset: position of the mass center relative to the geometric center
    static ShapeSpec from_coefficients(std::vector<std::pair<int, cplx>> coefficients,
                                       const Vec2& mass_center_offset = Vec2::Zero(),
                                       std::string name = "fourier");

    ShapeSpec scaled(double eps) const;

    cplx point(double t) const;
    cplx derivative(double t) const;
    cplx second_derivative(double t) const;

    const std::vector<std::pair<int, cplx>>& coefficients() const { return coeffs_; }
    const std::string& name() const { return name_; }
    double circumradius() const;
    // FNV-1a over name and raw coefficient bits
    std::uint64_t hash() const;

private:
    ShapeSpec() = default;
    void center(const Vec2& mass_center_offset);

    std::vector<std::pair<int, cplx>> coeffs_;
    std::string name_;
};

class BoundaryMesh {
public:
    BoundaryMesh(const ShapeSpec& shape, int n);

    int size() const { return n_; }
    const ShapeSpec& shape() const { return shape_; }
    double param_step() const { return 2.0 * M_PI / n_; }

    const std::vector<Vec2>& nodes() const { return nodes_; }
    const std::vector<Vec2>& tangents() const { return tangents_; }
    // points out of the fluid, into the solid: n = tau^perp
    const std::vector<Vec2>& normals() const { return normals_; }
    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& speeds() const { return speeds_; }
    const std::vector<double>& curvatures() const { return curvatures_; }
    const std::vector<cplx>& z() const { return z_; }
    const std::vector<cplx>& dz() const { return dz_; }

    double perimeter() const;
    double max_panel() const;
    double distance_to(const Vec2& x) const;
    // winding-number test against the polygon of nodes
    bool contains(const Vec2& x) const;

    // d/ds of node samples by trigonometric differentiation
    Eigen::VectorXd tangential_derivative(const Eigen::VectorXd& values) const;

    // Boundary data K_1..K_5 at the nodes (index 0..4).
    Eigen::VectorXd kirchhoff_data(int i) const;

private:
    ShapeSpec shape_;
    int n_;
    std::vector<Vec2> nodes_, tangents_, normals_;
    std::vector<double> weights_, speeds_, curvatures_;
    std::vector<cplx> z_, dz_;
    std::shared_ptr<const Eigen::MatrixXd> dmat_;
};

struct Placement {
    Vec2 h = Vec2::Zero();
    double theta = 0.0;

    Mat2 R() const { return rotation(theta); }
    // blockdiag(R_theta, 1)
    Mat3 Q() const;
    Vec2 to_lab(const Vec2& body) const { return R() * body + h; }
    Vec2 to_body(const Vec2& lab) const { return R().transpose() * (lab - h); }
    Vec2 body_velocity(const Vec2& h_dot) const { return R().transpose() * h_dot; }
    Vec2 lab_velocity(const Vec2& ell) const { return R() * ell; }
};

extern const Mat2 J2;

struct MomentSet {
    double area = 0.0;
    Vec2 xg = Vec2::Zero();
    double m6 = 0.0;  // int x1^2 - x2^2
    double m7 = 0.0;  // 2 int x1 x2
    double m8 = 0.0;  // int |x|^2

    MomentSet scaled(double eps) const;
};

MomentSet geometric_moments(const BoundaryMesh& mesh);

}  // namespace vwlab
