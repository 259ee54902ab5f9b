#pragma once

#include <string>
#include <vector>

#include "vwlab/geometry.hpp"

namespace vwlab {

enum class Weight { One, Z, ZBar, AbsZ2, Z2, ZAbsZ2 };

// tags: "1", "z", "zbar", "|z|^2", "z^2", "z|z|^2"
Weight parse_weight(const std::string& tag);
std::string weight_tag(Weight w);
cplx weight_value(Weight w, cplx z);

// sum_j weight(z_j) * values_j * dz_j
cplx contour_integral(const BoundaryMesh& mesh, Weight w, const std::vector<cplx>& values);
// the field enters through its hat f1 - i f2
cplx contour_integral(const BoundaryMesh& mesh, Weight w, const std::vector<Vec2>& field);

struct BlasiusResult {
    Vec2 force = Vec2::Zero();
    double torque = 0.0;
};

// int (f.g) n ds and int (f.g) x^perp.n ds through the complex side; f, g must be tangent
BlasiusResult blasius_pair(const BoundaryMesh& mesh, const std::vector<Vec2>& f,
                           const std::vector<Vec2>& g, double tangency_tol = 1e-8);
// same quantities by direct real quadrature
BlasiusResult blasius_direct(const BoundaryMesh& mesh, const std::vector<Vec2>& f,
                             const std::vector<Vec2>& g);

struct IdentityRow {
    std::string group;
    std::string name;
    cplx value;
    cplx expected;
    double tol;

    double error() const { return std::abs(value - expected); }
    bool pass() const { return error() <= tol; }
};

struct IdentityReport {
    std::vector<IdentityRow> rows;

    void add(std::string group, std::string name, cplx value, cplx expected, double tol);
    bool all_pass() const;
    double max_error() const;
    int failures() const;
    std::string table() const;
};

// Divergence-theorem and Stokes identities that involve only the geometry.
IdentityReport identity_suite(const BoundaryMesh& mesh, const MomentSet& moments,
                              double tol = 1e-8);

}  // namespace vwlab
