#include "vwlab/contour.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include <fmt/format.h>

namespace vwlab {

Weight parse_weight(const std::string& tag)
{
    if (tag == "1") return Weight::One;
    if (tag == "z") return Weight::Z;
    if (tag == "zbar") return Weight::ZBar;
    if (tag == "|z|^2") return Weight::AbsZ2;
    if (tag == "z^2") return Weight::Z2;
    if (tag == "z|z|^2") return Weight::ZAbsZ2;
    throw std::invalid_argument("unknown contour weight tag: " + tag);
}

std::string weight_tag(Weight w)
{
    switch (w) {
    case Weight::One: return "1";
    case Weight::Z: return "z";
    case Weight::ZBar: return "zbar";
    case Weight::AbsZ2: return "|z|^2";
    case Weight::Z2: return "z^2";
    case Weight::ZAbsZ2: return "z|z|^2";
    }
    return "?";
}

cplx weight_value(Weight w, cplx z)
{
    switch (w) {
    case Weight::One: return 1.0;
    case Weight::Z: return z;
    case Weight::ZBar: return std::conj(z);
    case Weight::AbsZ2: return std::norm(z);
    case Weight::Z2: return z * z;
    case Weight::ZAbsZ2: return z * std::norm(z);
    }
    return 0.0;
}

cplx contour_integral(const BoundaryMesh& mesh, Weight w, const std::vector<cplx>& values)
{
    if (static_cast<int>(values.size()) != mesh.size())
        throw std::invalid_argument("field must be sampled at every mesh node");
    cplx s = 0;
    for (int j = 0; j < mesh.size(); ++j)
        s += weight_value(w, mesh.z()[j]) * values[j] * mesh.dz()[j];
    return s;
}

cplx contour_integral(const BoundaryMesh& mesh, Weight w, const std::vector<Vec2>& field)
{
    std::vector<cplx> v(field.size());
    std::transform(field.begin(), field.end(), v.begin(), [](const Vec2& f) { return hat(f); });
    return contour_integral(mesh, w, v);
}

BlasiusResult blasius_pair(const BoundaryMesh& mesh, const std::vector<Vec2>& f,
                           const std::vector<Vec2>& g, double tangency_tol)
{
    const int n = mesh.size();
    if (static_cast<int>(f.size()) != n || static_cast<int>(g.size()) != n)
        throw std::invalid_argument("fields must be sampled at every mesh node");
    std::vector<cplx> fg(n);
    for (int j = 0; j < n; ++j) {
        const Vec2& nn = mesh.normals()[j];
        if (std::abs(f[j].dot(nn)) > tangency_tol * std::max(1.0, f[j].norm()) ||
            std::abs(g[j].dot(nn)) > tangency_tol * std::max(1.0, g[j].norm()))
            throw std::invalid_argument("field is not tangent to the boundary");
        fg[j] = hat(f[j]) * hat(g[j]);
    }
    BlasiusResult r;
    const cplx force = cplx(0, 1) * std::conj(contour_integral(mesh, Weight::One, fg));
    r.force = to_vec(force);
    r.torque = contour_integral(mesh, Weight::Z, fg).real();
    return r;
}

BlasiusResult blasius_direct(const BoundaryMesh& mesh, const std::vector<Vec2>& f,
                             const std::vector<Vec2>& g)
{
    BlasiusResult r;
    for (int j = 0; j < mesh.size(); ++j) {
        const double fg = f[j].dot(g[j]) * mesh.weights()[j];
        const Vec2& nn = mesh.normals()[j];
        r.force += fg * nn;
        r.torque += fg * perp(mesh.nodes()[j]).dot(nn);
    }
    return r;
}

void IdentityReport::add(std::string group, std::string name, cplx value, cplx expected,
                         double tol)
{
    rows.push_back({std::move(group), std::move(name), value, expected, tol});
}

bool IdentityReport::all_pass() const
{
    return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass(); });
}

double IdentityReport::max_error() const
{
    double e = 0;
    for (const auto& r : rows)
        e = std::max(e, r.error());
    return e;
}

int IdentityReport::failures() const
{
    return static_cast<int>(
        std::count_if(rows.begin(), rows.end(), [](const auto& r) { return !r.pass(); }));
}

std::string IdentityReport::table() const
{
    std::string out = fmt::format("{:<14} {:<34} {:>12} {:>9} {}\n", "group", "identity",
                                  "abs_error", "tol", "status");
    for (const auto& r : rows)
        out += fmt::format("{:<14} {:<34} {:>12.3e} {:>9.1e} {}\n", r.group, r.name, r.error(),
                           r.tol, r.pass() ? "ok" : "FAIL");
    return out;
}

IdentityReport identity_suite(const BoundaryMesh& mesh, const MomentSet& mo, double tol)
{
    IdentityReport rep;
    const double S = mo.area, g1 = mo.xg.x(), g2 = mo.xg.y();

    auto quad = [&](const std::function<double(const Vec2&, const Vec2&)>& f) {
        double s = 0;
        for (int j = 0; j < mesh.size(); ++j)
            s += f(mesh.nodes()[j], mesh.normals()[j]) * mesh.weights()[j];
        return s;
    };
    auto K = [](int j, const Vec2& x, const Vec2& n) {
        switch (j) {
        case 1: return n.x();
        case 2: return n.y();
        case 3: return perp(x).dot(n);
        case 4: return -x.x() * n.x() + x.y() * n.y();
        default: return x.y() * n.x() + x.x() * n.y();
        }
    };
    auto row = [&](const std::string& group, const std::string& name,
                   const std::function<double(const Vec2&)>& poly, int j, double expected) {
        const double v = quad([&](const Vec2& x, const Vec2& n) { return poly(x) * K(j, x, n); });
        rep.add(group, name, v, expected, tol);
    };
    auto one = [](const Vec2&) { return 1.0; };
    auto x1 = [](const Vec2& x) { return x.x(); };
    auto x2 = [](const Vec2& x) { return x.y(); };
    auto r2 = [](const Vec2& x) { return x.squaredNorm(); };
    auto x1x2 = [](const Vec2& x) { return x.x() * x.y(); };
    auto dif = [](const Vec2& x) { return x.x() * x.x() - x.y() * x.y(); };

    for (int j = 1; j <= 5; ++j)
        row("degree0", fmt::format("int K{} ds", j), one, j, 0.0);

    row("degree1", "int x1 K1 ds", x1, 1, -S);
    row("degree1", "int x2 K1 ds", x2, 1, 0.0);
    row("degree1", "int x1 K2 ds", x1, 2, 0.0);
    row("degree1", "int x2 K2 ds", x2, 2, -S);
    row("degree1", "int x1 K3 ds", x1, 3, S * g2);
    row("degree1", "int x2 K3 ds", x2, 3, -S * g1);
    row("degree1", "int x1 K4 ds", x1, 4, S * g1);
    row("degree1", "int x2 K4 ds", x2, 4, -S * g2);
    row("degree1", "int x1 K5 ds", x1, 5, -S * g2);
    row("degree1", "int x2 K5 ds", x2, 5, -S * g1);

    row("degree2", "int |x|^2 K1 ds", r2, 1, -2 * g1 * S);
    row("degree2", "int |x|^2 K2 ds", r2, 2, -2 * g2 * S);
    row("degree2", "int |x|^2 K3 ds", r2, 3, 0.0);
    row("degree2", "int |x|^2 K4 ds", r2, 4, 2 * mo.m6);
    row("degree2", "int |x|^2 K5 ds", r2, 5, -2 * mo.m7);
    row("degree2", "int x1x2 K1 ds", x1x2, 1, -S * g2);
    row("degree2", "int x1x2 K2 ds", x1x2, 2, -S * g1);
    row("degree2", "int x1x2 K3 ds", x1x2, 3, -mo.m6);
    row("degree2", "int x1x2 K4 ds", x1x2, 4, 0.0);
    row("degree2", "int x1x2 K5 ds", x1x2, 5, -mo.m8);
    row("degree2", "int (x1^2-x2^2) K1 ds", dif, 1, -2 * S * g1);
    row("degree2", "int (x1^2-x2^2) K2 ds", dif, 2, 2 * S * g2);
    row("degree2", "int (x1^2-x2^2) K3 ds", dif, 3, 2 * mo.m7);
    row("degree2", "int (x1^2-x2^2) K4 ds", dif, 4, 2 * mo.m8);
    row("degree2", "int (x1^2-x2^2) K5 ds", dif, 5, 0.0);

    const int n = mesh.size();
    std::vector<cplx> ones(n, 1.0);
    auto zint = [&](Weight w) { return contour_integral(mesh, w, ones); };
    std::vector<cplx> zb2(n);
    for (int j = 0; j < n; ++j)
        zb2[j] = std::conj(mesh.z()[j]) * std::conj(mesh.z()[j]);
    rep.add("stokes", "int dz", zint(Weight::One), 0.0, tol);
    rep.add("stokes", "int z dz", zint(Weight::Z), 0.0, tol);
    rep.add("stokes", "int z^2 dz", zint(Weight::Z2), 0.0, tol);
    rep.add("stokes", "int zbar^2 dz", contour_integral(mesh, Weight::One, zb2),
            cplx(4 * S * g2, 4 * S * g1), tol);
    rep.add("stokes", "int zbar dz", zint(Weight::ZBar), cplx(0, 2 * S), tol);
    rep.add("stokes", "int |z|^2 dz", zint(Weight::AbsZ2), cplx(-2 * S * g2, 2 * S * g1), tol);
    rep.add("stokes", "int z|z|^2 dz", zint(Weight::ZAbsZ2), cplx(-2 * mo.m7, 2 * mo.m6), tol);
    return rep;
}

}  // namespace vwlab
