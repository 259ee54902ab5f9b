#include "vwlab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace vwlab {

const Mat2 J2 = (Mat2() << 0.0, -1.0, 1.0, 0.0).finished();

Mat2 rotation(double theta)
{
    const double c = std::cos(theta), s = std::sin(theta);
    Mat2 R;
    R << c, -s, s, c;
    return R;
}

Mat3 Placement::Q() const
{
    Mat3 q = Mat3::Identity();
    q.topLeftCorner<2, 2>() = R();
    return q;
}

ShapeSpec ShapeSpec::disk(double radius)
{
    if (!(radius > 0))
        throw std::invalid_argument("disk radius must be positive");
    return from_coefficients({{1, cplx(radius, 0)}}, Vec2::Zero(), "disk");
}

ShapeSpec ShapeSpec::ellipse(double a, double b)
{
    if (!(a > 0 && b > 0))
        throw std::invalid_argument("ellipse semi-axes must be positive");
    std::vector<std::pair<int, cplx>> c{{1, cplx(0.5 * (a + b), 0)}};
    if (a != b)
        c.push_back({-1, cplx(0.5 * (a - b), 0)});
    return from_coefficients(std::move(c), Vec2::Zero(), "ellipse");
}

ShapeSpec ShapeSpec::perturbed_disk(double radius, const std::vector<Mode>& modes)
{
    std::vector<std::pair<int, cplx>> c{{1, cplx(radius, 0)}};
    for (const auto& m : modes) {
        if (m.order <= 0)
            throw std::invalid_argument("perturbation order must be positive");
        // e^{it} (a cos mt + b sin mt)
        const cplx up(0.5 * m.cos_amp, -0.5 * m.sin_amp);
        const cplx down(0.5 * m.cos_amp, 0.5 * m.sin_amp);
        c.push_back({1 + m.order, up});
        c.push_back({1 - m.order, down});
    }
    return from_coefficients(std::move(c), Vec2::Zero(), "perturbed-disk");
}

ShapeSpec ShapeSpec::from_coefficients(std::vector<std::pair<int, cplx>> coefficients,
                                       const Vec2& mass_center_offset, std::string name)
{
    ShapeSpec s;
    std::sort(coefficients.begin(), coefficients.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (const auto& [k, c] : coefficients) {
        if (!s.coeffs_.empty() && s.coeffs_.back().first == k)
            s.coeffs_.back().second += c;
        else
            s.coeffs_.push_back({k, c});
    }
    s.name_ = std::move(name);
    s.center(mass_center_offset);
    return s;
}

void ShapeSpec::center(const Vec2& mass_center_offset)
{
    int kmax = 0;
    for (const auto& [k, c] : coeffs_)
        kmax = std::max(kmax, std::abs(k));
    // exact for the cubic integrands below
    const int m = 8 * kmax + 64;
    const double h = 2.0 * M_PI / m;
    double area = 0, mx = 0, my = 0;
    for (int j = 0; j < m; ++j) {
        const cplx z = point(j * h), dz = derivative(j * h) * h;
        area += 0.5 * (z.real() * dz.imag() - z.imag() * dz.real());
        mx += 0.5 * z.real() * z.real() * dz.imag();
        my -= 0.5 * z.imag() * z.imag() * dz.real();
    }
    if (!(area > 0))
        throw std::invalid_argument("curve must be counterclockwise with positive area");
    const cplx shift(mx / area + mass_center_offset.x(), my / area + mass_center_offset.y());
    bool found = false;
    for (auto& [k, c] : coeffs_) {
        if (k == 0) {
            c -= shift;
            found = true;
        }
    }
    if (!found) {
        coeffs_.push_back({0, -shift});
        std::sort(coeffs_.begin(), coeffs_.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
    }
}

ShapeSpec ShapeSpec::scaled(double eps) const
{
    if (!(eps > 0))
        throw std::invalid_argument("scale factor must be positive");
    ShapeSpec s = *this;
    for (auto& kc : s.coeffs_)
        kc.second *= eps;
    return s;
}

cplx ShapeSpec::point(double t) const
{
    cplx z = 0;
    for (const auto& [k, c] : coeffs_)
        z += c * std::polar(1.0, k * t);
    return z;
}

cplx ShapeSpec::derivative(double t) const
{
    cplx z = 0;
    for (const auto& [k, c] : coeffs_)
        z += c * cplx(0, k) * std::polar(1.0, k * t);
    return z;
}

cplx ShapeSpec::second_derivative(double t) const
{
    cplx z = 0;
    for (const auto& [k, c] : coeffs_)
        z -= c * double(k * k) * std::polar(1.0, k * t);
    return z;
}

double ShapeSpec::circumradius() const
{
    double r = 0;
    const int m = 1024;
    for (int j = 0; j < m; ++j)
        r = std::max(r, std::abs(point(2.0 * M_PI * j / m)));
    return r;
}

std::uint64_t ShapeSpec::hash() const
{
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const void* p, std::size_t n) {
        const auto* b = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= b[i];
            h *= 1099511628211ull;
        }
    };
    mix(name_.data(), name_.size());
    for (const auto& [k, c] : coeffs_) {
        const double re = c.real(), im = c.imag();
        mix(&k, sizeof k);
        mix(&re, sizeof re);
        mix(&im, sizeof im);
    }
    return h;
}

namespace {

double orient(const Vec2& a, const Vec2& b, const Vec2& c)
{
    return (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
}

bool segments_cross(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2)
{
    const double d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
    const double d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
           d4 != 0;
}

}  // namespace

BoundaryMesh::BoundaryMesh(const ShapeSpec& shape, int n) : shape_(shape), n_(n)
{
    if (n < 4 || n % 2 != 0)
        throw std::invalid_argument("panel count must be even and at least 4");
    const double h = param_step();
    nodes_.resize(n);
    tangents_.resize(n);
    normals_.resize(n);
    weights_.resize(n);
    speeds_.resize(n);
    curvatures_.resize(n);
    z_.resize(n);
    dz_.resize(n);
    for (int j = 0; j < n; ++j) {
        const double t = j * h;
        const cplx z = shape.point(t), d1 = shape.derivative(t), d2 = shape.second_derivative(t);
        const double sp = std::abs(d1);
        if (!(sp > 0))
            throw std::invalid_argument("degenerate parametrization (zero speed)");
        z_[j] = z;
        dz_[j] = d1 * h;
        nodes_[j] = to_vec(z);
        tangents_[j] = to_vec(d1 / sp);
        normals_[j] = perp(tangents_[j]);
        speeds_[j] = sp;
        weights_[j] = sp * h;
        curvatures_[j] = (std::conj(d1) * d2).imag() / (sp * sp * sp);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1)
                continue;
            if (segments_cross(nodes_[i], nodes_[(i + 1) % n], nodes_[j], nodes_[(j + 1) % n]))
                throw std::invalid_argument("self-intersecting boundary curve");
        }

    auto d = std::make_shared<Eigen::MatrixXd>(n, n);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            if (j == k) {
                (*d)(j, k) = 0;
                continue;
            }
            const int diff = j - k;
            const double sign = (diff % 2 == 0) ? 1.0 : -1.0;
            (*d)(j, k) = 0.5 * sign / std::tan(0.5 * diff * h);
        }
    dmat_ = d;
}

double BoundaryMesh::perimeter() const
{
    double s = 0;
    for (double w : weights_)
        s += w;
    return s;
}

double BoundaryMesh::max_panel() const
{
    return *std::max_element(weights_.begin(), weights_.end());
}

double BoundaryMesh::distance_to(const Vec2& x) const
{
    double d = std::numeric_limits<double>::infinity();
    for (const auto& p : nodes_)
        d = std::min(d, (p - x).norm());
    return d;
}

bool BoundaryMesh::contains(const Vec2& x) const
{
    double wind = 0;
    for (int j = 0; j < n_; ++j) {
        const Vec2 a = nodes_[j] - x, b = nodes_[(j + 1) % n_] - x;
        wind += std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b));
    }
    return std::abs(wind) > M_PI;
}

Eigen::VectorXd BoundaryMesh::tangential_derivative(const Eigen::VectorXd& values) const
{
    Eigen::VectorXd dt = (*dmat_) * values;
    for (int j = 0; j < n_; ++j)
        dt[j] /= speeds_[j];
    return dt;
}

Eigen::VectorXd BoundaryMesh::kirchhoff_data(int i) const
{
    Eigen::VectorXd g(n_);
    for (int j = 0; j < n_; ++j) {
        const Vec2& x = nodes_[j];
        const Vec2& nn = normals_[j];
        switch (i) {
        case 0: g[j] = nn.x(); break;
        case 1: g[j] = nn.y(); break;
        case 2: g[j] = perp(x).dot(nn); break;
        case 3: g[j] = -x.x() * nn.x() + x.y() * nn.y(); break;
        case 4: g[j] = x.y() * nn.x() + x.x() * nn.y(); break;
        default: throw std::out_of_range("Kirchhoff index must be in 0..4");
        }
    }
    return g;
}

MomentSet MomentSet::scaled(double eps) const
{
    MomentSet m = *this;
    const double e2 = eps * eps, e4 = e2 * e2;
    m.area *= e2;
    m.xg *= eps;
    m.m6 *= e4;
    m.m7 *= e4;
    m.m8 *= e4;
    return m;
}

MomentSet geometric_moments(const BoundaryMesh& mesh)
{
    // divergence theorem with the fluid-side normal reversed
    MomentSet m;
    double sx = 0, sy = 0;
    for (int j = 0; j < mesh.size(); ++j) {
        const Vec2& x = mesh.nodes()[j];
        const Vec2 nu = -mesh.normals()[j];
        const double w = mesh.weights()[j];
        const double x1 = x.x(), x2 = x.y();
        m.area += x1 * nu.x() * w;
        sx += 0.5 * x1 * x1 * nu.x() * w;
        sy += 0.5 * x2 * x2 * nu.y() * w;
        m.m6 += (x1 * x1 * x1 * nu.x() - x2 * x2 * x2 * nu.y()) / 3.0 * w;
        m.m7 += x1 * x1 * x2 * nu.x() * w;
        m.m8 += (x1 * x1 * x1 * nu.x() + x2 * x2 * x2 * nu.y()) / 3.0 * w;
    }
    m.xg = Vec2(sx, sy) / m.area;
    return m;
}

}  // namespace vwlab
