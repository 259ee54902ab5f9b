#include "vwlab/biotsavart.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "vwlab/parallel.hpp"

namespace vwlab {

namespace {

std::atomic<int> g_threads{1};

constexpr double kCutoff2 = 25.0;  // (5 delta)^2 in units of delta^2

}  // namespace

void set_thread_count(int k) { g_threads = std::max(1, k); }
int thread_count() { return g_threads; }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn)
{
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(g_threads.load()), n);
    if (k <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(k);
    for (std::size_t t = 0; t < k; ++t)
        pool.emplace_back([&, t] {
            for (std::size_t i = t * n / k; i < (t + 1) * n / k; ++i)
                fn(i);
        });
    for (auto& th : pool)
        th.join();
}

std::string frame_name(Frame f) { return f == Frame::Body ? "body" : "lab"; }

double BlobField::total_circulation() const
{
    double s = 0;
    for (double g : circ)
        s += g;
    return s;
}

BlobField fill_patches(const std::vector<PatchSpec>& patches, double spacing, double core,
                       Frame frame)
{
    if (!(spacing > 0) || !(core > 0))
        throw std::invalid_argument("lattice spacing and core radius must be positive");
    BlobField f;
    f.core = core;
    f.frame = frame;
    for (const auto& p : patches) {
        const double r_in = p.kind == PatchSpec::Kind::Disk ? 0.0 : p.r_in;
        if (!(r_in >= 0) || !(p.r_out > r_in))
            throw std::invalid_argument("patch radii must satisfy 0 <= r_in < r_out");
        const int rings = std::max(1, static_cast<int>(std::lround((p.r_out - r_in) / spacing)));
        const double dr = (p.r_out - r_in) / rings;
        for (int k = 0; k < rings; ++k) {
            const double rho = r_in + (k + 0.5) * dr;
            const int n = std::max(1, static_cast<int>(std::lround(2 * std::numbers::pi * rho / spacing)));
            const double g = p.density * 2 * std::numbers::pi * rho * dr / n;
            const double shift = (k % 2) * 0.5;
            for (int m = 0; m < n; ++m) {
                const double a = 2 * std::numbers::pi * (m + shift) / n;
                f.pos.push_back(p.center + rho * Vec2(std::cos(a), std::sin(a)));
                f.circ.push_back(g);
            }
        }
    }
    return f;
}

double blob_stream(double r2, double delta)
{
    const double x = r2 / (delta * delta);
    if (x > kCutoff2)
        return std::log(r2) / (4 * std::numbers::pi);
    if (x < 1e-8)
        return (2 * std::log(delta) - std::numbers::egamma + x) / (4 * std::numbers::pi);
    return (std::log(r2) - std::expint(-x)) / (4 * std::numbers::pi);
}

Vec2 velocity_free_space(const BlobField& field, const Vec2& x)
{
    Vec2 u = Vec2::Zero();
    for (std::size_t j = 0; j < field.size(); ++j)
        u += field.circ[j] * blob_kernel(x - field.pos[j], field.core);
    return u;
}

std::vector<Vec2> velocity_free_space(const BlobField& field, const std::vector<Vec2>& xs)
{
    std::vector<Vec2> out(xs.size());
    parallel_for(xs.size(), [&](std::size_t i) { out[i] = velocity_free_space(field, xs[i]); });
    return out;
}

std::vector<Vec2> self_velocities(const BlobField& field)
{
    const std::size_t n = field.size();
    std::vector<Vec2> out(n, Vec2::Zero());
    if (thread_count() > 1) {
        parallel_for(n, [&](std::size_t i) { out[i] = velocity_free_space(field, field.pos[i]); });
        return out;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec2 k = blob_kernel(field.pos[i] - field.pos[j], field.core);
            out[i] += field.circ[j] * k;
            out[j] -= field.circ[i] * k;
        }
    return out;
}

double stream_free_space(const BlobField& field, const Vec2& x)
{
    double s = 0;
    for (std::size_t j = 0; j < field.size(); ++j)
        s += field.circ[j] * blob_stream((x - field.pos[j]).squaredNorm(), field.core);
    return s;
}

GradientSample velocity_gradient(const BlobField& field, const Vec2& x)
{
    GradientSample g;
    const double lim = kCutoff2 * field.core * field.core;
    for (std::size_t j = 0; j < field.size(); ++j) {
        const Vec2 d = x - field.pos[j];
        const double r2 = d.squaredNorm();
        if (r2 <= lim) {
            g.valid = false;
            if (r2 == 0.0)
                continue;
        }
        const double c = field.circ[j] / (2 * std::numbers::pi * r2 * r2);
        g.a += -2 * d.x() * d.y() * c;
        g.b += (d.y() * d.y() - d.x() * d.x()) * c;
    }
    return g;
}

BodyFrameVelocity::BodyFrameVelocity(const ScaledPotentials& sp, const BlobField& field,
                                     double gamma, const Vec2& ell, double r)
    : sp_(sp), field_(field), gamma_(gamma), r_(r), ell_(ell)
{
    for (const auto& x : field.pos)
        if (sp.inside(x))
            throw std::domain_error("vortex blob inside the body");
    const int nb = sp.size();
    std::vector<Vec2> nodes(nb);
    for (int j = 0; j < nb; ++j)
        nodes[j] = sp.node(j);
    free_b_ = velocity_free_space(field, nodes);
    Eigen::VectorXd g(nb);
    for (int j = 0; j < nb; ++j)
        g[j] = -free_b_[j].dot(sp.normal(j));
    lift_ = sp.solve_neumann(g);

    const auto free = self_velocities(field);
    samples_.resize(field.size());
    parallel_for(field.size(), [&](std::size_t k) {
        const Vec2& x = field.pos[k];
        BlobSample& s = samples_[k];
        s.free = free[k];
        s.correction = sp.neumann_gradient(lift_, x);
        for (int i = 0; i < 3; ++i)
            s.grad_phi[i] = sp.grad_phi(i, x);
        s.H = sp.H(x);
        s.v = s.free + s.correction + gamma_ * s.H + ell_.x() * s.grad_phi[0] +
              ell_.y() * s.grad_phi[1] + r_ * s.grad_phi[2];
    });
}

Vec2 BodyFrameVelocity::K_H(const Vec2& x) const
{
    return velocity_free_space(field_, x) + sp_.neumann_gradient(lift_, x);
}

Vec2 BodyFrameVelocity::v_tilde(const Vec2& x) const
{
    return K_H(x) + ell_.x() * sp_.grad_phi(0, x) + ell_.y() * sp_.grad_phi(1, x) +
           r_ * sp_.grad_phi(2, x);
}

Vec2 BodyFrameVelocity::v(const Vec2& x) const { return v_tilde(x) + gamma_ * sp_.H(x); }

Vec2 BodyFrameVelocity::K_H_boundary(int j) const
{
    return free_b_[j] + sp_.neumann_boundary_gradient(lift_, j);
}

Vec2 BodyFrameVelocity::v_tilde_boundary(int j) const
{
    return K_H_boundary(j) + ell_.x() * sp_.grad_phi_boundary(0, j) +
           ell_.y() * sp_.grad_phi_boundary(1, j) + r_ * sp_.grad_phi_boundary(2, j);
}

Vec2 BodyFrameVelocity::v_boundary(int j) const
{
    return v_tilde_boundary(j) + gamma_ * sp_.H_boundary(j);
}

Vec2 hydrodynamic_velocity(const ScaledPotentials& sp, const BlobField& field, const Vec2& x)
{
    BodyFrameVelocity bf(sp, field, 0.0, Vec2::Zero(), 0.0);
    return bf.K_H(x);
}

namespace {

bool any_inside(const std::vector<Vec2>& xs, const std::function<bool(const Vec2&)>& inside)
{
    if (!inside)
        return false;
    return std::any_of(xs.begin(), xs.end(), [&](const Vec2& x) { return inside(x); });
}

// false when a stage or the result leaves the fluid
bool rk4_positions(std::vector<Vec2>& x, const VelocityFunctional& velocity, double dt,
                   const std::function<bool(const Vec2&)>& inside)
{
    const std::size_t n = x.size();
    auto shifted = [&](const std::vector<Vec2>& k, double c) {
        std::vector<Vec2> y(n);
        for (std::size_t i = 0; i < n; ++i)
            y[i] = x[i] + c * k[i];
        return y;
    };
    try {
        const auto k1 = velocity(x);
        auto y = shifted(k1, dt / 2);
        if (any_inside(y, inside))
            return false;
        const auto k2 = velocity(y);
        y = shifted(k2, dt / 2);
        if (any_inside(y, inside))
            return false;
        const auto k3 = velocity(y);
        y = shifted(k3, dt);
        if (any_inside(y, inside))
            return false;
        const auto k4 = velocity(y);
        std::vector<Vec2> out(n);
        for (std::size_t i = 0; i < n; ++i)
            out[i] = x[i] + dt / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        if (any_inside(out, inside))
            return false;
        x = std::move(out);
        return true;
    } catch (const std::domain_error&) {
        return false;
    }
}

}  // namespace

AdvectResult advect(const BlobField& field, const VelocityFunctional& velocity, double dt,
                    const std::function<bool(const Vec2&)>& inside, int max_halvings)
{
    if (!(dt > 0))
        throw std::invalid_argument("time step must be positive");
    for (int h = 0; h <= max_halvings; ++h) {
        const int sub = 1 << h;
        std::vector<Vec2> x = field.pos;
        bool ok = true;
        for (int s = 0; s < sub && ok; ++s)
            ok = rk4_positions(x, velocity, dt / sub, inside);
        if (ok) {
            AdvectResult res{field, h, sub};
            res.field.pos = std::move(x);
            return res;
        }
    }
    throw std::runtime_error("vortex blob enters the body after all step halvings");
}

}  // namespace vwlab
