#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "vwlab/coupled_system.hpp"

using namespace vwlab;
using std::numbers::pi;

namespace {

PotentialPtr ellipse_potentials()
{
    static PotentialPtr p = PotentialSet::compute(ShapeSpec::ellipse(2.0, 1.0), 128);
    return p;
}

PotentialPtr disk_potentials()
{
    static PotentialPtr p = PotentialSet::compute(ShapeSpec::disk(1.0), 128);
    return p;
}

CoupledInit annulus_init(PotentialPtr unit, double eps, double spacing = 0.25)
{
    CoupledInit in;
    in.unit = std::move(unit);
    in.eps = eps;
    in.alpha = 2.0;
    in.gamma = 2 * pi;
    PatchSpec p;
    p.center = Vec2(0.2, -0.1);
    p.r_in = 1.0;
    p.r_out = 2.0;
    in.patches = {p};
    in.spacing = spacing;
    in.core = 0.15;
    in.ell0 = Vec2(0.6, -0.4);
    in.r0 = 1.5;
    return in;
}

CoupledState run(CoupledState s, double T, int steps)
{
    for (int k = 0; k < steps; ++k)
        s = coupled_step(s, T / steps);
    return s;
}

double slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = std::log(x[i]), b = std::log(y[i]);
        sx += a;
        sy += b;
        sxx += a * a;
        sxy += a * b;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("initialization")
{
    CoupledInit in;
    in.unit = ellipse_potentials();
    in.gamma = 1.0;
    const auto empty = init_coupled(in);
    CHECK(empty.omega.empty());
    CHECK(empty.omega.total_circulation() == 0.0);

    auto a = annulus_init(ellipse_potentials(), 0.1, 0.05);
    const auto s = init_coupled(a);
    CHECK(std::abs(s.omega.total_circulation() - 3 * pi) < 0.005 * 3 * pi);
    CHECK(s.place.h == Vec2::Zero());
    CHECK(s.place.theta == 0.0);
    CHECK(s.model->mass() == doctest::Approx(0.01));
    CHECK(s.model->inertia() == doctest::Approx(1e-4));

    a.eps = 0.5;
    CHECK_THROWS_AS(init_coupled(a), std::invalid_argument);

    a.eps = 0.1;
    a.gamma = 0.0;
    CHECK_FALSE(init_coupled(a).model->warnings.empty());
}

TEST_CASE("force terms")
{
    CoupledInit in;
    in.unit = ellipse_potentials();
    auto rest = init_coupled(in);
    const auto f0 = accelerations(rest);
    CHECK(f0.B.norm() == 0.0);
    CHECK(f0.Ca.norm() < 1e-15);
    CHECK(f0.accel.norm() < 1e-12);

    auto s = init_coupled(annulus_init(ellipse_potentials(), 0.1));
    const auto f = accelerations(s);
    CHECK(f.Cc.norm() < 1e-8);
    CHECK(f.residual < 1e-12 * (f.B + f.C()).norm());
    // force balance
    const Vec3 back = s.model->M * f.accel + f.B + f.C() + f.coriolis;
    CHECK(back.norm() < 1e-10 * std::max(1.0, f.B.norm() + f.C().norm()));

    // blob refinement
    auto fine = init_coupled(annulus_init(ellipse_potentials(), 0.1, 0.125));
    const Vec3 Bc = accelerations(fine).B;
    const Vec3 Bf = accelerations(init_coupled(annulus_init(ellipse_potentials(), 0.1, 0.0625))).B;
    CHECK((Bf - Bc).head<2>().norm() < 0.01 * Bc.head<2>().norm());

    // magnitude of B: eps^2 for translations, eps^3 for rotation (generic shape, x_G != 0)
    const auto base = ShapeSpec::perturbed_disk(1.0, {{2, 0.1, 0.05}, {3, 0.15, 0.0}});
    const auto generic = PotentialSet::compute(ShapeSpec::from_coefficients(base.coefficients(), Vec2(0.2, -0.1)), 128);
    std::vector<double> eps = {0.2, 0.1, 0.05}, b1, b3;
    for (double e : eps) {
        const auto fe = accelerations(init_coupled(annulus_init(generic, e)));
        b1.push_back(std::abs(fe.B[0]));
        b3.push_back(std::abs(fe.B[2]));
    }
    CHECK(slope(eps, b1) > 1.7);
    CHECK(slope(eps, b1) < 2.3);
    CHECK(slope(eps, b3) > 2.6);
}

TEST_CASE("disk with circulation and no vorticity")
{
    CoupledInit in;
    in.unit = disk_potentials();
    in.eps = 0.1;
    in.alpha = 2.0;
    in.gamma = 2 * pi;
    in.ell0 = Vec2(1.0, 0.0);
    auto s = init_coupled(in);
    const auto f = accelerations(s);
    // Kutta-Joukowski lift
    const Vec2 cb = -in.gamma * perp(in.ell0);
    CHECK((f.Cb.head<2>() - cb).norm() < 1e-6 * cb.norm());
    const double M = oracle::disk_mass(0.1, 2.0, 1.0);
    CHECK((f.accel.head<2>() - in.gamma / M * perp(in.ell0)).norm() < 1e-6 * in.gamma / M);

    CHECK(2 * total_energy(s) == doctest::Approx(s.p().dot(s.model->M * s.p())).epsilon(1e-14));

    const double T = 2 * pi * M / in.gamma;
    const int steps = 200;
    const auto end = run(s, T, steps);
    const auto o = oracle::disk_orbit(M, in.gamma, in.ell0, T);
    const double radius = in.ell0.norm() * M / in.gamma;
    CHECK((end.place.h - o.h).norm() < 0.01 * radius);
    CHECK((end.ell - o.ell).norm() < 0.01 * in.ell0.norm());
}

TEST_CASE("disk body keeps its spin")
{
    auto in = annulus_init(disk_potentials(), 0.1);
    in.r0 = 0.7;
    auto s = init_coupled(in);
    double dev = 0;
    for (int k = 0; k < 20; ++k) {
        s = coupled_step(s, 0.002);
        dev = std::max(dev, std::abs(s.r - in.r0));
    }
    CHECK(dev < 1e-10);
}

TEST_CASE("stationary state")
{
    CoupledInit in;
    in.unit = ellipse_potentials();
    auto s = init_coupled(in);
    const auto end = run(s, 1.0, 10);
    CHECK(end.place.h == Vec2::Zero());
    CHECK(end.ell == Vec2::Zero());
    CHECK(end.r == 0.0);
}

TEST_CASE("time integration order and energy")
{
    auto in = annulus_init(ellipse_potentials(), 0.2);
    in.alpha = 1.0;
    const auto s = init_coupled(in);
    const double T = 0.1;
    const auto a = run(s, T, 8);
    const auto b = run(s, T, 16);
    const auto c = run(s, T, 32);
    auto dist = [](const CoupledState& x, const CoupledState& y) {
        double e = (x.place.h - y.place.h).norm() + (x.ell - y.ell).norm() + std::abs(x.r - y.r);
        for (std::size_t j = 0; j < x.omega.size(); ++j)
            e = std::max(e, (x.omega.pos[j] - y.omega.pos[j]).norm());
        return e;
    };
    const double ratio = dist(a, b) / dist(b, c);
    CHECK(ratio > 16 * 0.8);
    CHECK(ratio < 16 * 1.2);

    const double E0 = total_energy(s);
    // coarse steps, where the time error dominates the blob-model floor
    const double da = std::abs(total_energy(a) - E0), db = std::abs(total_energy(b) - E0);
    CHECK(db < 1e-6 * std::abs(E0));
    CHECK(da / db > 10.0);
    CHECK(c.omega.total_circulation() == s.omega.total_circulation());
    CHECK(c.gamma == s.gamma);
}

TEST_CASE("step guards")
{
    auto in = annulus_init(ellipse_potentials(), 0.1);
    auto s = init_coupled(in);
    CHECK_THROWS_AS(coupled_step(s, 0.5), RunAborted);
    try {
        coupled_step(s, 0.5);
    } catch (const RunAborted& e) {
        CHECK(e.reason() == "dt-guard");
    }
    s.omega.pos[0] = Vec2(0.01, 0.0);
    try {
        coupled_step(s, 1e-3);
        CHECK(false);
    } catch (const RunAborted& e) {
        CHECK(e.reason() == "collision");
    }
}

TEST_CASE("lab frame view")
{
    auto in = annulus_init(ellipse_potentials(), 0.1);
    auto s = init_coupled(in);
    const auto id = lab_frame_view(s);
    CHECK(id.w.pos == s.omega.pos);
    CHECK(id.w.frame == Frame::Lab);

    s.place.h = Vec2(0.3, -0.2);
    s.place.theta = 0.9;
    const auto v = lab_frame_view(s);
    for (std::size_t j = 0; j < s.omega.size(); ++j)
        CHECK((s.place.to_body(v.w.pos[j]) - s.omega.pos[j]).norm() < 1e-14);
    CHECK((v.dh - s.place.R() * s.ell).norm() == 0.0);

    const Vec2 K0 = velocity_free_space(s.omega, Vec2::Zero());
    const Vec2 Kh = velocity_free_space(v.w, v.h);
    CHECK((K0 - s.place.R().transpose() * Kh).norm() < 1e-12);

    // DK[w](h) = R DK[omega](0) R^T, against finite differences in the lab frame
    const Mat2 D0 = velocity_gradient(s.omega, Vec2::Zero()).matrix();
    Mat2 fd;
    const double hh = 1e-4;
    for (int c = 0; c < 2; ++c) {
        Vec2 e = Vec2::Zero();
        e[c] = hh;
        fd.col(c) = (velocity_free_space(v.w, v.h + e) - velocity_free_space(v.w, v.h - e)) / (2 * hh);
    }
    CHECK((fd - s.place.R() * D0 * s.place.R().transpose()).norm() < 1e-6);

    // the lab evaluator is the rotated body-frame field
    const Vec2 xl(1.0, 2.5);
    BodyFrameVelocity bf(*s.model->sp, s.omega, s.gamma, s.ell, s.r);
    CHECK((v.u(xl) - s.place.R() * bf.v(s.place.to_body(xl))).norm() < 1e-14);
}
