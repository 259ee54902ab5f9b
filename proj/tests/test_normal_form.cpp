#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "vwlab/normal_form.hpp"

using namespace vwlab;
using std::numbers::pi;

namespace {

PotentialPtr disk_potentials()
{
    static PotentialPtr p = PotentialSet::compute(ShapeSpec::disk(1.0), 128);
    return p;
}

// no symmetry, centroid away from the center of mass
PotentialPtr generic_potentials()
{
    static PotentialPtr p = [] {
        const auto base = ShapeSpec::perturbed_disk(1.0, {{2, 0.1, 0.05}, {3, 0.15, 0.0}});
        return PotentialSet::compute(ShapeSpec::from_coefficients(base.coefficients(), Vec2(0.2, -0.1)), 128);
    }();
    return p;
}

// annulus plus a denser disk, so the flow in the hole is not trivial
CoupledInit frozen_init(PotentialPtr unit, double eps, double spacing = 0.125)
{
    CoupledInit in;
    in.unit = std::move(unit);
    in.eps = eps;
    in.alpha = 2.0;
    in.gamma = 2 * pi;
    PatchSpec ring;
    ring.center = Vec2(0.2, -0.1);
    ring.r_in = 1.0;
    ring.r_out = 2.0;
    PatchSpec blob;
    blob.kind = PatchSpec::Kind::Disk;
    blob.center = Vec2(1.2, 0.9);
    blob.r_out = 0.35;
    blob.density = 3.0;
    in.patches = {ring, blob};
    in.spacing = spacing;
    in.core = 0.15;
    in.ell0 = Vec2(0.5, 0.5);
    in.r0 = 1.0;
    return in;
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

Trajectory record(CoupledState s, double dt, int steps)
{
    Trajectory tr{trajectory_point(s)};
    for (int k = 0; k < steps; ++k) {
        s = coupled_step(s, dt);
        tr.push_back(trajectory_point(s));
    }
    return tr;
}

Trajectory every(const Trajectory& tr, std::size_t k)
{
    Trajectory out;
    for (std::size_t i = 0; i < tr.size(); i += k)
        out.push_back(tr[i]);
    return out;
}

// p~(0) = 0
CoupledState prepared(const CoupledInit& in)
{
    auto s = init_coupled(in);
    const auto m = modulation(s);
    s.ell = m.K0 + in.eps * m.DK0() * s.model->md.xi;
    s.r = 0.0;
    return s;
}

}  // namespace

TEST_CASE("modulation")
{
    CoupledInit in;
    in.unit = generic_potentials();
    in.ell0 = Vec2(0.3, -0.2);
    in.r0 = 0.7;
    const auto empty = modulation(init_coupled(in));
    CHECK(empty.ell_tilde == in.ell0);
    CHECK(empty.a == 0.0);
    CHECK(empty.b == 0.0);
    CHECK(empty.p_tilde[2] == doctest::Approx(0.07));

    // annulus centered on a disk body: symmetric about the origin
    auto sym = frozen_init(disk_potentials(), 0.1);
    sym.patches.resize(1);
    sym.patches[0].center = Vec2::Zero();
    const auto ms = modulation(init_coupled(sym));
    CHECK(ms.valid);
    CHECK(ms.K0.norm() < 1e-12);
    CHECK((ms.ell_tilde - sym.ell0).norm() < 1e-12);

    // eps DK0 xi against a fourth-order difference of K at the origin
    const auto s = init_coupled(frozen_init(generic_potentials(), 0.1));
    const auto m = modulation(s);
    CHECK(m.valid);
    const Vec2 xi = s.model->md.xi;
    const double h = 1e-3;
    auto K = [&](const Vec2& x) { return velocity_free_space(s.omega, x); };
    const Vec2 e = xi.normalized();
    const Vec2 fd = (8 * (K(h * e) - K(-h * e)) - (K(2 * h * e) - K(-2 * h * e))) / (12 * h);
    CHECK((0.1 * xi.norm() * fd - 0.1 * m.DK0() * xi).norm() < 1e-8);
    CHECK((m.ell_tilde - (s.ell - m.K0 - 0.1 * m.DK0() * xi)).norm() == 0.0);
    CHECK(m.p_check.head<2>() == s.ell - m.K0);
    CHECK(m.p_hat.head<2>() == s.ell);

    // a blob near the origin makes DK0 unreliable
    auto close = s;
    close.omega.pos[0] = Vec2(0.5, 0.0);
    CHECK_FALSE(modulation(close).valid);
}

TEST_CASE("structure tensors")
{
    const auto md = generic_potentials()->mass_data(1.0, 1.0);
    const auto st = StructureTensors::from(md);
    CHECK(st.B == Vec3(-md.xi.y(), md.xi.x(), -1.0));

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    double worst = 0;
    for (int k = 0; k < 10000; ++k) {
        const Vec3 p(u(rng), u(rng), u(rng));
        for (Lambda L : {Lambda::G, Lambda::Under, Lambda::A}) {
            const Vec3 q = apply_lambda(st, L, p);
            if (L != Lambda::Under)
                worst = std::max(worst, std::abs(q.dot(p)) / (1 + q.norm() * p.norm()));
        }
    }
    CHECK(worst < 1e-14);

    CHECK(apply_lambda(st, Lambda::G, Vec3(1.0, 2.0, 0.0)).norm() == 0.0);

    // symmetric bilinear forms
    for (Lambda L : {Lambda::G, Lambda::Under, Lambda::A}) {
        const Vec3 p(0.3, -1.2, 0.8), q(1.1, 0.4, -0.5), w(-0.7, 0.2, 1.3);
        CHECK((apply_lambda(st, L, p, q) - apply_lambda(st, L, q, p)).norm() < 1e-14);
        CHECK((apply_lambda(st, L, p, p) - apply_lambda(st, L, p)).norm() < 1e-14);
        const Vec3 lin = apply_lambda(st, L, p, 2.0 * q - 3.0 * w) -
                         (2.0 * apply_lambda(st, L, p, q) - 3.0 * apply_lambda(st, L, p, w));
        CHECK(lin.norm() < 1e-13);
    }

    // cross product is the usual one on (l1, l2, r)
    const Vec3 a(0.3, -1.2, 0.8), b(1.1, 0.4, -0.5);
    CHECK((cross(a, b) - a.cross(b)).norm() < 1e-15);

    // disk: mu = 0 and Lambda_a reduces to Lambda_under
    const auto dst = StructureTensors::from(disk_potentials()->mass_data(1.0, 1.0));
    CHECK(dst.mu.norm() < 1e-8);
    const Vec3 p(0.4, 0.9, -1.7);
    CHECK((apply_lambda(dst, Lambda::A, p) - apply_lambda(dst, Lambda::Under, p)).norm() < 1e-7);
}

TEST_CASE("weakly gyroscopic term")
{
    const auto dmd = disk_potentials()->mass_data(1.0, 1.0);
    ModulationData m;
    m.a = 0.3;
    m.b = -0.2;
    CHECK(weakly_gyroscopic_G(m, dmd).norm() < 1e-9);

    const auto gmd = generic_potentials()->mass_data(1.0, 1.0);
    CHECK(weakly_gyroscopic_G(ModulationData{}, gmd).norm() == 0.0);
    const Vec3 G = weakly_gyroscopic_G(m, gmd);
    CHECK(G[0] == 0.0);
    CHECK(G[1] == 0.0);
    CHECK(G[2] == doctest::Approx(gmd.xi.dot(m.DK0() * gmd.xi) + 0.3 * gmd.eta.x() + 0.2 * gmd.eta.y()));
}

TEST_CASE("expansions at rest")
{
    CoupledInit in;
    in.unit = generic_potentials();
    in.gamma = 2 * pi;
    const auto s = init_coupled(in);
    const auto e = expansion_C(s);
    CHECK(expansion_B(s).norm() == 0.0);
    CHECK(e.Ca.norm() == 0.0);
    CHECK(e.Cb.norm() == 0.0);

    // disk without vorticity: C_b is the lift -gamma l^perp
    CoupledInit d;
    d.unit = disk_potentials();
    d.gamma = 2 * pi;
    d.ell0 = Vec2(0.8, -0.3);
    d.r0 = 0.5;
    const auto sd = init_coupled(d);
    const auto f = accelerations(sd);
    CHECK((expansion_C(sd).Cb - f.Cb).norm() < 1e-6 * f.Cb.norm());
}

TEST_CASE("expansion orders over eps")
{
    const std::vector<double> eps = {0.2, 0.1, 0.05, 0.025};
    std::vector<double> b12, b3, a12, a3, c12, c3, vs;
    for (double e : eps) {
        const auto s = init_coupled(frozen_init(generic_potentials(), e));
        const auto f = accelerations(s);
        const auto x = expansions(s, modulation(s));
        CHECK(f.Cc.norm() < 1e-8);
        const Vec3 dB = f.B - x.B, dA = f.Ca - x.Ca, dC = f.Cb - x.Cb;
        b12.push_back(dB.head<2>().norm());
        b3.push_back(std::abs(dB[2]));
        a12.push_back(dA.head<2>().norm());
        a3.push_back(std::abs(dA[2]));
        c12.push_back(dC.head<2>().norm());
        c3.push_back(std::abs(dC[2]));
        vs.push_back(v_sharp_defect(s));
    }
    for (const auto* y : {&b12, &a12, &c12}) {
        CHECK(slope(eps, *y) > 1.6);
        CHECK(slope(eps, *y) < 2.4);
    }
    for (const auto* y : {&b3, &a3, &c3}) {
        CHECK(slope(eps, *y) > 2.6);
        CHECK(slope(eps, *y) < 3.4);
    }
    CHECK(slope(eps, vs) > 2.1);
    CHECK(slope(eps, vs) < 2.9);
}

TEST_CASE("normal form residual")
{
    // fluid at rest, no circulation, body at rest
    CoupledInit rest;
    rest.unit = generic_potentials();
    const auto r0 = record(init_coupled(rest), 0.01, 8);
    const auto rep0 = normal_form_residual(r0, *init_coupled(rest).model, 0.0);
    for (const auto& F : rep0.F)
        CHECK(F.norm() == 0.0);
    CHECK(rotated_mass_identity_check(r0, *init_coupled(rest).model) == 0.0);

    // stable under dt halving and across eps
    std::vector<double> C;
    for (double e : {0.1, 0.05}) {
        const auto s = prepared(frozen_init(generic_potentials(), e, 0.2));
        const auto tr = record(s, 1e-4, 100);
        const auto fine = normal_form_residual(tr, *s.model, s.gamma);
        const auto coarse = normal_form_residual(every(tr, 2), *s.model, s.gamma);
        CHECK_FALSE(fine.noisy);
        CHECK(coarse.C == doctest::Approx(fine.C).epsilon(0.1));
        C.push_back(fine.C);
        CHECK(fine.C_gyro < 1.0);

        // identity discrepancy falls like dt^2
        const double i1 = rotated_mass_identity_check(tr, *s.model);
        const double i2 = rotated_mass_identity_check(every(tr, 2), *s.model);
        CHECK(i2 / i1 > 3.2);
        CHECK(i2 / i1 < 4.8);
    }
    CHECK(C[1] == doctest::Approx(C[0]).epsilon(0.25));

    Trajectory bad = record(init_coupled(rest), 0.01, 6);
    bad[3].t += 0.001;
    CHECK_THROWS_AS(normal_form_residual(bad, *init_coupled(rest).model, 0.0), std::invalid_argument);
}

TEST_CASE("rotated mass identity on a spinning disk")
{
    CoupledInit in;
    in.unit = disk_potentials();
    in.eps = 0.1;
    in.r0 = 2.0;
    const auto s = init_coupled(in);
    const auto tr = record(s, 1e-3, 40);
    const double e1 = rotated_mass_identity_check(tr, *s.model);
    const double e2 = rotated_mass_identity_check(every(tr, 2), *s.model);
    CHECK(e1 < 1e-10);
    CHECK(e2 <= 4.5 * e1 + 1e-15);
}
