#include "vwlab/normal_form.hpp"

#include <cmath>
#include <stdexcept>

namespace vwlab {

ModulationData modulation(const CoupledState& s)
{
    ModulationData m;
    const double eps = s.model->eps;
    m.K0 = velocity_free_space(s.omega, Vec2::Zero());
    const GradientSample g = velocity_gradient(s.omega, Vec2::Zero());
    m.a = g.a;
    m.b = g.b;
    m.valid = g.valid;
    m.ell_tilde = s.ell - m.K0 - eps * m.DK0() * s.model->md.xi;
    m.p_tilde = Vec3(m.ell_tilde.x(), m.ell_tilde.y(), eps * s.r);
    m.p_hat = Vec3(s.ell.x(), s.ell.y(), eps * s.r);
    m.p_check = Vec3(s.ell.x() - m.K0.x(), s.ell.y() - m.K0.y(), eps * s.r);
    return m;
}

Vec3 cross(const Vec3& pa, const Vec3& pb)
{
    const Vec2 la = pa.head<2>(), lb = pb.head<2>();
    const Vec2 top = pa[2] * perp(lb) - pb[2] * perp(la);
    return Vec3(top.x(), top.y(), perp(la).dot(lb));
}

StructureTensors StructureTensors::from(const MassData& md)
{
    StructureTensors st;
    st.m1 = md.m1;
    st.Mg = md.Mg();
    st.Ma = md.Ma();
    st.Mflat = md.Mflat();
    st.mu = md.mu();
    st.mu_hat = md.mu_hat();
    st.mu_check = md.mu_check();
    const Vec2 xp = perp(md.xi);
    st.B = Vec3(xp.x(), xp.y(), -1.0);
    return st;
}

Vec3 apply_lambda(const StructureTensors& st, Lambda which, const Vec3& p)
{
    const Vec2 l = p.head<2>();
    const double r = p[2];
    if (which == Lambda::G) {
        const Vec2 v = st.m1 * r * perp(l);
        return Vec3(v.x(), v.y(), 0.0);
    }
    const Vec2 Ml = st.Mflat * l;
    const Vec2 top = r * perp(Ml);
    Vec3 out(top.x(), top.y(), perp(l).dot(Ml));
    if (which == Lambda::A)
        out += r * cross(p, st.mu);
    return out;
}

Vec3 apply_lambda(const StructureTensors& st, Lambda which, const Vec3& p, const Vec3& q)
{
    return 0.25 * (apply_lambda(st, which, p + q) - apply_lambda(st, which, p - q));
}

Vec3 weakly_gyroscopic_G(const ModulationData& m, const MassData& md)
{
    const Vec2& xi = md.xi;
    return Vec3(0.0, 0.0, xi.dot(m.DK0() * xi) + m.a * md.eta.x() - m.b * md.eta.y());
}

Vec3 F_under(const ModulationData& m, const StructureTensors& st)
{
    Vec3 f = cross(m.p_hat, m.a * st.mu_hat + m.b * st.mu_check);
    const double c = (st.Mflat(0, 0) - st.Mflat(1, 1)) * m.b + 2 * st.Mflat(0, 1) * m.a;
    const Vec2 l = m.p_hat.head<2>();
    f.head<2>() -= c * perp(l);
    return f;
}

Expansion expansions(const CoupledState& s, const ModulationData& md)
{
    const CoupledModel& model = *s.model;
    const double eps = model.eps;
    // 1-based m_ij at scale eps
    auto M = [&](int i, int j) { return model.md.mij(i - 1, j - 1, eps); };
    const MomentSet mo = model.md.moments.scaled(eps);
    const double S = mo.area, xg1 = mo.xg.x(), xg2 = mo.xg.y(), m6 = mo.m6, m7 = mo.m7;
    const Vec2 K = md.K0;
    const double a = md.a, b = md.b, r = s.r;
    const double l1 = s.ell.x(), l2 = s.ell.y();
    Mat2 Mf;
    Mf << M(1, 1), M(1, 2), M(2, 1), M(2, 2);

    Expansion e;

    // B, translation block
    Vec2 B12 = r * (Mf + S * Mat2::Identity()) * perp(K);
    B12 -= l1 * Vec2(-(M(1, 1) + S) * a + M(1, 2) * b, -M(2, 1) * a + (M(2, 2) + S) * b);
    B12 -= l2 * Vec2(M(1, 2) * a + (M(1, 1) + S) * b, (M(2, 2) + S) * a + M(2, 1) * b);
    B12 -= 2 * r * a * Vec2(M(1, 5) + S * xg2, M(2, 5) + S * xg1);
    B12 -= 2 * r * b * Vec2(-M(1, 4) + S * xg1, -M(2, 4) - S * xg2);
    // B, torque
    double B3 = r * (Vec2(M(3, 2), -M(3, 1)) + S * mo.xg).dot(K);
    B3 -= l1 * ((-M(3, 1) + S * xg2) * a + (M(3, 2) + S * xg1) * b);
    B3 -= l2 * ((M(3, 2) + S * xg1) * a + (M(3, 1) - S * xg2) * b);
    B3 += -2 * r * a * (M(3, 5) + m6) + 2 * r * b * (M(3, 4) + m7);
    e.B = Vec3(B12.x(), B12.y(), B3);

    // C_a
    const Vec2 d = K - s.ell;
    Vec2 C12 = r * r * Vec2(-M(3, 2), M(3, 1)) - r * perp(Vec2(Mf * d + S * K));
    C12 -= l1 * Vec2((M(1, 1) + S) * a - M(1, 2) * b, -M(1, 2) * a - (M(1, 1) + S) * b);
    C12 -= l2 * Vec2(M(2, 1) * a - (M(2, 2) + S) * b, -(M(2, 2) + S) * a - M(2, 1) * b);
    C12 += a * r * Vec2(-M(3, 1) + M(4, 2) + 2 * S * xg2, M(3, 2) - M(4, 1) + 2 * S * xg1);
    C12 += b * r * Vec2(M(3, 2) + M(5, 2) + 2 * S * xg1, M(3, 1) - M(5, 1) - 2 * S * xg2);
    double C3 = perp(d).dot(Mf * d) + r * d.dot(Vec2(-M(3, 2), M(3, 1))) - r * S * K.dot(mo.xg);
    C3 += l1 * (a * (-M(4, 2) + S * xg2 + 2 * M(1, 5)) + b * (-M(5, 2) + S * xg1 - 2 * M(1, 4)));
    C3 += l2 * (a * (M(4, 1) + S * xg1 + 2 * M(2, 5)) + b * (M(5, 1) - S * xg2 - 2 * M(2, 4)));
    C3 += 2 * r * a * (M(3, 5) + m6) - 2 * r * b * (M(3, 4) + m7);
    e.Ca = Vec3(C12.x(), C12.y(), C3);

    // C_b
    const double g = s.gamma;
    const Vec2& xi = model.md.xi;
    const Vec2& eta = model.md.eta;
    const Vec2 cb = g * perp(d) + g * eps * r * xi + g * eps * perp(Vec2(md.DK0() * xi));
    e.Cb = Vec3(cb.x(), cb.y(), g * eps * xi.dot(d) + g * eps * eps * (-a * eta.x() + b * eta.y()));
    return e;
}

Vec3 expansion_B(const CoupledState& s) { return expansions(s, modulation(s)).B; }

Expansion expansion_C(const CoupledState& s)
{
    Expansion e = expansions(s, modulation(s));
    e.B.setZero();
    return e;
}

Vec2 v_sharp_boundary(const CoupledState& s, const ModulationData& m, int j)
{
    const ScaledPotentials& sp = *s.model->sp;
    const Vec2 x = sp.node(j);
    const Vec2 d = s.ell - m.K0;
    return m.K0 + m.DK0() * x + d.x() * sp.grad_phi_boundary(0, j) + d.y() * sp.grad_phi_boundary(1, j) -
           m.a * sp.grad_phi_boundary(3, j) - m.b * sp.grad_phi_boundary(4, j);
}

double v_sharp_defect(const CoupledState& s)
{
    const ScaledPotentials& sp = *s.model->sp;
    const ModulationData m = modulation(s);
    BodyFrameVelocity bf(sp, s.omega, s.gamma, s.ell, s.r);
    double acc = 0;
    for (int j = 0; j < sp.size(); ++j) {
        const Vec2 e = v_sharp_boundary(s, m, j) + s.r * sp.grad_phi_boundary(2, j) - bf.v_tilde_boundary(j);
        acc += sp.weight(j) * e.squaredNorm();
    }
    return std::sqrt(acc);
}

TrajectoryPoint trajectory_point(const CoupledState& s)
{
    return {s.t, s.place.theta, s.r, modulation(s)};
}

namespace {

double step_of(const Trajectory& tr)
{
    if (tr.size() < 5)
        throw std::invalid_argument("trajectory needs at least five samples");
    const double dt = tr[1].t - tr[0].t;
    for (std::size_t k = 1; k < tr.size(); ++k)
        if (std::abs(tr[k].t - tr[k - 1].t - dt) > 1e-9 * std::max(1.0, std::abs(tr[k].t)))
            throw std::invalid_argument("trajectory sampling is not uniform");
    return dt;
}

Vec3 implied_F(const Trajectory& tr, std::size_t k, int w, double dt, const CoupledModel& model,
               const StructureTensors& st, double gamma)
{
    const double eps = model.eps, al = model.alpha;
    const Vec3& p = tr[k].mod.p_tilde;
    const Vec3 dp = (tr[k + w].mod.p_tilde - tr[k - w].mod.p_tilde) / (2 * w * dt);
    const Vec3 lhs = (std::pow(eps, al) * st.Mg + eps * eps * st.Ma) * dp +
                     std::pow(eps, al - 1) * apply_lambda(st, Lambda::G, p) +
                     eps * apply_lambda(st, Lambda::A, p);
    const Vec3 rhs = gamma * cross(p, st.B) + eps * gamma * weakly_gyroscopic_G(tr[k].mod, model.md);
    return (lhs - rhs) / std::pow(eps, std::min(al, 2.0));
}

}  // namespace

ResidualReport normal_form_residual(const Trajectory& tr, const CoupledModel& model, double gamma)
{
    const double dt = step_of(tr);
    const double eps = model.eps;
    const StructureTensors st = StructureTensors::from(model.md);
    ResidualReport rep;
    const std::size_t n = tr.size();
    for (std::size_t k = 1; k + 1 < n; ++k) {
        const Vec3 F = implied_F(tr, k, 1, dt, model, st, gamma);
        const double p = tr[k].mod.p_tilde.norm();
        const double w = 1 + p + eps * p * p;
        rep.t.push_back(tr[k].t);
        rep.F.push_back(F);
        rep.weight.push_back(w);
        rep.C = std::max(rep.C, F.norm() / w);
        if (k >= 2 && k + 2 < n) {
            const Vec3 Fc = implied_F(tr, k, 2, dt, model, st, gamma);
            rep.C_coarse = std::max(rep.C_coarse, Fc.norm() / w);
        }
        const Vec2 q0 = tr[k - 1].mod.K0 + eps * tr[k - 1].mod.DK0() * model.md.xi;
        const Vec2 q1 = tr[k + 1].mod.K0 + eps * tr[k + 1].mod.DK0() * model.md.xi;
        const Vec2 dq = (q1 - q0) / (2 * dt) + tr[k].r * perp(tr[k].mod.K0);
        rep.C_modulation = std::max(rep.C_modulation, dq.norm() / (1 + p));
    }
    rep.noisy = std::abs(rep.C - rep.C_coarse) > 0.1 * std::max(rep.C, 1e-300);

    // trapezoid integrals of p~.G and |p~|^2
    double work = 0, energy = 0;
    auto pg = [&](std::size_t k) { return tr[k].mod.p_tilde.dot(weakly_gyroscopic_G(tr[k].mod, model.md)); };
    for (std::size_t k = 1; k < n; ++k) {
        work += 0.5 * dt * (pg(k - 1) + pg(k));
        energy += 0.5 * dt * (tr[k - 1].mod.p_tilde.squaredNorm() + tr[k].mod.p_tilde.squaredNorm());
        const double t = tr[k].t - tr[0].t;
        rep.C_gyro = std::max(rep.C_gyro, std::abs(work) / (eps * (1 + t + energy)));
    }
    return rep;
}

double rotated_mass_identity_check(const Trajectory& tr, const CoupledModel& model)
{
    const double dt = step_of(tr);
    const double eps = model.eps, al = model.alpha;
    const StructureTensors st = StructureTensors::from(model.md);
    const Mat3 Mtot = std::pow(eps, al) * st.Mg + eps * eps * st.Ma;
    auto Q = [&](std::size_t k) {
        Placement pl;
        pl.theta = tr[k].theta;
        return pl.Q();
    };
    auto X = [&](std::size_t k) -> Vec2 {
        const Mat3 q = Q(k);
        return ((std::pow(eps, al) * st.Mg * q + eps * eps * q * st.Ma) * tr[k].mod.p_tilde).head<2>();
    };
    double err = 0;
    for (std::size_t k = 1; k + 1 < tr.size(); ++k) {
        const Vec3& p = tr[k].mod.p_tilde;
        const Vec3 dp = (tr[k + 1].mod.p_tilde - tr[k - 1].mod.p_tilde) / (2 * dt);
        const Vec3 inner = Mtot * dp + std::pow(eps, al - 1) * apply_lambda(st, Lambda::G, p) +
                           eps * apply_lambda(st, Lambda::A, p);
        const Vec2 lhs = (Q(k) * inner).head<2>();
        const Vec2 rhs = (X(k + 1) - X(k - 1)) / (2 * dt);
        err = std::max(err, (lhs - rhs).norm());
    }
    return err;
}

}  // namespace vwlab
