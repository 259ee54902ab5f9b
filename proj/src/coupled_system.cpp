#include "vwlab/coupled_system.hpp"

#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "vwlab/limit_system.hpp"
#include "vwlab/parallel.hpp"

namespace vwlab {

double CoupledModel::mass() const { return std::pow(eps, alpha) * m1; }
double CoupledModel::inertia() const { return std::pow(eps, alpha + 2) * J1; }

ModelPtr make_model(PotentialPtr unit, double eps, double alpha, double m1, double J1)
{
    if (!(eps > 0) || !(m1 > 0) || !(J1 > 0))
        throw std::invalid_argument("eps, m1 and J1 must be positive");
    auto m = std::make_shared<CoupledModel>();
    m->md = unit->mass_data(m1, J1);
    m->sp = std::make_shared<ScaledPotentials>(std::move(unit), eps);
    m->eps = eps;
    m->alpha = alpha;
    m->m1 = m1;
    m->J1 = J1;
    m->M = m->md.total_mass(eps, alpha);
    m->M_ldlt.compute(m->M);
    if (m->M_ldlt.info() != Eigen::Success || !(m->M_ldlt.vectorD().minCoeff() > 0))
        throw std::runtime_error("inertia matrix is not positive definite");
    return m;
}

CoupledState init_coupled(const CoupledInit& in)
{
    auto model = make_model(in.unit, in.eps, in.alpha, in.m1, in.J1);
    CoupledState s;
    s.gamma = in.gamma;
    s.ell = in.ell0;
    s.r = in.r0;
    if (!in.patches.empty())
        s.omega = fill_patches(in.patches, in.spacing, in.core, Frame::Body);
    else
        s.omega.core = in.core;
    const double body = in.eps * model->sp->unit().mesh()->shape().circumradius();
    double inner = std::numeric_limits<double>::infinity();
    for (const auto& x : s.omega.pos)
        inner = std::min(inner, x.norm());
    if (!(body <= 0.5 * inner))
        throw std::invalid_argument(
            fmt::format("body radius {:.4g} exceeds half the inner support radius {:.4g}", body, inner));
    auto m = std::const_pointer_cast<CoupledModel>(model);
    if (in.gamma == 0.0)
        m->warnings.push_back("gamma = 0: outside the regime of the point-vortex limit");
    s.model = model;
    return s;
}

Vec3 force_B(const CoupledState& s, const BodyFrameVelocity& bf)
{
    Vec3 B = Vec3::Zero();
    const auto& smp = bf.blob_samples();
    for (std::size_t j = 0; j < s.omega.size(); ++j) {
        const Vec2 x = s.omega.pos[j];
        const Vec2 rel = perp(Vec2(smp[j].v - s.ell - s.r * perp(x)));
        for (int i = 0; i < 3; ++i)
            B[i] += s.omega.circ[j] * rel.dot(smp[j].grad_phi[i]);
    }
    return B;
}

void force_C(const CoupledState& s, const BodyFrameVelocity& bf, Vec3& Ca, Vec3& Cb, Vec3& Cc)
{
    const ScaledPotentials& sp = *s.model->sp;
    Ca.setZero();
    Cb.setZero();
    Cc.setZero();
    for (int j = 0; j < sp.size(); ++j) {
        const Vec2 x = sp.node(j);
        const Vec2 vt = bf.v_tilde_boundary(j);
        const Vec2 H = sp.H_boundary(j);
        const Vec2 rigid = s.ell + s.r * perp(x);
        const double a = 0.5 * vt.squaredNorm() - rigid.dot(vt);
        const double b = s.gamma * (vt - rigid).dot(H);
        const double c = 0.5 * s.gamma * s.gamma * H.squaredNorm();
        const double w = sp.weight(j);
        for (int i = 0; i < 3; ++i) {
            const double K = sp.kirchhoff(i, j) * w;
            Ca[i] += a * K;
            Cb[i] += b * K;
            Cc[i] += c * K;
        }
    }
}

ForceBreakdown accelerations(const CoupledState& s, const BodyFrameVelocity& bf)
{
    ForceBreakdown f;
    f.B = force_B(s, bf);
    force_C(s, bf, f.Ca, f.Cb, f.Cc);
    const Vec2 cor = s.model->mass() * s.r * perp(s.ell);
    f.coriolis = Vec3(cor.x(), cor.y(), 0.0);
    const Vec3 rhs = -f.B - f.C() - f.coriolis;
    f.accel = s.model->M_ldlt.solve(rhs);
    f.residual = (s.model->M * f.accel - rhs).norm();
    return f;
}

ForceBreakdown accelerations(const CoupledState& s)
{
    BodyFrameVelocity bf(*s.model->sp, s.omega, s.gamma, s.ell, s.r);
    return accelerations(s, bf);
}

CoupledDerivative coupled_rhs(const CoupledState& s)
{
    CoupledDerivative d;
    try {
        BodyFrameVelocity bf(*s.model->sp, s.omega, s.gamma, s.ell, s.r);
        d.forces = accelerations(s, bf);
        const auto& smp = bf.blob_samples();
        d.dX.resize(s.omega.size());
        for (std::size_t j = 0; j < s.omega.size(); ++j)
            d.dX[j] = smp[j].v - s.ell - s.r * perp(s.omega.pos[j]);
    } catch (const std::domain_error& e) {
        throw RunAborted("collision", e.what());
    }
    d.dell = d.forces.accel.head<2>();
    d.dr = d.forces.accel[2];
    d.dtheta = s.r;
    d.dh = s.place.R() * s.ell;
    return d;
}

namespace {

CoupledState advance(const CoupledState& s, const CoupledDerivative& d, double c)
{
    CoupledState y = s;
    for (std::size_t j = 0; j < y.omega.size(); ++j)
        y.omega.pos[j] += c * d.dX[j];
    y.ell += c * d.dell;
    y.r += c * d.dr;
    y.place.theta += c * d.dtheta;
    y.place.h += c * d.dh;
    return y;
}

}  // namespace

CoupledState coupled_step(const CoupledState& s, double dt)
{
    if (!(dt > 0))
        throw std::invalid_argument("time step must be positive");
    const auto k1 = coupled_rhs(s);
    if (!s.omega.empty()) {
        const ScaledPotentials& sp = *s.model->sp;
        double vmax = 0, dmin = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < s.omega.size(); ++j) {
            vmax = std::max(vmax, k1.dX[j].norm());
            dmin = std::min(dmin, sp.distance_to(s.omega.pos[j]));
        }
        if (dt * vmax >= 0.2 * dmin)
            throw RunAborted("dt-guard",
                             fmt::format("dt*max|v| = {:.3g} exceeds 0.2 * blob-body distance {:.3g}",
                                         dt * vmax, dmin));
    }
    const auto k2 = coupled_rhs(advance(s, k1, dt / 2));
    const auto k3 = coupled_rhs(advance(s, k2, dt / 2));
    const auto k4 = coupled_rhs(advance(s, k3, dt));
    CoupledState out = s;
    for (std::size_t j = 0; j < out.omega.size(); ++j)
        out.omega.pos[j] += dt / 6 * (k1.dX[j] + 2 * k2.dX[j] + 2 * k3.dX[j] + k4.dX[j]);
    out.ell += dt / 6 * (k1.dell + 2 * k2.dell + 2 * k3.dell + k4.dell);
    out.r += dt / 6 * (k1.dr + 2 * k2.dr + 2 * k3.dr + k4.dr);
    out.place.theta += dt / 6 * (k1.dtheta + 2 * k2.dtheta + 2 * k3.dtheta + k4.dtheta);
    out.place.h += dt / 6 * (k1.dh + 2 * k2.dh + 2 * k3.dh + k4.dh);
    out.t = s.t + dt;
    for (const auto& x : out.omega.pos)
        if (s.model->sp->inside(x))
            throw RunAborted("collision", "vortex blob inside the body after the step");
    return out;
}

double total_energy(const CoupledState& s)
{
    const Vec3 p = s.p();
    double twoH = p.dot(s.model->M * p);
    const BlobField& w = s.omega;
    if (w.empty())
        return 0.5 * twoH;
    const ScaledPotentials& sp = *s.model->sp;
    const PotentialSet& unit = sp.unit();

    const int nb = sp.size();
    Eigen::VectorXd f(nb);
    for (int j = 0; j < nb; ++j)
        f[j] = stream_free_space(w, sp.node(j));
    double c = 0;
    LayerField U(unit.mesh(), unit.operators().dirichlet_density(f, c));

    const std::size_t n = w.size();
    std::vector<double> term(n);
    parallel_for(n, [&](std::size_t i) {
        double psi = 0;
        for (std::size_t j = 0; j < n; ++j)
            psi += w.circ[j] * blob_stream((w.pos[i] - w.pos[j]).squaredNorm(), w.core);
        const double u = U.potential(w.pos[i] / sp.eps()) + c;
        term[i] = w.circ[i] * (psi - u);
    });
    double pair = 0, ring = 0;
    for (std::size_t i = 0; i < n; ++i) {
        pair += term[i];
        ring += w.circ[i] * sp.psi_H(w.pos[i]);
    }
    const double beta = w.total_circulation();
    twoH -= pair + beta * ring + 2 * s.gamma * ring;
    return 0.5 * twoH;
}

LabView lab_frame_view(const CoupledState& s)
{
    LabView v;
    v.h = s.place.h;
    v.theta = s.place.theta;
    v.dh = s.place.R() * s.ell;
    v.w = s.omega;
    v.w.frame = Frame::Lab;
    for (auto& x : v.w.pos)
        x = s.place.to_lab(x);
    auto keep = std::make_shared<CoupledState>(s);
    auto bf = std::make_shared<BodyFrameVelocity>(*keep->model->sp, keep->omega, keep->gamma,
                                                  keep->ell, keep->r);
    const Placement pl = s.place;
    v.u = [keep, bf, pl](const Vec2& x) -> Vec2 { return pl.R() * bf->v(pl.to_body(x)); };
    return v;
}

CoupledSample coupled_sample(const CoupledState& s, bool with_energy)
{
    const auto [lo, hi] = support_annulus(s.omega, Vec2::Zero());
    return {s.t,
            s.place.h,
            s.place.theta,
            s.ell,
            s.r,
            with_energy ? total_energy(s) : std::numeric_limits<double>::quiet_NaN(),
            s.gamma,
            lo,
            hi};
}

void write_coupled_csv(const std::string& path, const std::vector<CoupledSample>& rows)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << "t,h1,h2,theta,l1,l2,r,energy,gamma,rho_min,rho_max\n";
    for (const auto& r : rows)
        out << fmt::format("{:.10g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                           r.t, r.h.x(), r.h.y(), r.theta, r.ell.x(), r.ell.y(), r.r, r.energy,
                           r.gamma, r.rho_min, r.rho_max);
}

}  // namespace vwlab
