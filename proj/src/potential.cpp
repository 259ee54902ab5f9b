#include "vwlab/potential.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

namespace vwlab {

namespace {

constexpr double kInv2Pi = 0.5 / M_PI;
constexpr int kFarTerms = 64;

Eigen::MatrixXd kress_single_layer(const BoundaryMesh& mesh)
{
    const int N = mesh.size(), n = N / 2;
    const double h = mesh.param_step();
    std::vector<double> R(N);
    for (int d = 0; d < N; ++d) {
        double s = 0;
        for (int m = 1; m < n; ++m)
            s += std::cos(m * d * h) / m;
        R[d] = -2.0 * M_PI / n * s - M_PI / (double(n) * n) * std::cos(n * d * h);
    }
    Eigen::MatrixXd S(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            double smooth;
            if (i == j) {
                smooth = std::log(mesh.speeds()[i]);
            } else {
                const double sn = std::sin(0.5 * (i - j) * h);
                smooth = std::log((mesh.nodes()[i] - mesh.nodes()[j]).norm()) -
                         0.5 * std::log(4.0 * sn * sn);
            }
            const int d = (i - j + N) % N;
            S(i, j) = kInv2Pi * (0.5 * R[d] + h * smooth) * mesh.speeds()[j];
        }
    return S;
}

Eigen::MatrixXd trace_matrix(const BoundaryMesh& mesh)
{
    const int N = mesh.size();
    Eigen::MatrixXd A(N, N);
    for (int i = 0; i < N; ++i) {
        const Vec2 nu = -mesh.normals()[i];
        for (int j = 0; j < N; ++j) {
            if (i == j) {
                A(i, j) = 0.5 + kInv2Pi * 0.5 * mesh.curvatures()[i] * mesh.weights()[i];
            } else {
                const Vec2 d = mesh.nodes()[i] - mesh.nodes()[j];
                A(i, j) = kInv2Pi * d.dot(nu) / d.squaredNorm() * mesh.weights()[j];
            }
        }
    }
    return A;
}

Eigen::MatrixXd bordered(const Eigen::MatrixXd& A, const BoundaryMesh& mesh)
{
    const int N = mesh.size();
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(N + 1, N + 1);
    B.topLeftCorner(N, N) = A;
    B.col(N).head(N).setOnes();
    for (int j = 0; j < N; ++j)
        B(N, j) = mesh.weights()[j];
    return B;
}

}  // namespace

LayerOperators::LayerOperators(MeshPtr mesh) : mesh_(std::move(mesh))
{
    S_ = kress_single_layer(*mesh_);
    A_ = trace_matrix(*mesh_);
    neumann_lu_.compute(bordered(A_, *mesh_));
    dirichlet_lu_.compute(bordered(S_, *mesh_));
    const double rc = 1.0 / neumann_lu_.rcond(), rd = 1.0 / dirichlet_lu_.rcond();
    if (!std::isfinite(rc) || !std::isfinite(rd) || rc > 1e13 || rd > 1e13)
        throw std::runtime_error("singular boundary integral system (degenerate mesh)");
}

Eigen::VectorXd LayerOperators::neumann_density(const Eigen::VectorXd& g) const
{
    const int N = mesh_->size();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N + 1);
    rhs.head(N) = -g;
    return neumann_lu_.solve(rhs).head(N);
}

Eigen::VectorXd LayerOperators::dirichlet_density(const Eigen::VectorXd& f, double& c) const
{
    const int N = mesh_->size();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N + 1);
    rhs.head(N) = f;
    Eigen::VectorXd x = dirichlet_lu_.solve(rhs);
    c = x[N];
    return x.head(N);
}

Eigen::VectorXd LayerOperators::equilibrium_density(double& c) const
{
    const int N = mesh_->size();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N + 1);
    rhs[N] = 1.0;
    Eigen::VectorXd x = dirichlet_lu_.solve(rhs);
    c = -x[N];
    return x.head(N);
}

LayerField::LayerField(MeshPtr mesh, Eigen::VectorXd density)
    : mesh_(std::move(mesh)), density_(std::move(density))
{
    mass_.resize(mesh_->size());
    for (int j = 0; j < mesh_->size(); ++j)
        mass_[j] = density_[j] * mesh_->weights()[j];
    panel_ = mesh_->max_panel();
    for (const auto& y : mesh_->nodes())
        reach_ = std::max(reach_, y.norm());
    moments_.assign(kFarTerms + 1, cplx(0.0));
    for (int j = 0; j < mesh_->size(); ++j) {
        const cplx z = mesh_->z()[j];
        cplx p = mass_[j];
        for (int k = 0; k <= kFarTerms; ++k) {
            moments_[k] += p;
            p *= z;
        }
    }
}

int LayerField::far_terms(const Vec2& x) const
{
    const double q = reach_ / x.norm();
    if (!(q < 0.5))
        return 0;
    return std::min(kFarTerms, static_cast<int>(std::ceil(-36.8 / std::log(q))) + 1);
}

int LayerField::factor_for(const Vec2& x) const
{
    if (x.norm() - reach_ > 5.0 * panel_)
        return 1;
    const double d = mesh_->distance_to(x);
    int f = 1;
    while (f < 64 && 5.0 * panel_ / f > d)
        f *= 2;
    return f;
}

const LayerField::Fine& LayerField::refined(int factor) const
{
    std::lock_guard<std::mutex> lock(*mutex_);
    auto it = fine_->find(factor);
    if (it != fine_->end())
        return it->second;
    const int N = mesh_->size(), M = N * factor;
    // trigonometric interpolation of the nodal density
    std::vector<cplx> coef(N);
    for (int k = 0; k < N; ++k) {
        cplx s = 0;
        for (int j = 0; j < N; ++j)
            s += density_[j] * std::polar(1.0, -2.0 * M_PI * double(k) * j / N);
        coef[k] = s / double(N);
    }
    Fine fine;
    fine.nodes.resize(M);
    fine.mass.resize(M);
    const double h = 2.0 * M_PI / M;
    for (int m = 0; m < M; ++m) {
        const double t = m * h;
        double sigma = coef[0].real();
        for (int k = 1; k < N / 2; ++k)
            sigma += 2.0 * (coef[k] * std::polar(1.0, k * t)).real();
        sigma += coef[N / 2].real() * std::cos(0.5 * N * t);
        fine.nodes[m] = to_vec(mesh_->shape().point(t));
        fine.mass[m] = sigma * std::abs(mesh_->shape().derivative(t)) * h;
    }
    return fine_->emplace(factor, std::move(fine)).first->second;
}

double LayerField::potential(const Vec2& x) const
{
    if (const int P = far_terms(x)) {
        const cplx z = to_complex(x), iz = 1.0 / z;
        cplx w = iz, s = 0;
        for (int k = 1; k < P; ++k) {
            s += moments_[k] * w / double(k);
            w *= iz;
        }
        return kInv2Pi * (moments_[0].real() * std::log(std::abs(z)) - s.real());
    }
    const int f = factor_for(x);
    const std::vector<Vec2>* nodes = &mesh_->nodes();
    const std::vector<double>* mass = &mass_;
    if (f > 1) {
        const Fine& fine = refined(f);
        nodes = &fine.nodes;
        mass = &fine.mass;
    }
    double s = 0;
    for (std::size_t j = 0; j < nodes->size(); ++j)
        s += 0.5 * std::log(((*nodes)[j] - x).squaredNorm()) * (*mass)[j];
    return kInv2Pi * s;
}

Vec2 LayerField::gradient(const Vec2& x) const
{
    if (const int P = far_terms(x)) {
        const cplx iz = 1.0 / to_complex(x);
        cplx w = iz, s = 0;
        for (int k = 0; k < P; ++k) {
            s += moments_[k] * w;
            w *= iz;
        }
        return kInv2Pi * Vec2(s.real(), -s.imag());
    }
    const int f = factor_for(x);
    const std::vector<Vec2>* nodes = &mesh_->nodes();
    const std::vector<double>* mass = &mass_;
    if (f > 1) {
        const Fine& fine = refined(f);
        nodes = &fine.nodes;
        mass = &fine.mass;
    }
    Vec2 g = Vec2::Zero();
    for (std::size_t j = 0; j < nodes->size(); ++j) {
        const Vec2 d = x - (*nodes)[j];
        g += d / d.squaredNorm() * (*mass)[j];
    }
    return kInv2Pi * g;
}

NeumannSolution::NeumannSolution(const LayerOperators& ops, const Eigen::VectorXd& g)
    : NeumannSolution(ops, g, ops.neumann_density(g))
{
}

NeumannSolution::NeumannSolution(const LayerOperators& ops, const Eigen::VectorXd& g,
                                 const Eigen::VectorXd& density)
    : layer_(ops.mesh(), density), data_(g)
{
    finish(ops);
}

void NeumannSolution::finish(const LayerOperators& ops)
{
    const BoundaryMesh& mesh = *ops.mesh();
    phi_b_ = ops.single_layer() * layer_.density();
    const Eigen::VectorXd dphi = mesh.tangential_derivative(phi_b_);
    grad_b_.resize(mesh.size());
    for (int j = 0; j < mesh.size(); ++j)
        grad_b_[j] = dphi[j] * mesh.tangents()[j] + data_[j] * mesh.normals()[j];
    residual_ = (ops.trace_operator() * layer_.density() + data_).cwiseAbs().maxCoeff();
}

NeumannSolution solve_exterior_neumann(const LayerOperators& ops, const Eigen::VectorXd& g,
                                       bool check_compatibility)
{
    const BoundaryMesh& mesh = *ops.mesh();
    if (g.size() != mesh.size())
        throw std::invalid_argument("Neumann data must be sampled at every node");
    double flux = 0, mag = 0;
    for (int j = 0; j < mesh.size(); ++j) {
        flux += g[j] * mesh.weights()[j];
        mag += std::abs(g[j]) * mesh.weights()[j];
    }
    if (check_compatibility && std::abs(flux) > 1e-10 * std::max(1.0, mag))
        throw std::invalid_argument(fmt::format("incompatible Neumann data: flux {:.3e}", flux));
    if (!check_compatibility) {
        Eigen::VectorXd gc = g.array() - flux / mesh.perimeter();
        return NeumannSolution(ops, gc);
    }
    return NeumannSolution(ops, g);
}

HarmonicField::HarmonicField(const LayerOperators& ops)
{
    double c = 0;
    Eigen::VectorXd sigma = ops.equilibrium_density(c);
    *this = HarmonicField(ops, sigma, c);
}

HarmonicField::HarmonicField(const LayerOperators& ops, const Eigen::VectorXd& density, double c)
    : layer_(ops.mesh(), density), c_(c)
{
    const BoundaryMesh& mesh = *ops.mesh();
    // Psi_H is constant on the boundary so the interior trace vanishes and H = sigma tau
    h_b_.resize(mesh.size());
    for (int j = 0; j < mesh.size(); ++j)
        h_b_[j] = density[j] * mesh.tangents()[j];
}

Mat3 MassData::Mg() const
{
    return Vec3(m1, m1, J1).asDiagonal();
}

Vec3 MassData::mu() const
{
    return Vec3(m(0, 2), m(1, 2), 0.0);
}

Vec3 MassData::mu_hat() const
{
    return Vec3(2 * m(1, 4) - m(2, 1) + m(0, 3), -2 * m(0, 4) - m(2, 0) + m(3, 1), 0.0);
}

Vec3 MassData::mu_check() const
{
    return Vec3(-2 * m(1, 3) - m(2, 0) + m(4, 0), 2 * m(0, 3) + m(2, 1) + m(4, 1), 0.0);
}

double MassData::mij(int i, int j, double eps) const
{
    return std::pow(eps, 2 + (i >= 2) + (j >= 2)) * m(i, j);
}

Mat3 MassData::Ma_eps(double eps) const
{
    Mat3 M;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            M(i, j) = mij(i, j, eps);
    return M;
}

Mat3 MassData::total_mass(double eps, double alpha) const
{
    const Vec3 I(1.0, 1.0, eps);
    return std::pow(eps, alpha) * I.asDiagonal() * Mg() * I.asDiagonal() + Ma_eps(eps);
}

MomentIntegrals moment_integrals(const BoundaryMesh& mesh, const std::vector<Vec2>& f)
{
    MomentIntegrals r;
    r.z = contour_integral(mesh, Weight::Z, f);
    r.zbar = contour_integral(mesh, Weight::ZBar, f);
    r.absz2 = contour_integral(mesh, Weight::AbsZ2, f);
    r.z2 = contour_integral(mesh, Weight::Z2, f);
    return r;
}

std::vector<cplx> laurent_coefficients(const std::function<Vec2(const Vec2&)>& field,
                                       const BoundaryMesh& mesh, int kmax, double radius,
                                       int samples)
{
    const double rc = mesh.shape().circumradius();
    if (radius <= 0)
        radius = 3.0 * rc;
    if (radius <= rc * (1 + 1e-9))
        throw std::invalid_argument("Laurent extraction circle intersects the body");
    std::vector<cplx> fz(samples), zs(samples);
    for (int m = 0; m < samples; ++m) {
        zs[m] = std::polar(radius, 2.0 * M_PI * m / samples);
        fz[m] = hat(field(to_vec(zs[m])));
    }
    std::vector<cplx> c(kmax);
    for (int k = 1; k <= kmax; ++k) {
        cplx s = 0;
        for (int m = 0; m < samples; ++m)
            // dz = i z dtheta
            s += fz[m] * std::pow(zs[m], k) * cplx(0, 1);
        c[k - 1] = s * (2.0 * M_PI / samples) / cplx(0, 2.0 * M_PI);
    }
    return c;
}

std::shared_ptr<const PotentialSet> PotentialSet::compute(const ShapeSpec& shape, int n)
{
    auto mesh = std::make_shared<const BoundaryMesh>(shape, n);
    std::shared_ptr<PotentialSet> ps(new PotentialSet());
    ps->ops_ = std::make_shared<const LayerOperators>(mesh);
    ps->H_ = HarmonicField(*ps->ops_);
    for (int i = 0; i < 5; ++i)
        ps->phi_[i] = solve_exterior_neumann(*ps->ops_, mesh->kirchhoff_data(i));
    return ps;
}

std::string PotentialSet::cache_name(const ShapeSpec& shape, int n)
{
    return fmt::format("potentials_{:016x}_N{}.json", shape.hash(), n);
}

void PotentialSet::save(const std::string& path) const
{
    nlohmann::json j;
    j["format"] = "vwlab-potentials";
    j["version"] = 1;
    j["shape"] = mesh()->shape().name();
    j["hash"] = fmt::format("{:016x}", mesh()->shape().hash());
    j["N"] = mesh()->size();
    auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
    j["H_density"] = vec(H_.density());
    j["H_constant"] = H_.constant();
    for (int i = 0; i < 5; ++i)
        j["phi_density"].push_back(vec(phi_[i].density()));
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write potential cache " + path);
    out << j.dump(1) << "\n";
}

std::shared_ptr<const PotentialSet> PotentialSet::load(const ShapeSpec& shape, int n,
                                                       const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read potential cache " + path);
    const nlohmann::json j = nlohmann::json::parse(in);
    if (j.at("format") != "vwlab-potentials" || j.at("version") != 1)
        throw std::runtime_error("unrecognized potential cache format");
    if (j.at("hash") != fmt::format("{:016x}", shape.hash()) || j.at("N") != n)
        throw std::runtime_error("potential cache does not match shape and N");
    auto mesh = std::make_shared<const BoundaryMesh>(shape, n);
    std::shared_ptr<PotentialSet> ps(new PotentialSet());
    ps->ops_ = std::make_shared<const LayerOperators>(mesh);
    auto vec = [n](const nlohmann::json& a) {
        std::vector<double> v = a.get<std::vector<double>>();
        if (static_cast<int>(v.size()) != n)
            throw std::runtime_error("potential cache density has wrong length");
        return Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(v.data(), n));
    };
    ps->H_ = HarmonicField(*ps->ops_, vec(j.at("H_density")), j.at("H_constant").get<double>());
    for (int i = 0; i < 5; ++i)
        ps->phi_[i] = NeumannSolution(*ps->ops_, mesh->kirchhoff_data(i),
                                      vec(j.at("phi_density").at(i)));
    return ps;
}

std::shared_ptr<const PotentialSet> PotentialSet::load_or_compute(const ShapeSpec& shape, int n,
                                                                  const std::string& cache_dir)
{
    if (cache_dir.empty())
        return compute(shape, n);
    namespace fs = std::filesystem;
    const fs::path p = fs::path(cache_dir) / cache_name(shape, n);
    if (fs::exists(p)) {
        try {
            return load(shape, n, p.string());
        } catch (const std::exception&) {
            // stale or foreign file: recompute and overwrite
        }
    }
    auto ps = compute(shape, n);
    fs::create_directories(cache_dir);
    ps->save(p.string());
    return ps;
}

MassData PotentialSet::mass_data(double m1, double J1) const
{
    const BoundaryMesh& mesh = *this->mesh();
    MassData md;
    md.m1 = m1;
    md.J1 = J1;
    md.moments = geometric_moments(mesh);
    Eigen::Matrix<double, 5, 5> raw;
    for (int j = 0; j < 5; ++j) {
        const Eigen::VectorXd K = mesh.kirchhoff_data(j);
        for (int i = 0; i < 5; ++i) {
            double s = 0;
            for (int k = 0; k < mesh.size(); ++k)
                s += phi_[i].boundary_potential()[k] * K[k] * mesh.weights()[k];
            raw(i, j) = s;
        }
    }
    md.raw_asymmetry = (raw - raw.transpose()).cwiseAbs().maxCoeff();
    md.m = 0.5 * (raw + raw.transpose());
    const cplx xi = contour_integral(mesh, Weight::Z, H_.boundary_values());
    const cplx eta = contour_integral(mesh, Weight::Z2, H_.boundary_values());
    md.xi = to_vec(xi);
    md.eta = to_vec(eta);
    return md;
}

ScaledPotentials::ScaledPotentials(PotentialPtr unit, double eps) : unit_(std::move(unit)), eps_(eps)
{
    if (!(eps > 0))
        throw std::invalid_argument("scale must be positive");
}

double ScaledPotentials::kirchhoff(int i, int j) const
{
    const Vec2 x = node(j);
    const Vec2& n = normal(j);
    switch (i) {
    case 0: return n.x();
    case 1: return n.y();
    case 2: return perp(x).dot(n);
    case 3: return -x.x() * n.x() + x.y() * n.y();
    case 4: return x.y() * n.x() + x.x() * n.y();
    default: throw std::out_of_range("Kirchhoff index must be in 0..4");
    }
}

double ScaledPotentials::phi(int i, const Vec2& x) const
{
    return std::pow(eps_, i >= 2 ? 2 : 1) * unit_->phi(i).potential(x / eps_);
}

Vec2 ScaledPotentials::grad_phi(int i, const Vec2& x) const
{
    const Vec2 g = unit_->phi(i).gradient(x / eps_);
    return i >= 2 ? Vec2(eps_ * g) : g;
}

Vec2 ScaledPotentials::grad_phi_boundary(int i, int j) const
{
    const Vec2& g = unit_->phi(i).boundary_gradient()[j];
    return i >= 2 ? Vec2(eps_ * g) : g;
}

Vec2 ScaledPotentials::H(const Vec2& x) const
{
    return unit_->H().value(x / eps_) / eps_;
}

Vec2 ScaledPotentials::H_boundary(int j) const
{
    return unit_->H().boundary_values()[j] / eps_;
}

double ScaledPotentials::psi_H(const Vec2& x) const
{
    return unit_->H().stream(x / eps_);
}

NeumannSolution ScaledPotentials::solve_neumann(const Eigen::VectorXd& g) const
{
    return solve_exterior_neumann(unit_->operators(), g, false);
}

IdentityReport potential_identities(const PotentialSet& ps, const MassData& md, double tol)
{
    IdentityReport rep;
    const BoundaryMesh& mesh = *ps.mesh();
    const double S = md.moments.area, g1 = md.moments.xg.x(), g2 = md.moments.xg.y();
    const double m6 = md.moments.m6, m7 = md.moments.m7, m8 = md.moments.m8;
    auto m = [&](int i, int j) { return md.m(i - 1, j - 1); };
    const cplx I(0, 1);

    const auto& Hb = ps.H().boundary_values();
    const cplx zH = contour_integral(mesh, Weight::Z, Hb);
    const cplx zbH = contour_integral(mesh, Weight::ZBar, Hb);
    rep.add("harmonic", "conj(int zbar H dz) = int z H dz", std::conj(zbH), zH, tol);
    rep.add("harmonic", "Re(i int |z|^2 H dz) = 0",
            (I * contour_integral(mesh, Weight::AbsZ2, Hb)).real(), 0.0, tol);
    rep.add("harmonic", "int H dz = 1 (circulation)", contour_integral(mesh, Weight::One, Hb), 1.0,
            tol);
    auto hfield = [&](const Vec2& x) { return ps.H().value(x); };
    const auto ch = laurent_coefficients(hfield, mesh, 1);
    rep.add("laurent", "H c1 = 1/(2 i pi)", ch[0], 1.0 / (2.0 * M_PI * I), tol);

    std::array<MomentIntegrals, 5> mi;
    for (int i = 0; i < 5; ++i)
        mi[i] = moment_integrals(mesh, ps.phi(i).boundary_gradient());

    const std::array<cplx, 5> z_expect = {
        cplx(-m(1, 2), m(1, 1) + S),
        cplx(-(m(2, 2) + S), m(2, 1)),
        cplx(-(m(3, 2) + S * g1), m(3, 1) - S * g2),
        cplx(-(m(4, 2) + S * g2), m(4, 1) - S * g1),
        cplx(-(m(5, 2) + S * g1), m(5, 1) + S * g2),
    };
    const std::array<cplx, 5> zbar_expect = {
        cplx(-m(1, 2), -m(1, 1) + S),
        cplx(-m(2, 2) + S, -m(2, 1)),
        cplx(-m(3, 2) + S * g1, -(m(3, 1) + S * g2)),
        cplx(-m(4, 2) + S * g2, -(m(4, 1) + S * g1)),
        cplx(-m(5, 2) + S * g1, -m(5, 1) + S * g2),
    };
    const std::array<cplx, 5> abs_expect = {
        cplx(-2 * m(1, 3), 2 * S * g1),
        cplx(-2 * m(2, 3), 2 * S * g2),
        cplx(-2 * m(3, 3), 0),
        cplx(-2 * m(4, 3), -2 * m6),
        cplx(-2 * m(5, 3), 2 * m7),
    };
    const std::array<cplx, 5> z2_expect = {
        cplx(-2 * (m(1, 5) + S * g2), 2 * (-m(1, 4) + S * g1)),
        cplx(-2 * (m(2, 5) + S * g1), -2 * (m(2, 4) + S * g2)),
        cplx(-2 * (m(3, 5) + m6), -2 * (m(3, 4) + m7)),
        cplx(-2 * m(4, 5), -2 * (m(4, 4) + m8)),
        cplx(-2 * (m(5, 5) + m8), -2 * m(5, 4)),
    };
    for (int i = 0; i < 5; ++i) {
        const int k = i + 1;
        rep.add("circulation", fmt::format("Re int dPhi{} dz = 0", k),
                contour_integral(mesh, Weight::One, ps.phi(i).boundary_gradient()).real(), 0.0,
                tol);
        rep.add("moment-z", fmt::format("int z dPhi{} dz", k), mi[i].z, z_expect[i], tol);
        rep.add("moment-zbar", fmt::format("int zbar dPhi{} dz", k), mi[i].zbar, zbar_expect[i],
                tol);
        rep.add("moment-|z|^2", fmt::format("int |z|^2 dPhi{} dz", k), mi[i].absz2, abs_expect[i],
                tol);
        rep.add("moment-z^2", fmt::format("int z^2 dPhi{} dz", k), mi[i].z2, z2_expect[i], tol);
        auto f = [&, i](const Vec2& x) { return ps.phi(i).gradient(x); };
        const auto c = laurent_coefficients(f, mesh, 3);
        rep.add("laurent", fmt::format("dPhi{} c1 = 0", k), c[0], 0.0, tol);
        rep.add("laurent", fmt::format("dPhi{} c2", k), c[1], z_expect[i] / (2.0 * M_PI * I), tol);
        rep.add("laurent", fmt::format("dPhi{} c3", k), c[2], z2_expect[i] / (2.0 * M_PI * I), tol);
    }

    const auto force = blasius_pair(mesh, Hb, Hb);
    rep.add("blasius", "int |H|^2 n1 ds = 0", force.force.x(), 0.0, tol);
    rep.add("blasius", "int |H|^2 n2 ds = 0", force.force.y(), 0.0, tol);
    rep.add("blasius", "int |H|^2 x^perp.n ds = 0", force.torque, 0.0, tol);
    return rep;
}

}  // namespace vwlab
