#include "vwlab/lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "vwlab/contour.hpp"
#include "vwlab/normal_form.hpp"
#include "vwlab/parallel.hpp"

namespace vwlab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string eps_tag(double e) { return fmt::format("eps{:g}", e); }

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << text;
}

json summary_json(const RunSummary& s)
{
    json j;
    j["name"] = s.name;
    j["eps"] = s.eps;
    j["dt"] = s.dt;
    j["blobs"] = s.blobs;
    j["steps"] = s.steps;
    j["t_end"] = s.t_end;
    j["aborted"] = s.aborted;
    j["reason"] = s.reason;
    j["message"] = s.message;
    j["energy0"] = s.energy0;
    j["energy_drift"] = s.energy_drift;
    j["gamma_drift"] = s.gamma_drift;
    j["circulation_drift"] = s.circulation_drift;
    j["max_velocity"] = s.max_velocity;
    j["max_scaled_velocity"] = s.max_scaled_velocity;
    j["max_spin_deviation"] = s.max_spin_deviation;
    return j;
}

json parameters_json(const ExperimentConfig& c)
{
    json j;
    j["shape"] = c.shape.preset;
    j["panels"] = c.panels;
    j["spacing"] = c.spacing;
    j["core"] = c.core;
    j["eps"] = c.eps;
    j["alpha"] = c.alpha;
    j["m1"] = c.m1;
    j["J1"] = c.J1;
    j["gamma"] = c.gamma;
    j["ell0"] = {c.ell0.x(), c.ell0.y()};
    j["r0"] = c.r0;
    j["T"] = c.T;
    j["dt"] = c.dt;
    j["dt_eps_power"] = c.dt_eps_power;
    j["rho"] = c.rho;
    return j;
}

int sample_count(const ExperimentConfig& c)
{
    const double n = c.T / c.sample_period();
    const long k = std::lround(n);
    if (std::abs(n - k) > 1e-9 * std::max(1.0, n))
        throw ConfigError("time.T must be a multiple of dt * sample_every");
    return static_cast<int>(k);
}

bool in_annulus(double lo, double hi, double rho)
{
    // an empty field has (inf, 0)
    return lo >= 1.0 / rho && hi <= rho;
}

void mark_aborted(const std::string& dir, const RunSummary& s)
{
    if (dir.empty() || !s.aborted)
        return;
    static std::mutex mu;
    std::lock_guard lock(mu);
    std::ofstream out(fs::path(dir) / "aborted", std::ios::app);
    out << fmt::format("{} {} {:.10g}\n", s.name, s.reason, s.t_end);
}

}  // namespace

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
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

PotentialPtr unit_potentials(const ExperimentConfig& c)
{
    const ShapeSpec shape = c.shape.build();
    if (c.cache_dir.empty())
        return PotentialSet::compute(shape, c.panels);
    fs::create_directories(c.cache_dir);
    return PotentialSet::load_or_compute(shape, c.panels, c.cache_dir);
}

void write_blob_csv(const std::string& path, const std::vector<double>& t,
                    const std::vector<BlobField>& snapshots)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << "t,x1,x2,circulation,frame\n";
    for (std::size_t k = 0; k < snapshots.size(); ++k) {
        const auto& f = snapshots[k];
        const std::string frame = frame_name(f.frame);
        for (std::size_t j = 0; j < f.size(); ++j)
            out << fmt::format("{:.10g},{:.17g},{:.17g},{:.17g},{}\n", t[k], f.pos[j].x(), f.pos[j].y(),
                               f.circ[j], frame);
    }
}

void write_data_dictionary(const std::string& dir)
{
    write_text((fs::path(dir) / "data_dictionary.md").string(),
               R"(# Output files

All lengths are in units of the unit body, times in the same units as `dt`.

## coupled_eps<e>.csv
| column | meaning |
|---|---|
| t | time |
| h1, h2 | body center of mass, lab frame |
| theta | body angle (rad) |
| l1, l2 | body velocity in the body frame |
| r | angular velocity |
| energy | total kinetic energy of body and fluid; nan when disabled |
| gamma | circulation around the body |
| rho_min, rho_max | min and max blob distance to the body center |

## limit.csv
| column | meaning |
|---|---|
| t | time |
| h1, h2 | point vortex position |
| dh1, dh2 | point vortex velocity |
| rho_min, rho_max | min and max blob distance to the point vortex |

## blobs_*.csv
| column | meaning |
|---|---|
| t | snapshot time |
| x1, x2 | blob center |
| circulation | blob circulation |
| frame | lab or body |

Coupled snapshots are written in the lab frame.

## compare.csv
| column | meaning |
|---|---|
| eps | body size |
| t | common sample time |
| dist_h | abs(h_eps - h) |
| dist_w | mean over index-matched blobs of abs(x_j_eps - x_j), lab frame |

## summary_*.json, report.json
Run parameters, invariant drifts (relative energy drift, circulation drifts),
max(abs(l) + eps abs(r)), abort reason if any, and for `report.json` the sup
distances per eps with their log-log slopes. The blob-index distance stands in
for weak convergence of the vorticity.

## aborted
One line per aborted run: run name, reason (collision, annulus-exit, dt-guard), time.
)");
}

CoupledRun run_coupled(const ExperimentConfig& c, double eps, PotentialPtr unit, const std::string& dir)
{
    CoupledInit in;
    in.unit = std::move(unit);
    in.eps = eps;
    in.alpha = c.alpha;
    in.m1 = c.m1;
    in.J1 = c.J1;
    in.patches = c.patches;
    in.spacing = c.spacing;
    in.core = c.core;
    in.gamma = c.gamma;
    in.ell0 = c.ell0;
    in.r0 = c.r0;
    CoupledState s;
    try {
        s = init_coupled(in);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(fmt::format("eps = {:g}: {}", eps, e.what()));
    }

    CoupledRun run;
    RunSummary& sum = run.summary;
    sum.name = eps_tag(eps);
    sum.eps = eps;
    sum.dt = c.dt_for(eps);
    sum.blobs = s.omega.size();
    const int per_sample = static_cast<int>(std::lround(c.sample_period() / sum.dt));
    const int samples = sample_count(c);
    const double gamma0 = s.gamma, circ0 = s.omega.total_circulation();

    std::vector<double> snap_t;
    std::vector<BlobField> snaps;
    auto lab_blobs = [](const CoupledState& st) {
        std::vector<Vec2> x(st.omega.size());
        for (std::size_t j = 0; j < x.size(); ++j)
            x[j] = st.place.to_lab(st.omega.pos[j]);
        return x;
    };
    auto record = [&](const CoupledState& st, int step) {
        run.rows.push_back(coupled_sample(st, c.energy));
        run.lab_blobs.push_back(lab_blobs(st));
        const auto& row = run.rows.back();
        if (c.energy && !run.rows.empty()) {
            if (run.rows.size() == 1)
                sum.energy0 = row.energy;
            const double d = std::abs(row.energy - sum.energy0) / std::max(std::abs(sum.energy0), 1e-300);
            sum.energy_drift = std::max(sum.energy_drift, d);
        }
        sum.gamma_drift = std::max(sum.gamma_drift, std::abs(st.gamma - gamma0));
        sum.circulation_drift = std::max(sum.circulation_drift, std::abs(st.omega.total_circulation() - circ0));
        if (c.snapshot_every > 0 && step % c.snapshot_every == 0) {
            snap_t.push_back(st.t);
            BlobField f = st.omega;
            f.pos = run.lab_blobs.back();
            f.frame = Frame::Lab;
            snaps.push_back(std::move(f));
        }
    };
    auto track = [&](const CoupledState& st) {
        sum.max_velocity = std::max(sum.max_velocity, st.ell.norm() + eps * std::abs(st.r));
        sum.max_scaled_velocity = std::max(sum.max_scaled_velocity, eps * st.ell.norm() + eps * eps * std::abs(st.r));
        sum.max_spin_deviation = std::max(sum.max_spin_deviation, std::abs(st.r - c.r0));
    };

    track(s);
    record(s, 0);
    const int base_per_sample = c.sample_every;
    try {
        for (int k = 0; k < samples; ++k) {
            for (int m = 0; m < per_sample; ++m) {
                s = coupled_step(s, sum.dt);
                ++sum.steps;
                track(s);
                const auto [lo, hi] = support_annulus(s.omega, Vec2::Zero());
                if (!in_annulus(lo, hi, c.rho))
                    throw RunAborted("annulus-exit",
                                     fmt::format("blob support [{:.4g}, {:.4g}] left the annulus", lo, hi));
            }
            // sample clock from the index so every eps shares the grid
            s.t = (k + 1) * c.sample_period();
            record(s, (k + 1) * base_per_sample);
        }
    } catch (const RunAborted& e) {
        sum.aborted = true;
        sum.reason = e.reason();
        sum.message = e.what();
    }
    sum.t_end = s.t;

    if (!dir.empty()) {
        write_coupled_csv((fs::path(dir) / ("coupled_" + sum.name + ".csv")).string(), run.rows);
        if (c.snapshot_every > 0)
            write_blob_csv((fs::path(dir) / ("blobs_coupled_" + sum.name + ".csv")).string(), snap_t, snaps);
        json j;
        j["parameters"] = parameters_json(c);
        j["run"] = summary_json(sum);
        j["warnings"] = s.model->warnings;
        write_text((fs::path(dir) / ("summary_" + sum.name + ".json")).string(), j.dump(2) + "\n");
        mark_aborted(dir, sum);
    }
    return run;
}

LimitRun run_limit(const ExperimentConfig& c, const std::string& dir)
{
    VortexWaveState s;
    s.gamma = c.gamma;
    s.w = c.patches.empty() ? BlobField{} : fill_patches(c.patches, c.spacing, c.core, Frame::Lab);
    s.w.core = c.core;
    s.w.frame = Frame::Lab;

    LimitRun run;
    RunSummary& sum = run.summary;
    sum.name = "limit";
    sum.dt = c.dt_for(c.eps.front());
    sum.blobs = s.w.size();
    const int per_sample = static_cast<int>(std::lround(c.sample_period() / sum.dt));
    const int samples = sample_count(c);
    const double circ0 = s.w.total_circulation();

    std::vector<double> snap_t;
    std::vector<BlobField> snaps;
    auto record = [&](int step) {
        run.rows.push_back(limit_sample(s));
        run.blobs.push_back(s.w.pos);
        sum.circulation_drift = std::max(sum.circulation_drift, std::abs(s.w.total_circulation() - circ0));
        if (c.snapshot_every > 0 && step % c.snapshot_every == 0) {
            snap_t.push_back(s.t);
            snaps.push_back(s.w);
        }
    };
    record(0);
    try {
        for (int k = 0; k < samples; ++k) {
            for (int m = 0; m < per_sample; ++m) {
                try {
                    s = vw_step(s, sum.dt);
                } catch (const std::domain_error& e) {
                    throw RunAborted("collision", e.what());
                }
                ++sum.steps;
                const auto [lo, hi] = support_annulus(s);
                if (!in_annulus(lo, hi, c.rho))
                    throw RunAborted("annulus-exit",
                                     fmt::format("blob support [{:.4g}, {:.4g}] left the annulus", lo, hi));
            }
            s.t = (k + 1) * c.sample_period();
            record((k + 1) * c.sample_every);
        }
    } catch (const RunAborted& e) {
        sum.aborted = true;
        sum.reason = e.reason();
        sum.message = e.what();
    }
    sum.t_end = s.t;

    if (!dir.empty()) {
        write_limit_csv((fs::path(dir) / "limit.csv").string(), run.rows);
        if (c.snapshot_every > 0)
            write_blob_csv((fs::path(dir) / "blobs_limit.csv").string(), snap_t, snaps);
        json j;
        j["parameters"] = parameters_json(c);
        j["run"] = summary_json(sum);
        write_text((fs::path(dir) / "summary_limit.json").string(), j.dump(2) + "\n");
        mark_aborted(dir, sum);
    }
    return run;
}

CompareRow compare(const CoupledRun& coupled, const LimitRun& limit)
{
    CompareRow row;
    row.eps = coupled.summary.eps;
    if (coupled.summary.blobs != limit.summary.blobs)
        throw ConfigError(fmt::format("blob counts differ: {} vs {}", coupled.summary.blobs, limit.summary.blobs));
    const std::size_t n = std::min(coupled.rows.size(), limit.rows.size());
    for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(coupled.rows[k].t - limit.rows[k].t) > 1e-9 * std::max(1.0, std::abs(limit.rows[k].t)))
            throw ConfigError("trajectories are not on a common time grid");
        const double dh = (coupled.rows[k].h - limit.rows[k].h).norm();
        double dw = 0;
        const auto& a = coupled.lab_blobs[k];
        const auto& b = limit.blobs[k];
        for (std::size_t j = 0; j < a.size(); ++j)
            dw += (a[j] - b[j]).norm();
        if (!a.empty())
            dw /= static_cast<double>(a.size());
        row.t.push_back(limit.rows[k].t);
        row.dist_h.push_back(dh);
        row.dist_w.push_back(dw);
        row.sup_h = std::max(row.sup_h, dh);
        row.sup_w = std::max(row.sup_w, dw);
        row.t_common = limit.rows[k].t;
    }
    return row;
}

namespace {

// jobs pulled in index order; results land in their own slot
template <class Job>
void worker_pool(int jobs, int threads, const Job& job)
{
    const int k = std::max(1, std::min(threads, jobs));
    std::atomic<int> next{0};
    auto work = [&] {
        for (int i = next++; i < jobs; i = next++)
            job(i);
    };
    if (k == 1) {
        work();
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(k);
    for (int t = 0; t < k; ++t)
        pool.emplace_back([&, t] {
            try {
                work();
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

void prepare_dir(const ExperimentConfig& c)
{
    fs::create_directories(c.out_dir);
    fs::remove(fs::path(c.out_dir) / "aborted");
    write_text((fs::path(c.out_dir) / "config.ini").string(), format_config(c));
    write_data_dictionary(c.out_dir);
}

}  // namespace

std::vector<CoupledRun> simulate_coupled(const ExperimentConfig& c, int threads, bool verbose)
{
    prepare_dir(c);
    const auto unit = unit_potentials(c);
    const int n = static_cast<int>(c.eps.size());
    const int workers = std::max(1, std::min(threads, n));
    set_thread_count(std::max(1, threads / workers));
    std::vector<CoupledRun> runs(n);
    worker_pool(n, workers, [&](int i) {
        runs[i] = run_coupled(c, c.eps[i], unit, c.out_dir);
        if (verbose)
            std::cerr << fmt::format("{}: {} steps, t = {:.4g}{}\n", runs[i].summary.name, runs[i].summary.steps,
                                     runs[i].summary.t_end,
                                     runs[i].summary.aborted ? " (" + runs[i].summary.reason + ")" : "");
    });
    return runs;
}

ConvergenceReport converge(const ExperimentConfig& c, int threads, bool verbose)
{
    prepare_dir(c);
    const auto unit = unit_potentials(c);
    const int n = static_cast<int>(c.eps.size());
    const int workers = std::max(1, std::min(threads, n + 1));
    set_thread_count(std::max(1, threads / workers));
    std::vector<CoupledRun> runs(n);
    LimitRun limit;
    worker_pool(n + 1, workers, [&](int i) {
        if (i == n) {
            limit = run_limit(c, c.out_dir);
            if (verbose)
                std::cerr << fmt::format("limit: {} steps\n", limit.summary.steps);
            return;
        }
        runs[i] = run_coupled(c, c.eps[i], unit, c.out_dir);
        if (verbose)
            std::cerr << fmt::format("{}: {} steps, t = {:.4g}{}\n", runs[i].summary.name, runs[i].summary.steps,
                                     runs[i].summary.t_end,
                                     runs[i].summary.aborted ? " (" + runs[i].summary.reason + ")" : "");
    });

    ConvergenceReport rep;
    rep.limit = limit.summary;
    rep.any_aborted = limit.summary.aborted;
    std::vector<double> es, hs, ws;
    for (const auto& r : runs) {
        rep.runs.push_back(r.summary);
        rep.any_aborted = rep.any_aborted || r.summary.aborted;
        rep.rows.push_back(compare(r, limit));
        es.push_back(r.summary.eps);
        hs.push_back(std::max(rep.rows.back().sup_h, 1e-300));
        ws.push_back(std::max(rep.rows.back().sup_w, 1e-300));
    }
    rep.h_decreasing = rep.w_decreasing = n >= 2;
    for (int i = 1; i < n; ++i) {
        rep.h_decreasing = rep.h_decreasing && rep.rows[i].sup_h < rep.rows[i - 1].sup_h;
        rep.w_decreasing = rep.w_decreasing && rep.rows[i].sup_w < rep.rows[i - 1].sup_w;
    }
    if (n >= 2) {
        rep.slope_h = loglog_slope(es, hs);
        rep.slope_w = loglog_slope(es, ws);
    }

    std::ofstream csv(fs::path(c.out_dir) / "compare.csv");
    csv << "eps,t,dist_h,dist_w\n";
    for (const auto& row : rep.rows)
        for (std::size_t k = 0; k < row.t.size(); ++k)
            csv << fmt::format("{:g},{:.10g},{:.17g},{:.17g}\n", row.eps, row.t[k], row.dist_h[k], row.dist_w[k]);

    json j;
    j["parameters"] = parameters_json(c);
    j["w_metric"] = "mean blob displacement over index-matched blobs (surrogate for weak convergence)";
    j["limit"] = summary_json(rep.limit);
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        json r = summary_json(rep.runs[i]);
        r["sup_h"] = rep.rows[i].sup_h;
        r["sup_w"] = rep.rows[i].sup_w;
        r["t_common"] = rep.rows[i].t_common;
        j["runs"].push_back(r);
    }
    j["slope_h"] = rep.slope_h;
    j["slope_w"] = rep.slope_w;
    j["h_decreasing"] = rep.h_decreasing;
    j["w_decreasing"] = rep.w_decreasing;
    j["aborted"] = rep.any_aborted;
    write_text((fs::path(c.out_dir) / "report.json").string(), j.dump(2) + "\n");
    return rep;
}

bool CheckReport::all_pass() const { return failures() == 0; }

int CheckReport::failures() const
{
    return static_cast<int>(std::count_if(items.begin(), items.end(), [](const CheckItem& i) { return !i.pass(); }));
}

std::string CheckReport::table() const
{
    std::string s = fmt::format("{:<22} {:<44} {:>11} {:>9}  {}\n", "group", "item", "error", "tol", "status");
    for (const auto& i : items)
        s += fmt::format("{:<22} {:<44} {:>11.3e} {:>9.1e}  {}\n", i.group, i.name, i.error, i.tol,
                         i.pass() ? "pass" : "FAIL");
    s += fmt::format("{} items, {} failed\n", items.size(), failures());
    return s;
}

CheckReport check(const ExperimentConfig& c, int panels)
{
    CheckReport rep;
    auto add_report = [&](const std::string& shape, const std::string& group, const IdentityReport& r) {
        for (const auto& row : r.rows)
            rep.items.push_back({shape + "/" + group, row.group + ": " + row.name, row.error(), row.tol});
    };

    ShapeSpec third = ShapeSpec::perturbed_disk(1.0, {{2, 0.1, 0.05}, {3, 0.15, 0.0}});
    std::string third_name = "perturbed-disk";
    if (c.shape.preset == "perturbed-disk") {
        third = c.shape.build();
    } else if (c.shape.preset != "disk" && !(c.shape.preset == "ellipse" && c.shape.a == 2.0 && c.shape.b == 1.0)) {
        third = c.shape.build();
        third_name = c.shape.preset;
    }
    const std::vector<std::pair<std::string, ShapeSpec>> shapes = {
        {"disk", ShapeSpec::disk(1.0)}, {"ellipse(2,1)", ShapeSpec::ellipse(2.0, 1.0)}, {third_name, third}};

    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (const auto& [name, shape] : shapes) {
        const auto ps = PotentialSet::compute(shape, panels);
        const auto md = ps->mass_data(c.m1, c.J1);
        add_report(name, "geometry", identity_suite(*ps->mesh(), md.moments, 1e-8));
        add_report(name, "potential", potential_identities(*ps, md, 1e-6));

        rep.items.push_back({name + "/mass", "m_ij symmetry before symmetrization", md.raw_asymmetry, 1e-8});
        Eigen::SelfAdjointEigenSolver<Mat3> es(md.Ma());
        rep.items.push_back({name + "/mass", "M_a positive semidefinite", std::max(0.0, -es.eigenvalues()[0]), 1e-12});

        const auto st = StructureTensors::from(md);
        double worst_g = 0, worst_a = 0;
        for (int k = 0; k < 10000; ++k) {
            const Vec3 p(u(rng), u(rng), u(rng));
            const Vec3 g = apply_lambda(st, Lambda::G, p), a = apply_lambda(st, Lambda::A, p);
            worst_g = std::max(worst_g, std::abs(g.dot(p)) / (1 + g.norm() * p.norm()));
            worst_a = std::max(worst_a, std::abs(a.dot(p)) / (1 + a.norm() * p.norm()));
        }
        rep.items.push_back({name + "/tensors", "<L_g,p,p>.p = 0 on 1e4 random p", worst_g, 1e-14});
        rep.items.push_back({name + "/tensors", "<L_a,p,p>.p = 0 on 1e4 random p", worst_a, 1e-14});

        if (name != "disk")
            continue;
        double phi1 = 0;
        for (const Vec2& x : {Vec2(1.5, 0.3), Vec2(-0.4, 2.2), Vec2(3.0, -4.0), Vec2(0.0, 1.1)})
            phi1 = std::max(phi1, std::abs(ps->phi(0).potential(x) + x.x() / x.squaredNorm()));
        rep.items.push_back({"disk/golden", "Phi_1 = -x1/|x|^2 at probes", phi1, 1e-8});
        rep.items.push_back({"disk/golden", "m_11 = pi", std::abs(md.m(0, 0) - M_PI), 1e-6});
        rep.items.push_back({"disk/golden", "m_22 = pi", std::abs(md.m(1, 1) - M_PI), 1e-6});
        const auto lc = laurent_coefficients([&](const Vec2& z) { return ps->H().value(z); }, *ps->mesh(), 1, 3.0);
        rep.items.push_back({"disk/golden", "H leading Laurent coefficient 1/(2 i pi)",
                             std::abs(lc[0] - 1.0 / cplx(0, 2 * M_PI)), 1e-8});
        rep.items.push_back({"disk/golden", "xi = 0", md.xi.norm(), 1e-9});
        rep.items.push_back({"disk/golden", "eta = 0", md.eta.norm(), 1e-9});
        double phi3 = ps->phi(2).density().cwiseAbs().maxCoeff();
        for (const Vec2& x : {Vec2(1.5, 0.3), Vec2(-0.4, 2.2)})
            phi3 = std::max(phi3, std::abs(ps->phi(2).potential(x)));
        rep.items.push_back({"disk/golden", "Phi_3 = 0", phi3, 1e-12});
    }
    return rep;
}

}  // namespace vwlab
