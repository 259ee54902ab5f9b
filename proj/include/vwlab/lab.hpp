#pragma once

#include <string>
#include <vector>

#include "vwlab/config.hpp"
#include "vwlab/coupled_system.hpp"
#include "vwlab/limit_system.hpp"

namespace vwlab {

// exit codes of the run-type subcommands
constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitAborted = 2;
constexpr int kExitCheckFailed = 3;

struct RunSummary {
    std::string name;
    double eps = 0.0;  // 0 for the limit run
    double dt = 0.0;
    std::size_t blobs = 0;
    int steps = 0;
    double t_end = 0.0;
    bool aborted = false;
    std::string reason;   // collision | annulus-exit | dt-guard
    std::string message;
    double energy0 = 0.0;
    double energy_drift = 0.0;       // max |H - H0| / |H0| over the rows
    double gamma_drift = 0.0;
    double circulation_drift = 0.0;
    double max_velocity = 0.0;       // max |l| + eps |r|
    double max_scaled_velocity = 0.0;  // max |eps l| + |eps^2 r|
    double max_spin_deviation = 0.0;   // max |r - r0|
};

struct CoupledRun {
    RunSummary summary;
    std::vector<CoupledSample> rows;
    std::vector<std::vector<Vec2>> lab_blobs;  // per row
};

struct LimitRun {
    RunSummary summary;
    std::vector<LimitSample> rows;
    std::vector<std::vector<Vec2>> blobs;
};

// one coupled run on the common sampling grid; artifacts go to dir unless it is empty
CoupledRun run_coupled(const ExperimentConfig& c, double eps, PotentialPtr unit, const std::string& dir);
LimitRun run_limit(const ExperimentConfig& c, const std::string& dir);

struct CompareRow {
    double eps = 0.0;
    std::vector<double> t, dist_h, dist_w;
    double sup_h = 0.0;
    double sup_w = 0.0;  // mean |x_j^eps - x_j| over index-matched blobs, sup over t
    double t_common = 0.0;
};

// both trajectories on the same grid; throws ConfigError on mismatched blob counts
CompareRow compare(const CoupledRun& coupled, const LimitRun& limit);

struct ConvergenceReport {
    std::vector<RunSummary> runs;
    RunSummary limit;
    std::vector<CompareRow> rows;
    double slope_h = 0.0, slope_w = 0.0;
    bool h_decreasing = false, w_decreasing = false;
    bool any_aborted = false;
};

// eps runs on a worker pool of `threads`, one limit run, then the comparison
ConvergenceReport converge(const ExperimentConfig& c, int threads, bool verbose);
std::vector<CoupledRun> simulate_coupled(const ExperimentConfig& c, int threads, bool verbose);

struct CheckItem {
    std::string group, name;
    double error = 0.0;
    double tol = 0.0;
    bool pass() const { return error <= tol; }
};

struct CheckReport {
    std::vector<CheckItem> items;
    bool all_pass() const;
    int failures() const;
    std::string table() const;
};

// identity suites, mass-matrix invariants, tensor orthogonality and disk golden values
CheckReport check(const ExperimentConfig& c, int panels = 512);

PotentialPtr unit_potentials(const ExperimentConfig& c);

void write_blob_csv(const std::string& path, const std::vector<double>& t,
                    const std::vector<BlobField>& snapshots);
void write_data_dictionary(const std::string& dir);
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace vwlab
