#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "vwlab/biotsavart.hpp"
#include "vwlab/geometry.hpp"

namespace vwlab {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ShapeConfig {
    std::string preset = "ellipse";  // disk | ellipse | perturbed-disk
    double radius = 1.0;
    double a = 2.0, b = 1.0;
    std::vector<ShapeSpec::Mode> modes;
    Vec2 mass_offset = Vec2::Zero();

    ShapeSpec build() const;
};

// Flat INI file, one section per group. Keys mirror the field names below.
struct ExperimentConfig {
    ShapeConfig shape;
    int panels = 128;

    double spacing = 0.1;  // blob lattice
    double core = 0.15;    // delta

    std::vector<double> eps = {0.1};
    double alpha = 2.0;
    double m1 = 1.0, J1 = 1.0;
    double gamma = 0.0;
    Vec2 ell0 = Vec2::Zero();
    double r0 = 0.0;
    std::vector<PatchSpec> patches;

    double T = 1.0;
    double dt = 0.005;
    // dt(eps) = dt * (eps / eps[0])^dt_eps_power, rounded so samples stay on a common grid
    double dt_eps_power = 0.0;
    int sample_every = 1;     // trajectory rows, in units of dt
    int snapshot_every = 0;   // blob snapshots, in units of dt; 0 disables
    bool energy = true;       // energy column (costs one boundary solve per row)
    double rho = 4.0;         // support must stay in B(0, rho) minus B(0, 1/rho)

    std::string out_dir = "out";
    std::string cache_dir;    // potential cache; empty disables
    std::uint64_t seed = 1;

    void validate() const;
    // sampling period and the per-eps step that divides it
    double sample_period() const { return dt * sample_every; }
    double dt_for(double e) const;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);
// the same file format, so a run directory records its own inputs
std::string format_config(const ExperimentConfig& c);

}  // namespace vwlab
