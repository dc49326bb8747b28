#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tanglab/pipeline.hpp"

namespace tanglab {

// Run configuration: a plain-text key = value document with a fixed schema.
// Unknown keys are rejected so typos cannot silently corrupt a study. See the
// README for the full schema and defaults.
struct RunConfig {
    std::string model_variant = "circle";  // circle|annulus|lattice|atomic
    double model_alpha = 0.5;
    int model_n = 5;
    std::vector<double> model_angles_deg{0.0, 90.0};
    std::vector<double> model_weights{1.0, 1.0};

    std::string domain_kind;  // plane|torus; empty -> lattice=>torus, else plane
    double domain_radius = 50.0;
    double domain_extent = 0.0;  // plane grid half-width; 0 -> radius
    double domain_side = 0.0;    // torus side; 0 -> sqrt(n) for lattice, else 1

    double grid_h = 0.05;
    double grid_tol_f = 1e-10;
    int field_n_waves = 1024;

    long run_trials = 100;
    std::uint64_t run_seed = 42;
    int run_workers = 1;

    std::string vf_variant = "constant";  // constant|torus_trig
    double vf_angle_deg = 0.0;
    std::string vf_preset = "sines";  // sines|morse
    double vf_rho = 0.0;

    double beta = 1e-3;
    double stability_b = 0.0;  // 0 -> beta/4

    double classify_d_long = 6.0;
    double classify_xi_small = 0.01;

    bool include_sub_beta = true;
    bool emit_vertices = false;
    std::string output_dir = "out";

    static RunConfig from_file(const std::string& path);
    static RunConfig from_text(const std::string& text);
    void apply_override(const std::string& key, const std::string& value);
    void validate() const;

    // canonical serialization of all effective values; hash is FNV-1a 64 of it
    std::string canonical_text() const;
    std::string canonical_hash() const;

    SpectralModel build_model() const;
    DomainSpec build_domain() const;
    VectorFieldSpec build_vf() const;
    AnalysisOptions build_options() const;
};

}  // namespace tanglab
