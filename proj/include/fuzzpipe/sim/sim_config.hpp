#pragma once

#include <cstdint>
#include <string>

#include "fuzzpipe/core/vec3.hpp"

namespace fuzzpipe::sim {

// Benchmark generator settings. World units equal xy-voxel units; the
// z-axis of the rendered image is coarser by z_anisotropy, so a world
// distance dz maps to dz / z_anisotropy z-slices.
struct SimConfig {
    // geometry
    core::Vec3 center{320.0, 320.0, 205.0};
    double inner_radius = 170.0;
    double outer_radius = 190.0;
    double boundary_steepness = 1.0;  // sigmoid shape of the shell potential

    // displacement weights
    double w_boundary = 3.0;
    double w_repulsion = 1.0;
    double w_adhesion = 0.52;
    double step_length = 1.0;          // world units per unit force magnitude
    double interaction_factor = 1.25;  // adhesion range as a multiple of radii sum

    // population
    int initial_count = 16;
    int target_count = 1000;
    int frames = 50;
    double division_period = 10.0;  // frames between divisions, +-20% jitter
    double object_radius = 9.2;     // world units, +-10% per-object jitter
    double initial_cap_angle = 1.1; // polar angle of the starting cap (radians)

    // image geometry
    int nx = 640, ny = 640, nz = 128;
    double z_anisotropy = 3.2;

    // rendering
    double peak_intensity = 0.05;
    double intensity_jitter = 0.2;
    double texture_amplitude = 0.2;
    double texture_scale = 3.0;  // world units per texture lattice cell
    double super_gaussian_power = 2.0;

    // acquisition chain
    double attenuation = 1.3863;  // exp falloff over the stack away from the objective
    double psf_sigma_xy = 0.5;
    double psf_sigma_z = 1.2;
    double dark_current = 0.001;
    double photon_scale = 10000.0;  // photons per unit intensity; <=0 disables shot noise
    double sigma_agn = 0.0007;
    bool multiview = false;

    std::uint64_t seed = 42;

    static SimConfig load(const std::string& path);
    void save(const std::string& path) const;
};

}  // namespace fuzzpipe::sim
