#include "fuzzpipe/sim/sim_config.hpp"

#include "fuzzpipe/core/keyvalue.hpp"

namespace fuzzpipe::sim {

SimConfig SimConfig::load(const std::string& path) {
    const auto kv = core::KeyValueFile::load(path);
    SimConfig c;
    c.center.x = kv.get_double("center_x", c.center.x);
    c.center.y = kv.get_double("center_y", c.center.y);
    c.center.z = kv.get_double("center_z", c.center.z);
    c.inner_radius = kv.get_double("inner_radius", c.inner_radius);
    c.outer_radius = kv.get_double("outer_radius", c.outer_radius);
    c.boundary_steepness = kv.get_double("boundary_steepness", c.boundary_steepness);
    c.w_boundary = kv.get_double("w_boundary", c.w_boundary);
    c.w_repulsion = kv.get_double("w_repulsion", c.w_repulsion);
    c.w_adhesion = kv.get_double("w_adhesion", c.w_adhesion);
    c.step_length = kv.get_double("step_length", c.step_length);
    c.interaction_factor = kv.get_double("interaction_factor", c.interaction_factor);
    c.initial_count = kv.get_int("initial_count", c.initial_count);
    c.target_count = kv.get_int("target_count", c.target_count);
    c.frames = kv.get_int("frames", c.frames);
    c.division_period = kv.get_double("division_period", c.division_period);
    c.object_radius = kv.get_double("object_radius", c.object_radius);
    c.initial_cap_angle = kv.get_double("initial_cap_angle", c.initial_cap_angle);
    c.nx = kv.get_int("nx", c.nx);
    c.ny = kv.get_int("ny", c.ny);
    c.nz = kv.get_int("nz", c.nz);
    c.z_anisotropy = kv.get_double("z_anisotropy", c.z_anisotropy);
    c.peak_intensity = kv.get_double("peak_intensity", c.peak_intensity);
    c.intensity_jitter = kv.get_double("intensity_jitter", c.intensity_jitter);
    c.texture_amplitude = kv.get_double("texture_amplitude", c.texture_amplitude);
    c.texture_scale = kv.get_double("texture_scale", c.texture_scale);
    c.super_gaussian_power = kv.get_double("super_gaussian_power", c.super_gaussian_power);
    c.attenuation = kv.get_double("attenuation", c.attenuation);
    c.psf_sigma_xy = kv.get_double("psf_sigma_xy", c.psf_sigma_xy);
    c.psf_sigma_z = kv.get_double("psf_sigma_z", c.psf_sigma_z);
    c.dark_current = kv.get_double("dark_current", c.dark_current);
    c.photon_scale = kv.get_double("photon_scale", c.photon_scale);
    c.sigma_agn = kv.get_double("sigma_agn", c.sigma_agn);
    c.multiview = kv.get_bool("multiview", c.multiview);
    c.seed = static_cast<std::uint64_t>(kv.get_double("seed", static_cast<double>(c.seed)));
    return c;
}

void SimConfig::save(const std::string& path) const {
    core::KeyValueFile kv;
    kv.set("center_x", center.x);
    kv.set("center_y", center.y);
    kv.set("center_z", center.z);
    kv.set("inner_radius", inner_radius);
    kv.set("outer_radius", outer_radius);
    kv.set("boundary_steepness", boundary_steepness);
    kv.set("w_boundary", w_boundary);
    kv.set("w_repulsion", w_repulsion);
    kv.set("w_adhesion", w_adhesion);
    kv.set("step_length", step_length);
    kv.set("interaction_factor", interaction_factor);
    kv.set("initial_count", initial_count);
    kv.set("target_count", target_count);
    kv.set("frames", frames);
    kv.set("division_period", division_period);
    kv.set("object_radius", object_radius);
    kv.set("initial_cap_angle", initial_cap_angle);
    kv.set("nx", nx);
    kv.set("ny", ny);
    kv.set("nz", nz);
    kv.set("z_anisotropy", z_anisotropy);
    kv.set("peak_intensity", peak_intensity);
    kv.set("intensity_jitter", intensity_jitter);
    kv.set("texture_amplitude", texture_amplitude);
    kv.set("texture_scale", texture_scale);
    kv.set("super_gaussian_power", super_gaussian_power);
    kv.set("attenuation", attenuation);
    kv.set("psf_sigma_xy", psf_sigma_xy);
    kv.set("psf_sigma_z", psf_sigma_z);
    kv.set("dark_current", dark_current);
    kv.set("photon_scale", photon_scale);
    kv.set("sigma_agn", sigma_agn);
    kv.set("multiview", multiview ? "true" : "false");
    kv.set("seed", static_cast<double>(seed));
    kv.save(path);
}

}  // namespace fuzzpipe::sim
