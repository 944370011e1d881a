#pragma once

#include <cstdint>

#include "fuzzpipe/sim/sim_config.hpp"
#include "fuzzpipe/volume/volume.hpp"

namespace fuzzpipe::sim {

// Applies the acquisition deficiency chain in order: exponential signal
// attenuation away from the detection objective (objective at high z),
// anisotropic Gaussian PSF, dark-current offset, Poisson photon shot noise,
// additive Gaussian noise, clamp to [0, 1]. With attenuation 0, a delta PSF,
// photon_scale <= 0 and sigma_agn 0 only the dark current remains.
volume::Volume simulate_acquisition(const volume::Volume& raw, const SimConfig& config,
                                    std::uint64_t noise_salt = 0);

// 180 degree rotation about the image y axis (x -> nx-1-x, z -> nz-1-z).
volume::Volume rotate_180(const volume::Volume& v);
volume::LabelVolume rotate_180(const volume::LabelVolume& v);

// Mean foreground intensity over truth voxels divided by the standard
// deviation of the background.
double measure_snr(const volume::Volume& v, const volume::LabelVolume& truth);

}  // namespace fuzzpipe::sim
