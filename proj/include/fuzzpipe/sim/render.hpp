#pragma once

#include <vector>

#include "fuzzpipe/sim/motion.hpp"
#include "fuzzpipe/volume/volume.hpp"

namespace fuzzpipe::sim {

struct RenderedFrame {
    volume::Volume raw;
    volume::LabelVolume truth;
};

// Stamps each object into the volume as an anisotropic super-Gaussian blob
// (z compressed by the anisotropy factor) with multiplicative value-noise
// texture; overlaps blend by maximum. Truth labels cover the ideal blob
// support at half maximum; voxels claimed by several objects go to the
// nearest center.
RenderedFrame render_frame(const std::vector<SimObject>& objects, const SimConfig& config);

}  // namespace fuzzpipe::sim
