#pragma once

#include <vector>

#include "fuzzpipe/core/vec3.hpp"
#include "fuzzpipe/volume/volume.hpp"

namespace fuzzpipe::seg {

// Priority-flood seeded watershed over the nonzero voxels of `mask`.
// Basins grow from the seed markers in order of decreasing intensity
// (height = inverted intensity); every mask voxel ends up in exactly one
// basin, labels 1..K follow seed order. Seeds outside the mask are ignored;
// without any usable seed the mask is returned unchanged as one label.
volume::LabelVolume seeded_watershed(const volume::Volume& intensity,
                                     const volume::LabelVolume& mask,
                                     const std::vector<core::Vec3i>& seeds);

// Classic marker watershed of the full image domain: basins flood
// everywhere, the output keeps basin labels on mask voxels and zero
// elsewhere. Used for whole-image splitting.
volume::LabelVolume watershed_full_domain(const volume::Volume& intensity,
                                          const volume::LabelVolume& mask,
                                          const std::vector<core::Vec3i>& seeds);

}  // namespace fuzzpipe::seg
