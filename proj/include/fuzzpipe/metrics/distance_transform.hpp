#pragma once

#include <vector>

#include "fuzzpipe/volume/volume.hpp"

namespace fuzzpipe::metrics {

// Exact squared Euclidean distance to the nearest nonzero voxel of `mask`,
// separable lower-envelope transform per axis. All-zero masks yield a large
// finite sentinel everywhere.
std::vector<double> squared_distance_transform(const volume::LabelVolume& mask);

}  // namespace fuzzpipe::metrics
