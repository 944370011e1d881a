#pragma once

#include "fuzzpipe/volume/volume.hpp"

namespace fuzzpipe::volume {

// 26-connected component labeling of a 0/1 mask. Components are numbered
// 1..K in the scan order of their first voxel.
LabelVolume connected_components(const LabelVolume& mask);

// Splits every label of `labels` into its 26-connected parts: voxels join a
// component only through neighbors carrying the same input label. Output
// labels are 1..K in first-voxel scan order.
LabelVolume relabel_connected(const LabelVolume& labels);

}  // namespace fuzzpipe::volume
