#pragma once

#include <cstdint>
#include <vector>

#include "fuzzpipe/core/feature_table.hpp"
#include "fuzzpipe/volume/volume.hpp"

namespace fuzzpipe::volume {

struct RegionFeatures {
    std::uint32_t label = 0;
    double cx = 0.0, cy = 0.0, cz = 0.0;  // unweighted voxel centroid
    std::size_t voxels = 0;
    int width = 0, height = 0, depth = 0;  // bounding-box extents
    int min_x = 0, min_y = 0, min_z = 0;
    int max_x = 0, max_y = 0, max_z = 0;
    double mean_intensity = 0.0;
    double max_intensity = 0.0;
};

// One entry per nonzero label, sorted by label id.
std::vector<RegionFeatures> compute_region_features(const LabelVolume& labels,
                                                    const Volume& intensity);

// Same statistics as a table with columns label, x, y, z, volume, width,
// height, depth, mean_int, max_int. Throws on dimension mismatch.
core::FeatureTable region_features(const LabelVolume& labels, const Volume& intensity,
                                   int origin_op = 0);

core::FeatureTable features_to_table(const std::vector<RegionFeatures>& features,
                                     int origin_op = 0);

}  // namespace fuzzpipe::volume
