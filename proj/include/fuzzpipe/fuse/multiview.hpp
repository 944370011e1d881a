#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>

#include "fuzzpipe/core/feature_table.hpp"
#include "fuzzpipe/volume/volume.hpp"

namespace fuzzpipe::fuse {

// Sparse 2D label-overlap histogram between two co-registered label volumes.
struct OverlapHistogram {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> counts;
    std::map<std::uint32_t, std::size_t> size_a;  // full segment sizes
    std::map<std::uint32_t, std::size_t> size_b;

    std::size_t overlap(std::uint32_t a, std::uint32_t b) const {
        const auto it = counts.find({a, b});
        return it == counts.end() ? 0 : it->second;
    }
};

// Counts voxel pairs where both views carry a nonzero label; marginals hold
// the complete segment sizes. Views must already share one frame (the
// opposing view back-rotated). Throws on dimension mismatch.
OverlapHistogram build_overlap_histogram(const volume::LabelVolume& a,
                                         const volume::LabelVolume& b);

struct FusionResult {
    volume::LabelVolume labels;     // relabeled 1..K
    core::FeatureTable features;    // chosen view's feature rows + fused_label, source_view
    std::size_t matched_pairs = 0;
    std::size_t unique_a = 0;
    std::size_t unique_b = 0;
};

// Segment-based fusion: mutually best-overlapping label pairs resolve to the
// member with the higher FSMD (the better segment is used verbatim, no
// averaging); labels without a mutual match are copied unchanged. Voxel
// collisions keep the first writer in ascending fused-label order.
FusionResult fuse_segments(const volume::LabelVolume& a, const volume::LabelVolume& b,
                           const core::FeatureTable& features_a,
                           const core::FeatureTable& features_b,
                           const std::string& fsmd_column = "fsmd_correct");

// Voxelwise maximum of two intensity volumes.
volume::Volume fuse_binary_max(const volume::Volume& a, const volume::Volume& b);

}  // namespace fuzzpipe::fuse
