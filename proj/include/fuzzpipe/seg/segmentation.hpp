#pragma once

#include <string>
#include <vector>

#include "fuzzpipe/core/feature_table.hpp"
#include "fuzzpipe/core/vec3.hpp"
#include "fuzzpipe/fuzzy/membership.hpp"
#include "fuzzpipe/volume/volume.hpp"

namespace fuzzpipe::seg {

struct SegParams {
    double sigma_smooth = 1.0;
    fuzzy::TrapezoidParams theta_vol{449, 617, 1405, 2016};
    fuzzy::TrapezoidParams theta_width{13, 15, 24, 31};
    fuzzy::TrapezoidParams theta_height{13, 15, 24, 34};
    fuzzy::TrapezoidParams theta_depth{3, 5, 8, 11};
    double alpha = 0.1;
    double beta = 0.1;
    int crop_margin = 2;  // voxels around too-large bounding boxes

    static SegParams load(const std::string& path);
};

enum class SplitMode {
    global,             // watershed over the whole image (OTSUWW)
    uncertainty_guided  // local crops of low-FSMD too-large segments (OTSUWW+U)
};

enum class SizeClass { none, too_small, too_large };

struct SegmentationResult {
    volume::LabelVolume labels;
    core::FeatureTable features;  // includes fsmd_correct, origin_op = 2
    std::size_t watershed_voxels = 0;  // voxels visited by splitting
};

// Smooth, Otsu-threshold, 26-connected components.
volume::LabelVolume segment_otsu(const volume::Volume& v, double sigma_smooth, int workers = 0);

// Region features of `labels` with the min-combined fsmd_correct column over
// volume, width, height and depth.
core::FeatureTable annotate_segment_fsmd(const volume::LabelVolume& labels,
                                         const volume::Volume& intensity, const SegParams& params);

// Classifies a low-FSMD feature row against the plateau bounds (b, c) of the
// fuzzy sets: any feature above its c makes the segment too_large, any below
// its b too_small; too_large wins when both apply (split first, the
// rejection pass re-evaluates afterwards).
SizeClass classify_low_fsmd(const core::FeatureTable& features, std::size_t row,
                            const SegParams& params);

// Derives trapezoid parameters from data: (min, 5% quantile, 95% quantile,
// max).
fuzzy::TrapezoidParams quantile_fuzzy_params(std::vector<double> values);

// Full segmentation operator. Global mode splits every region the seeds
// claim by flooding the entire image; guided mode only watersheds cropped
// low-FSMD too-large segments in parallel, re-evaluates the degrees and then
// removes too-small segments below alpha.
SegmentationResult segment_otsuww(const volume::Volume& v, const std::vector<core::Vec3i>& seeds,
                                  const SegParams& params, SplitMode mode, int workers = 0);

// Plain OTSU operator packaged like the others (no splitting, no rejection).
SegmentationResult segment_otsu_result(const volume::Volume& v, const SegParams& params,
                                       int workers = 0);

}  // namespace fuzzpipe::seg
