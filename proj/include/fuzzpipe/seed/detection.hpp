#pragma once

#include <limits>
#include <string>

#include "fuzzpipe/core/feature_table.hpp"
#include "fuzzpipe/fuzzy/membership.hpp"
#include "fuzzpipe/volume/volume.hpp"

namespace fuzzpipe::seed {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct SeedParams {
    double sigma_min = 4.0;
    double sigma_max = 8.0;
    double sigma_step = 1.0;
    double t_wmi = 0.0025;    // window mean intensity threshold
    int window = 5;           // cubic feature window edge (odd)
    int response_levels = 256;  // response discretization steps; 0 keeps float
    bool strict = false;      // strict vs non-strict local maxima
    bool fuse = false;        // Ward-linkage fusion of redundant detections
    bool uncertainty = false; // FSMD annotation + alpha filtering
    double t_dbc = 5.0;       // fusion cutoff, smallest expected object radius
    fuzzy::TrapezoidParams theta_wmi{0.0025, 0.0025, kInf, kInf};
    fuzzy::TrapezoidParams theta_smi{0.0007, 0.0007, kInf, kInf};
    fuzzy::TrapezoidParams theta_zpos{50.0, 250.0, kInf, kInf};
    double alpha = 0.0001;
    double beta = 0.0001;

    static SeedParams load(const std::string& path);
};

struct ScaleSpaceResult {
    volume::Volume response;   // voxelwise max over scales
    volume::Volume best_scale; // winning sigma per voxel
    int scales = 0;
};

// Scale-normalized LoG responses evaluated on {sigma_min, +step, ...,
// sigma_max}, combined by a voxelwise maximum projection.
ScaleSpaceResult log_scale_space_max(const volume::Volume& v, double sigma_min, double sigma_max,
                                     double sigma_step, int workers = 0);

// Local 26-neighborhood extrema of the (optionally discretized) response.
// Strict mode requires the response to exceed every neighbor, non-strict
// admits plateaus (>=); both require a positive response so only blob-like
// maxima qualify. Border voxels are never extrema. Candidates whose window
// mean intensity in the raw volume falls below t_wmi are discarded.
// Columns: x, y, z, sigma, response, wmi, smi, zpos.
core::FeatureTable detect_extrema(const volume::Volume& response, const volume::Volume& best_scale,
                                  const volume::Volume& raw, const SeedParams& params);

// Agglomerative fusion of redundant seeds: Ward linkage, dendrogram cut at
// merge distance t_dbc, one output row per cluster holding the arithmetic
// mean of the member feature vectors.
core::FeatureTable fuse_seeds(const core::FeatureTable& seeds, double t_dbc);

// Appends the min-combined fsmd_correct column from the wmi, smi and zpos
// memberships.
core::FeatureTable annotate_seed_fsmd(const core::FeatureTable& seeds, const SeedParams& params);

// Full detector: scale space, extrema, optional fusion, optional
// uncertainty annotation with alpha filtering. origin_op tags rows with 1.
core::FeatureTable detect_seeds(const volume::Volume& raw, const SeedParams& params,
                                int workers = 0);

}  // namespace fuzzpipe::seed
