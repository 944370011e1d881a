#pragma once

#include <string>
#include <vector>

#include "fuzzpipe/core/feature_table.hpp"
#include "fuzzpipe/track/tracking.hpp"
#include "fuzzpipe/volume/volume.hpp"

namespace fuzzpipe::metrics {

// harmonic mean of precision and recall; 0 when both vanish
double f_score(double precision, double recall);

struct SeedScore {
    double tp = 0, fp = 0, fn = 0;
    double recall = 0, precision = 0, fscore = 0;
    double mean_centroid_distance = 0;
};

// A truth object counts as hit when it contains at least one seed; extra
// seeds in the same object and seeds in background are false positives. The
// distance column averages first-hit seeds against truth centroids.
SeedScore score_seeds(const core::FeatureTable& seeds, const volume::LabelVolume& truth);

struct SegScore {
    double rand_index = 0;
    double jaccard_index = 0;
    double nsd = 0;
    double hausdorff = 0;
    double split = 0, merged = 0, added = 0, missing = 0;
    double recall = 0, precision = 0, fscore = 0;
};

// Voxel-level and object-level comparison of a segmentation against truth.
// Object matching is overlap-majority based: result objects whose largest
// truth overlap stays below half their size are added, truth objects covered
// below half by every result object are missing, a result object majority-
// covering k >= 2 truth objects contributes k-1 merged, a truth object
// majority-claimed by k >= 2 result objects contributes k-1 split. False
// positives are split+added, false negatives merged+missing.
SegScore score_segmentation(const volume::LabelVolume& result, const volume::LabelVolume& truth);

struct AogmWeights {
    double node_add = 1.0;
    double node_del = 1.0;
    double edge_add = 1.0;
    double edge_del = 1.0;
    double edge_semantics = 1.0;
};

struct TrackScore {
    double tp = 0, fp = 0, fn = 0;
    double redundant_edges = 0, missing_edges = 0, incorrect_edges = 0, merged = 0;
    double recall = 0, precision = 0, fscore = 0;
    double tra = 0;
};

// Graph comparison with node matching by centroid containment in the truth
// labels. merged counts extra truth centroids inside a result node's segment
// and needs the result label volumes; without them it stays zero.
// TRA = 1 - min(1, AOGM / AOGM0) with AOGM0 the cost of building the truth
// graph from scratch.
TrackScore score_tracking(const track::TrackGraph& result, const track::TrackGraph& truth,
                          const std::vector<volume::LabelVolume>& truth_labels,
                          const std::vector<const volume::LabelVolume*>& result_labels = {},
                          const AogmWeights& weights = {});

}  // namespace fuzzpipe::metrics
