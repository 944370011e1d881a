#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fuzzpipe/core/feature_table.hpp"
#include "fuzzpipe/core/vec3.hpp"
#include "fuzzpipe/sim/motion.hpp"
#include "fuzzpipe/volume/volume.hpp"

namespace fuzzpipe::track {

struct TrackNode {
    int frame = 0;
    int point_id = 0;  // unique within the frame
    core::Vec3 position;
    bool from_seed = false;     // seed fallback vs segment centroid
    std::uint32_t segment_label = 0;  // owning segment, 0 if unknown
};

struct TrackEdge {
    std::size_t from = 0;  // node indices
    std::size_t to = 0;
    bool division = false;  // set only in ground-truth graphs
};

// Acyclic oriented graph over (frame, object) nodes; edges step exactly one
// frame forward.
struct TrackGraph {
    std::vector<TrackNode> nodes;
    std::vector<TrackEdge> edges;

    std::vector<std::vector<std::size_t>> nodes_by_frame(int frame_count) const;
    int max_frame() const;

    // tracks csv: frame, point_id, x, y, z, source, predecessor_point_id
    void save_csv(const std::string& path) const;
    static TrackGraph load_csv(const std::string& path);
};

// One edge per frame-t point to its Euclidean-nearest frame-t+1 point;
// distance ties resolve to the lowest target index. Multiple sources may
// share a target.
std::vector<std::pair<std::size_t, std::size_t>> nn_link(
    const std::vector<core::Vec3>& frame_t, const std::vector<core::Vec3>& frame_t1);

// Chains nn_link over consecutive frames of trackable points. Each frame's
// table needs x, y, z columns; empty frames break the chain.
TrackGraph track_sequence(const std::vector<core::FeatureTable>& frames);

// Trackable points of one frame: segment centroids where the segment FSMD
// reaches beta, else the seed points the segment contains (its centroid when
// it holds no seed at all). Seeds in background are dropped. Output columns:
// x, y, z, source (0 segment, 1 seed), segment_label.
core::FeatureTable uncertainty_tracking_inputs(const core::FeatureTable& segments,
                                               const core::FeatureTable& seeds,
                                               const volume::LabelVolume& labels, double beta,
                                               const std::string& fsmd_column = "fsmd_correct");

// Ground-truth graph from simulator records (temporal + division edges).
TrackGraph truth_graph(const std::vector<sim::TruthRecord>& records, double z_scale = 1.0);

}  // namespace fuzzpipe::track
