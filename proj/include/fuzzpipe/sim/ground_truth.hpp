#pragma once

#include <string>
#include <vector>

#include "fuzzpipe/sim/motion.hpp"

namespace fuzzpipe::sim {

// groundtruth.csv: frame, object_id, parent_id, predecessor_id, x, y, z,
// radius. Positions are world units (x, y match xy-voxels; z divides by the
// anisotropy factor for voxel coordinates).
void save_ground_truth(const std::vector<TruthRecord>& truth, const std::string& path);
std::vector<TruthRecord> load_ground_truth(const std::string& path);

}  // namespace fuzzpipe::sim
