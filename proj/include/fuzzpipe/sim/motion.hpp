#pragma once

#include <cstdint>
#include <vector>

#include "fuzzpipe/core/vec3.hpp"
#include "fuzzpipe/sim/sim_config.hpp"

namespace fuzzpipe::sim {

struct SimObject {
    int id = 0;
    core::Vec3 position;
    double radius = 0.0;
    int parent_id = 0;  // 0 for roots
    int birth_frame = 0;
    double next_division = 0.0;  // frame index of the next division
    double intensity_scale = 1.0;
    std::uint64_t render_salt = 0;  // texture phase / jitter stream
};

// One row of the exported ground truth: an object observed in one frame.
struct TruthRecord {
    int frame = 0;
    int object_id = 0;
    int parent_id = 0;       // nonzero only on the first frame after a division
    int predecessor_id = 0;  // same object in the previous frame, 0 if newborn
    core::Vec3 position;     // world units
    double radius = 0.0;
};

struct SimResult {
    std::vector<std::vector<SimObject>> frames;  // object states per frame
    std::vector<TruthRecord> truth;
};

// Shell-constraint displacement: zero on [r_i, r_o], pushes radially outward
// inside the inner sphere and inward outside the outer sphere with a
// sigmoidal magnitude controlled by `steepness`. x == c yields zero.
core::Vec3 boundary_displacement(const core::Vec3& x, const core::Vec3& c, double inner_radius,
                                 double outer_radius, double steepness);

// Distance-based interaction magnitudes for one object pair.
// Repulsion (1 - d/R)^2 is positive below the radii sum R and maximal at
// contactless overlap; adhesion -(d/Ra)(1 - d/Ra)^2 is negative (attracting)
// up to Ra = interaction_factor * R. Both scale with step_length.
struct PairDisplacement {
    double repulsion = 0.0;
    double adhesion = 0.0;
};
PairDisplacement pair_displacement(double dist, double radius_i, double radius_j,
                                   const SimConfig& config);

// Weighted sum of the boundary term and all pair interactions for object i,
// directed along x_i - x_j per pair. Neighbor search is grid-accelerated and
// restricted to the adhesion range.
core::Vec3 total_displacement(std::size_t i, const std::vector<SimObject>& objects,
                              const SimConfig& config);

// Runs the force-driven motion with divisions. Deterministic per seed.
SimResult simulate(const SimConfig& config);

}  // namespace fuzzpipe::sim
