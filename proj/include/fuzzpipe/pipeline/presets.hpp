#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fuzzpipe/core/feature_table.hpp"
#include "fuzzpipe/metrics/scores.hpp"
#include "fuzzpipe/seed/detection.hpp"
#include "fuzzpipe/seg/segmentation.hpp"
#include "fuzzpipe/sim/motion.hpp"
#include "fuzzpipe/sim/render.hpp"
#include "fuzzpipe/sim/sim_config.hpp"

namespace fuzzpipe::pipeline {

enum class SeedMethod { logsm, lognsm, lognsm_f, lognsm_f_u };
enum class SegMethod { otsu, otsuww, otsuww_u };
enum class TrackMethod { otsuww_nn, otsuww_u_nn, otsu_f_nn_u };

std::string to_string(SeedMethod m);
std::string to_string(SegMethod m);
std::string to_string(TrackMethod m);

// z-position fuzzy set scaled to a stack of nz slices: the reference ramp
// covers the same depth fractions as the benchmark parameterization.
fuzzy::TrapezoidParams theta_zpos_for_depth(int nz);

// Seed parameters with flags wired for one method variant; theta_zpos is
// depth-scaled.
seed::SeedParams seed_params_for(SeedMethod method, int nz);

// full benchmark geometry (640 x 640 x 128, 1000 objects)
sim::SimConfig benchmark_sim_config(std::uint64_t seed);
// desk geometry (256 x 256 x 64, ~150 objects) for fast runs
sim::SimConfig desk_sim_config(std::uint64_t seed);

struct BenchmarkFrame {
    int sim_frame = 0;
    std::vector<sim::SimObject> objects;
    volume::Volume view0;          // acquired image, objective at high z
    volume::Volume view1;          // acquired opposite view, own frame
    volume::LabelVolume truth;     // view-0 orientation
};

struct Benchmark {
    sim::SimConfig config;
    std::vector<BenchmarkFrame> frames;
    std::vector<sim::TruthRecord> truth_records;  // world coordinates
};

// Runs the motion simulation and renders + acquires the selected frames
// (all frames when `frames` is empty). View 1 exists when config.multiview.
Benchmark generate_benchmark(const sim::SimConfig& config, std::vector<int> frames = {});

// Object states with extra close pairs injected; used to provoke merged
// components for the splitting comparisons.
std::vector<sim::SimObject> with_merged_pairs(const std::vector<sim::SimObject>& objects,
                                              const sim::SimConfig& config, int pairs,
                                              std::uint64_t salt);

struct SeedRun {
    core::FeatureTable seeds;
    metrics::SeedScore score;
    double seconds = 0.0;
    std::size_t voxels = 0;
};

SeedRun run_seed_method(const volume::Volume& raw, const volume::LabelVolume& truth,
                        SeedMethod method, int workers = 0);

struct SegRun {
    seg::SegmentationResult segmentation;
    metrics::SegScore score;
    double seconds = 0.0;
    std::size_t voxels = 0;
};

// Runs the segmentation variant with its method-matched seed detector (the
// whole-image splitter uses the strict-maximum seeds, the guided one the
// fused uncertainty seeds).
SegRun run_seg_method(const volume::Volume& raw, const volume::LabelVolume& truth,
                      SegMethod method, const seg::SegParams& params, int workers = 0);

struct TrackRun {
    metrics::TrackScore score;
    double seconds = 0.0;
    std::size_t voxels = 0;
};

// Full multiview tracking pipeline for one method over a frame sequence.
TrackRun run_track_method(const Benchmark& benchmark, TrackMethod method,
                          const seg::SegParams& seg_params, double beta_track, int workers = 0);

// Report tables (csv text plus the parsed rows) for the reproduction
// presets: seed_table, seg_table, track_table, noise_sweep.
struct ReportTable {
    std::vector<std::string> columns;
    std::vector<std::string> row_names;
    std::vector<std::vector<double>> rows;

    void save_csv(const std::string& path) const;
    double cell(const std::string& row, const std::string& column) const;
};

ReportTable reproduce_seed_table(const Benchmark& benchmark, int workers = 0);
ReportTable reproduce_seg_table(const Benchmark& benchmark, const seg::SegParams& params,
                                int workers = 0);
ReportTable reproduce_track_table(const Benchmark& benchmark, const seg::SegParams& params,
                                  int workers = 0);
// sweeps sigma_agn over `levels` values log-spaced in [lo, hi] on one frame
ReportTable reproduce_noise_sweep(const sim::SimConfig& base_config, int levels, double lo,
                                  double hi, const seg::SegParams& params, int workers = 0);

}  // namespace fuzzpipe::pipeline
