#include "fuzzpipe/pipeline/presets.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "fuzzpipe/core/keyvalue.hpp"
#include "fuzzpipe/core/rng.hpp"
#include "fuzzpipe/fuse/multiview.hpp"
#include "fuzzpipe/fuzzy/propagation.hpp"
#include "fuzzpipe/metrics/timing.hpp"
#include "fuzzpipe/seg/otsu.hpp"
#include "fuzzpipe/sim/acquisition.hpp"
#include "fuzzpipe/track/tracking.hpp"
#include "fuzzpipe/volume/connected_components.hpp"
#include "fuzzpipe/volume/filters.hpp"
#include "fuzzpipe/volume/region_features.hpp"

namespace fuzzpipe::pipeline {

std::string to_string(SeedMethod m) {
    switch (m) {
        case SeedMethod::logsm: return "LoGSM";
        case SeedMethod::lognsm: return "LoGNSM";
        case SeedMethod::lognsm_f: return "LoGNSM+F";
        case SeedMethod::lognsm_f_u: return "LoGNSM+F+U";
    }
    return "?";
}

std::string to_string(SegMethod m) {
    switch (m) {
        case SegMethod::otsu: return "OTSU";
        case SegMethod::otsuww: return "OTSUWW";
        case SegMethod::otsuww_u: return "OTSUWW+U";
    }
    return "?";
}

std::string to_string(TrackMethod m) {
    switch (m) {
        case TrackMethod::otsuww_nn: return "OTSUWW+NN";
        case TrackMethod::otsuww_u_nn: return "OTSUWW+U+NN";
        case TrackMethod::otsu_f_nn_u: return "OTSU+F+NN+U";
    }
    return "?";
}

fuzzy::TrapezoidParams theta_zpos_for_depth(int nz) {
    // reference ramp (50, 250) over a 410-unit-deep stack, kept proportional
    const double a = 50.0 / 410.0 * nz;
    const double b = 250.0 / 410.0 * nz;
    return {a, b, seed::kInf, seed::kInf};
}

seed::SeedParams seed_params_for(SeedMethod method, int nz) {
    seed::SeedParams p;
    p.theta_zpos = theta_zpos_for_depth(nz);
    switch (method) {
        case SeedMethod::logsm:
            p.strict = true;
            break;
        case SeedMethod::lognsm:
            break;
        case SeedMethod::lognsm_f:
            p.fuse = true;
            break;
        case SeedMethod::lognsm_f_u:
            p.fuse = true;
            p.uncertainty = true;
            break;
    }
    return p;
}

sim::SimConfig benchmark_sim_config(std::uint64_t seed) {
    sim::SimConfig c;
    c.seed = seed;
    return c;  // defaults describe the full-size benchmark
}

sim::SimConfig desk_sim_config(std::uint64_t seed) {
    sim::SimConfig c;
    c.seed = seed;
    c.nx = 256;
    c.ny = 256;
    c.nz = 64;
    c.center = {128.0, 128.0, 102.0};
    c.inner_radius = 76.0;
    c.outer_radius = 92.0;
    c.initial_count = 24;
    c.target_count = 150;
    c.frames = 20;
    c.division_period = 6.0;
    return c;
}

Benchmark generate_benchmark(const sim::SimConfig& config, std::vector<int> frames) {
    Benchmark bm;
    bm.config = config;
    const auto sim = sim::simulate(config);
    bm.truth_records = sim.truth;
    if (frames.empty()) {
        for (int f = 0; f < config.frames; ++f) frames.push_back(f);
    }
    for (const int f : frames) {
        if (f < 0 || f >= static_cast<int>(sim.frames.size()))
            throw std::invalid_argument("benchmark frame out of range");
        BenchmarkFrame frame;
        frame.sim_frame = f;
        frame.objects = sim.frames[f];
        const auto rendered = sim::render_frame(frame.objects, config);
        frame.truth = rendered.truth;
        frame.view0 = sim::simulate_acquisition(rendered.raw, config,
                                                static_cast<std::uint64_t>(2 * f));
        if (config.multiview) {
            frame.view1 = sim::simulate_acquisition(sim::rotate_180(rendered.raw), config,
                                                    static_cast<std::uint64_t>(2 * f + 1));
        }
        bm.frames.push_back(std::move(frame));
    }
    return bm;
}

std::vector<sim::SimObject> with_merged_pairs(const std::vector<sim::SimObject>& objects,
                                              const sim::SimConfig& config, int pairs,
                                              std::uint64_t salt) {
    std::vector<sim::SimObject> out = objects;
    core::Rng rng(core::mix_seed(config.seed, salt));
    int next_id = 0;
    for (const auto& o : objects) next_id = std::max(next_id, o.id);
    const int step = std::max(1, static_cast<int>(objects.size()) / std::max(1, pairs));
    int added = 0;
    for (std::size_t i = 0; i < objects.size() && added < pairs; i += step) {
        const auto& host = objects[i];
        sim::SimObject twin = host;
        twin.id = ++next_id;
        const double angle = rng.uniform(0.0, 6.28318530717958647692);
        const double dist = 1.55 * host.radius;  // close enough to merge after thresholding
        twin.position.x += dist * std::cos(angle);
        twin.position.y += dist * std::sin(angle);
        twin.render_salt = core::mix_seed(config.seed, 0xbeef00 + twin.id);
        out.push_back(twin);
        ++added;
    }
    return out;
}

SeedRun run_seed_method(const volume::Volume& raw, const volume::LabelVolume& truth,
                        SeedMethod method, int workers) {
    SeedRun run;
    const auto params = seed_params_for(method, raw.nz());
    const metrics::StopWatch watch;
    run.seeds = seed::detect_seeds(raw, params, workers);
    run.seconds = watch.seconds();
    run.voxels = raw.size();
    run.score = metrics::score_seeds(run.seeds, truth);
    return run;
}

namespace {

std::vector<core::Vec3i> seed_voxels(const core::FeatureTable& seeds) {
    std::vector<core::Vec3i> out;
    if (seeds.rows() == 0) return out;
    const auto xs = seeds.column("x");
    const auto ys = seeds.column("y");
    const auto zs = seeds.column("z");
    for (std::size_t r = 0; r < seeds.rows(); ++r) {
        out.push_back({static_cast<int>(std::lround(xs[r])), static_cast<int>(std::lround(ys[r])),
                       static_cast<int>(std::lround(zs[r]))});
    }
    return out;
}

}  // namespace

SegRun run_seg_method(const volume::Volume& raw, const volume::LabelVolume& truth,
                      SegMethod method, const seg::SegParams& params, int workers) {
    SegRun run;
    run.voxels = raw.size();
    std::vector<core::Vec3i> seeds;
    if (method == SegMethod::otsuww) {
        seeds = seed_voxels(seed::detect_seeds(raw, seed_params_for(SeedMethod::logsm, raw.nz()),
                                               workers));
    } else if (method == SegMethod::otsuww_u) {
        seeds = seed_voxels(
            seed::detect_seeds(raw, seed_params_for(SeedMethod::lognsm_f_u, raw.nz()), workers));
    }
    const metrics::StopWatch watch;
    switch (method) {
        case SegMethod::otsu:
            run.segmentation = seg::segment_otsu_result(raw, params, workers);
            break;
        case SegMethod::otsuww:
            run.segmentation = seg::segment_otsuww(raw, seeds, params, seg::SplitMode::global,
                                                   workers);
            break;
        case SegMethod::otsuww_u:
            run.segmentation =
                seg::segment_otsuww(raw, seeds, params, seg::SplitMode::uncertainty_guided,
                                    workers);
            break;
    }
    run.seconds = watch.seconds();
    run.score = metrics::score_segmentation(run.segmentation.labels, truth);
    return run;
}

namespace {

// view-local z of a point already expressed in view-0 voxel coordinates
inline double local_z(double z, int nz, bool flipped) { return flipped ? nz - 1 - z : z; }

// appends fsmd_fusion = min(fsmd_correct, mu_zpos(view-local centroid z))
void add_fusion_fsmd(core::FeatureTable& features, const fuzzy::TrapezoidParams& theta_zpos,
                     int nz, bool flipped) {
    std::vector<double> combined(features.rows());
    const auto fsmd = features.column("fsmd_correct");
    const auto zs = features.column("z");
    for (std::size_t r = 0; r < features.rows(); ++r) {
        combined[r] =
            std::min(fsmd[r], fuzzy::eval_trapezoid(local_z(zs[r], nz, flipped), theta_zpos));
    }
    features.add_column("fsmd_fusion", std::move(combined));
}

core::FeatureTable backrotate_points(const core::FeatureTable& t, int nx, int nz) {
    core::FeatureTable out = t;
    auto xs = out.mutable_column("x");
    auto zs = out.mutable_column("z");
    for (std::size_t r = 0; r < out.rows(); ++r) {
        xs[r] = nx - 1 - xs[r];
        zs[r] = nz - 1 - zs[r];
    }
    return out;
}

struct FrameObjects {
    core::FeatureTable points;          // columns x, y, z (+source, segment_label)
    volume::LabelVolume labels;         // fused label volume, view-0 frame
    core::FeatureTable segments;        // per-segment features incl. fsmd
};

// one frame of the selected tracking pipeline
FrameObjects frame_objects_for(const BenchmarkFrame& frame, const sim::SimConfig& config,
                               TrackMethod method, const seg::SegParams& seg_params,
                               double beta_track, int workers) {
    const int nz = config.nz;
    const auto theta_z = theta_zpos_for_depth(nz);
    FrameObjects out;

    if (method == TrackMethod::otsu_f_nn_u) {
        // threshold both views independently, fuse the binary images by
        // maximum, estimate degrees on the fused components and hand merged
        // regions to the tracker as their contained seed points
        auto binarize = [&](const volume::Volume& v) {
            const auto smoothed = volume::gaussian_smooth(v, seg_params.sigma_smooth, workers);
            const double thr = seg::otsu_threshold(smoothed);
            volume::Volume bin(v.nx(), v.ny(), v.nz());
            for (std::size_t i = 0; i < v.size(); ++i)
                bin[i] = smoothed[i] > thr ? 1.0f : 0.0f;
            return bin;
        };
        const auto fused_bin =
            fuse::fuse_binary_max(binarize(frame.view0), sim::rotate_180(binarize(frame.view1)));
        volume::LabelVolume mask(fused_bin.nx(), fused_bin.ny(), fused_bin.nz());
        for (std::size_t i = 0; i < fused_bin.size(); ++i) mask[i] = fused_bin[i] > 0.5f ? 1 : 0;
        out.labels = volume::connected_components(mask);
        const auto fused_intensity =
            fuse::fuse_binary_max(frame.view0, sim::rotate_180(frame.view1));
        out.segments = seg::annotate_segment_fsmd(out.labels, fused_intensity, seg_params);

        // seeds from both views, coordinates unified, redundancy fused
        const auto p = seed_params_for(SeedMethod::lognsm_f_u, nz);
        auto seeds0 = seed::detect_seeds(frame.view0, p, workers);
        const auto seeds1 =
            backrotate_points(seed::detect_seeds(frame.view1, p, workers), config.nx, nz);
        std::vector<std::size_t> all_rows(seeds1.rows());
        for (std::size_t r = 0; r < seeds1.rows(); ++r) all_rows[r] = r;
        seeds0.append_rows_by_name(seeds1, all_rows);
        const auto seeds = seed::fuse_seeds(seeds0, p.t_dbc);

        out.points = track::uncertainty_tracking_inputs(out.segments, seeds, out.labels,
                                                        beta_track);
        return out;
    }

    // watershed-based paths: segment each view, back-rotate view 1, fuse by
    // segment quality (size degrees combined with axial position)
    const SeedMethod seed_method =
        method == TrackMethod::otsuww_nn ? SeedMethod::logsm : SeedMethod::lognsm_f_u;
    const seg::SplitMode mode = method == TrackMethod::otsuww_nn
                                    ? seg::SplitMode::global
                                    : seg::SplitMode::uncertainty_guided;

    auto segment_view = [&](const volume::Volume& v) {
        const auto seeds =
            seed_voxels(seed::detect_seeds(v, seed_params_for(seed_method, nz), workers));
        return seg::segment_otsuww(v, seeds, seg_params, mode, workers);
    };
    const auto seg0 = segment_view(frame.view0);
    const auto seg1 = segment_view(frame.view1);

    const auto labels1 = sim::rotate_180(seg1.labels);
    const auto raw1 = sim::rotate_180(frame.view1);
    core::FeatureTable f0 = seg0.features;
    core::FeatureTable f1 = seg::annotate_segment_fsmd(labels1, raw1, seg_params);
    add_fusion_fsmd(f0, theta_z, nz, /*flipped=*/false);
    add_fusion_fsmd(f1, theta_z, nz, /*flipped=*/true);

    auto fused = fuse::fuse_segments(seg0.labels, labels1, f0, f1, "fsmd_fusion");
    out.labels = std::move(fused.labels);
    out.segments = std::move(fused.features);
    // rewrite label ids to the fused volume so downstream lookups agree
    auto labels_col = out.segments.mutable_column("label");
    const auto fused_col = out.segments.column("fused_label");
    for (std::size_t r = 0; r < out.segments.rows(); ++r) labels_col[r] = fused_col[r];

    out.points = core::FeatureTable(
        std::vector<std::string>{"x", "y", "z", "source", "segment_label"});
    for (std::size_t r = 0; r < out.segments.rows(); ++r) {
        const double row[] = {out.segments.at(r, "x"), out.segments.at(r, "y"),
                              out.segments.at(r, "z"), 0.0, out.segments.at(r, "label")};
        out.points.add_row(row, 2);
    }
    return out;
}

}  // namespace

TrackRun run_track_method(const Benchmark& benchmark, TrackMethod method,
                          const seg::SegParams& seg_params, double beta_track, int workers) {
    if (benchmark.frames.size() < 2)
        throw std::invalid_argument("tracking needs at least two frames");
    if (!benchmark.config.multiview)
        throw std::invalid_argument("tracking presets expect a multiview benchmark");

    TrackRun run;
    const metrics::StopWatch watch;
    std::vector<core::FeatureTable> point_frames;
    std::vector<volume::LabelVolume> result_labels;
    for (const auto& frame : benchmark.frames) {
        auto objs = frame_objects_for(frame, benchmark.config, method, seg_params, beta_track,
                                      workers);
        point_frames.push_back(std::move(objs.points));
        result_labels.push_back(std::move(objs.labels));
    }
    const auto graph = track::track_sequence(point_frames);
    run.seconds = watch.seconds() / (2.0 * static_cast<double>(benchmark.frames.size()));
    run.voxels = benchmark.frames.front().view0.size();

    // truth graph restricted to the rendered window, frames renumbered 0..K-1
    const int f0 = benchmark.frames.front().sim_frame;
    const int f1 = benchmark.frames.back().sim_frame;
    std::vector<sim::TruthRecord> window;
    for (auto r : benchmark.truth_records) {
        if (r.frame < f0 || r.frame > f1) continue;
        r.frame -= f0;
        window.push_back(r);
    }
    const auto truth =
        track::truth_graph(window, 1.0 / benchmark.config.z_anisotropy);
    std::vector<volume::LabelVolume> truth_labels;
    for (const auto& frame : benchmark.frames) truth_labels.push_back(frame.truth);
    std::vector<const volume::LabelVolume*> result_label_ptrs;
    for (const auto& l : result_labels) result_label_ptrs.push_back(&l);
    run.score = metrics::score_tracking(graph, truth, truth_labels, result_label_ptrs);
    return run;
}

void ReportTable::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write report: " + path);
    out << "Method";
    for (const auto& c : columns) out << "," << c;
    out << "\n";
    for (std::size_t r = 0; r < rows.size(); ++r) {
        out << row_names[r];
        for (const double v : rows[r]) out << "," << core::format_real(v);
        out << "\n";
    }
}

double ReportTable::cell(const std::string& row, const std::string& column) const {
    for (std::size_t r = 0; r < row_names.size(); ++r) {
        if (row_names[r] != row) continue;
        for (std::size_t c = 0; c < columns.size(); ++c)
            if (columns[c] == column) return rows[r][c];
    }
    throw std::out_of_range("no cell (" + row + ", " + column + ")");
}

ReportTable reproduce_seed_table(const Benchmark& benchmark, int workers) {
    ReportTable table;
    table.columns = {"TP", "FP", "FN", "Rec.", "Prec.", "F-Sc.", "Dist.", "Time (s)", "KVox./s"};
    for (const SeedMethod m : {SeedMethod::logsm, SeedMethod::lognsm, SeedMethod::lognsm_f,
                               SeedMethod::lognsm_f_u}) {
        double tp = 0, fp = 0, fn = 0, rec = 0, prec = 0, f = 0, dist = 0, secs = 0, kvox = 0;
        for (const auto& frame : benchmark.frames) {
            const auto run = run_seed_method(frame.view0, frame.truth, m, workers);
            tp += run.score.tp;
            fp += run.score.fp;
            fn += run.score.fn;
            rec += run.score.recall;
            prec += run.score.precision;
            f += run.score.fscore;
            dist += run.score.mean_centroid_distance;
            secs += run.seconds;
            kvox += (static_cast<double>(run.voxels) / 1000.0) / run.seconds;
        }
        const double n = static_cast<double>(benchmark.frames.size());
        table.row_names.push_back(to_string(m));
        table.rows.push_back(
            {tp / n, fp / n, fn / n, rec / n, prec / n, f / n, dist / n, secs / n, kvox / n});
    }
    return table;
}

ReportTable reproduce_seg_table(const Benchmark& benchmark, const seg::SegParams& params,
                                int workers) {
    ReportTable table;
    table.columns = {"RI",      "JI",   "NSD",   "HM",      "Split", "Merged",   "Added",
                     "Missing", "Rec.", "Prec.", "F-Score", "Time (s)", "KVoxel/s"};
    for (const SegMethod m : {SegMethod::otsu, SegMethod::otsuww, SegMethod::otsuww_u}) {
        std::vector<double> acc(table.columns.size(), 0.0);
        for (const auto& frame : benchmark.frames) {
            const auto run = run_seg_method(frame.view0, frame.truth, m, params, workers);
            const double vals[] = {run.score.rand_index,
                                   run.score.jaccard_index,
                                   run.score.nsd,
                                   run.score.hausdorff,
                                   run.score.split,
                                   run.score.merged,
                                   run.score.added,
                                   run.score.missing,
                                   run.score.recall,
                                   run.score.precision,
                                   run.score.fscore,
                                   run.seconds,
                                   (static_cast<double>(run.voxels) / 1000.0) / run.seconds};
            for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += vals[i];
        }
        for (auto& v : acc) v /= static_cast<double>(benchmark.frames.size());
        table.row_names.push_back(to_string(m));
        table.rows.push_back(acc);
    }
    return table;
}

ReportTable reproduce_track_table(const Benchmark& benchmark, const seg::SegParams& params,
                                  int workers) {
    ReportTable table;
    table.columns = {"TP",   "FP",    "FN",      "Redundant", "Missing",  "Merged", "Rec.",
                     "Prec.", "F-Score", "TRA",     "Time (s)",  "KVoxel/s"};
    for (const TrackMethod m :
         {TrackMethod::otsuww_nn, TrackMethod::otsuww_u_nn, TrackMethod::otsu_f_nn_u}) {
        const auto run = run_track_method(benchmark, m, params, 0.9, workers);
        table.row_names.push_back(to_string(m));
        table.rows.push_back({run.score.tp, run.score.fp, run.score.fn, run.score.redundant_edges,
                              run.score.missing_edges, run.score.merged, run.score.recall,
                              run.score.precision, run.score.fscore, run.score.tra, run.seconds,
                              (static_cast<double>(run.voxels) / 1000.0) / run.seconds});
    }
    return table;
}

ReportTable reproduce_noise_sweep(const sim::SimConfig& base_config, int levels, double lo,
                                  double hi, const seg::SegParams& params, int workers) {
    if (levels < 2) throw std::invalid_argument("noise sweep needs >= 2 levels");
    ReportTable table;
    table.columns = {"snr",
                     "seed_rec",
                     "seed_prec",
                     "seed_fsc",
                     "otsuww_rec",
                     "otsuww_prec",
                     "otsuww_fsc",
                     "otsuww_u_rec",
                     "otsuww_u_prec",
                     "otsuww_u_fsc"};

    // one simulated frame reused across all noise levels
    sim::SimConfig config = base_config;
    const auto sim = sim::simulate(config);
    const auto& objects = sim.frames.back();
    const auto rendered = sim::render_frame(objects, config);

    for (int i = 0; i < levels; ++i) {
        const double t = static_cast<double>(i) / (levels - 1);
        const double sigma = lo * std::pow(hi / lo, t);
        config.sigma_agn = sigma;
        const auto noisy = sim::simulate_acquisition(rendered.raw, config,
                                                     0x5eed0000ull + static_cast<std::uint64_t>(i));
        const double snr = sim::measure_snr(noisy, rendered.truth);
        const auto seed_run =
            run_seed_method(noisy, rendered.truth, SeedMethod::lognsm_f, workers);
        const auto ww = run_seg_method(noisy, rendered.truth, SegMethod::otsuww, params, workers);
        const auto wwu =
            run_seg_method(noisy, rendered.truth, SegMethod::otsuww_u, params, workers);
        table.row_names.push_back(core::format_real(sigma));
        table.rows.push_back({snr, seed_run.score.recall, seed_run.score.precision,
                              seed_run.score.fscore, ww.score.recall, ww.score.precision,
                              ww.score.fscore, wwu.score.recall, wwu.score.precision,
                              wwu.score.fscore});
    }
    return table;
}

}  // namespace fuzzpipe::pipeline
