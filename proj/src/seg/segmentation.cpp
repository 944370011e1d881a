#include "fuzzpipe/seg/segmentation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <stdexcept>

#include "fuzzpipe/core/keyvalue.hpp"
#include "fuzzpipe/core/parallel.hpp"
#include "fuzzpipe/fuzzy/propagation.hpp"
#include "fuzzpipe/seg/otsu.hpp"
#include "fuzzpipe/seg/watershed.hpp"
#include "fuzzpipe/volume/connected_components.hpp"
#include "fuzzpipe/volume/filters.hpp"
#include "fuzzpipe/volume/region_features.hpp"

namespace fuzzpipe::seg {

namespace {

fuzzy::TrapezoidParams theta_from(const core::KeyValueFile& kv, const std::string& key,
                                  const fuzzy::TrapezoidParams& fallback) {
    if (!kv.has(key)) return fallback;
    const auto v = kv.get_doubles(key);
    if (v.size() != 4) throw std::invalid_argument("expected 4 values for " + key);
    return {v[0], v[1], v[2], v[3]};
}

}  // namespace

SegParams SegParams::load(const std::string& path) {
    const auto kv = core::KeyValueFile::load(path);
    SegParams p;
    p.sigma_smooth = kv.get_double("sigma_smooth", p.sigma_smooth);
    p.theta_vol = theta_from(kv, "theta_vol", p.theta_vol);
    p.theta_width = theta_from(kv, "theta_width", p.theta_width);
    p.theta_height = theta_from(kv, "theta_height", p.theta_height);
    p.theta_depth = theta_from(kv, "theta_depth", p.theta_depth);
    p.alpha = kv.get_double("alpha", p.alpha);
    p.beta = kv.get_double("beta", p.beta);
    p.crop_margin = kv.get_int("crop_margin", p.crop_margin);
    return p;
}

volume::LabelVolume segment_otsu(const volume::Volume& v, double sigma_smooth, int workers) {
    const auto smoothed = volume::gaussian_smooth(v, sigma_smooth, workers);
    const double threshold = otsu_threshold(smoothed);
    return volume::connected_components(threshold_mask(smoothed, threshold));
}

core::FeatureTable annotate_segment_fsmd(const volume::LabelVolume& labels,
                                         const volume::Volume& intensity,
                                         const SegParams& params) {
    const auto features = volume::region_features(labels, intensity, /*origin_op=*/2);
    return fuzzy::annotate_fsmd(features,
                                {{"volume", params.theta_vol},
                                 {"width", params.theta_width},
                                 {"height", params.theta_height},
                                 {"depth", params.theta_depth}},
                                /*combine=*/true);
}

SizeClass classify_low_fsmd(const core::FeatureTable& features, std::size_t row,
                            const SegParams& params) {
    const std::pair<const char*, const fuzzy::TrapezoidParams*> checks[] = {
        {"volume", &params.theta_vol},
        {"width", &params.theta_width},
        {"height", &params.theta_height},
        {"depth", &params.theta_depth}};
    bool small = false, large = false;
    for (const auto& [name, theta] : checks) {
        const double v = features.at(row, name);
        if (v > theta->c) large = true;
        if (v < theta->b) small = true;
    }
    if (large) return SizeClass::too_large;  // split first, reject later
    if (small) return SizeClass::too_small;
    return SizeClass::none;
}

fuzzy::TrapezoidParams quantile_fuzzy_params(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("quantile_fuzzy_params: no data");
    std::sort(values.begin(), values.end());
    auto quantile = [&](double q) {
        const double pos = q * (values.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, values.size() - 1);
        const double frac = pos - lo;
        return values[lo] * (1.0 - frac) + values[hi] * frac;
    };
    return {values.front(), quantile(0.05), quantile(0.95), values.back()};
}

SegmentationResult segment_otsu_result(const volume::Volume& v, const SegParams& params,
                                       int workers) {
    SegmentationResult out;
    out.labels = segment_otsu(v, params.sigma_smooth, workers);
    out.features = annotate_segment_fsmd(out.labels, v, params);
    return out;
}

namespace {

struct CropJob {
    std::uint32_t label = 0;
    int x0, y0, z0, x1, y1, z1;
    std::vector<core::Vec3i> seeds;  // crop-local coordinates
};

}  // namespace

SegmentationResult segment_otsuww(const volume::Volume& v, const std::vector<core::Vec3i>& seeds,
                                  const SegParams& params, SplitMode mode, int workers) {
    const auto smoothed = volume::gaussian_smooth(v, params.sigma_smooth, workers);
    const double threshold = otsu_threshold(smoothed);
    const auto mask = threshold_mask(smoothed, threshold);
    volume::LabelVolume labels = volume::connected_components(mask);

    SegmentationResult out;

    if (mode == SplitMode::global) {
        // flood the whole domain from every seed, then carry basin labels on
        // the foreground; seedless regions keep their component labels
        const auto basins = watershed_full_domain(smoothed, mask, seeds);
        out.watershed_voxels = v.size();
        const std::uint32_t offset = 1u << 24;  // keep seedless components distinct
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == 0) continue;
            labels[i] = basins[i] != 0 ? basins[i] : labels[i] + offset;
        }
        labels = volume::relabel_connected(labels);
        out.labels = std::move(labels);
        out.features = annotate_segment_fsmd(out.labels, v, params);
        return out;
    }

    // uncertainty-guided mode
    core::FeatureTable features = annotate_segment_fsmd(labels, v, params);
    const auto stats = volume::compute_region_features(labels, v);
    const auto fsmd = features.column("fsmd_correct");

    std::vector<CropJob> jobs;
    for (std::size_t r = 0; r < features.rows(); ++r) {
        if (fsmd[r] >= params.beta) continue;
        if (classify_low_fsmd(features, r, params) != SizeClass::too_large) continue;
        const auto& s = stats[r];
        CropJob job;
        job.label = s.label;
        job.x0 = std::max(0, s.min_x - params.crop_margin);
        job.y0 = std::max(0, s.min_y - params.crop_margin);
        job.z0 = std::max(0, s.min_z - params.crop_margin);
        job.x1 = std::min(v.nx() - 1, s.max_x + params.crop_margin);
        job.y1 = std::min(v.ny() - 1, s.max_y + params.crop_margin);
        job.z1 = std::min(v.nz() - 1, s.max_z + params.crop_margin);
        jobs.push_back(job);
    }
    for (auto& job : jobs) {
        for (const auto& seed : seeds) {
            if (seed.x < job.x0 || seed.x > job.x1 || seed.y < job.y0 || seed.y > job.y1 ||
                seed.z < job.z0 || seed.z > job.z1)
                continue;
            if (labels.at(seed.x, seed.y, seed.z) != job.label) continue;
            job.seeds.push_back({seed.x - job.x0, seed.y - job.y0, seed.z - job.z0});
        }
    }

    // per-crop watershed; each job only writes voxels of its own label, so
    // the write regions are disjoint and the loop parallelizes cleanly
    std::atomic<std::size_t> flooded{0};
    const std::uint32_t offset = 1u << 24;
    core::parallel_chunks(
        jobs.size(),
        [&](std::size_t b, std::size_t e) {
            for (std::size_t j = b; j < e; ++j) {
                const CropJob& job = jobs[j];
                const int cnx = job.x1 - job.x0 + 1;
                const int cny = job.y1 - job.y0 + 1;
                const int cnz = job.z1 - job.z0 + 1;
                volume::Volume crop(cnx, cny, cnz);
                volume::LabelVolume crop_mask(cnx, cny, cnz);
                for (int z = 0; z < cnz; ++z)
                    for (int y = 0; y < cny; ++y)
                        for (int x = 0; x < cnx; ++x) {
                            crop.at(x, y, z) = smoothed.at(job.x0 + x, job.y0 + y, job.z0 + z);
                            crop_mask.at(x, y, z) =
                                labels.at(job.x0 + x, job.y0 + y, job.z0 + z) == job.label ? 1 : 0;
                        }
                const auto split = seeded_watershed(crop, crop_mask, job.seeds);
                flooded += crop.size();
                for (int z = 0; z < cnz; ++z)
                    for (int y = 0; y < cny; ++y)
                        for (int x = 0; x < cnx; ++x) {
                            if (crop_mask.at(x, y, z) == 0) continue;
                            // offset separates new basins from untouched labels
                            // (4096 basins per crop); relabeling squashes
                            // everything afterwards
                            labels.at(job.x0 + x, job.y0 + y, job.z0 + z) =
                                offset + (static_cast<std::uint32_t>(j) << 12) + split.at(x, y, z);
                        }
            }
        },
        workers);
    out.watershed_voxels = flooded;

    labels = volume::relabel_connected(labels);

    // re-evaluate degrees on the split labels, then reject small noise
    features = annotate_segment_fsmd(labels, v, params);
    const auto fsmd2 = features.column("fsmd_correct");
    std::vector<char> drop(features.rows() + 1, 0);
    std::vector<std::size_t> keep_rows;
    for (std::size_t r = 0; r < features.rows(); ++r) {
        const bool reject = fsmd2[r] < params.alpha &&
                            classify_low_fsmd(features, r, params) == SizeClass::too_small;
        if (reject) {
            drop[static_cast<std::size_t>(features.at(r, "label"))] = 1;
        } else {
            keep_rows.push_back(r);
        }
    }
    if (keep_rows.size() != features.rows()) {
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] != 0 && labels[i] < drop.size() && drop[labels[i]]) labels[i] = 0;
        }
        features = features.select_rows(keep_rows);
    }

    out.labels = std::move(labels);
    out.features = std::move(features);
    return out;
}

}  // namespace fuzzpipe::seg
