#include "fuzzpipe/volume/region_features.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace fuzzpipe::volume {

std::vector<RegionFeatures> compute_region_features(const LabelVolume& labels,
                                                    const Volume& intensity) {
    if (!labels.same_dims(intensity))
        throw std::invalid_argument("region features: dimension mismatch");

    struct Acc {
        std::size_t n = 0;
        double sx = 0, sy = 0, sz = 0, si = 0;
        double max_i = 0;
        int min_x = 1 << 30, min_y = 1 << 30, min_z = 1 << 30;
        int max_x = -1, max_y = -1, max_z = -1;
    };
    std::map<std::uint32_t, Acc> accs;

    const int nx = labels.nx(), ny = labels.ny(), nz = labels.nz();
    std::size_t i = 0;
    for (int z = 0; z < nz; ++z) {
        for (int y = 0; y < ny; ++y) {
            for (int x = 0; x < nx; ++x, ++i) {
                const std::uint32_t l = labels[i];
                if (l == 0) continue;
                Acc& a = accs[l];
                ++a.n;
                a.sx += x;
                a.sy += y;
                a.sz += z;
                const double v = intensity[i];
                a.si += v;
                a.max_i = std::max(a.max_i, v);
                a.min_x = std::min(a.min_x, x);
                a.min_y = std::min(a.min_y, y);
                a.min_z = std::min(a.min_z, z);
                a.max_x = std::max(a.max_x, x);
                a.max_y = std::max(a.max_y, y);
                a.max_z = std::max(a.max_z, z);
            }
        }
    }

    std::vector<RegionFeatures> out;
    out.reserve(accs.size());
    for (const auto& [label, a] : accs) {
        RegionFeatures f;
        f.label = label;
        f.voxels = a.n;
        f.cx = a.sx / a.n;
        f.cy = a.sy / a.n;
        f.cz = a.sz / a.n;
        f.width = a.max_x - a.min_x + 1;
        f.height = a.max_y - a.min_y + 1;
        f.depth = a.max_z - a.min_z + 1;
        f.min_x = a.min_x;
        f.min_y = a.min_y;
        f.min_z = a.min_z;
        f.max_x = a.max_x;
        f.max_y = a.max_y;
        f.max_z = a.max_z;
        f.mean_intensity = a.si / a.n;
        f.max_intensity = a.max_i;
        out.push_back(f);
    }
    return out;
}

core::FeatureTable features_to_table(const std::vector<RegionFeatures>& features, int origin_op) {
    core::FeatureTable table(std::vector<std::string>{"label", "x", "y", "z", "volume", "width",
                                                      "height", "depth", "mean_int", "max_int"});
    for (const auto& f : features) {
        const double row[] = {static_cast<double>(f.label), f.cx, f.cy, f.cz,
                              static_cast<double>(f.voxels), static_cast<double>(f.width),
                              static_cast<double>(f.height), static_cast<double>(f.depth),
                              f.mean_intensity, f.max_intensity};
        table.add_row(row, origin_op);
    }
    return table;
}

core::FeatureTable region_features(const LabelVolume& labels, const Volume& intensity,
                                   int origin_op) {
    return features_to_table(compute_region_features(labels, intensity), origin_op);
}

}  // namespace fuzzpipe::volume
