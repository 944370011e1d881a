#include "fuzzpipe/seg/watershed.hpp"

#include <queue>
#include <stdexcept>

namespace fuzzpipe::seg {

namespace {

struct QueueEntry {
    float height;      // inverted intensity, lower floods first
    std::uint64_t order;  // insertion tiebreak for determinism
    std::size_t voxel;
    std::uint32_t label;
};

struct EntryGreater {
    bool operator()(const QueueEntry& a, const QueueEntry& b) const {
        if (a.height != b.height) return a.height > b.height;
        return a.order > b.order;
    }
};

// restrict_to_mask: flood only mask voxels; otherwise flood the whole image
// and report basin labels on mask voxels.
volume::LabelVolume flood(const volume::Volume& intensity, const volume::LabelVolume& mask,
                          const std::vector<core::Vec3i>& seeds, bool restrict_to_mask) {
    if (!intensity.same_dims(mask)) throw std::invalid_argument("watershed: dims mismatch");
    const int nx = intensity.nx(), ny = intensity.ny(), nz = intensity.nz();

    volume::LabelVolume basins(nx, ny, nz);
    basins.sx = mask.sx;
    basins.sy = mask.sy;
    basins.sz = mask.sz;

    std::priority_queue<QueueEntry, std::vector<QueueEntry>, EntryGreater> queue;
    std::uint64_t order = 0;
    std::uint32_t next_label = 0;
    for (const auto& s : seeds) {
        if (!intensity.inside(s.x, s.y, s.z)) continue;
        const std::size_t i = intensity.index(s.x, s.y, s.z);
        if (restrict_to_mask && mask[i] == 0) continue;
        ++next_label;
        if (basins[i] != 0) continue;  // coincident seeds share the first basin
        basins[i] = next_label;
        queue.push({-intensity[i], order++, i, next_label});
    }

    if (next_label == 0) {
        // no usable seed: hand the mask back as a single label
        volume::LabelVolume out(nx, ny, nz);
        out.sx = mask.sx;
        out.sy = mask.sy;
        out.sz = mask.sz;
        for (std::size_t i = 0; i < mask.size(); ++i) out[i] = mask[i] ? 1 : 0;
        return out;
    }

    while (!queue.empty()) {
        const QueueEntry top = queue.top();
        queue.pop();
        int x, y, z;
        intensity.unindex(top.voxel, x, y, z);
        for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0 && dz == 0) continue;
                    const int px = x + dx, py = y + dy, pz = z + dz;
                    if (px < 0 || px >= nx || py < 0 || py >= ny || pz < 0 || pz >= nz) continue;
                    const std::size_t i = intensity.index(px, py, pz);
                    if (basins[i] != 0) continue;
                    if (restrict_to_mask && mask[i] == 0) continue;
                    basins[i] = top.label;
                    queue.push({-intensity[i], order++, i, top.label});
                }
    }

    if (!restrict_to_mask) {
        for (std::size_t i = 0; i < basins.size(); ++i)
            if (mask[i] == 0) basins[i] = 0;
        return basins;
    }

    // mask components no seed could reach keep their own fresh labels, so
    // no mask voxel is ever lost
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < mask.size(); ++s) {
        if (mask[s] == 0 || basins[s] != 0) continue;
        ++next_label;
        basins[s] = next_label;
        stack.assign(1, s);
        while (!stack.empty()) {
            const std::size_t cur = stack.back();
            stack.pop_back();
            int x, y, z;
            mask.unindex(cur, x, y, z);
            for (int dz = -1; dz <= 1; ++dz)
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int px = x + dx, py = y + dy, pz = z + dz;
                        if (px < 0 || px >= nx || py < 0 || py >= ny || pz < 0 || pz >= nz)
                            continue;
                        const std::size_t i = mask.index(px, py, pz);
                        if (mask[i] && basins[i] == 0) {
                            basins[i] = next_label;
                            stack.push_back(i);
                        }
                    }
        }
    }
    return basins;
}

}  // namespace

volume::LabelVolume seeded_watershed(const volume::Volume& intensity,
                                     const volume::LabelVolume& mask,
                                     const std::vector<core::Vec3i>& seeds) {
    return flood(intensity, mask, seeds, /*restrict_to_mask=*/true);
}

volume::LabelVolume watershed_full_domain(const volume::Volume& intensity,
                                          const volume::LabelVolume& mask,
                                          const std::vector<core::Vec3i>& seeds) {
    return flood(intensity, mask, seeds, /*restrict_to_mask=*/false);
}

}  // namespace fuzzpipe::seg
