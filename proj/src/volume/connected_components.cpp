#include "fuzzpipe/volume/connected_components.hpp"

#include <vector>

namespace fuzzpipe::volume {

namespace {

// BFS flood from each unvisited foreground voxel in scan order; the queue is
// a reused vector to avoid per-component allocations.
LabelVolume label_components(const LabelVolume& in, bool same_label_only) {
    LabelVolume out(in.nx(), in.ny(), in.nz());
    out.sx = in.sx;
    out.sy = in.sy;
    out.sz = in.sz;
    const int nx = in.nx(), ny = in.ny(), nz = in.nz();
    std::vector<std::size_t> queue;
    std::uint32_t next_label = 0;
    for (std::size_t start = 0; start < in.size(); ++start) {
        if (in[start] == 0 || out[start] != 0) continue;
        const std::uint32_t source = in[start];
        ++next_label;
        out[start] = next_label;
        queue.clear();
        queue.push_back(start);
        while (!queue.empty()) {
            const std::size_t cur = queue.back();
            queue.pop_back();
            int x, y, z;
            in.unindex(cur, x, y, z);
            for (int dz = -1; dz <= 1; ++dz) {
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0 && dz == 0) continue;
                        const int px = x + dx, py = y + dy, pz = z + dz;
                        if (px < 0 || px >= nx || py < 0 || py >= ny || pz < 0 || pz >= nz)
                            continue;
                        const std::size_t i = in.index(px, py, pz);
                        if (in[i] == 0 || out[i] != 0) continue;
                        if (same_label_only && in[i] != source) continue;
                        out[i] = next_label;
                        queue.push_back(i);
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace

LabelVolume connected_components(const LabelVolume& mask) {
    return label_components(mask, /*same_label_only=*/false);
}

LabelVolume relabel_connected(const LabelVolume& labels) {
    return label_components(labels, /*same_label_only=*/true);
}

}  // namespace fuzzpipe::volume
