#include "fuzzpipe/volume/filters.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fuzzpipe/core/parallel.hpp"

namespace fuzzpipe::volume {

namespace {

std::vector<float> gaussian_kernel(double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<float> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double w = std::exp(-0.5 * (i * i) / (sigma * sigma));
        k[i + radius] = static_cast<float>(w);
        sum += w;
    }
    for (auto& w : k) w = static_cast<float>(w / sum);
    return k;
}

enum class Axis { X, Y, Z };

// One separable pass along `axis`, clamp-to-edge, parallel over z-slabs.
void convolve_axis(const Volume& src, Volume& dst, const std::vector<float>& kernel, Axis axis,
                   int workers) {
    const int radius = static_cast<int>(kernel.size() / 2);
    const int nx = src.nx(), ny = src.ny(), nz = src.nz();
    core::parallel_chunks(
        static_cast<std::size_t>(nz),
        [&](std::size_t z0, std::size_t z1) {
            for (int z = static_cast<int>(z0); z < static_cast<int>(z1); ++z) {
                for (int y = 0; y < ny; ++y) {
                    for (int x = 0; x < nx; ++x) {
                        double acc = 0.0;
                        for (int t = -radius; t <= radius; ++t) {
                            int sx = x, sy = y, sz = z;
                            switch (axis) {
                                case Axis::X: sx = x + t; break;
                                case Axis::Y: sy = y + t; break;
                                case Axis::Z: sz = z + t; break;
                            }
                            acc += kernel[t + radius] * src.at_clamped(sx, sy, sz);
                        }
                        dst.at(x, y, z) = static_cast<float>(acc);
                    }
                }
            }
        },
        workers);
}

}  // namespace

Volume gaussian_smooth(const Volume& v, double sigma_x, double sigma_y, double sigma_z,
                       int workers) {
    if (sigma_x < 0 || sigma_y < 0 || sigma_z < 0)
        throw std::invalid_argument("negative smoothing sigma");
    Volume out = v;
    Volume tmp(v.nx(), v.ny(), v.nz());
    tmp.sx = v.sx;
    tmp.sy = v.sy;
    tmp.sz = v.sz;
    const double sigmas[3] = {sigma_x, sigma_y, sigma_z};
    const Axis axes[3] = {Axis::X, Axis::Y, Axis::Z};
    for (int i = 0; i < 3; ++i) {
        if (sigmas[i] <= 0.0) continue;
        const auto kernel = gaussian_kernel(sigmas[i]);
        if (kernel.size() <= 1) continue;
        convolve_axis(out, tmp, kernel, axes[i], workers);
        std::swap(out, tmp);
    }
    return out;
}

Volume log_filter(const Volume& v, double sigma, int workers) {
    if (sigma <= 0) throw std::invalid_argument("log_filter needs sigma > 0");
    // sigma is physical; anisotropic spacing shrinks the voxel-space kernel
    // and weights the second differences accordingly
    const double sx = v.sx > 0 ? v.sx : 1.0;
    const double sy = v.sy > 0 ? v.sy : 1.0;
    const double sz = v.sz > 0 ? v.sz : 1.0;
    const Volume smoothed = gaussian_smooth(v, sigma / sx, sigma / sy, sigma / sz, workers);
    Volume out(v.nx(), v.ny(), v.nz());
    out.sx = v.sx;
    out.sy = v.sy;
    out.sz = v.sz;
    const float norm = static_cast<float>(sigma * sigma);
    const float wx = static_cast<float>(1.0 / (sx * sx));
    const float wy = static_cast<float>(1.0 / (sy * sy));
    const float wz = static_cast<float>(1.0 / (sz * sz));
    const int nx = v.nx(), ny = v.ny(), nz = v.nz();
    core::parallel_chunks(
        static_cast<std::size_t>(nz),
        [&](std::size_t z0, std::size_t z1) {
            for (int z = static_cast<int>(z0); z < static_cast<int>(z1); ++z) {
                for (int y = 0; y < ny; ++y) {
                    for (int x = 0; x < nx; ++x) {
                        const float c = smoothed.at(x, y, z);
                        const float lap =
                            wx * (smoothed.at_clamped(x - 1, y, z) +
                                  smoothed.at_clamped(x + 1, y, z) - 2.0f * c) +
                            wy * (smoothed.at_clamped(x, y - 1, z) +
                                  smoothed.at_clamped(x, y + 1, z) - 2.0f * c) +
                            wz * (smoothed.at_clamped(x, y, z - 1) +
                                  smoothed.at_clamped(x, y, z + 1) - 2.0f * c);
                        out.at(x, y, z) = -norm * lap;
                    }
                }
            }
        },
        workers);
    return out;
}

}  // namespace fuzzpipe::volume
