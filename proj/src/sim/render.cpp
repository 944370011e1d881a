#include "fuzzpipe/sim/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fuzzpipe/core/parallel.hpp"
#include "fuzzpipe/core/rng.hpp"

namespace fuzzpipe::sim {

namespace {

// Trilinear value noise on an integer lattice keyed by the object salt.
double lattice_value(std::uint64_t salt, int x, int y, int z) {
    const std::uint64_t h = core::mix_seed(
        salt, (static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 40) ^
                  (static_cast<std::uint64_t>(static_cast<std::uint32_t>(y)) << 20) ^
                  static_cast<std::uint64_t>(static_cast<std::uint32_t>(z)));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double value_noise(std::uint64_t salt, double x, double y, double z) {
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const int z0 = static_cast<int>(std::floor(z));
    const double fx = x - x0, fy = y - y0, fz = z - z0;
    double acc = 0.0;
    for (int dz = 0; dz <= 1; ++dz)
        for (int dy = 0; dy <= 1; ++dy)
            for (int dx = 0; dx <= 1; ++dx) {
                const double w = (dx ? fx : 1.0 - fx) * (dy ? fy : 1.0 - fy) * (dz ? fz : 1.0 - fz);
                acc += w * lattice_value(salt, x0 + dx, y0 + dy, z0 + dz);
            }
    return acc;
}

}  // namespace

RenderedFrame render_frame(const std::vector<SimObject>& objects, const SimConfig& config) {
    RenderedFrame frame{volume::Volume(config.nx, config.ny, config.nz),
                        volume::LabelVolume(config.nx, config.ny, config.nz)};
    frame.raw.sz = config.z_anisotropy;
    frame.truth.sz = config.z_anisotropy;

    // squared distance to the owning center, for nearest-center conflicts
    std::vector<float> claim(frame.truth.size(), std::numeric_limits<float>::max());

    const double ln2 = 0.69314718055994530942;
    for (const auto& obj : objects) {
        const double cx = obj.position.x;
        const double cy = obj.position.y;
        const double cz = obj.position.z / config.z_anisotropy;  // world -> voxel
        const double rxy = obj.radius;
        const double rz = obj.radius / config.z_anisotropy;

        // stamp out to ~1.8 normalized radii; beyond that the profile is
        // negligible for power >= 2
        const double reach = 1.8;
        const int x0 = std::max(0, static_cast<int>(std::floor(cx - reach * rxy)));
        const int x1 = std::min(config.nx - 1, static_cast<int>(std::ceil(cx + reach * rxy)));
        const int y0 = std::max(0, static_cast<int>(std::floor(cy - reach * rxy)));
        const int y1 = std::min(config.ny - 1, static_cast<int>(std::ceil(cy + reach * rxy)));
        const int z0 = std::max(0, static_cast<int>(std::floor(cz - reach * rz)));
        const int z1 = std::min(config.nz - 1, static_cast<int>(std::ceil(cz + reach * rz)));

        const double amplitude = config.peak_intensity * obj.intensity_scale;
        const double inv_tex = 1.0 / config.texture_scale;

        for (int z = z0; z <= z1; ++z) {
            for (int y = y0; y <= y1; ++y) {
                for (int x = x0; x <= x1; ++x) {
                    const double dx = (x - cx) / rxy;
                    const double dy = (y - cy) / rxy;
                    const double dz = (z - cz) / rz;
                    const double rho2 = dx * dx + dy * dy + dz * dz;
                    if (rho2 > reach * reach) continue;
                    // half maximum exactly at rho = 1
                    const double profile =
                        std::exp(-ln2 * std::pow(rho2, config.super_gaussian_power));
                    const double tex =
                        1.0 + config.texture_amplitude *
                                  (2.0 * value_noise(obj.render_salt, x * inv_tex, y * inv_tex,
                                                     z * config.z_anisotropy * inv_tex) -
                                   1.0);
                    const float value = static_cast<float>(amplitude * profile * tex);
                    const std::size_t i = frame.raw.index(x, y, z);
                    frame.raw[i] = std::max(frame.raw[i], value);
                    if (rho2 <= 1.0) {
                        const float d2 = static_cast<float>(
                            (x - cx) * (x - cx) + (y - cy) * (y - cy) +
                            (z - cz) * (z - cz) * config.z_anisotropy * config.z_anisotropy);
                        if (d2 < claim[i]) {
                            claim[i] = d2;
                            frame.truth[i] = static_cast<std::uint32_t>(obj.id);
                        }
                    }
                }
            }
        }
    }
    return frame;
}

}  // namespace fuzzpipe::sim
