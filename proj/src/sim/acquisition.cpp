#include "fuzzpipe/sim/acquisition.hpp"

#include <algorithm>
#include <cmath>

#include "fuzzpipe/core/parallel.hpp"
#include "fuzzpipe/core/rng.hpp"
#include "fuzzpipe/volume/filters.hpp"

namespace fuzzpipe::sim {

volume::Volume simulate_acquisition(const volume::Volume& raw, const SimConfig& config,
                                    std::uint64_t noise_salt) {
    volume::Volume v = raw;
    const int nx = v.nx(), ny = v.ny(), nz = v.nz();

    // attenuation: dimmer with growing distance from the objective at z = nz-1
    if (config.attenuation > 0.0 && nz > 1) {
        for (int z = 0; z < nz; ++z) {
            const float factor = static_cast<float>(
                std::exp(-config.attenuation * static_cast<double>(nz - 1 - z) / nz));
            float* slice = v.data().data() + v.index(0, 0, z);
            const std::size_t n = static_cast<std::size_t>(nx) * ny;
            for (std::size_t i = 0; i < n; ++i) slice[i] *= factor;
        }
    }

    if (config.psf_sigma_xy > 0.0 || config.psf_sigma_z > 0.0) {
        v = volume::gaussian_smooth(v, config.psf_sigma_xy, config.psf_sigma_xy,
                                    config.psf_sigma_z);
    }

    if (config.dark_current != 0.0) {
        const float dc = static_cast<float>(config.dark_current);
        for (auto& x : v.data()) x += dc;
    }

    // per-z-slab noise streams keyed by the seed and the salt, so frames and
    // views are independent yet reproducible
    const bool shot = config.photon_scale > 0.0;
    const bool agn = config.sigma_agn > 0.0;
    if (shot || agn) {
        core::parallel_chunks(static_cast<std::size_t>(nz), [&](std::size_t z0, std::size_t z1) {
            for (std::size_t z = z0; z < z1; ++z) {
                core::Rng rng(core::mix_seed(config.seed ^ noise_salt, 0xac0u + z));
                float* slice = v.data().data() + v.index(0, 0, static_cast<int>(z));
                const std::size_t n = static_cast<std::size_t>(nx) * ny;
                for (std::size_t i = 0; i < n; ++i) {
                    double x = slice[i];
                    if (shot) {
                        x = std::max(0.0, x);
                        x = static_cast<double>(rng.poisson(x * config.photon_scale)) /
                            config.photon_scale;
                    }
                    if (agn) x += rng.normal(0.0, config.sigma_agn);
                    slice[i] = static_cast<float>(x);
                }
            }
        });
    }

    for (auto& x : v.data()) x = std::clamp(x, 0.0f, 1.0f);
    return v;
}

namespace {

template <typename T>
volume::Grid3<T> rotate_impl(const volume::Grid3<T>& v) {
    volume::Grid3<T> out(v.nx(), v.ny(), v.nz());
    out.sx = v.sx;
    out.sy = v.sy;
    out.sz = v.sz;
    const int nx = v.nx(), ny = v.ny(), nz = v.nz();
    for (int z = 0; z < nz; ++z)
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x)
                out.at(nx - 1 - x, y, nz - 1 - z) = v.at(x, y, z);
    return out;
}

}  // namespace

volume::Volume rotate_180(const volume::Volume& v) { return rotate_impl(v); }
volume::LabelVolume rotate_180(const volume::LabelVolume& v) { return rotate_impl(v); }

double measure_snr(const volume::Volume& v, const volume::LabelVolume& truth) {
    double fg_sum = 0.0, bg_sum = 0.0, bg_sq = 0.0;
    std::size_t fg_n = 0, bg_n = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (truth[i] != 0) {
            fg_sum += v[i];
            ++fg_n;
        } else {
            bg_sum += v[i];
            bg_sq += static_cast<double>(v[i]) * v[i];
            ++bg_n;
        }
    }
    if (fg_n == 0 || bg_n < 2) return 0.0;
    const double bg_mean = bg_sum / bg_n;
    const double bg_var = std::max(0.0, bg_sq / bg_n - bg_mean * bg_mean);
    const double bg_std = std::sqrt(bg_var);
    if (bg_std == 0.0) return 0.0;
    return (fg_sum / fg_n) / bg_std;
}

}  // namespace fuzzpipe::sim
