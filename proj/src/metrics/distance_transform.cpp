#include "fuzzpipe/metrics/distance_transform.hpp"

#include <limits>

namespace fuzzpipe::metrics {

namespace {

constexpr double kFar = 1e18;

// 1D squared-distance lower envelope (Felzenszwalb-Huttenlocher).
void transform_1d(const double* f, double* d, int n, std::vector<int>& v,
                  std::vector<double>& z) {
    v.resize(n);
    z.resize(n + 1);
    int k = 0;
    v[0] = 0;
    z[0] = -kFar;
    z[1] = kFar;
    for (int q = 1; q < n; ++q) {
        double s;
        for (;;) {
            const int p = v[k];
            s = ((f[q] + q * static_cast<double>(q)) - (f[p] + p * static_cast<double>(p))) /
                (2.0 * (q - p));
            if (s <= z[k]) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kFar;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const int p = v[k];
        d[q] = (q - p) * static_cast<double>(q - p) + f[p];
    }
}

}  // namespace

std::vector<double> squared_distance_transform(const volume::LabelVolume& mask) {
    const int nx = mask.nx(), ny = mask.ny(), nz = mask.nz();
    std::vector<double> dist(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i) dist[i] = mask[i] ? 0.0 : kFar;

    std::vector<double> f(std::max({nx, ny, nz})), d(std::max({nx, ny, nz}));
    std::vector<int> v;
    std::vector<double> z;

    // x pass
    for (int zz = 0; zz < nz; ++zz)
        for (int y = 0; y < ny; ++y) {
            const std::size_t base = mask.index(0, y, zz);
            for (int x = 0; x < nx; ++x) f[x] = dist[base + x];
            transform_1d(f.data(), d.data(), nx, v, z);
            for (int x = 0; x < nx; ++x) dist[base + x] = d[x];
        }
    // y pass
    for (int zz = 0; zz < nz; ++zz)
        for (int x = 0; x < nx; ++x) {
            for (int y = 0; y < ny; ++y) f[y] = dist[mask.index(x, y, zz)];
            transform_1d(f.data(), d.data(), ny, v, z);
            for (int y = 0; y < ny; ++y) dist[mask.index(x, y, zz)] = d[y];
        }
    // z pass
    for (int y = 0; y < ny; ++y)
        for (int x = 0; x < nx; ++x) {
            for (int zz = 0; zz < nz; ++zz) f[zz] = dist[mask.index(x, y, zz)];
            transform_1d(f.data(), d.data(), nz, v, z);
            for (int zz = 0; zz < nz; ++zz) dist[mask.index(x, y, zz)] = d[zz];
        }
    return dist;
}

}  // namespace fuzzpipe::metrics
