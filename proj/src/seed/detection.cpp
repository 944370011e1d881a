#include "fuzzpipe/seed/detection.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "fuzzpipe/core/keyvalue.hpp"
#include "fuzzpipe/core/parallel.hpp"
#include "fuzzpipe/fuzzy/propagation.hpp"
#include "fuzzpipe/volume/filters.hpp"

namespace fuzzpipe::seed {

namespace {

fuzzy::TrapezoidParams theta_from(const core::KeyValueFile& kv, const std::string& key,
                                  const fuzzy::TrapezoidParams& fallback) {
    if (!kv.has(key)) return fallback;
    const auto v = kv.get_doubles(key);
    if (v.size() != 4) throw std::invalid_argument("expected 4 values for " + key);
    return {v[0], v[1], v[2], v[3]};
}

}  // namespace

SeedParams SeedParams::load(const std::string& path) {
    const auto kv = core::KeyValueFile::load(path);
    SeedParams p;
    p.sigma_min = kv.get_double("sigma_min", p.sigma_min);
    p.sigma_max = kv.get_double("sigma_max", p.sigma_max);
    p.sigma_step = kv.get_double("sigma_step", p.sigma_step);
    p.t_wmi = kv.get_double("t_wmi", p.t_wmi);
    p.window = kv.get_int("window", p.window);
    p.response_levels = kv.get_int("response_levels", p.response_levels);
    p.t_dbc = kv.get_double("t_dbc", p.t_dbc);
    p.theta_wmi = theta_from(kv, "theta_wmi", p.theta_wmi);
    p.theta_smi = theta_from(kv, "theta_smi", p.theta_smi);
    p.theta_zpos = theta_from(kv, "theta_zpos", p.theta_zpos);
    p.alpha = kv.get_double("alpha", p.alpha);
    p.beta = kv.get_double("beta", p.beta);
    return p;
}

ScaleSpaceResult log_scale_space_max(const volume::Volume& v, double sigma_min, double sigma_max,
                                     double sigma_step, int workers) {
    if (sigma_min > sigma_max || sigma_step <= 0.0)
        throw std::invalid_argument("bad scale range");
    ScaleSpaceResult result{volume::Volume(v.nx(), v.ny(), v.nz(),
                                           -std::numeric_limits<float>::max()),
                            volume::Volume(v.nx(), v.ny(), v.nz()), 0};
    result.response.sx = v.sx;
    result.response.sy = v.sy;
    result.response.sz = v.sz;
    for (double sigma = sigma_min; sigma <= sigma_max + 1e-9; sigma += sigma_step) {
        const auto resp = volume::log_filter(v, sigma, workers);
        ++result.scales;
        const float fs = static_cast<float>(sigma);
        core::parallel_chunks(
            v.size(),
            [&](std::size_t b, std::size_t e) {
                for (std::size_t i = b; i < e; ++i) {
                    if (resp[i] > result.response[i]) {
                        result.response[i] = resp[i];
                        result.best_scale[i] = fs;
                    }
                }
            },
            workers);
    }
    return result;
}

core::FeatureTable detect_extrema(const volume::Volume& response, const volume::Volume& best_scale,
                                  const volume::Volume& raw, const SeedParams& params) {
    if (!response.same_dims(raw)) throw std::invalid_argument("detect_extrema: dims mismatch");
    if (params.window % 2 == 0) throw std::invalid_argument("feature window must be odd");
    const int nx = response.nx(), ny = response.ny(), nz = response.nz();

    // Discretizing the response reproduces the plateau artifacts of integer
    // intermediate images; plateau voxels then tie exactly.
    std::vector<float> quantized;
    const float* resp = response.data().data();
    if (params.response_levels > 0) {
        float max_r = 0.0f;
        for (std::size_t i = 0; i < response.size(); ++i) max_r = std::max(max_r, response[i]);
        quantized.resize(response.size());
        if (max_r > 0.0f) {
            const float scale = static_cast<float>(params.response_levels) / max_r;
            for (std::size_t i = 0; i < response.size(); ++i)
                quantized[i] = response[i] > 0.0f ? std::floor(response[i] * scale) : -1.0f;
        }
        resp = quantized.data();
    }

    const int half = params.window / 2;
    auto window_stats = [&](int x, int y, int z, double& mean, double& peak) {
        double sum = 0.0;
        peak = 0.0;
        int count = 0;
        for (int dz = -half; dz <= half; ++dz)
            for (int dy = -half; dy <= half; ++dy)
                for (int dx = -half; dx <= half; ++dx) {
                    const double v = raw.at_clamped(x + dx, y + dy, z + dz);
                    sum += v;
                    peak = std::max(peak, v);
                    ++count;
                }
        mean = sum / count;
    };

    core::FeatureTable table(
        std::vector<std::string>{"x", "y", "z", "sigma", "response", "wmi", "smi", "zpos"});
    for (int z = 1; z < nz - 1; ++z) {
        for (int y = 1; y < ny - 1; ++y) {
            for (int x = 1; x < nx - 1; ++x) {
                const std::size_t i = response.index(x, y, z);
                const float c = resp[i];
                if (c <= 0.0f) continue;
                bool is_max = true;
                for (int dz = -1; dz <= 1 && is_max; ++dz)
                    for (int dy = -1; dy <= 1 && is_max; ++dy)
                        for (int dx = -1; dx <= 1; ++dx) {
                            if (dx == 0 && dy == 0 && dz == 0) continue;
                            const float n = resp[response.index(x + dx, y + dy, z + dz)];
                            if (params.strict ? c <= n : c < n) {
                                is_max = false;
                                break;
                            }
                        }
                if (!is_max) continue;
                double wmi, smi;
                window_stats(x, y, z, wmi, smi);
                if (wmi < params.t_wmi) continue;
                const double row[] = {static_cast<double>(x),
                                      static_cast<double>(y),
                                      static_cast<double>(z),
                                      best_scale[i],
                                      response[i],
                                      wmi,
                                      smi,
                                      static_cast<double>(z)};
                table.add_row(row, 1);
            }
        }
    }
    return table;
}

namespace {

// Ward merge distance between clusters summarized by centroid and size,
// matching the classic sqrt(2 n_a n_b / (n_a + n_b)) |c_a - c_b| convention
// (singleton pairs reduce to plain Euclidean distance).
double ward_distance(const double* ca, double na, const double* cb, double nb) {
    double d2 = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double d = ca[k] - cb[k];
        d2 += d * d;
    }
    return std::sqrt(2.0 * na * nb / (na + nb) * d2);
}

}  // namespace

core::FeatureTable fuse_seeds(const core::FeatureTable& seeds, double t_dbc) {
    if (t_dbc <= 0.0) throw std::invalid_argument("fuse_seeds: t_dbc must be positive");
    const std::size_t n = seeds.rows();
    if (n <= 1) return seeds;

    const auto xs = seeds.column("x");
    const auto ys = seeds.column("y");
    const auto zs = seeds.column("z");

    struct Cluster {
        double centroid[3];
        double size = 0.0;
        bool alive = false;
    };
    std::vector<Cluster> clusters(2 * n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        clusters[i] = {{xs[i], ys[i], zs[i]}, 1.0, true};
    }
    struct Merge {
        std::size_t a, b, into;
        double distance;
    };
    std::vector<Merge> merges;
    merges.reserve(n - 1);

    // nearest-neighbor chain agglomeration; Ward linkage is reducible, so
    // reciprocal nearest neighbors can be merged immediately
    std::vector<std::size_t> chain;
    std::vector<std::size_t> alive;
    for (std::size_t i = 0; i < n; ++i) alive.push_back(i);
    std::size_t next_cluster = n;

    auto nearest = [&](std::size_t c) {
        double best = std::numeric_limits<double>::max();
        std::size_t best_i = c;
        for (const std::size_t o : alive) {
            if (o == c) continue;
            const double d = ward_distance(clusters[c].centroid, clusters[c].size,
                                           clusters[o].centroid, clusters[o].size);
            if (d < best || (d == best && o < best_i)) {
                best = d;
                best_i = o;
            }
        }
        return std::pair<std::size_t, double>{best_i, best};
    };

    while (alive.size() > 1) {
        if (chain.empty()) chain.push_back(alive.front());
        for (;;) {
            const std::size_t top = chain.back();
            const auto [nn, dist] = nearest(top);
            if (chain.size() >= 2 && nn == chain[chain.size() - 2]) {
                // reciprocal pair: merge
                std::size_t a = top, b = nn;
                if (b < a) std::swap(a, b);
                chain.pop_back();
                chain.pop_back();
                Cluster merged;
                merged.size = clusters[a].size + clusters[b].size;
                for (int k = 0; k < 3; ++k)
                    merged.centroid[k] = (clusters[a].centroid[k] * clusters[a].size +
                                          clusters[b].centroid[k] * clusters[b].size) /
                                         merged.size;
                merged.alive = true;
                clusters[a].alive = false;
                clusters[b].alive = false;
                const std::size_t into = next_cluster++;
                clusters[into] = merged;
                merges.push_back({a, b, into, dist});
                alive.erase(std::remove(alive.begin(), alive.end(), a), alive.end());
                alive.erase(std::remove(alive.begin(), alive.end(), b), alive.end());
                alive.push_back(into);
                break;
            }
            chain.push_back(nn);
        }
    }

    // cut: apply merges below the cutoff (Ward heights are monotone)
    std::vector<std::size_t> root(2 * n - 1);
    for (std::size_t i = 0; i < root.size(); ++i) root[i] = i;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (root[x] != x) {
            root[x] = root[root[x]];
            x = root[x];
        }
        return x;
    };
    for (const auto& m : merges) {
        if (m.distance < t_dbc) {
            root[find(m.a)] = m.into;
            root[find(m.b)] = m.into;
        }
    }

    // group leaves by final cluster, ordered by first member
    std::vector<long> cluster_of(n);
    std::vector<long> order(2 * n - 1, -1);
    long next_out = 0;
    std::vector<std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        if (order[r] < 0) {
            order[r] = next_out++;
            groups.emplace_back();
        }
        cluster_of[i] = order[r];
        groups[static_cast<std::size_t>(order[r])].push_back(i);
    }

    core::FeatureTable out(seeds.column_names());
    std::vector<double> row(seeds.cols());
    for (const auto& group : groups) {
        std::fill(row.begin(), row.end(), 0.0);
        for (const std::size_t r : group)
            for (std::size_t c = 0; c < seeds.cols(); ++c) row[c] += seeds.at(r, c);
        for (auto& v : row) v /= static_cast<double>(group.size());
        out.add_row(row, seeds.origin(group.front()));
    }
    return out;
}

core::FeatureTable annotate_seed_fsmd(const core::FeatureTable& seeds, const SeedParams& params) {
    return fuzzy::annotate_fsmd(
        seeds,
        {{"wmi", params.theta_wmi}, {"smi", params.theta_smi}, {"zpos", params.theta_zpos}},
        /*combine=*/true);
}

core::FeatureTable detect_seeds(const volume::Volume& raw, const SeedParams& params, int workers) {
    const auto space =
        log_scale_space_max(raw, params.sigma_min, params.sigma_max, params.sigma_step, workers);
    core::FeatureTable seeds = detect_extrema(space.response, space.best_scale, raw, params);
    if (params.fuse) seeds = fuse_seeds(seeds, params.t_dbc);
    if (params.uncertainty) {
        seeds = annotate_seed_fsmd(seeds, params);
        seeds = fuzzy::alpha_filter(seeds, params.alpha);
    }
    return seeds;
}

}  // namespace fuzzpipe::seed
