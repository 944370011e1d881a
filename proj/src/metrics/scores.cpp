#include "fuzzpipe/metrics/scores.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "fuzzpipe/metrics/distance_transform.hpp"
#include "fuzzpipe/volume/region_features.hpp"

namespace fuzzpipe::metrics {

double f_score(double precision, double recall) {
    if (precision + recall <= 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

SeedScore score_seeds(const core::FeatureTable& seeds, const volume::LabelVolume& truth) {
    // truth centroids and object count
    struct Acc {
        double sx = 0, sy = 0, sz = 0;
        std::size_t n = 0;
    };
    std::unordered_map<std::uint32_t, Acc> objects;
    {
        const int nx = truth.nx(), ny = truth.ny(), nz = truth.nz();
        std::size_t i = 0;
        for (int z = 0; z < nz; ++z)
            for (int y = 0; y < ny; ++y)
                for (int x = 0; x < nx; ++x, ++i) {
                    if (truth[i] == 0) continue;
                    Acc& a = objects[truth[i]];
                    a.sx += x;
                    a.sy += y;
                    a.sz += z;
                    ++a.n;
                }
    }

    SeedScore score;
    std::unordered_map<std::uint32_t, std::array<double, 3>> first_hit;
    if (seeds.rows() > 0) {
        const auto xs = seeds.column("x");
        const auto ys = seeds.column("y");
        const auto zs = seeds.column("z");
        for (std::size_t r = 0; r < seeds.rows(); ++r) {
            const int x = static_cast<int>(std::lround(xs[r]));
            const int y = static_cast<int>(std::lround(ys[r]));
            const int z = static_cast<int>(std::lround(zs[r]));
            const std::uint32_t label = truth.inside(x, y, z) ? truth.at(x, y, z) : 0;
            if (label == 0) {
                score.fp += 1;  // background detection
            } else if (first_hit.count(label)) {
                score.fp += 1;  // redundant detection of a hit object
            } else {
                first_hit[label] = {xs[r], ys[r], zs[r]};
            }
        }
    }
    score.tp = static_cast<double>(first_hit.size());
    score.fn = static_cast<double>(objects.size()) - score.tp;

    double dist_sum = 0.0;
    for (const auto& [label, seed] : first_hit) {
        const Acc& a = objects.at(label);
        const double cx = a.sx / a.n, cy = a.sy / a.n, cz = a.sz / a.n;
        dist_sum += std::sqrt((seed[0] - cx) * (seed[0] - cx) + (seed[1] - cy) * (seed[1] - cy) +
                              (seed[2] - cz) * (seed[2] - cz));
    }
    score.mean_centroid_distance = first_hit.empty() ? 0.0 : dist_sum / first_hit.size();
    score.recall = score.tp + score.fn > 0 ? score.tp / (score.tp + score.fn) : 0.0;
    score.precision = score.tp + score.fp > 0 ? score.tp / (score.tp + score.fp) : 0.0;
    score.fscore = f_score(score.precision, score.recall);
    return score;
}

namespace {

struct LabelInfo {
    std::size_t size = 0;
    int min_x = 1 << 30, min_y = 1 << 30, min_z = 1 << 30;
    int max_x = -1, max_y = -1, max_z = -1;
};

std::map<std::uint32_t, LabelInfo> label_infos(const volume::LabelVolume& v) {
    std::map<std::uint32_t, LabelInfo> out;
    const int nx = v.nx(), ny = v.ny(), nz = v.nz();
    std::size_t i = 0;
    for (int z = 0; z < nz; ++z)
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x, ++i) {
                if (v[i] == 0) continue;
                LabelInfo& a = out[v[i]];
                ++a.size;
                a.min_x = std::min(a.min_x, x);
                a.min_y = std::min(a.min_y, y);
                a.min_z = std::min(a.min_z, z);
                a.max_x = std::max(a.max_x, x);
                a.max_y = std::max(a.max_y, y);
                a.max_z = std::max(a.max_z, z);
            }
    return out;
}

// crop both labels to the union box, build masks of one truth object and one
// result object, and derive the NSD / Hausdorff contributions
struct PairGeometry {
    double nsd = 0.0;
    double hausdorff = 0.0;
};

PairGeometry pair_geometry(const volume::LabelVolume& result, std::uint32_t rl,
                           const volume::LabelVolume& truth, std::uint32_t tl,
                           const LabelInfo& ri, const LabelInfo& ti) {
    const int margin = 1;
    const int x0 = std::max(0, std::min(ri.min_x, ti.min_x) - margin);
    const int y0 = std::max(0, std::min(ri.min_y, ti.min_y) - margin);
    const int z0 = std::max(0, std::min(ri.min_z, ti.min_z) - margin);
    const int x1 = std::min(truth.nx() - 1, std::max(ri.max_x, ti.max_x) + margin);
    const int y1 = std::min(truth.ny() - 1, std::max(ri.max_y, ti.max_y) + margin);
    const int z1 = std::min(truth.nz() - 1, std::max(ri.max_z, ti.max_z) + margin);
    const int nx = x1 - x0 + 1, ny = y1 - y0 + 1, nz = z1 - z0 + 1;

    volume::LabelVolume t_mask(nx, ny, nz), r_mask(nx, ny, nz), t_border(nx, ny, nz);
    for (int z = 0; z < nz; ++z)
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x) {
                t_mask.at(x, y, z) = truth.at(x0 + x, y0 + y, z0 + z) == tl ? 1 : 0;
                r_mask.at(x, y, z) = result.at(x0 + x, y0 + y, z0 + z) == rl ? 1 : 0;
            }
    // 6-neighbor boundary of the truth object
    for (int z = 0; z < nz; ++z)
        for (int y = 0; y < ny; ++y)
            for (int x = 0; x < nx; ++x) {
                if (!t_mask.at(x, y, z)) continue;
                const bool border = x == 0 || x == nx - 1 || y == 0 || y == ny - 1 || z == 0 ||
                                    z == nz - 1 || !t_mask.at(x - 1, y, z) ||
                                    !t_mask.at(x + 1, y, z) || !t_mask.at(x, y - 1, z) ||
                                    !t_mask.at(x, y + 1, z) || !t_mask.at(x, y, z - 1) ||
                                    !t_mask.at(x, y, z + 1);
                t_border.at(x, y, z) = border ? 1 : 0;
            }

    const auto d_border = squared_distance_transform(t_border);
    const auto d_truth = squared_distance_transform(t_mask);
    const auto d_result = squared_distance_transform(r_mask);

    PairGeometry g;
    double sym_sum = 0.0, union_sum = 0.0;
    double h = 0.0;
    for (std::size_t i = 0; i < t_mask.size(); ++i) {
        const bool in_t = t_mask[i] != 0;
        const bool in_r = r_mask[i] != 0;
        if (!in_t && !in_r) continue;
        const double db = std::sqrt(d_border[i]);
        union_sum += db;
        if (in_t != in_r) sym_sum += db;
        if (in_r) h = std::max(h, std::sqrt(d_truth[i]));  // result voxel vs truth set
        if (in_t) h = std::max(h, std::sqrt(d_result[i])); // truth voxel vs result set
    }
    g.nsd = union_sum > 0.0 ? sym_sum / union_sum : 0.0;
    g.hausdorff = h;
    return g;
}

}  // namespace

SegScore score_segmentation(const volume::LabelVolume& result, const volume::LabelVolume& truth) {
    if (!result.same_dims(truth)) throw std::invalid_argument("score_segmentation: dims mismatch");

    // contingency over all voxels, background included as class 0
    std::unordered_map<std::uint64_t, std::size_t> joint;
    std::unordered_map<std::uint32_t, std::size_t> truth_sizes, result_sizes;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        ++truth_sizes[truth[i]];
        ++result_sizes[result[i]];
        ++joint[(static_cast<std::uint64_t>(truth[i]) << 32) | result[i]];
    }

    SegScore score;
    {
        const double n = static_cast<double>(truth.size());
        auto pairs2 = [](double c) { return c * (c - 1.0); };  // 2 * C(c, 2)
        double sum_t = 0.0, sum_r = 0.0, sum_j = 0.0;
        for (const auto& [l, c] : truth_sizes) sum_t += pairs2(static_cast<double>(c));
        for (const auto& [l, c] : result_sizes) sum_r += pairs2(static_cast<double>(c));
        for (const auto& [k, c] : joint) sum_j += pairs2(static_cast<double>(c));
        const double total = pairs2(n);
        // disagreements: pairs joined in one labeling and separated in the other
        score.rand_index = total > 0.0 ? 1.0 - (sum_t + sum_r - 2.0 * sum_j) / total : 1.0;
    }

    // foreground-only overlap lists
    std::unordered_map<std::uint32_t, std::vector<std::pair<std::uint32_t, std::size_t>>>
        by_truth, by_result;
    for (const auto& [key, count] : joint) {
        const std::uint32_t t = static_cast<std::uint32_t>(key >> 32);
        const std::uint32_t r = static_cast<std::uint32_t>(key & 0xffffffffu);
        if (t == 0 || r == 0) continue;
        by_truth[t].push_back({r, count});
        by_result[r].push_back({t, count});
    }
    const auto truth_info = label_infos(truth);
    const auto result_info = label_infos(result);

    // added / merged from the result side
    for (const auto& [r, info] : result_info) {
        std::size_t best = 0;
        std::size_t covered = 0;
        const auto it = by_result.find(r);
        if (it != by_result.end()) {
            for (const auto& [t, c] : it->second) {
                best = std::max(best, c);
                if (2 * c >= truth_info.at(t).size) ++covered;
            }
        }
        if (2 * best < info.size) score.added += 1;
        if (covered >= 2) score.merged += static_cast<double>(covered - 1);
    }
    // missing / split from the truth side, plus matched pairs
    struct Matched {
        std::uint32_t truth_label, result_label;
        std::size_t overlap;
    };
    std::vector<Matched> matched;
    for (const auto& [t, info] : truth_info) {
        std::size_t best = 0;
        std::uint32_t best_r = 0;
        std::size_t claims = 0;
        const auto it = by_truth.find(t);
        if (it != by_truth.end()) {
            for (const auto& [r, c] : it->second) {
                if (c > best || (c == best && (best_r == 0 || r < best_r))) {
                    best = c;
                    best_r = r;
                }
                if (2 * c >= result_info.at(r).size) ++claims;
            }
        }
        if (2 * best < info.size) {
            score.missing += 1;
        } else {
            matched.push_back({t, best_r, best});
        }
        if (claims >= 2) score.split += static_cast<double>(claims - 1);
    }

    double ji_sum = 0.0;
    for (const auto& m : matched) {
        const double uni = static_cast<double>(truth_info.at(m.truth_label).size +
                                               result_info.at(m.result_label).size - m.overlap);
        ji_sum += static_cast<double>(m.overlap) / uni;
        const auto g = pair_geometry(result, m.result_label, truth, m.truth_label,
                                     result_info.at(m.result_label), truth_info.at(m.truth_label));
        score.nsd += g.nsd;
        score.hausdorff = std::max(score.hausdorff, g.hausdorff);
    }
    if (!matched.empty()) {
        score.jaccard_index = ji_sum / matched.size();
        score.nsd /= static_cast<double>(matched.size());
    }

    const double n_truth = static_cast<double>(truth_info.size());
    const double fn = score.merged + score.missing;
    const double fp = score.split + score.added;
    const double tp = std::max(0.0, n_truth - fn);
    score.recall = n_truth > 0 ? tp / n_truth : 0.0;
    score.precision = tp + fp > 0 ? tp / (tp + fp) : 0.0;
    score.fscore = f_score(score.precision, score.recall);
    return score;
}

TrackScore score_tracking(const track::TrackGraph& result, const track::TrackGraph& truth,
                          const std::vector<volume::LabelVolume>& truth_labels,
                          const std::vector<const volume::LabelVolume*>& result_labels,
                          const AogmWeights& weights) {
    TrackScore score;
    const int frames = static_cast<int>(truth_labels.size());

    // truth node lookup by (frame, object id == truth label)
    std::map<std::pair<int, int>, std::size_t> truth_index;
    for (std::size_t i = 0; i < truth.nodes.size(); ++i)
        truth_index[{truth.nodes[i].frame, truth.nodes[i].point_id}] = i;

    // containment: result node -> truth node
    std::vector<long> result_to_truth(result.nodes.size(), -1);
    std::map<std::size_t, std::vector<std::size_t>> candidates;  // truth node -> result nodes
    for (std::size_t i = 0; i < result.nodes.size(); ++i) {
        const auto& n = result.nodes[i];
        if (n.frame < 0 || n.frame >= frames) continue;
        const auto& labels = truth_labels[n.frame];
        const int x = static_cast<int>(std::lround(n.position.x));
        const int y = static_cast<int>(std::lround(n.position.y));
        const int z = static_cast<int>(std::lround(n.position.z));
        const std::uint32_t l = labels.inside(x, y, z) ? labels.at(x, y, z) : 0;
        if (l == 0) continue;
        const auto it = truth_index.find({n.frame, static_cast<int>(l)});
        if (it == truth_index.end()) continue;
        result_to_truth[i] = static_cast<long>(it->second);
        candidates[it->second].push_back(i);
    }

    // 1:1 matching: nearest result node wins, extras are false positives
    std::vector<long> truth_match(truth.nodes.size(), -1);
    for (auto& [t, list] : candidates) {
        const auto& tn = truth.nodes[t];
        std::sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) {
            const double da = (result.nodes[a].position - tn.position).squared_norm();
            const double db = (result.nodes[b].position - tn.position).squared_norm();
            if (da != db) return da < db;
            return a < b;
        });
        truth_match[t] = static_cast<long>(list.front());
    }

    for (std::size_t i = 0; i < result.nodes.size(); ++i) {
        if (result_to_truth[i] >= 0 &&
            truth_match[static_cast<std::size_t>(result_to_truth[i])] == static_cast<long>(i)) {
            score.tp += 1;
        } else {
            score.fp += 1;  // background node or redundant detection
        }
    }
    for (std::size_t t = 0; t < truth.nodes.size(); ++t)
        if (truth_match[t] < 0) score.fn += 1;

    // merged: extra truth centroids inside a result segment
    if (!result_labels.empty()) {
        std::set<std::pair<int, std::uint32_t>> seen;
        for (std::size_t i = 0; i < result.nodes.size(); ++i) {
            const auto& n = result.nodes[i];
            if (n.from_seed || n.segment_label == 0) continue;
            if (n.frame < 0 || n.frame >= static_cast<int>(result_labels.size())) continue;
            if (result_labels[n.frame] == nullptr) continue;
            if (!seen.insert({n.frame, n.segment_label}).second) continue;
            const auto& labels = *result_labels[n.frame];
            std::size_t inside = 0;
            for (const auto& tn : truth.nodes) {
                if (tn.frame != n.frame) continue;
                const int x = static_cast<int>(std::lround(tn.position.x));
                const int y = static_cast<int>(std::lround(tn.position.y));
                const int z = static_cast<int>(std::lround(tn.position.z));
                if (labels.inside(x, y, z) && labels.at(x, y, z) == n.segment_label) ++inside;
            }
            if (inside >= 2) score.merged += static_cast<double>(inside - 1);
        }
    }

    // edge accounting
    std::map<std::pair<std::size_t, std::size_t>, std::pair<bool, int>> truth_edges;
    for (const auto& e : truth.edges) truth_edges[{e.from, e.to}] = {e.division, 0};
    double semantics = 0.0;
    for (const auto& e : result.edges) {
        const long ta = result_to_truth[e.from];
        const long tb = result_to_truth[e.to];
        if (ta < 0 || tb < 0) {
            score.incorrect_edges += 1;  // endpoint without a truth object
            continue;
        }
        const auto it = truth_edges.find({static_cast<std::size_t>(ta),
                                          static_cast<std::size_t>(tb)});
        if (it == truth_edges.end()) {
            score.incorrect_edges += 1;
        } else if (it->second.second == 0) {
            it->second.second = 1;
            if (it->second.first != e.division) semantics += 1;  // plain edge covers a division
        } else {
            score.redundant_edges += 1;
        }
    }
    for (const auto& [key, state] : truth_edges)
        if (state.second == 0) score.missing_edges += 1;

    const double aogm = weights.node_add * score.fn + weights.node_del * score.fp +
                        weights.edge_add * score.missing_edges +
                        weights.edge_del * (score.redundant_edges + score.incorrect_edges) +
                        weights.edge_semantics * semantics;
    const double aogm0 = weights.node_add * static_cast<double>(truth.nodes.size()) +
                         weights.edge_add * static_cast<double>(truth.edges.size());
    score.tra = aogm0 > 0.0 ? 1.0 - std::min(1.0, aogm / aogm0) : 1.0;
    score.recall = score.tp + score.fn > 0 ? score.tp / (score.tp + score.fn) : 0.0;
    score.precision = score.tp + score.fp > 0 ? score.tp / (score.tp + score.fp) : 0.0;
    score.fscore = f_score(score.precision, score.recall);
    return score;
}

}  // namespace fuzzpipe::metrics
