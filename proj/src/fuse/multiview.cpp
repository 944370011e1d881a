#include "fuzzpipe/fuse/multiview.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace fuzzpipe::fuse {

OverlapHistogram build_overlap_histogram(const volume::LabelVolume& a,
                                         const volume::LabelVolume& b) {
    if (!a.same_dims(b)) throw std::invalid_argument("overlap histogram: dims mismatch");
    OverlapHistogram h;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::uint32_t la = a[i], lb = b[i];
        if (la != 0) ++h.size_a[la];
        if (lb != 0) ++h.size_b[lb];
        if (la != 0 && lb != 0) ++h.counts[{la, lb}];
    }
    return h;
}

namespace {

// best-overlap partner per label; ties resolve to the larger overlap first,
// then the lower partner id
template <typename Select>
std::map<std::uint32_t, std::uint32_t> argmax_partner(const OverlapHistogram& h, Select select) {
    std::map<std::uint32_t, std::pair<std::size_t, std::uint32_t>> best;
    for (const auto& [pair, count] : h.counts) {
        const auto [self, partner] = select(pair);
        auto it = best.find(self);
        if (it == best.end() || count > it->second.first ||
            (count == it->second.first && partner < it->second.second)) {
            best[self] = {count, partner};
        }
    }
    std::map<std::uint32_t, std::uint32_t> out;
    for (const auto& [self, entry] : best) out[self] = entry.second;
    return out;
}

std::size_t row_of_label(const core::FeatureTable& t, std::uint32_t label) {
    const auto labels = t.column("label");
    for (std::size_t r = 0; r < t.rows(); ++r)
        if (static_cast<std::uint32_t>(labels[r]) == label) return r;
    throw std::invalid_argument("feature table misses label " + std::to_string(label));
}

}  // namespace

FusionResult fuse_segments(const volume::LabelVolume& a, const volume::LabelVolume& b,
                           const core::FeatureTable& features_a,
                           const core::FeatureTable& features_b, const std::string& fsmd_column) {
    const auto h = build_overlap_histogram(a, b);
    const auto best_b = argmax_partner(h, [](const auto& p) { return std::pair{p.first, p.second}; });
    const auto best_a = argmax_partner(h, [](const auto& p) { return std::pair{p.second, p.first}; });

    // one write instruction per fused segment, in deterministic order:
    // matched pairs by a-label, then unique a, then unique b
    struct Piece {
        bool from_a;
        std::uint32_t label;
        std::size_t feature_row;
        const core::FeatureTable* source;
        double source_view;
    };
    std::vector<Piece> pieces;
    std::vector<char> a_done, b_done;
    {
        std::uint32_t max_a = 0, max_b = 0;
        for (const auto& [l, s] : h.size_a) max_a = std::max(max_a, l);
        for (const auto& [l, s] : h.size_b) max_b = std::max(max_b, l);
        a_done.assign(max_a + 1, 0);
        b_done.assign(max_b + 1, 0);
    }

    FusionResult result;
    for (const auto& [la, lb] : best_b) {
        const auto it = best_a.find(lb);
        if (it == best_a.end() || it->second != la) continue;  // not mutual
        const std::size_t ra = row_of_label(features_a, la);
        const std::size_t rb = row_of_label(features_b, lb);
        const double mu_a = features_a.at(ra, fsmd_column);
        const double mu_b = features_b.at(rb, fsmd_column);
        // ties prefer view a
        if (mu_a >= mu_b) {
            pieces.push_back({true, la, ra, &features_a, 0.0});
        } else {
            pieces.push_back({false, lb, rb, &features_b, 1.0});
        }
        a_done[la] = 1;
        b_done[lb] = 1;
        ++result.matched_pairs;
    }
    for (const auto& [la, size] : h.size_a) {
        if (!a_done[la]) {
            pieces.push_back({true, la, row_of_label(features_a, la), &features_a, 0.0});
            ++result.unique_a;
        }
    }
    for (const auto& [lb, size] : h.size_b) {
        if (!b_done[lb]) {
            pieces.push_back({false, lb, row_of_label(features_b, lb), &features_b, 1.0});
            ++result.unique_b;
        }
    }

    result.labels = volume::LabelVolume(a.nx(), a.ny(), a.nz());
    result.labels.sx = a.sx;
    result.labels.sy = a.sy;
    result.labels.sz = a.sz;
    core::FeatureTable features(features_a.column_names());
    features.add_column("fused_label", std::vector<double>{});
    features.add_column("source_view", std::vector<double>{});

    // voxel lists per label so each piece writes only its own voxels
    std::unordered_map<std::uint32_t, std::vector<std::size_t>> voxels_a, voxels_b;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] != 0) voxels_a[a[i]].push_back(i);
        if (b[i] != 0) voxels_b[b[i]].push_back(i);
    }

    std::uint32_t next_label = 0;
    for (const auto& piece : pieces) {
        ++next_label;
        const auto& voxels = piece.from_a ? voxels_a[piece.label] : voxels_b[piece.label];
        // first writer wins on collisions
        for (const std::size_t i : voxels) {
            if (result.labels[i] == 0) result.labels[i] = next_label;
        }
        std::vector<double> row;
        row.reserve(features.cols());
        for (const auto& name : features_a.column_names())
            row.push_back(piece.source->has_column(name) ? piece.source->at(piece.feature_row, name)
                                                         : std::numeric_limits<double>::quiet_NaN());
        row.push_back(static_cast<double>(next_label));
        row.push_back(piece.source_view);
        features.add_row(row, piece.source->origin(piece.feature_row));
    }
    result.features = std::move(features);
    return result;
}

volume::Volume fuse_binary_max(const volume::Volume& a, const volume::Volume& b) {
    if (!a.same_dims(b)) throw std::invalid_argument("fuse_binary_max: dims mismatch");
    volume::Volume out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(a[i], b[i]);
    return out;
}

}  // namespace fuzzpipe::fuse
