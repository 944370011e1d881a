#include "fuzzpipe/track/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "fuzzpipe/core/keyvalue.hpp"

namespace fuzzpipe::track {

using core::Vec3;

std::vector<std::vector<std::size_t>> TrackGraph::nodes_by_frame(int frame_count) const {
    std::vector<std::vector<std::size_t>> out(frame_count);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].frame >= 0 && nodes[i].frame < frame_count) out[nodes[i].frame].push_back(i);
    }
    return out;
}

int TrackGraph::max_frame() const {
    int m = -1;
    for (const auto& n : nodes) m = std::max(m, n.frame);
    return m;
}

void TrackGraph::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write tracks: " + path);
    out << "frame,point_id,x,y,z,source,predecessor_point_id\n";
    // one row per node with its first predecessor; extra merge edges repeat
    // the node with the additional predecessor
    std::vector<std::vector<int>> preds(nodes.size());
    for (const auto& e : edges) preds[e.to].push_back(nodes[e.from].point_id);
    for (auto& p : preds) std::sort(p.begin(), p.end());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const auto& n = nodes[i];
        auto emit = [&](int pred) {
            out << n.frame << "," << n.point_id << "," << core::format_real(n.position.x) << ","
                << core::format_real(n.position.y) << "," << core::format_real(n.position.z)
                << "," << (n.from_seed ? "seed" : "segment") << "," << pred << "\n";
        };
        if (preds[i].empty()) {
            emit(0);
        } else {
            for (const int p : preds[i]) emit(p);
        }
    }
}

TrackGraph TrackGraph::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open tracks: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty tracks csv: " + path);
    TrackGraph g;
    std::map<std::pair<int, int>, std::size_t> index;  // (frame, point_id) -> node
    struct PendingEdge {
        int frame, point_id, pred;
    };
    std::vector<PendingEdge> pending;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::istringstream ss(line);
        std::string tok;
        TrackNode n;
        std::getline(ss, tok, ',');
        n.frame = std::stoi(tok);
        std::getline(ss, tok, ',');
        n.point_id = std::stoi(tok);
        std::getline(ss, tok, ',');
        n.position.x = core::parse_real(tok);
        std::getline(ss, tok, ',');
        n.position.y = core::parse_real(tok);
        std::getline(ss, tok, ',');
        n.position.z = core::parse_real(tok);
        std::getline(ss, tok, ',');
        n.from_seed = tok == "seed";
        std::getline(ss, tok, ',');
        const int pred = std::stoi(tok);
        const auto key = std::make_pair(n.frame, n.point_id);
        if (index.find(key) == index.end()) {
            index[key] = g.nodes.size();
            g.nodes.push_back(n);
        }
        if (pred != 0) pending.push_back({n.frame, n.point_id, pred});
    }
    for (const auto& e : pending) {
        const auto to = index.find({e.frame, e.point_id});
        const auto from = index.find({e.frame - 1, e.pred});
        if (to == index.end() || from == index.end())
            throw std::runtime_error("tracks csv references missing node");
        g.edges.push_back({from->second, to->second, false});
    }
    return g;
}

std::vector<std::pair<std::size_t, std::size_t>> nn_link(const std::vector<Vec3>& frame_t,
                                                         const std::vector<Vec3>& frame_t1) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    if (frame_t.empty() || frame_t1.empty()) return edges;

    // uniform grid over the target frame with exact expanding-ring search
    Vec3 lo = frame_t1[0], hi = frame_t1[0];
    for (const auto& p : frame_t1) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    const double extent = std::max({hi.x - lo.x, hi.y - lo.y, hi.z - lo.z, 1.0});
    const double cell = std::max(
        1e-6, extent / std::max(1.0, std::cbrt(static_cast<double>(frame_t1.size()))));
    auto cell_of = [&](const Vec3& p) {
        return std::array<int, 3>{static_cast<int>(std::floor((p.x - lo.x) / cell)),
                                  static_cast<int>(std::floor((p.y - lo.y) / cell)),
                                  static_cast<int>(std::floor((p.z - lo.z) / cell))};
    };
    std::map<std::array<int, 3>, std::vector<std::size_t>> grid;
    for (std::size_t j = 0; j < frame_t1.size(); ++j) grid[cell_of(frame_t1[j])].push_back(j);

    edges.reserve(frame_t.size());
    for (std::size_t i = 0; i < frame_t.size(); ++i) {
        const auto c = cell_of(frame_t[i]);
        double best = std::numeric_limits<double>::max();
        std::size_t best_j = 0;
        bool found = false;
        for (int ring = 0;; ++ring) {
            if (found && (static_cast<double>(ring) - 1.0) * cell > std::sqrt(best)) break;
            for (int dz = -ring; dz <= ring; ++dz)
                for (int dy = -ring; dy <= ring; ++dy)
                    for (int dx = -ring; dx <= ring; ++dx) {
                        if (std::max({std::abs(dx), std::abs(dy), std::abs(dz)}) != ring) continue;
                        const auto it = grid.find({c[0] + dx, c[1] + dy, c[2] + dz});
                        if (it == grid.end()) continue;
                        for (const std::size_t j : it->second) {
                            const double d = (frame_t1[j] - frame_t[i]).squared_norm();
                            if (d < best || (d == best && j < best_j)) {
                                best = d;
                                best_j = j;
                                found = true;
                            }
                        }
                    }
            if (ring > 2 && !found && ring * cell > extent * 2.0) break;  // sparse fallback
        }
        if (!found) {
            // defensive linear scan; unreachable when the grid covers targets
            for (std::size_t j = 0; j < frame_t1.size(); ++j) {
                const double d = (frame_t1[j] - frame_t[i]).squared_norm();
                if (d < best || (d == best && j < best_j)) {
                    best = d;
                    best_j = j;
                    found = true;
                }
            }
        }
        edges.emplace_back(i, best_j);
    }
    return edges;
}

namespace {

std::vector<Vec3> positions_of(const core::FeatureTable& t) {
    std::vector<Vec3> out;
    out.reserve(t.rows());
    if (t.rows() == 0) return out;
    const auto xs = t.column("x");
    const auto ys = t.column("y");
    const auto zs = t.column("z");
    for (std::size_t r = 0; r < t.rows(); ++r) out.push_back({xs[r], ys[r], zs[r]});
    return out;
}

}  // namespace

TrackGraph track_sequence(const std::vector<core::FeatureTable>& frames) {
    if (frames.size() < 2) throw std::invalid_argument("track_sequence needs >= 2 frames");
    TrackGraph g;
    std::vector<std::size_t> prev_nodes;
    std::vector<Vec3> prev_pos;
    for (std::size_t f = 0; f < frames.size(); ++f) {
        const auto pos = positions_of(frames[f]);
        std::vector<std::size_t> cur_nodes;
        cur_nodes.reserve(pos.size());
        const bool has_source = frames[f].has_column("source");
        const bool has_label = frames[f].has_column("segment_label");
        for (std::size_t r = 0; r < pos.size(); ++r) {
            TrackNode n;
            n.frame = static_cast<int>(f);
            n.point_id = static_cast<int>(r) + 1;
            n.position = pos[r];
            n.from_seed = has_source && frames[f].at(r, "source") == 1.0;
            n.segment_label =
                has_label ? static_cast<std::uint32_t>(frames[f].at(r, "segment_label")) : 0;
            cur_nodes.push_back(g.nodes.size());
            g.nodes.push_back(n);
        }
        if (f > 0 && !prev_pos.empty() && !pos.empty()) {
            for (const auto& [i, j] : nn_link(prev_pos, pos))
                g.edges.push_back({prev_nodes[i], cur_nodes[j], false});
        }
        prev_nodes = std::move(cur_nodes);
        prev_pos = std::move(pos);
    }
    return g;
}

core::FeatureTable uncertainty_tracking_inputs(const core::FeatureTable& segments,
                                               const core::FeatureTable& seeds,
                                               const volume::LabelVolume& labels, double beta,
                                               const std::string& fsmd_column) {
    if (beta < 0.0 || beta > 1.0) throw std::invalid_argument("beta must be in [0, 1]");

    // group seed rows by the segment label their voxel falls into
    std::unordered_map<std::uint32_t, std::vector<std::size_t>> seeds_in;
    if (seeds.rows() > 0) {
        const auto xs = seeds.column("x");
        const auto ys = seeds.column("y");
        const auto zs = seeds.column("z");
        for (std::size_t r = 0; r < seeds.rows(); ++r) {
            const int x = static_cast<int>(std::lround(xs[r]));
            const int y = static_cast<int>(std::lround(ys[r]));
            const int z = static_cast<int>(std::lround(zs[r]));
            if (!labels.inside(x, y, z)) continue;  // background / out of image
            const std::uint32_t l = labels.at(x, y, z);
            if (l != 0) seeds_in[l].push_back(r);
        }
    }

    core::FeatureTable out(std::vector<std::string>{"x", "y", "z", "source", "segment_label"});
    const auto fsmd = segments.column(fsmd_column);
    for (std::size_t r = 0; r < segments.rows(); ++r) {
        const std::uint32_t label = static_cast<std::uint32_t>(segments.at(r, "label"));
        const auto it = seeds_in.find(label);
        if (fsmd[r] >= beta || it == seeds_in.end() || it->second.empty()) {
            // confident segment, or an uncertain one holding no seed: track
            // the centroid rather than losing the object
            const double row[] = {segments.at(r, "x"), segments.at(r, "y"), segments.at(r, "z"),
                                  0.0, static_cast<double>(label)};
            out.add_row(row, segments.origin(r));
        } else {
            for (const std::size_t s : it->second) {
                const double row[] = {seeds.at(s, "x"), seeds.at(s, "y"), seeds.at(s, "z"), 1.0,
                                      static_cast<double>(label)};
                out.add_row(row, seeds.origin(s));
            }
        }
    }
    return out;
}

TrackGraph truth_graph(const std::vector<sim::TruthRecord>& records, double z_scale) {
    TrackGraph g;
    std::map<std::pair<int, int>, std::size_t> index;
    for (const auto& r : records) {
        TrackNode n;
        n.frame = r.frame;
        n.point_id = r.object_id;
        n.position = {r.position.x, r.position.y, r.position.z * z_scale};
        index[{r.frame, r.object_id}] = g.nodes.size();
        g.nodes.push_back(n);
    }
    for (const auto& r : records) {
        if (r.predecessor_id != 0) {
            const auto from = index.find({r.frame - 1, r.predecessor_id});
            if (from != index.end())
                g.edges.push_back({from->second, index[{r.frame, r.object_id}], false});
        } else if (r.parent_id != 0) {
            const auto from = index.find({r.frame - 1, r.parent_id});
            if (from != index.end())
                g.edges.push_back({from->second, index[{r.frame, r.object_id}], true});
        }
    }
    return g;
}

}  // namespace fuzzpipe::track
