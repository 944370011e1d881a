#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "fuzzpipe/track/tracking.hpp"

using fuzzpipe::core::FeatureTable;
using fuzzpipe::core::Vec3;
using fuzzpipe::volume::LabelVolume;
using namespace fuzzpipe::track;

namespace {

FeatureTable points_table(const std::vector<Vec3>& pts) {
    FeatureTable t(std::vector<std::string>{"x", "y", "z"});
    for (const auto& p : pts) t.add_row(std::vector<double>{p.x, p.y, p.z}, 3);
    return t;
}

}  // namespace

TEST_CASE("nn_link basics") {
    SUBCASE("identical point sets match identically") {
        std::vector<Vec3> pts{{1, 2, 3}, {10, 2, 3}, {5, 9, 1}};
        const auto edges = nn_link(pts, pts);
        REQUIRE(edges.size() == 3);
        for (const auto& [i, j] : edges) CHECK(i == j);
    }
    SUBCASE("single object links regardless of distance") {
        const auto edges = nn_link({{0, 0, 0}}, {{100, 100, 100}});
        REQUIRE(edges.size() == 1);
        CHECK(edges[0].second == 0);
    }
    SUBCASE("empty frames produce no edges") {
        CHECK(nn_link({}, {{1, 1, 1}}).empty());
        CHECK(nn_link({{1, 1, 1}}, {}).empty());
    }
    SUBCASE("shared targets are allowed") {
        const auto edges = nn_link({{0, 0, 0}, {1, 0, 0}}, {{0.4, 0, 0}, {50, 0, 0}});
        REQUIRE(edges.size() == 2);
        CHECK(edges[0].second == 0);
        CHECK(edges[1].second == 0);
    }
}

TEST_CASE("nn_link equals the brute-force argmin oracle") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 100.0);
    for (int trial = 0; trial < 40; ++trial) {
        std::vector<Vec3> a, b;
        const int na = 1 + static_cast<int>(u(rng) / 2), nb = 1 + static_cast<int>(u(rng) / 2);
        for (int i = 0; i < na; ++i) a.push_back({u(rng), u(rng), u(rng)});
        for (int i = 0; i < nb; ++i) b.push_back({u(rng), u(rng), u(rng)});
        const auto edges = nn_link(a, b);
        REQUIRE(edges.size() == a.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(edges[i].first == i);
            double best = std::numeric_limits<double>::max();
            std::size_t best_j = 0;
            for (std::size_t j = 0; j < b.size(); ++j) {
                const double d = (b[j] - a[i]).squared_norm();
                if (d < best) {
                    best = d;
                    best_j = j;
                }
            }
            CHECK(edges[i].second == best_j);
        }
    }
}

TEST_CASE("track_sequence") {
    SUBCASE("two frames equal nn_link") {
        const auto g = track_sequence(
            {points_table({{0, 0, 0}, {10, 0, 0}}), points_table({{1, 0, 0}, {11, 0, 0}})});
        CHECK(g.nodes.size() == 4);
        REQUIRE(g.edges.size() == 2);
        CHECK(g.nodes[g.edges[0].from].point_id == 1);
        CHECK(g.nodes[g.edges[0].to].frame == 1);
    }
    SUBCASE("an empty middle frame breaks the chain") {
        const auto g = track_sequence({points_table({{0, 0, 0}}), points_table({}),
                                       points_table({{1, 1, 1}})});
        CHECK(g.nodes.size() == 2);
        CHECK(g.edges.empty());
    }
    SUBCASE("csv round trip preserves nodes and edges") {
        const auto g = track_sequence(
            {points_table({{0, 0, 0}, {9, 0, 0}}), points_table({{0.5, 0, 0}})});
        g.save_csv("test_tracks.csv");
        const auto back = TrackGraph::load_csv("test_tracks.csv");
        CHECK(back.nodes.size() == g.nodes.size());
        CHECK(back.edges.size() == g.edges.size());  // merge edges survive
        std::remove("test_tracks.csv");
    }
}

TEST_CASE("uncertainty tracking inputs") {
    // label volume: segment 1 on the left (merged blob with 3 seeds),
    // segment 2 on the right (confident), segment 3 empty of seeds
    LabelVolume labels(30, 10, 10);
    for (int x = 0; x < 12; ++x)
        for (int y = 0; y < 6; ++y) labels.at(x, y, 5) = 1;
    for (int x = 14; x < 20; ++x) labels.at(x, 5, 5) = 2;
    for (int x = 22; x < 28; ++x) labels.at(x, 5, 5) = 3;

    FeatureTable segments(std::vector<std::string>{"label", "x", "y", "z", "fsmd_correct"});
    segments.add_row(std::vector<double>{1, 5, 2.5, 5, 0.2}, 2);
    segments.add_row(std::vector<double>{2, 16.5, 5, 5, 0.95}, 2);
    segments.add_row(std::vector<double>{3, 24.5, 5, 5, 0.2}, 2);

    FeatureTable seeds(std::vector<std::string>{"x", "y", "z"});
    seeds.add_row(std::vector<double>{2, 2, 5}, 1);   // in segment 1
    seeds.add_row(std::vector<double>{6, 3, 5}, 1);   // in segment 1
    seeds.add_row(std::vector<double>{10, 1, 5}, 1);  // in segment 1
    seeds.add_row(std::vector<double>{16, 5, 5}, 1);  // in confident segment 2
    seeds.add_row(std::vector<double>{5, 9, 9}, 1);   // background, dropped

    SUBCASE("beta 0.9 replaces the merged segment with its seeds") {
        const auto pts = uncertainty_tracking_inputs(segments, seeds, labels, 0.9);
        // 3 seed points for segment 1, centroid for segment 2, fallback
        // centroid for seedless segment 3
        REQUIRE(pts.rows() == 5);
        int seed_pts = 0, segment_pts = 0;
        for (std::size_t r = 0; r < pts.rows(); ++r) {
            if (pts.at(r, "source") == 1.0) {
                ++seed_pts;
                CHECK(pts.at(r, "segment_label") == 1.0);
            } else {
                ++segment_pts;
            }
        }
        CHECK(seed_pts == 3);
        CHECK(segment_pts == 2);
    }
    SUBCASE("all confident: centroids only") {
        const auto pts = uncertainty_tracking_inputs(segments, seeds, labels, 0.0);
        REQUIRE(pts.rows() == 3);
        for (std::size_t r = 0; r < pts.rows(); ++r) CHECK(pts.at(r, "source") == 0.0);
    }
    SUBCASE("no point lies in background except retained fallbacks") {
        const auto pts = uncertainty_tracking_inputs(segments, seeds, labels, 0.9);
        for (std::size_t r = 0; r < pts.rows(); ++r) {
            const int x = static_cast<int>(std::lround(pts.at(r, "x")));
            const int y = static_cast<int>(std::lround(pts.at(r, "y")));
            const int z = static_cast<int>(std::lround(pts.at(r, "z")));
            if (pts.at(r, "source") == 1.0) CHECK(labels.at(x, y, z) != 0);
        }
    }
}

TEST_CASE("truth graph construction") {
    using fuzzpipe::sim::TruthRecord;
    // two objects; object 2 divides into 3 and 4 at frame 2
    std::vector<TruthRecord> records{
        {0, 1, 0, 0, {5, 5, 5}, 1},  {0, 2, 0, 0, {20, 5, 5}, 1},
        {1, 1, 0, 1, {6, 5, 5}, 1},  {1, 2, 0, 2, {21, 5, 5}, 1},
        {2, 1, 0, 1, {7, 5, 5}, 1},  {2, 3, 2, 0, {20, 4, 5}, 1},
        {2, 4, 2, 0, {22, 6, 5}, 1},
    };
    const auto g = truth_graph(records);
    CHECK(g.nodes.size() == 7);
    REQUIRE(g.edges.size() == 5);  // 3 temporal + 2 division
    int division_edges = 0;
    for (const auto& e : g.edges)
        if (e.division) ++division_edges;
    CHECK(division_edges == 2);
    // z scaling for voxel coordinates
    const auto gz = truth_graph(records, 1.0 / 3.2);
    CHECK(gz.nodes[0].position.z == doctest::Approx(5.0 / 3.2));
}
