#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fuzzpipe/metrics/distance_transform.hpp"
#include "fuzzpipe/metrics/scores.hpp"
#include "fuzzpipe/metrics/timing.hpp"

using fuzzpipe::core::FeatureTable;
using fuzzpipe::volume::LabelVolume;
using namespace fuzzpipe::metrics;
using fuzzpipe::track::TrackGraph;
using fuzzpipe::track::TrackNode;

namespace {

FeatureTable seeds_at(const std::vector<std::array<double, 3>>& pts) {
    FeatureTable t(std::vector<std::string>{"x", "y", "z"});
    for (const auto& p : pts) t.add_row(std::vector<double>{p[0], p[1], p[2]}, 1);
    return t;
}

LabelVolume two_boxes() {
    LabelVolume v(20, 10, 10);
    for (int z = 2; z < 6; ++z)
        for (int y = 2; y < 6; ++y) {
            for (int x = 2; x < 6; ++x) v.at(x, y, z) = 1;
            for (int x = 12; x < 16; ++x) v.at(x, y, z) = 2;
        }
    return v;
}

// brute-force pairwise Rand index over every voxel pair
double rand_index_oracle(const LabelVolume& a, const LabelVolume& b) {
    std::size_t agree = 0, total = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            ++total;
            const bool same_a = a[i] == a[j];
            const bool same_b = b[i] == b[j];
            if (same_a == same_b) ++agree;
        }
    return static_cast<double>(agree) / static_cast<double>(total);
}

}  // namespace

TEST_CASE("distance transform is exact on a point set") {
    LabelVolume mask(12, 12, 12);
    mask.at(3, 4, 5) = 1;
    mask.at(9, 9, 9) = 1;
    const auto d2 = squared_distance_transform(mask);
    for (int z = 0; z < 12; ++z)
        for (int y = 0; y < 12; ++y)
            for (int x = 0; x < 12; ++x) {
                const double da = (x - 3.0) * (x - 3.0) + (y - 4.0) * (y - 4.0) +
                                  (z - 5.0) * (z - 5.0);
                const double db = (x - 9.0) * (x - 9.0) + (y - 9.0) * (y - 9.0) +
                                  (z - 9.0) * (z - 9.0);
                CHECK(d2[mask.index(x, y, z)] == doctest::Approx(std::min(da, db)));
            }
}

TEST_CASE("seed scoring") {
    const auto truth = two_boxes();
    SUBCASE("one seed per object is perfect") {
        const auto s = score_seeds(seeds_at({{3, 3, 3}, {13, 3, 3}}), truth);
        CHECK(s.tp == 2);
        CHECK(s.fp == 0);
        CHECK(s.fn == 0);
        CHECK(s.precision == 1.0);
        CHECK(s.recall == 1.0);
        CHECK(s.fscore == 1.0);
    }
    SUBCASE("redundant hits count as false positives") {
        const auto s = score_seeds(seeds_at({{3, 3, 3}, {4, 3, 3}}), truth);
        CHECK(s.tp == 1);
        CHECK(s.fp == 1);
        CHECK(s.fn == 1);
    }
    SUBCASE("background seeds are false positives") {
        const auto s = score_seeds(seeds_at({{3, 3, 3}, {18, 8, 8}}), truth);
        CHECK(s.fp == 1);
    }
    SUBCASE("centroid distance averages first hits") {
        // box 1 centroid is (3.5, 3.5, 3.5)
        const auto s = score_seeds(seeds_at({{3.5, 3.5, 3.5}, {13, 3, 3}}), truth);
        CHECK(s.mean_centroid_distance ==
              doctest::Approx((0.0 + std::sqrt(0.25 + 0.25 + 0.25)) / 2.0));
    }
}

TEST_CASE("segmentation scoring") {
    const auto truth = two_boxes();
    SUBCASE("perfect result") {
        const auto s = score_segmentation(truth, truth);
        CHECK(s.rand_index == doctest::Approx(1.0));
        CHECK(s.jaccard_index == doctest::Approx(1.0));
        CHECK(s.nsd == doctest::Approx(0.0));
        CHECK(s.hausdorff == doctest::Approx(0.0));
        CHECK(s.split == 0);
        CHECK(s.merged == 0);
        CHECK(s.added == 0);
        CHECK(s.missing == 0);
        CHECK(s.fscore == 1.0);
    }
    SUBCASE("halving one object counts one split") {
        auto result = two_boxes();
        for (int z = 2; z < 6; ++z)
            for (int y = 2; y < 6; ++y)
                for (int x = 4; x < 6; ++x) result.at(x, y, z) = 3;
        const auto s = score_segmentation(result, truth);
        CHECK(s.split == 1);
        CHECK(s.merged == 0);
        CHECK(s.precision == doctest::Approx(2.0 / 3.0));
        CHECK(s.recall == doctest::Approx(1.0));
    }
    SUBCASE("joining both objects counts one merger") {
        auto result = two_boxes();
        for (std::size_t i = 0; i < result.size(); ++i)
            if (result[i] == 2) result[i] = 1;
        // bridge them so the merge is genuine majority coverage of both
        const auto s = score_segmentation(result, truth);
        CHECK(s.merged == 1);
        CHECK(s.recall == doctest::Approx(0.5));
    }
    SUBCASE("pure noise object is added, absent object is missing") {
        auto result = two_boxes();
        for (std::size_t i = 0; i < result.size(); ++i)
            if (result[i] == 2) result[i] = 0;  // drop object 2
        result.at(18, 8, 8) = 9;                // noise speck
        const auto s = score_segmentation(result, truth);
        CHECK(s.added == 1);
        CHECK(s.missing == 1);
    }
    SUBCASE("rand index equals the all-pairs oracle on small volumes") {
        std::mt19937_64 rng(17);
        std::uniform_int_distribution<int> li(0, 3);
        for (int trial = 0; trial < 3; ++trial) {
            LabelVolume a(8, 8, 8), b(8, 8, 8);
            for (std::size_t i = 0; i < a.size(); ++i) {
                a[i] = static_cast<std::uint32_t>(li(rng));
                b[i] = static_cast<std::uint32_t>(li(rng));
            }
            const auto s = score_segmentation(a, b);
            CHECK(s.rand_index == doctest::Approx(rand_index_oracle(a, b)).epsilon(1e-12));
        }
    }
    SUBCASE("nsd and hausdorff grow with boundary damage") {
        auto result = two_boxes();
        for (int z = 2; z < 6; ++z)
            for (int y = 2; y < 6; ++y) result.at(6, y, z) = 1;  // one-slab dilation
        const auto s = score_segmentation(result, truth);
        CHECK(s.nsd > 0.0);
        CHECK(s.hausdorff >= 1.0);
    }
}

namespace {

struct GraphFixture {
    TrackGraph truth;
    std::vector<LabelVolume> labels;
};

// three frames, two objects moving right by one voxel per frame
GraphFixture simple_fixture() {
    GraphFixture fx;
    for (int f = 0; f < 3; ++f) {
        LabelVolume l(24, 8, 8);
        for (int y = 1; y < 4; ++y) {
            for (int x = 1 + f; x < 4 + f; ++x) l.at(x, y, 4) = 1;
            for (int x = 12 + f; x < 15 + f; ++x) l.at(x, y, 4) = 2;
        }
        fx.labels.push_back(l);
        for (int id = 1; id <= 2; ++id) {
            TrackNode n;
            n.frame = f;
            n.point_id = id;
            n.position = {(id == 1 ? 2.0 : 13.0) + f, 2.0, 4.0};
            fx.truth.nodes.push_back(n);
        }
    }
    for (int f = 0; f < 2; ++f)
        for (int id = 0; id < 2; ++id)
            fx.truth.edges.push_back({static_cast<std::size_t>(2 * f + id),
                                      static_cast<std::size_t>(2 * (f + 1) + id), false});
    return fx;
}

}  // namespace

TEST_CASE("tracking score") {
    const auto fx = simple_fixture();
    SUBCASE("truth against itself is perfect") {
        const auto s = score_tracking(fx.truth, fx.truth, fx.labels);
        CHECK(s.tra == doctest::Approx(1.0));
        CHECK(s.tp == 6);
        CHECK(s.fp == 0);
        CHECK(s.fn == 0);
        CHECK(s.missing_edges == 0);
        CHECK(s.redundant_edges == 0);
        CHECK(s.incorrect_edges == 0);
    }
    SUBCASE("empty result clamps TRA to zero") {
        TrackGraph empty;
        const auto s = score_tracking(empty, fx.truth, fx.labels);
        CHECK(s.tra == doctest::Approx(0.0));
        CHECK(s.fn == 6);
    }
    SUBCASE("one wrong edge matches the hand-computed ratio") {
        TrackGraph result = fx.truth;
        // rewire object 1's second edge to object 2's frame-2 node
        result.edges[2].to = 5;
        // hand count: edge (2 -> 5) is incorrect (delete, cost 1) and edge
        // (2 -> 4) is missing (add, cost 1); AOGM0 = 6 nodes + 4 edges = 10
        const auto s = score_tracking(result, fx.truth, fx.labels);
        CHECK(s.incorrect_edges == 1);
        CHECK(s.missing_edges == 1);
        CHECK(s.tra == doctest::Approx(1.0 - 2.0 / 10.0));
    }
    SUBCASE("deleting true edges never increases TRA") {
        std::mt19937_64 rng(5);
        TrackGraph result = fx.truth;
        double prev = score_tracking(result, fx.truth, fx.labels).tra;
        while (!result.edges.empty()) {
            result.edges.erase(result.edges.begin() +
                               static_cast<long>(rng() % result.edges.size()));
            const double tra = score_tracking(result, fx.truth, fx.labels).tra;
            CHECK(tra <= prev + 1e-12);
            prev = tra;
        }
    }
    SUBCASE("merged counts extra truth centroids inside a result segment") {
        // single result node sitting on object 1, its segment spanning both
        TrackGraph result;
        TrackNode n;
        n.frame = 0;
        n.point_id = 1;
        n.position = {2, 2, 4};
        n.segment_label = 7;
        result.nodes.push_back(n);
        LabelVolume merged(24, 8, 8);
        for (int y = 1; y < 4; ++y)
            for (int x = 1; x < 15; ++x) merged.at(x, y, 4) = 7;
        const std::vector<const LabelVolume*> rl{&merged};
        const auto s = score_tracking(result, fx.truth, fx.labels, rl);
        CHECK(s.merged == 1);
    }
    SUBCASE("division edge covered by a plain edge costs one semantics change") {
        GraphFixture fx2 = simple_fixture();
        fx2.truth.edges[2].division = true;  // mark one truth edge as division
        TrackGraph result = fx2.truth;
        for (auto& e : result.edges) e.division = false;
        const auto s = score_tracking(result, fx2.truth, fx2.labels);
        // AOGM = 1 semantics op, AOGM0 = 10
        CHECK(s.tra == doctest::Approx(1.0 - 1.0 / 10.0));
    }
}

TEST_CASE("f-score recomputation and timing") {
    CHECK(f_score(0.0, 0.0) == 0.0);
    CHECK(f_score(1.0, 1.0) == 1.0);
    CHECK(f_score(0.5, 1.0) == doctest::Approx(2.0 * 0.5 / 1.5));

    TimingReport report;
    report.add("detect", 2.0, 4'000'000);
    report.add("segment", 0.0, 1000);  // zero time guarded
    CHECK(report.stages()[0].kvoxels_per_second() == doctest::Approx(2000.0));
    CHECK(report.stages()[1].kvoxels_per_second() == 0.0);
    CHECK(report.total_seconds() == doctest::Approx(2.0));
}
