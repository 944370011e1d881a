#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "fuzzpipe/fuse/multiview.hpp"

using fuzzpipe::core::FeatureTable;
using fuzzpipe::volume::LabelVolume;
using fuzzpipe::volume::Volume;
using namespace fuzzpipe::fuse;

namespace {

FeatureTable features_for(const LabelVolume& labels, const std::vector<double>& fsmd_by_label) {
    FeatureTable t(std::vector<std::string>{"label", "x", "y", "z", "fsmd_correct"});
    std::set<std::uint32_t> ids;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i]) ids.insert(labels[i]);
    for (const auto id : ids) {
        t.add_row(std::vector<double>{static_cast<double>(id), 0, 0, 0, fsmd_by_label[id]}, 2);
    }
    return t;
}

}  // namespace

TEST_CASE("overlap histogram") {
    SUBCASE("identical volumes give a diagonal histogram") {
        LabelVolume a(8, 8, 8);
        for (int x = 0; x < 4; ++x) a.at(x, 1, 1) = 1;
        for (int x = 0; x < 6; ++x) a.at(x, 3, 3) = 2;
        const auto h = build_overlap_histogram(a, a);
        CHECK(h.overlap(1, 1) == 4);
        CHECK(h.overlap(2, 2) == 6);
        CHECK(h.overlap(1, 2) == 0);
        CHECK(h.size_a.at(1) == 4);
        CHECK(h.size_b.at(2) == 6);
    }
    SUBCASE("disjoint foregrounds yield an empty histogram") {
        LabelVolume a(6, 6, 6), b(6, 6, 6);
        a.at(1, 1, 1) = 1;
        b.at(4, 4, 4) = 9;
        const auto h = build_overlap_histogram(a, b);
        CHECK(h.counts.empty());
        CHECK(h.size_a.at(1) == 1);
        CHECK(h.size_b.at(9) == 1);
    }
    SUBCASE("random pair equals the per-voxel counting oracle") {
        std::mt19937_64 rng(13);
        std::uniform_int_distribution<int> li(0, 3);
        LabelVolume a(16, 16, 16), b(16, 16, 16);
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = static_cast<std::uint32_t>(li(rng));
            b[i] = static_cast<std::uint32_t>(li(rng));
        }
        const auto h = build_overlap_histogram(a, b);
        for (std::uint32_t la = 1; la <= 3; ++la)
            for (std::uint32_t lb = 1; lb <= 3; ++lb) {
                std::size_t want = 0;
                for (std::size_t i = 0; i < a.size(); ++i)
                    if (a[i] == la && b[i] == lb) ++want;
                CHECK(h.overlap(la, lb) == want);
            }
    }
    SUBCASE("dimension mismatch throws") {
        LabelVolume a(4, 4, 4), b(5, 4, 4);
        CHECK_THROWS(build_overlap_histogram(a, b));
    }
}

TEST_CASE("segment fusion") {
    // view a: segments 1 (unique) and 2; view b: segment 5 overlapping a's 2,
    // and 7 (unique)
    LabelVolume a(16, 8, 8), b(16, 8, 8);
    for (int x = 0; x < 3; ++x) a.at(x, 1, 1) = 1;
    for (int x = 6; x < 12; ++x) a.at(x, 4, 4) = 2;
    for (int x = 7; x < 12; ++x) b.at(x, 4, 4) = 5;
    for (int x = 13; x < 16; ++x) b.at(x, 6, 6) = 7;

    std::vector<double> fsmd_a{0, 0.8, 0.4};
    std::vector<double> fsmd_b{0, 0, 0, 0, 0, 0.9, 0, 0.3};
    const auto fa = features_for(a, fsmd_a);
    const auto fb = features_for(b, fsmd_b);

    const auto fused = fuse_segments(a, b, fa, fb);
    CHECK(fused.matched_pairs == 1);
    CHECK(fused.unique_a == 1);
    CHECK(fused.unique_b == 1);

    // matched pair (2, 5): b wins with 0.9 > 0.4, so the fused segment covers
    // exactly b's voxels
    std::set<std::uint32_t> labels_at_b5;
    for (int x = 7; x < 12; ++x) labels_at_b5.insert(fused.labels.at(x, 4, 4));
    CHECK(labels_at_b5.size() == 1);
    CHECK(fused.labels.at(6, 4, 4) == 0);  // a-only voxel of the losing segment

    // unique segments are copied voxel-identically
    std::uint32_t ua = fused.labels.at(0, 1, 1);
    CHECK(ua != 0);
    for (int x = 0; x < 3; ++x) CHECK(fused.labels.at(x, 1, 1) == ua);
    std::uint32_t ub = fused.labels.at(13, 6, 6);
    CHECK(ub != 0);
    for (int x = 13; x < 16; ++x) CHECK(fused.labels.at(x, 6, 6) == ub);

    // features carry the chosen view
    REQUIRE(fused.features.rows() == 3);
    bool saw_b_winner = false;
    for (std::size_t r = 0; r < fused.features.rows(); ++r) {
        if (fused.features.at(r, "label") == 5.0) {
            saw_b_winner = true;
            CHECK(fused.features.at(r, "source_view") == 1.0);
            CHECK(fused.features.at(r, "fsmd_correct") == doctest::Approx(0.9));
        }
    }
    CHECK(saw_b_winner);

    // output foreground is a subset of the input union
    for (std::size_t i = 0; i < fused.labels.size(); ++i) {
        if (fused.labels[i] != 0) CHECK((a[i] != 0 || b[i] != 0));
    }
}

TEST_CASE("matched pairs resolve to the argmax fsmd member") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    // 6 aligned object pairs with random degrees
    LabelVolume a(60, 8, 8), b(60, 8, 8);
    std::vector<double> fa_by(7, 0.0), fb_by(7, 0.0);
    for (int o = 0; o < 6; ++o) {
        for (int x = o * 10; x < o * 10 + 6; ++x) {
            a.at(x, 3, 3) = o + 1;
            b.at(x, 3, 3) = o + 1;
        }
        fa_by[o + 1] = u(rng);
        fb_by[o + 1] = u(rng);
    }
    const auto fused =
        fuse_segments(a, b, features_for(a, fa_by), features_for(b, fb_by));
    CHECK(fused.matched_pairs == 6);
    for (std::size_t r = 0; r < fused.features.rows(); ++r) {
        const int label = static_cast<int>(fused.features.at(r, "label"));
        const double expect = std::max(fa_by[label], fb_by[label]);
        CHECK(fused.features.at(r, "fsmd_correct") == doctest::Approx(expect));
    }
}

TEST_CASE("binary max fusion properties") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    Volume v(10, 10, 10), w(10, 10, 10), zero(10, 10, 10, 0.0f);
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = u(rng);
        w[i] = u(rng);
    }
    const auto vv = fuse_binary_max(v, v);
    const auto vz = fuse_binary_max(v, zero);
    const auto vw = fuse_binary_max(v, w);
    const auto wv = fuse_binary_max(w, v);
    for (std::size_t i = 0; i < v.size(); ++i) {
        CHECK(vv[i] == v[i]);                    // idempotent
        CHECK(vz[i] == v[i]);                    // zero is the identity
        CHECK(vw[i] == wv[i]);                   // commutative
        CHECK(vw[i] == std::max(v[i], w[i]));
    }
    // associative
    Volume x(10, 10, 10);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = u(rng);
    const auto left = fuse_binary_max(fuse_binary_max(v, w), x);
    const auto right = fuse_binary_max(v, fuse_binary_max(w, x));
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(left[i] == right[i]);
}
