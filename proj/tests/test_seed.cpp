#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "fuzzpipe/fuzzy/propagation.hpp"
#include "fuzzpipe/seed/detection.hpp"
#include "fuzzpipe/volume/filters.hpp"

using fuzzpipe::core::FeatureTable;
using fuzzpipe::volume::Volume;
using namespace fuzzpipe::seed;

namespace {

// O(N^3) reference agglomeration: repeatedly merge the globally cheapest
// Ward pair until the cheapest merge reaches the cutoff.
std::vector<int> naive_ward_clusters(const std::vector<std::array<double, 3>>& pts,
                                     double cutoff) {
    struct Cl {
        std::array<double, 3> c;
        double n;
        std::vector<std::size_t> members;
    };
    std::vector<Cl> cls;
    for (std::size_t i = 0; i < pts.size(); ++i) cls.push_back({pts[i], 1.0, {i}});
    auto dist = [](const Cl& a, const Cl& b) {
        double d2 = 0;
        for (int k = 0; k < 3; ++k) d2 += (a.c[k] - b.c[k]) * (a.c[k] - b.c[k]);
        return std::sqrt(2.0 * a.n * b.n / (a.n + b.n) * d2);
    };
    for (;;) {
        double best = std::numeric_limits<double>::max();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < cls.size(); ++i)
            for (std::size_t j = i + 1; j < cls.size(); ++j) {
                const double d = dist(cls[i], cls[j]);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        if (cls.size() < 2 || best >= cutoff) break;
        Cl merged;
        merged.n = cls[bi].n + cls[bj].n;
        for (int k = 0; k < 3; ++k)
            merged.c[k] = (cls[bi].c[k] * cls[bi].n + cls[bj].c[k] * cls[bj].n) / merged.n;
        merged.members = cls[bi].members;
        merged.members.insert(merged.members.end(), cls[bj].members.begin(),
                              cls[bj].members.end());
        cls.erase(cls.begin() + bj);
        cls.erase(cls.begin() + bi);
        cls.push_back(merged);
    }
    std::vector<int> assign(pts.size(), -1);
    for (std::size_t c = 0; c < cls.size(); ++c)
        for (const auto m : cls[c].members) assign[m] = static_cast<int>(c);
    return assign;
}

FeatureTable make_seed_table(const std::vector<std::array<double, 3>>& pts) {
    FeatureTable t(std::vector<std::string>{"x", "y", "z", "sigma", "response", "wmi", "smi",
                                            "zpos"});
    for (const auto& p : pts)
        t.add_row(std::vector<double>{p[0], p[1], p[2], 5.0, 1.0, 0.01, 0.05, p[2]}, 1);
    return t;
}

Volume blob_volume(int n, double cx, double cy, double cz, double r, float peak = 1.0f) {
    Volume v(n, n, n, 0.0f);
    for (int z = 0; z < n; ++z)
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x) {
                const double d2 =
                    (x - cx) * (x - cx) + (y - cy) * (y - cy) + (z - cz) * (z - cz);
                v.at(x, y, z) += static_cast<float>(peak * std::exp(-d2 / (2.0 * (r / 2) * (r / 2))));
            }
    return v;
}

}  // namespace

TEST_CASE("single-scale space equals the log filter") {
    Volume v = blob_volume(32, 16, 16, 16, 6.0);
    const auto space = log_scale_space_max(v, 4.0, 4.0, 1.0);
    CHECK(space.scales == 1);
    const auto direct = fuzzpipe::volume::log_filter(v, 4.0);
    for (std::size_t i = 0; i < v.size(); ++i)
        CHECK(space.response[i] == doctest::Approx(direct[i]));
    CHECK(space.best_scale[v.index(16, 16, 16)] == 4.0f);
}

TEST_CASE("default scale grid evaluates five scales") {
    Volume v(8, 8, 8, 0.1f);
    const auto space = log_scale_space_max(v, 4.0, 8.0, 1.0);
    CHECK(space.scales == 5);
}

TEST_CASE("matched blob wins the right scale") {
    // Gaussian blob with half-maximum radius r = 7.07 -> best sigma = r/sqrt(2) = 5
    const double r = 7.07;
    const double s = r / 1.1774;  // half-max radius of a Gaussian is 1.1774 std
    Volume v(48, 48, 48, 0.0f);
    for (int z = 0; z < 48; ++z)
        for (int y = 0; y < 48; ++y)
            for (int x = 0; x < 48; ++x) {
                const double d2 =
                    (x - 24.0) * (x - 24.0) + (y - 24.0) * (y - 24.0) + (z - 24.0) * (z - 24.0);
                v.at(x, y, z) = static_cast<float>(std::exp(-d2 / (2.0 * s * s)));
            }
    const auto space = log_scale_space_max(v, 3.0, 7.0, 1.0);
    CHECK(space.best_scale[v.index(24, 24, 24)] == doctest::Approx(5.0));
}

TEST_CASE("extrema detection") {
    SeedParams p;
    p.t_wmi = 0.0;
    p.response_levels = 0;

    SUBCASE("single interior impulse gives one seed in both modes") {
        Volume v = blob_volume(24, 12, 12, 12, 5.0, 0.5f);
        const auto space = log_scale_space_max(v, 3.0, 5.0, 1.0);
        p.strict = true;
        const auto strict = detect_extrema(space.response, space.best_scale, v, p);
        p.strict = false;
        const auto loose = detect_extrema(space.response, space.best_scale, v, p);
        CHECK(strict.rows() == 1);
        CHECK(loose.rows() == 1);
        CHECK(strict.at(0, "x") == 12.0);
        CHECK(strict.at(0, "zpos") == 12.0);
    }

    SUBCASE("a two-voxel plateau is invisible to strict detection") {
        Volume resp(12, 12, 12, 0.0f);
        resp.at(5, 5, 5) = 1.0f;
        resp.at(6, 5, 5) = 1.0f;
        Volume scale(12, 12, 12, 4.0f);
        Volume raw(12, 12, 12, 0.5f);
        p.strict = true;
        CHECK(detect_extrema(resp, scale, raw, p).rows() == 0);
        p.strict = false;
        const auto loose = detect_extrema(resp, scale, raw, p);
        CHECK(loose.rows() == 2);
    }

    SUBCASE("window mean intensity threshold removes dark candidates") {
        Volume resp(12, 12, 12, 0.0f);
        resp.at(5, 5, 5) = 1.0f;
        Volume scale(12, 12, 12, 4.0f);
        Volume raw(12, 12, 12, 0.001f);
        p.strict = false;
        p.t_wmi = 0.0025;
        CHECK(detect_extrema(resp, scale, raw, p).rows() == 0);
        p.t_wmi = 0.0005;
        CHECK(detect_extrema(resp, scale, raw, p).rows() == 1);
    }

    SUBCASE("border voxels are never extrema") {
        Volume resp(8, 8, 8, 0.0f);
        resp.at(0, 4, 4) = 2.0f;
        Volume scale(8, 8, 8, 4.0f);
        Volume raw(8, 8, 8, 0.5f);
        p.strict = false;
        CHECK(detect_extrema(resp, scale, raw, p).rows() == 0);
    }
}

TEST_CASE("non-strict detections are a superset of strict detections") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<float> u(0.0f, 1.0f);
    for (int levels : {0, 64}) {
        Volume v(20, 20, 20);
        for (auto& x : v.data()) x = u(rng);
        const auto space = log_scale_space_max(v, 2.0, 4.0, 1.0);
        SeedParams p;
        p.t_wmi = 0.0;
        p.response_levels = levels;
        p.strict = true;
        const auto strict = detect_extrema(space.response, space.best_scale, v, p);
        p.strict = false;
        const auto loose = detect_extrema(space.response, space.best_scale, v, p);
        CHECK(loose.rows() >= strict.rows());
        std::set<std::array<double, 3>> loose_set;
        for (std::size_t r = 0; r < loose.rows(); ++r)
            loose_set.insert({loose.at(r, "x"), loose.at(r, "y"), loose.at(r, "z")});
        for (std::size_t r = 0; r < strict.rows(); ++r)
            CHECK(loose_set.count({strict.at(r, "x"), strict.at(r, "y"), strict.at(r, "z")}) == 1);
    }
}

TEST_CASE("seed fusion") {
    SUBCASE("far seeds stay untouched") {
        const auto t = make_seed_table({{10, 10, 10}, {40, 10, 10}, {10, 48, 10}});
        const auto fused = fuse_seeds(t, 5.0);
        CHECK(fused.rows() == 3);
    }
    SUBCASE("two close seeds fuse at their midpoint") {
        const auto t = make_seed_table({{10, 10, 10}, {11, 10, 10}});
        const auto fused = fuse_seeds(t, 5.0);
        REQUIRE(fused.rows() == 1);
        CHECK(fused.at(0, "x") == doctest::Approx(10.5));
        CHECK(fused.at(0, "y") == doctest::Approx(10.0));
        CHECK(fused.at(0, "sigma") == doctest::Approx(5.0));
    }
    SUBCASE("random sets match the naive agglomeration oracle") {
        std::mt19937_64 rng(41);
        std::uniform_real_distribution<double> u(0.0, 60.0);
        for (int trial = 0; trial < 30; ++trial) {
            std::vector<std::array<double, 3>> pts;
            const int n = 3 + static_cast<int>(u(rng) / 4);
            for (int i = 0; i < n; ++i) pts.push_back({u(rng), u(rng), u(rng)});
            const double cutoff = 8.0;
            const auto expect = naive_ward_clusters(pts, cutoff);
            const auto fused = fuse_seeds(make_seed_table(pts), cutoff);
            // same number of clusters and identical member partitions
            std::set<int> expect_ids(expect.begin(), expect.end());
            CHECK(fused.rows() == expect_ids.size());
            // match each fused centroid against the oracle's cluster means
            for (const int cid : expect_ids) {
                double cx = 0, cy = 0, cz = 0, cnt = 0;
                for (std::size_t i = 0; i < pts.size(); ++i) {
                    if (expect[i] != cid) continue;
                    cx += pts[i][0];
                    cy += pts[i][1];
                    cz += pts[i][2];
                    ++cnt;
                }
                cx /= cnt;
                cy /= cnt;
                cz /= cnt;
                bool found = false;
                for (std::size_t r = 0; r < fused.rows() && !found; ++r) {
                    found = std::abs(fused.at(r, "x") - cx) < 1e-9 &&
                            std::abs(fused.at(r, "y") - cy) < 1e-9 &&
                            std::abs(fused.at(r, "z") - cz) < 1e-9;
                }
                CHECK(found);
            }
        }
    }
    SUBCASE("fused count never exceeds input count") {
        std::mt19937_64 rng(43);
        std::uniform_real_distribution<double> u(0.0, 30.0);
        std::vector<std::array<double, 3>> pts;
        for (int i = 0; i < 40; ++i) pts.push_back({u(rng), u(rng), u(rng)});
        const auto fused = fuse_seeds(make_seed_table(pts), 6.0);
        CHECK(fused.rows() <= 40);
    }
}

TEST_CASE("seed fsmd annotation") {
    SeedParams p;  // paper defaults: step thresholds + z ramp (50, 250, inf, inf)
    auto t = make_seed_table({{10, 10, 300}, {10, 10, 150}, {10, 10, 300}});
    t.set(2, "wmi", 0.001);  // below the wmi step at 0.0025
    const auto annotated = annotate_seed_fsmd(t, p);
    CHECK(annotated.at(0, "fsmd_correct") == doctest::Approx(1.0));
    CHECK(annotated.at(1, "fsmd_correct") == doctest::Approx(0.5));
    CHECK(annotated.at(2, "fsmd_correct") == doctest::Approx(0.0));

    // alpha = 0.0001 removes exactly the zero-FSMD seed
    const auto kept = fuzzpipe::fuzzy::alpha_filter(annotated, p.alpha);
    CHECK(kept.rows() == 2);
}
