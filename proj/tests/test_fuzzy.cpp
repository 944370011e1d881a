#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "fuzzpipe/core/feature_table.hpp"
#include "fuzzpipe/fuzzy/membership.hpp"
#include "fuzzpipe/fuzzy/propagation.hpp"

using fuzzpipe::core::FeatureTable;
using namespace fuzzpipe::fuzzy;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

FeatureTable seed_like_table(const std::vector<std::array<double, 3>>& rows) {
    FeatureTable t(std::vector<std::string>{"wmi", "smi", "zpos"});
    for (const auto& r : rows) t.add_row(std::vector<double>{r[0], r[1], r[2]}, 1);
    return t;
}
}  // namespace

TEST_CASE("trapezoid evaluation") {
    const TrapezoidParams vol{449, 617, 1405, 2016};
    CHECK(eval_trapezoid(1000, vol) == doctest::Approx(1.0));
    CHECK(eval_trapezoid(449, vol) == doctest::Approx(0.0));
    CHECK(eval_trapezoid(533, vol) == doctest::Approx(0.5));
    CHECK(eval_trapezoid(2016, vol) == doctest::Approx(0.0));
    CHECK(eval_trapezoid(1710.5, vol) == doctest::Approx(0.5));

    const TrapezoidParams wmi{0.0025, 0.0025, kInf, kInf};
    CHECK(eval_trapezoid(0.003, wmi) == doctest::Approx(1.0));
    CHECK(eval_trapezoid(0.0025, wmi) == doctest::Approx(1.0));
    CHECK(eval_trapezoid(0.001, wmi) == doctest::Approx(0.0));

    const TrapezoidParams zpos{50, 250, kInf, kInf};
    CHECK(eval_trapezoid(150, zpos) == doctest::Approx(0.5));
    CHECK(eval_trapezoid(300, zpos) == doctest::Approx(1.0));

    CHECK(eval_trapezoid(std::numeric_limits<double>::quiet_NaN(), vol) == 0.0);
}

TEST_CASE("trapezoid is piecewise linear with the expected shape") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (int trial = 0; trial < 200; ++trial) {
        double v[4] = {u(rng), u(rng), u(rng), u(rng)};
        std::sort(v, v + 4);
        const TrapezoidParams p{v[0], v[1], v[2], v[3]};
        double prev = -1.0;
        for (int i = 0; i <= 50; ++i) {
            const double x = v[0] + (v[1] - v[0]) * i / 50.0;
            const double mu = eval_trapezoid(x, p);
            CHECK(mu >= prev - 1e-12);  // non-decreasing on [a, b]
            CHECK(mu >= 0.0);
            CHECK(mu <= 1.0);
            prev = mu;
        }
        CHECK(eval_trapezoid((v[1] + v[2]) / 2, p) == doctest::Approx(1.0));
        CHECK(eval_trapezoid(v[0] - 1.0, p) == 0.0);
        CHECK(eval_trapezoid(v[3] + 1.0, p) == 0.0);
    }
}

TEST_CASE("standard partition sums to one") {
    const auto partition = build_standard_partition(
        {{100, 200}, {300, 400}, {600, 700}, {900, 1000}},
        {"too_small", "small", "correct", "large", "too_large"});
    REQUIRE(partition.terms.size() == 5);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-50.0, 1200.0);
    for (int i = 0; i < 2000; ++i) {
        const double x = u(rng);
        CHECK(partition.membership_sum(x) == doctest::Approx(1.0).epsilon(1e-9));
        int nonzero = 0;
        for (std::size_t t = 0; t < partition.terms.size(); ++t)
            if (partition.membership(t, x) > 0.0) ++nonzero;
        CHECK(nonzero <= 2);
    }
}

TEST_CASE("two-term partition is complement pair") {
    const auto partition = build_standard_partition({{10, 20}}, {"bad", "good"});
    for (double x : {-5.0, 10.0, 12.5, 15.0, 19.0, 30.0}) {
        CHECK(partition.membership(1, x) ==
              doctest::Approx(1.0 - partition.membership(0, x)).epsilon(1e-12));
    }
}

TEST_CASE("degenerate ramps give a crisp partition") {
    const auto partition = build_standard_partition({{5, 5}}, {"low", "high"});
    CHECK(partition.membership(0, 4.999) == 1.0);
    CHECK(partition.membership(1, 4.999) == 0.0);
    CHECK(partition.membership(0, 5.001) == 0.0);
    CHECK(partition.membership(1, 5.001) == 1.0);
}

TEST_CASE("partition builder rejects bad ramps") {
    CHECK_THROWS(build_standard_partition({{10, 5}}, {"a", "b"}));
    CHECK_THROWS(build_standard_partition({{10, 20}, {15, 30}}, {"a", "b", "c"}));
    CHECK_THROWS(build_standard_partition({{10, 20}}, {"only_one"}));
}

TEST_CASE("min conjunction") {
    CHECK(min_conjunction({1.0, 1.0, 1.0}) == 1.0);
    CHECK(min_conjunction({0.3, 0.7, 1.0}) == doctest::Approx(0.3));
    CHECK_THROWS(min_conjunction({}));
    // disabled features (constant 1) never change the result
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        std::vector<double> v{u(rng), u(rng), u(rng)};
        const double base = min_conjunction(v);
        v.push_back(1.0);
        CHECK(min_conjunction(v) == base);
        CHECK(1.0 - base == doctest::Approx(1.0 - min_conjunction(v)));  // complement
    }
}

TEST_CASE("annotate_fsmd appends combined column") {
    const TrapezoidParams wmi{0.0025, 0.0025, kInf, kInf};
    const TrapezoidParams smi{0.0007, 0.0007, kInf, kInf};
    const TrapezoidParams zpos{50, 250, kInf, kInf};
    auto table = seed_like_table({{0.003, 0.001, 300},    // all plateaus
                                  {0.003, 0.001, 150},    // z ramp midpoint
                                  {0.001, 0.001, 300}});  // below wmi step
    const auto out = annotate_fsmd(table, {{"wmi", wmi}, {"smi", smi}, {"zpos", zpos}}, true);
    REQUIRE(out.has_column("fsmd_correct"));
    CHECK(out.at(0, "fsmd_correct") == doctest::Approx(1.0));
    CHECK(out.at(1, "fsmd_correct") == doctest::Approx(0.5));
    CHECK(out.at(2, "fsmd_correct") == doctest::Approx(0.0));
    // inputs unchanged
    CHECK(out.at(0, "wmi") == doctest::Approx(0.003));

    const auto percol = annotate_fsmd(table, {{"wmi", wmi}, {"zpos", zpos}}, false);
    CHECK(percol.has_column("fsmd_wmi"));
    CHECK(percol.has_column("fsmd_zpos"));
    CHECK(percol.at(1, "fsmd_zpos") == doctest::Approx(0.5));

    CHECK_THROWS(annotate_fsmd(table, {{"nope", wmi}}, true));

    FeatureTable empty(std::vector<std::string>{"wmi", "smi", "zpos"});
    const auto eout = annotate_fsmd(empty, {{"wmi", wmi}}, true);
    CHECK(eout.has_column("fsmd_correct"));
    CHECK(eout.rows() == 0);
}

TEST_CASE("alpha filter") {
    FeatureTable t(std::vector<std::string>{"v"});
    t.add_row(std::vector<double>{1.0}, 1);
    t.add_row(std::vector<double>{2.0}, 1);
    t.add_row(std::vector<double>{3.0}, 1);
    t.add_column("fsmd_correct", std::vector<double>{0.05, 0.5, 0.95});

    CHECK(alpha_filter(t, 0.0).rows() == 3);
    const auto strict = alpha_filter(t, 1.0);
    CHECK(strict.rows() == 0);
    const auto mid = alpha_filter(t, 0.1);
    REQUIRE(mid.rows() == 2);
    CHECK(mid.at(0, "v") == 2.0);
    CHECK(mid.at(1, "v") == 3.0);

    FeatureTable no_fsmd(std::vector<std::string>{"v"});
    no_fsmd.add_row(std::vector<double>{1.0}, 1);
    CHECK_THROWS(alpha_filter(no_fsmd, 0.5));
}

TEST_CASE("alpha filter is monotone and subset") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    FeatureTable t(std::vector<std::string>{"v"});
    std::vector<double> fsmd;
    for (int i = 0; i < 200; ++i) {
        t.add_row(std::vector<double>{static_cast<double>(i)}, 1);
        fsmd.push_back(u(rng));
    }
    t.add_column("fsmd_correct", fsmd);
    double a1 = 0.3, a2 = 0.7;
    const auto r1 = alpha_filter(t, a1);
    const auto r2 = alpha_filter(t, a2);
    CHECK(r1.rows() >= r2.rows());
    // r2 rows all appear in r1 (both preserve order, so check by value)
    std::size_t j = 0;
    for (std::size_t i = 0; i < r2.rows(); ++i) {
        while (j < r1.rows() && r1.at(j, "v") != r2.at(i, "v")) ++j;
        CHECK(j < r1.rows());
    }
}

TEST_CASE("omega propagation") {
    // previous operator produced 3 seeds; current operator made 3 segments
    FeatureTable seeds(std::vector<std::string>{"x"});
    seeds.add_row(std::vector<double>{10.0}, 1);
    seeds.add_row(std::vector<double>{20.0}, 1);
    seeds.add_row(std::vector<double>{30.0}, 1);

    FeatureTable segments(std::vector<std::string>{"volume"});
    segments.add_row(std::vector<double>{1000.0}, 2);
    segments.add_row(std::vector<double>{900.0}, 2);
    segments.add_row(std::vector<double>{3000.0}, 2);
    segments.add_column("fsmd_correct", std::vector<double>{0.95, 0.5, 0.2});
    const Lineage lineage{{0}, {1}, {2}};

    SUBCASE("beta equals alpha: no fallback rows") {
        const auto omega = omega_propagate(segments, seeds, lineage, {0.1, 0.1});
        CHECK(omega.rows() == 3);
    }
    SUBCASE("beta = 1: every ancestor with an outcome below 1 appended") {
        const auto omega = omega_propagate(segments, seeds, lineage, {0.1, 1.0});
        REQUIRE(omega.rows() == 6);
        CHECK(omega.origin(3) == 1);
        CHECK(omega.origin(4) == 1);
        // appended rows align by name: x present, volume NaN
        CHECK(omega.at(4, "x") == 20.0);
        CHECK(std::isnan(omega.at(4, "volume")));
    }
    SUBCASE("high-FSMD output keeps its ancestor out") {
        const auto omega = omega_propagate(segments, seeds, lineage, {0.1, 0.9});
        REQUIRE(omega.rows() == 5);
        CHECK(omega.at(3, "x") == 20.0);
        CHECK(omega.at(4, "x") == 30.0);
    }
    SUBCASE("one ancestor with mixed outputs is not propagated") {
        const Lineage shared{{0}, {0}, {2}};
        const auto omega = omega_propagate(segments, seeds, shared, {0.1, 0.9});
        // ancestor 0 generated a confident output (0.95), ancestor 2 did not
        REQUIRE(omega.rows() == 4);
        CHECK(omega.at(3, "x") == 30.0);
    }
    SUBCASE("bad lineage") {
        const Lineage bad{{0}, {1}, {7}};
        CHECK_THROWS(omega_propagate(segments, seeds, bad, {0.1, 0.9}));
    }
    SUBCASE("omega with beta=alpha equals alpha_filter output") {
        const auto filtered = alpha_filter(segments, 0.1);
        const auto omega = omega_propagate(filtered, seeds, Lineage(filtered.rows()), {0.1, 0.1});
        CHECK(omega.rows() == filtered.rows());
    }
}

TEST_CASE("feature table csv round trip") {
    FeatureTable t(std::vector<std::string>{"x", "y", "fsmd_correct"});
    t.add_row(std::vector<double>{1.5, -2.25, 0.125}, 1);
    t.add_row(std::vector<double>{kInf, 0.1, 1.0}, 2);
    t.add_row(std::vector<double>{3.0, std::numeric_limits<double>::quiet_NaN(), 0.0}, 3);
    const std::string path = "test_fuzzy_roundtrip.csv";
    t.save_csv(path);
    const auto back = FeatureTable::load_csv(path);
    REQUIRE(back.rows() == 3);
    REQUIRE(back.cols() == 3);
    CHECK(back.at(0, "x") == 1.5);
    CHECK(back.at(1, "x") == kInf);
    CHECK(std::isnan(back.at(2, "y")));
    CHECK(back.origin(1) == 2);
    std::remove(path.c_str());
}
