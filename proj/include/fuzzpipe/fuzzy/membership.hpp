#pragma once

#include <string>
#include <utility>
#include <vector>

namespace fuzzpipe::fuzzy {

// Trapezoidal membership function parameters. a and d may be -inf/+inf to
// model open shoulders; b == a (or d == c) degenerates the ramp to a crisp
// step that is 1 for x >= b (resp. x <= c) on that side.
struct TrapezoidParams {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double d = 0.0;

    bool valid() const { return a <= b && b <= c && c <= d; }
};

// Piecewise linear membership in [0, 1]: ramps up on [a, b], plateau 1 on
// [b, c], ramps down on [c, d], 0 outside [a, d]. NaN inputs map to 0.
double eval_trapezoid(double x, const TrapezoidParams& params);

// Ordered family of linguistic terms whose memberships sum to 1 everywhere
// and where at most two neighboring terms are non-zero at any x.
struct FuzzyPartition {
    std::vector<std::pair<std::string, TrapezoidParams>> terms;

    double membership(std::size_t term, double x) const {
        return eval_trapezoid(x, terms[term].second);
    }
    double membership_sum(double x) const;
};

// A ramp is the transition interval [lo, hi] shared by two adjacent terms.
struct Ramp {
    double lo = 0.0;
    double hi = 0.0;
};

// Builds the partition with terms.size() == ramps.size() + 1. Ramps must be
// sorted and non-overlapping; zero-width ramps yield crisp steps. Throws
// std::invalid_argument otherwise.
FuzzyPartition build_standard_partition(const std::vector<Ramp>& ramps,
                                        const std::vector<std::string>& term_names);

// Fuzzy conjunction (minimum operator). Throws std::invalid_argument on an
// empty list; entries fixed at 1 leave the result unchanged.
double min_conjunction(const std::vector<double>& memberships);

}  // namespace fuzzpipe::fuzzy
