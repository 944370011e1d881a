#include "fuzzpipe/fuzzy/membership.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fuzzpipe::fuzzy {

double eval_trapezoid(double x, const TrapezoidParams& p) {
    if (std::isnan(x)) return 0.0;  // unknown feature: maximally uncertain

    double rising;
    if (std::isinf(p.a) && p.a < 0) {
        rising = 1.0;  // open left shoulder
    } else if (p.b > p.a) {
        rising = (x - p.a) / (p.b - p.a);
    } else {
        rising = x >= p.b ? 1.0 : 0.0;  // crisp step
    }

    double falling;
    if (std::isinf(p.d) && p.d > 0) {
        falling = 1.0;  // open right shoulder
    } else if (p.d > p.c) {
        falling = (p.d - x) / (p.d - p.c);
    } else {
        falling = x <= p.c ? 1.0 : 0.0;
    }

    return std::max(std::min({rising, 1.0, falling}), 0.0);
}

double FuzzyPartition::membership_sum(double x) const {
    double s = 0.0;
    for (const auto& [name, params] : terms) s += eval_trapezoid(x, params);
    return s;
}

FuzzyPartition build_standard_partition(const std::vector<Ramp>& ramps,
                                        const std::vector<std::string>& term_names) {
    if (term_names.size() != ramps.size() + 1)
        throw std::invalid_argument("standard partition needs one more term than ramps");
    for (std::size_t i = 0; i < ramps.size(); ++i) {
        if (ramps[i].lo > ramps[i].hi)
            throw std::invalid_argument("ramp interval reversed");
        if (i > 0 && ramps[i].lo < ramps[i - 1].hi)
            throw std::invalid_argument("ramps unsorted or overlapping");
    }

    constexpr double inf = std::numeric_limits<double>::infinity();
    FuzzyPartition partition;
    for (std::size_t t = 0; t < term_names.size(); ++t) {
        TrapezoidParams p;
        if (t == 0) {
            p.a = -inf;
            p.b = -inf;
        } else {
            p.a = ramps[t - 1].lo;
            p.b = ramps[t - 1].hi;
        }
        if (t == ramps.size()) {
            p.c = inf;
            p.d = inf;
        } else {
            p.c = ramps[t].lo;
            p.d = ramps[t].hi;
        }
        partition.terms.emplace_back(term_names[t], p);
    }
    return partition;
}

double min_conjunction(const std::vector<double>& memberships) {
    if (memberships.empty()) throw std::invalid_argument("conjunction of empty membership list");
    return *std::min_element(memberships.begin(), memberships.end());
}

}  // namespace fuzzpipe::fuzzy
