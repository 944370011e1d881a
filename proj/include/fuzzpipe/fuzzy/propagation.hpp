#pragma once

#include <map>
#include <string>
#include <vector>

#include "fuzzpipe/core/feature_table.hpp"
#include "fuzzpipe/fuzzy/membership.hpp"

namespace fuzzpipe::fuzzy {

inline std::string fsmd_column_name(const std::string& term) { return "fsmd_" + term; }

// Forward (alpha) and backward (beta) thresholds of one operator.
// alpha gates what is passed on at all; rows below beta are considered
// uncertain enough that their originating inputs stay available downstream.
struct PropagationThresholds {
    double alpha = 0.0;
    double beta = 0.0;

    bool valid() const {
        return alpha >= 0.0 && alpha <= beta && beta <= 1.0;
    }
};

// Evaluates the mapped membership functions per row and appends the degrees
// as new columns. With combine=true a single min-combined column
// fsmd_<term> is appended; otherwise one fsmd_<feature> column per mapped
// feature. Input columns are left untouched. Throws on unknown features.
core::FeatureTable annotate_fsmd(const core::FeatureTable& table,
                                 const std::map<std::string, TrapezoidParams>& feature_mbfs,
                                 bool combine, const std::string& term = "correct");

// Rows whose FSMD is >= alpha, order preserved. Throws if the column is
// missing. NaN degrees never pass.
core::FeatureTable alpha_filter(const core::FeatureTable& table, double alpha,
                                const std::string& term = "correct");

// Like alpha_filter but also reports which input rows survived.
core::FeatureTable alpha_filter_indices(const core::FeatureTable& table, double alpha,
                                        std::vector<std::size_t>* kept,
                                        const std::string& term = "correct");

// Per current row, the indices of the previous-operator rows it came from.
using Lineage = std::vector<std::vector<std::size_t>>;

// Builds the propagated set: all rows of `current` plus those rows of
// `previous` that generated at least one output row and whose every output
// row has alpha <= FSMD < beta. Appended rows keep their origin tags and
// align by column name (NaN where schemas differ). Throws on lineage
// references outside `previous`.
core::FeatureTable omega_propagate(const core::FeatureTable& current,
                                   const core::FeatureTable& previous, const Lineage& lineage,
                                   const PropagationThresholds& thresholds,
                                   const std::string& term = "correct");

}  // namespace fuzzpipe::fuzzy
