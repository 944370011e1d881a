#include "fuzzpipe/fuzzy/propagation.hpp"

#include <cmath>
#include <stdexcept>

namespace fuzzpipe::fuzzy {

core::FeatureTable annotate_fsmd(const core::FeatureTable& table,
                                 const std::map<std::string, TrapezoidParams>& feature_mbfs,
                                 bool combine, const std::string& term) {
    for (const auto& [feature, params] : feature_mbfs) {
        if (!table.has_column(feature))
            throw std::invalid_argument("annotate_fsmd: unknown feature '" + feature + "'");
        if (!params.valid())
            throw std::invalid_argument("annotate_fsmd: invalid trapezoid for '" + feature + "'");
    }

    core::FeatureTable out = table;
    const std::size_t n = table.rows();
    if (combine) {
        std::vector<double> combined(n, 1.0);
        for (const auto& [feature, params] : feature_mbfs) {
            const auto col = table.column(feature);
            for (std::size_t r = 0; r < n; ++r)
                combined[r] = std::min(combined[r], eval_trapezoid(col[r], params));
        }
        out.add_column(fsmd_column_name(term), std::move(combined));
    } else {
        for (const auto& [feature, params] : feature_mbfs) {
            std::vector<double> degrees(n);
            const auto col = table.column(feature);
            for (std::size_t r = 0; r < n; ++r) degrees[r] = eval_trapezoid(col[r], params);
            out.add_column(fsmd_column_name(feature), std::move(degrees));
        }
    }
    return out;
}

core::FeatureTable alpha_filter_indices(const core::FeatureTable& table, double alpha,
                                        std::vector<std::size_t>* kept, const std::string& term) {
    const auto fsmd = table.column(fsmd_column_name(term));  // throws if missing
    std::vector<std::size_t> idx;
    idx.reserve(table.rows());
    for (std::size_t r = 0; r < table.rows(); ++r) {
        if (fsmd[r] >= alpha) idx.push_back(r);  // NaN compares false
    }
    if (kept) *kept = idx;
    return table.select_rows(idx);
}

core::FeatureTable alpha_filter(const core::FeatureTable& table, double alpha,
                                const std::string& term) {
    return alpha_filter_indices(table, alpha, nullptr, term);
}

core::FeatureTable omega_propagate(const core::FeatureTable& current,
                                   const core::FeatureTable& previous, const Lineage& lineage,
                                   const PropagationThresholds& thresholds,
                                   const std::string& term) {
    if (!thresholds.valid()) throw std::invalid_argument("omega_propagate: invalid thresholds");
    if (lineage.size() != current.rows())
        throw std::invalid_argument("omega_propagate: lineage size mismatch");

    const auto fsmd = current.column(fsmd_column_name(term));

    // generated[p]: p produced output; resolved[p]: some output left the
    // uncertain band [alpha, beta).
    std::vector<char> generated(previous.rows(), 0);
    std::vector<char> resolved(previous.rows(), 0);
    for (std::size_t r = 0; r < current.rows(); ++r) {
        const double mu = fsmd[r];
        const bool uncertain = mu >= thresholds.alpha && mu < thresholds.beta;
        for (const std::size_t p : lineage[r]) {
            if (p >= previous.rows())
                throw std::invalid_argument("omega_propagate: lineage references missing row");
            generated[p] = 1;
            if (!uncertain) resolved[p] = 1;
        }
    }

    std::vector<std::size_t> fallback;
    for (std::size_t p = 0; p < previous.rows(); ++p)
        if (generated[p] && !resolved[p]) fallback.push_back(p);

    core::FeatureTable omega = current;
    omega.append_rows_by_name(previous, fallback);
    return omega;
}

}  // namespace fuzzpipe::fuzzy
