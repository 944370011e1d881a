#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace fuzzpipe::core {

// Column-oriented table of per-object features. Every column has one real
// value per row; each row additionally carries the id of the operator that
// produced it (origin_op), so downstream consumers can tell regular output
// rows from fallback rows propagated from earlier operators.
class FeatureTable {
public:
    FeatureTable() = default;
    explicit FeatureTable(std::vector<std::string> column_names);

    std::size_t rows() const { return origin_.size(); }
    std::size_t cols() const { return names_.size(); }
    bool empty() const { return rows() == 0; }

    const std::vector<std::string>& column_names() const { return names_; }
    bool has_column(const std::string& name) const;
    // Throws std::out_of_range for unknown columns.
    std::size_t column_index(const std::string& name) const;

    std::span<const double> column(const std::string& name) const;
    std::span<const double> column(std::size_t idx) const;
    std::span<double> mutable_column(const std::string& name);

    double at(std::size_t row, const std::string& name) const;
    double at(std::size_t row, std::size_t col) const { return columns_[col][row]; }
    void set(std::size_t row, const std::string& name, double value);

    int origin(std::size_t row) const { return origin_[row]; }
    void set_origin(std::size_t row, int op) { origin_[row] = op; }
    void set_all_origins(int op);

    // Appends a row; values must match the current column count.
    std::size_t add_row(std::span<const double> values, int origin_op = 0);
    // Appends a column of rows() values (or a fill value).
    void add_column(const std::string& name, std::vector<double> values);
    void add_column(const std::string& name, double fill);

    // New table with the same columns holding the selected rows, in order.
    FeatureTable select_rows(const std::vector<std::size_t>& idx) const;

    // Appends rows of `other` by column name; columns missing on either side
    // are filled with NaN. Origin tags are preserved.
    void append_rows_by_name(const FeatureTable& other, const std::vector<std::size_t>& idx);

    // CSV with a header row; origin tags serialize as a final origin_op column.
    void save_csv(const std::string& path) const;
    static FeatureTable load_csv(const std::string& path);

private:
    std::vector<std::string> names_;
    std::vector<std::vector<double>> columns_;
    std::vector<int> origin_;
};

}  // namespace fuzzpipe::core
