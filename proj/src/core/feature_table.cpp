#include "fuzzpipe/core/feature_table.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fuzzpipe/core/keyvalue.hpp"

namespace fuzzpipe::core {

FeatureTable::FeatureTable(std::vector<std::string> column_names) : names_(std::move(column_names)) {
    columns_.resize(names_.size());
}

bool FeatureTable::has_column(const std::string& name) const {
    for (const auto& n : names_)
        if (n == name) return true;
    return false;
}

std::size_t FeatureTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return i;
    throw std::out_of_range("no such column: " + name);
}

std::span<const double> FeatureTable::column(const std::string& name) const {
    return columns_[column_index(name)];
}

std::span<const double> FeatureTable::column(std::size_t idx) const { return columns_[idx]; }

std::span<double> FeatureTable::mutable_column(const std::string& name) {
    return columns_[column_index(name)];
}

double FeatureTable::at(std::size_t row, const std::string& name) const {
    return columns_[column_index(name)][row];
}

void FeatureTable::set(std::size_t row, const std::string& name, double value) {
    columns_[column_index(name)][row] = value;
}

void FeatureTable::set_all_origins(int op) {
    for (auto& o : origin_) o = op;
}

std::size_t FeatureTable::add_row(std::span<const double> values, int origin_op) {
    if (values.size() != names_.size()) throw std::invalid_argument("row width mismatch");
    for (std::size_t c = 0; c < values.size(); ++c) columns_[c].push_back(values[c]);
    origin_.push_back(origin_op);
    return origin_.size() - 1;
}

void FeatureTable::add_column(const std::string& name, std::vector<double> values) {
    if (has_column(name)) throw std::invalid_argument("duplicate column: " + name);
    if (values.size() != rows()) throw std::invalid_argument("column length mismatch: " + name);
    names_.push_back(name);
    columns_.push_back(std::move(values));
}

void FeatureTable::add_column(const std::string& name, double fill) {
    add_column(name, std::vector<double>(rows(), fill));
}

FeatureTable FeatureTable::select_rows(const std::vector<std::size_t>& idx) const {
    FeatureTable out(names_);
    for (auto& col : out.columns_) col.reserve(idx.size());
    for (std::size_t c = 0; c < columns_.size(); ++c)
        for (const std::size_t r : idx) out.columns_[c].push_back(columns_[c].at(r));
    out.origin_.reserve(idx.size());
    for (const std::size_t r : idx) out.origin_.push_back(origin_.at(r));
    return out;
}

void FeatureTable::append_rows_by_name(const FeatureTable& other, const std::vector<std::size_t>& idx) {
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    const std::size_t old_rows = rows();
    for (const auto& name : other.names_) {
        if (!has_column(name)) add_column(name, std::vector<double>(old_rows, nan));
    }
    for (std::size_t c = 0; c < names_.size(); ++c) {
        const bool in_other = other.has_column(names_[c]);
        const std::size_t oc = in_other ? other.column_index(names_[c]) : 0;
        for (const std::size_t r : idx) {
            columns_[c].push_back(in_other ? other.columns_[oc].at(r) : nan);
        }
    }
    for (const std::size_t r : idx) origin_.push_back(other.origin_.at(r));
}

void FeatureTable::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write csv: " + path);
    for (std::size_t c = 0; c < names_.size(); ++c) out << names_[c] << ",";
    out << "origin_op\n";
    for (std::size_t r = 0; r < rows(); ++r) {
        for (std::size_t c = 0; c < columns_.size(); ++c) out << format_real(columns_[c][r]) << ",";
        out << origin_[r] << "\n";
    }
}

FeatureTable FeatureTable::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open csv: " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty csv: " + path);
    auto split = [](const std::string& s) {
        std::vector<std::string> fields;
        std::string cur;
        for (const char ch : s) {
            if (ch == ',') {
                fields.push_back(cur);
                cur.clear();
            } else if (ch != '\r') {
                cur += ch;
            }
        }
        fields.push_back(cur);
        return fields;
    };
    const auto header = split(line);
    if (header.empty() || header.back() != "origin_op")
        throw std::runtime_error("csv missing origin_op column: " + path);
    FeatureTable table(std::vector<std::string>(header.begin(), header.end() - 1));
    std::vector<double> row(table.cols());
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto fields = split(line);
        if (fields.size() != header.size())
            throw std::runtime_error("csv row width mismatch in " + path);
        for (std::size_t c = 0; c + 1 < fields.size(); ++c) row[c] = parse_real(fields[c]);
        table.add_row(row, std::stoi(fields.back()));
    }
    return table;
}

}  // namespace fuzzpipe::core
