#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "nearunit/cir.hpp"
#include "nearunit/estimation.hpp"
#include "nearunit/inference.hpp"
#include "nearunit/limit_table.hpp"
#include "nearunit/linalg.hpp"

namespace nearunit {

using json = nlohmann::ordered_json;

/// Column-named numeric table, stored row-major.
class Table {
public:
    Table() = default;
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(std::span<const double> row);
    void add_row(std::initializer_list<double> row) { add_row(std::span<const double>(row.begin(), row.size())); }

    [[nodiscard]] const std::vector<std::string>& columns() const noexcept { return columns_; }
    [[nodiscard]] std::size_t rows() const noexcept {
        return columns_.empty() ? 0 : data_.size() / columns_.size();
    }
    [[nodiscard]] double at(std::size_t row, std::size_t col) const { return data_[row * columns_.size() + col]; }
    [[nodiscard]] std::vector<double> column(std::size_t col) const;
    [[nodiscard]] std::vector<double> column(const std::string& name) const;

    /// Header line then one line per row, numbers at 17 significant digits.
    [[nodiscard]] std::string to_csv() const;

private:
    std::vector<std::string> columns_;
    std::vector<double> data_;
};

/// Output of a study: a JSON summary plus named raw tables.
struct StudyReport {
    std::string study;
    json summary;
    std::map<std::string, Table> tables;
};

/// Writes <dir>/<study>.json and <dir>/<study>_<table>.csv; returns the paths written.
std::vector<std::string> write_report(const StudyReport& report, const std::string& dir);

void write_text(const std::string& path, const std::string& text);

/// JSON numbers cannot be NaN or infinite; those map to null.
[[nodiscard]] json num(double v);
[[nodiscard]] json to_json(const Mat2& m);
[[nodiscard]] json to_json(const Interval& i);
[[nodiscard]] json to_json(const EstimateResult& r, bool with_residuals = false);
[[nodiscard]] json to_json(const PluginInference& p);
[[nodiscard]] json to_json(const BootstrapCi& c);
[[nodiscard]] json to_json(const TestResult& t);
[[nodiscard]] json to_json(const VarianceExponent& v);
[[nodiscard]] json to_json(const LimitSummary& s, const std::vector<std::string>& labels);
[[nodiscard]] json summary_json(const LimitTable& t);

/// {n, mean, var, sd, se_mean}; var is null when n < 2.
[[nodiscard]] json column_stats(std::span<const double> x);

/// Histogram as a table with columns lo, hi, count.
[[nodiscard]] Table histogram_table(std::span<const double> x, std::size_t bins);

[[nodiscard]] Table to_table(const LimitTable& t);

}  // namespace nearunit
