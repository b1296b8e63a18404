#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nearunit/estimation.hpp"
#include "nearunit/inference.hpp"
#include "nearunit/report.hpp"

namespace nearunit {

/// A nonnegative observed series.
struct Dataset {
    std::string name;
    std::vector<double> values;
    /// Optional per-row labels (dates), same length as values when present.
    std::vector<std::string> labels;
    std::string frequency;
    std::string units;
    bool integer_flag = false;
    /// values[i] = scale * source_values[i]; scale is 1 when no conversion was applied.
    double scale = 1.0;
    std::vector<double> source_values;
    /// Unit conversions and dropped rows, in the order they happened.
    std::vector<std::string> log;
};

enum class NaPolicy { Strict, Drop };
enum class HeaderMode { Auto, Present, Absent };

struct CsvOptions {
    /// Column name, or zero-based index written as digits. Empty: last column.
    std::string column;
    /// Optional column holding row labels (name or index).
    std::string label_column;
    char delimiter = ',';
    /// Auto: the first line is a header when the chosen field is not numeric.
    HeaderMode header = HeaderMode::Auto;
    NaPolicy na = NaPolicy::Strict;
    /// Multiplier applied to every value, e.g. 100 for percent to basis points.
    double scale = 1.0;
    std::string units;
    std::string frequency;
    /// Defaults to the column name, or the file stem.
    std::string name;
};

/// Reads one column. Empty fields and the tokens NA, NaN, "." count as
/// missing. Row numbers in errors are one-based file lines.
/// Throws ParseError, NegativeValue, MissingValue (strict policy).
[[nodiscard]] Dataset load_csv(const std::string& path, const CsvOptions& opt = {});
[[nodiscard]] Dataset parse_csv(const std::string& text, const CsvOptions& opt = {});

/// Percent to basis points.
inline constexpr double kBasisPointsPerPercent = 100.0;

/// One value per line, shortest round-trip formatting, with a "label,value"
/// layout when labels exist. parse_csv of the output gives identical values.
[[nodiscard]] std::string serialize_csv(const Dataset& ds);

/// Persistence-scale summary of an OLS fit.
struct PersistenceRow {
    std::string name;
    /// Observations; the fit uses n - 1 transitions.
    std::size_t n = 0;
    double alpha_hat = 0.0;
    double mu_hat = 0.0;
    double sigma2_hat = 0.0;
    /// NaN when alpha_hat >= 1.
    double k_hat = 0.0;
    double k_hat_over_n = 0.0;
    /// ln k_hat / ln(n - 1), NaN when k_hat is undefined.
    double tau_hat = 0.0;
    bool alpha_at_or_above_one = false;
    bool k_exceeds_n = false;
};

[[nodiscard]] PersistenceRow persistence_row(const std::string& name, std::span<const double> values);

struct PipelineOptions {
    std::size_t B = 5000;
    double level = 0.9;
    std::vector<double> grid = default_alpha_grid();
    std::vector<TestMethod> methods = {TestMethod::PluginSE, TestMethod::BootstrapSE};
    WeightDist weights = WeightDist::Exp1;
    std::uint64_t seed = 1;
    int threads = 0;
};

struct PipelineResult {
    PersistenceRow row;
    EstimateResult estimate;
    std::optional<PluginInference> plugin;
    std::optional<BootstrapCi> bootstrap;
    std::vector<PvalueCurve> curves;
    std::optional<VarianceExponent> variance;
    /// Sub-results that could not be produced, keyed by stage, with the error code.
    std::vector<std::pair<std::string, std::string>> skipped;
    std::vector<std::string> flags;
};

/// Estimates, plug-in and bootstrap intervals, p-value curves and the
/// variance-exponent diagnostic. Needs at least 10 observations.
[[nodiscard]] PipelineResult apply_pipeline(const Dataset& ds, const PipelineOptions& opt = {});

struct Window {
    /// Half-open index range [start, end).
    std::size_t start = 0;
    std::size_t end = 0;
};

struct WindowRow {
    Window window;
    std::string first_label;
    std::string last_label;
    PersistenceRow row;
};

/// Estimation stage per window. Throws WindowTooShort for fewer than 10
/// observations, InvalidInput for ranges outside the data.
[[nodiscard]] std::vector<WindowRow> window_sensitivity(const Dataset& ds, const std::vector<Window>& windows,
                                                        int threads = 0);

/// Index of the first label starting with `prefix`; throws InvalidInput if none.
[[nodiscard]] std::size_t find_label(const Dataset& ds, const std::string& prefix);

[[nodiscard]] json to_json(const Dataset& ds, bool with_values = false);
[[nodiscard]] json to_json(const PersistenceRow& r);
[[nodiscard]] json to_json(const PvalueCurve& c);
[[nodiscard]] json to_json(const PipelineResult& r);

/// p-value curve as a table with columns alpha0, p.
[[nodiscard]] Table curve_table(const PvalueCurve& c);
[[nodiscard]] Table window_table(const std::vector<WindowRow>& rows);

}  // namespace nearunit
