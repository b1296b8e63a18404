#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace nearunit {

/// Empirical sample of a multivariate limiting law: M draws x d components,
/// stored row-major.
struct LimitTable {
    std::vector<std::string> labels;
    std::vector<double> samples;
    std::size_t resample_count = 0;
    std::size_t steps = 0;
    std::map<std::string, double> params;
    std::vector<std::string> notes;

    [[nodiscard]] std::size_t dims() const noexcept { return labels.size(); }
    [[nodiscard]] std::size_t rows() const noexcept {
        return labels.empty() ? 0 : samples.size() / labels.size();
    }
    [[nodiscard]] double at(std::size_t row, std::size_t col) const { return samples[row * dims() + col]; }
    [[nodiscard]] std::vector<double> column(std::size_t col) const;
};

/// Probabilities at which LimitSummary reports quantiles.
inline const std::vector<double>& quantile_grid() {
    static const std::vector<double> grid = {0.01, 0.025, 0.05, 0.1, 0.25, 0.5,
                                             0.75, 0.9,   0.95, 0.975, 0.99};
    return grid;
}

struct LimitSummary {
    std::vector<double> mean;
    /// d x d, row-major, unbiased.
    std::vector<double> cov;
    /// quantiles[col][k] at quantile_grid()[k].
    std::vector<std::vector<double>> quantiles;
};

/// Recomputes the summary from the stored draws.
[[nodiscard]] LimitSummary summarize(const LimitTable& table);

}  // namespace nearunit
