#include "nearunit/limit_table.hpp"

#include <algorithm>

#include "nearunit/stats.hpp"

namespace nearunit {

std::vector<double> LimitTable::column(std::size_t col) const {
    std::vector<double> out(rows());
    for (std::size_t r = 0; r < out.size(); ++r) {
        out[r] = at(r, col);
    }
    return out;
}

LimitSummary summarize(const LimitTable& table) {
    const std::size_t d = table.dims();
    LimitSummary s;
    s.mean.resize(d);
    s.cov.resize(d * d);
    s.quantiles.resize(d);
    std::vector<std::vector<double>> cols(d);
    for (std::size_t j = 0; j < d; ++j) {
        cols[j] = table.column(j);
        s.mean[j] = stats::mean(cols[j]);
    }
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = i; j < d; ++j) {
            const double c = stats::covariance(cols[i], cols[j]).xy;
            s.cov[i * d + j] = c;
            s.cov[j * d + i] = c;
        }
    }
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<double> sorted = cols[j];
        std::sort(sorted.begin(), sorted.end());
        for (double p : quantile_grid()) {
            s.quantiles[j].push_back(stats::quantile_sorted(sorted, p));
        }
    }
    return s;
}

}  // namespace nearunit
