#include "nearunit/report.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nearunit/error.hpp"
#include "nearunit/format.hpp"
#include "nearunit/stats.hpp"

namespace nearunit {

void Table::add_row(std::span<const double> row) {
    if (row.size() != columns_.size()) {
        throw InvalidInput("table row has " + std::to_string(row.size()) + " values, expected " +
                           std::to_string(columns_.size()));
    }
    data_.insert(data_.end(), row.begin(), row.end());
}

std::vector<double> Table::column(std::size_t col) const {
    std::vector<double> out(rows());
    for (std::size_t r = 0; r < out.size(); ++r) {
        out[r] = at(r, col);
    }
    return out;
}

std::vector<double> Table::column(const std::string& name) const {
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        if (columns_[c] == name) {
            return column(c);
        }
    }
    throw InvalidInput("no column named '" + name + "'");
}

std::string Table::to_csv() const {
    std::ostringstream out;
    for (std::size_t c = 0; c < columns_.size(); ++c) {
        out << (c ? "," : "") << columns_[c];
    }
    out << '\n';
    for (std::size_t r = 0; r < rows(); ++r) {
        for (std::size_t c = 0; c < columns_.size(); ++c) {
            out << (c ? "," : "") << fmt_num(at(r, c));
        }
        out << '\n';
    }
    return out.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InvalidInput("cannot write '" + path + "'");
    }
    out << text;
}

std::vector<std::string> write_report(const StudyReport& report, const std::string& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::string> paths;
    const std::string base = (std::filesystem::path(dir) / report.study).string();
    write_text(base + ".json", report.summary.dump(2) + "\n");
    paths.push_back(base + ".json");
    for (const auto& [name, table] : report.tables) {
        const std::string path = base + "_" + name + ".csv";
        write_text(path, table.to_csv());
        paths.push_back(path);
    }
    return paths;
}

json num(double v) {
    if (!std::isfinite(v)) {
        return nullptr;
    }
    return v;
}

json to_json(const Mat2& m) { return json::array({json::array({num(m.xx), num(m.xy)}), json::array({num(m.yx), num(m.yy)})}); }

json to_json(const Interval& i) { return json::array({num(i.lo), num(i.hi)}); }

json to_json(const EstimateResult& r, bool with_residuals) {
    json j;
    j["method"] = std::string(to_string(r.method));
    j["n"] = r.n;
    j["alpha_hat"] = num(r.alpha_hat);
    j["mu_hat"] = num(r.mu_hat);
    j["sigma2_hat"] = num(r.sigma2_hat);
    j["k_hat"] = r.k_hat ? num(*r.k_hat) : json(nullptr);
    j["tau_hat"] = r.tau_hat ? num(*r.tau_hat) : json(nullptr);
    j["feller_warning"] = r.feller_warning;
    if (r.method == Method::PoissonQML) {
        j["iterations"] = r.iterations;
        j["gradient_norm"] = num(r.gradient_norm);
    }
    if (with_residuals) {
        json res = json::array();
        for (double w : r.residuals) {
            res.push_back(num(w));
        }
        j["residuals"] = std::move(res);
    }
    return j;
}

json to_json(const PluginInference& p) {
    return {{"level", p.level},
            {"cov", to_json(p.cov)},
            {"sigma2_used", num(p.sigma2_used)},
            {"se_alpha", num(p.se_alpha)},
            {"se_mu", num(p.se_mu)},
            {"ci_alpha", to_json(p.ci_alpha)},
            {"ci_mu", to_json(p.ci_mu)},
            {"scale_alpha", num(p.scale_alpha)},
            {"scale_mu", num(p.scale_mu)},
            {"capped", p.capped}};
}

json to_json(const BootstrapCi& c) {
    return {{"level", c.level},
            {"se_alpha", num(c.se_alpha)},
            {"se_mu", num(c.se_mu)},
            {"ci_alpha", to_json(c.ci_alpha)},
            {"ci_mu", to_json(c.ci_mu)},
            {"percentile_alpha", to_json(c.pct_alpha)},
            {"percentile_mu", to_json(c.pct_mu)},
            {"capped", c.capped}};
}

json to_json(const TestResult& t) {
    json decisions = json::object();
    for (const auto& [level, reject] : t.decision_at) {
        decisions[fmt_shortest(level)] = reject;
    }
    return {{"method", std::string(to_string(t.method))},
            {"alpha0", num(t.alpha0)},
            {"alpha_hat", num(t.alpha_hat)},
            {"se", num(t.se)},
            {"t_stat", num(t.t_stat)},
            {"p_value", num(t.p_value)},
            {"reject", decisions}};
}

json to_json(const VarianceExponent& v) {
    return {{"a_hat", num(v.a_hat)},
            {"ci_halfwidth", num(v.ci_halfwidth)},
            {"r2", num(v.r2)},
            {"used", v.used},
            {"dropped", v.dropped}};
}

json to_json(const LimitSummary& s, const std::vector<std::string>& labels) {
    const std::size_t d = labels.size();
    json mean = json::object();
    json quant = json::object();
    json cov = json::array();
    for (std::size_t i = 0; i < d; ++i) {
        mean[labels[i]] = num(s.mean[i]);
        json row = json::array();
        for (std::size_t j = 0; j < d; ++j) {
            row.push_back(num(s.cov[i * d + j]));
        }
        cov.push_back(std::move(row));
        json q = json::object();
        for (std::size_t k = 0; k < quantile_grid().size(); ++k) {
            q[fmt_shortest(quantile_grid()[k])] = num(s.quantiles[i][k]);
        }
        quant[labels[i]] = std::move(q);
    }
    return {{"mean", mean}, {"cov", cov}, {"quantiles", quant}};
}

json summary_json(const LimitTable& t) {
    json j = to_json(summarize(t), t.labels);
    j["M"] = t.rows();
    j["steps"] = t.steps;
    j["resample_count"] = t.resample_count;
    json params = json::object();
    for (const auto& [k, v] : t.params) {
        params[k] = num(v);
    }
    j["params"] = params;
    j["notes"] = t.notes;
    return j;
}

json column_stats(std::span<const double> x) {
    json j;
    j["n"] = x.size();
    const double m = x.empty() ? NAN : stats::mean(x);
    j["mean"] = num(m);
    if (x.size() >= 2) {
        const double v = stats::variance(x);
        j["var"] = num(v);
        j["sd"] = num(std::sqrt(v));
        j["se_mean"] = num(std::sqrt(v / static_cast<double>(x.size())));
    } else {
        j["var"] = nullptr;
        j["sd"] = nullptr;
        j["se_mean"] = nullptr;
        j["variance_undefined"] = true;
    }
    return j;
}

Table histogram_table(std::span<const double> x, std::size_t bins) {
    const stats::Histogram h = stats::histogram(x, bins);
    Table t({"lo", "hi", "count"});
    const double width = (h.hi - h.lo) / static_cast<double>(h.counts.size());
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        const double lo = h.lo + width * static_cast<double>(i);
        t.add_row({lo, lo + width, static_cast<double>(h.counts[i])});
    }
    return t;
}

Table to_table(const LimitTable& lt) {
    Table t(lt.labels);
    for (std::size_t r = 0; r < lt.rows(); ++r) {
        t.add_row(std::span<const double>(lt.samples.data() + r * lt.dims(), lt.dims()));
    }
    return t;
}

}  // namespace nearunit
