#include "nearunit/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nearunit/error.hpp"
#include "nearunit/format.hpp"
#include "nearunit/parallel.hpp"

namespace nearunit {

namespace {

constexpr std::size_t kMinObservations = 10;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

// Splits one line; double quotes group a field and "" escapes a quote.
std::vector<std::string> split_fields(std::string_view line, char delim) {
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                out.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delim) {
            out.emplace_back();
        } else {
            out.back() += c;
        }
    }
    for (auto& f : out) f = std::string(trim(f));
    return out;
}

bool is_missing(std::string_view tok) {
    return tok.empty() || tok == "." || tok == "NA" || tok == "na" || tok == "NaN" || tok == "nan" ||
           tok == "null";
}

std::optional<double> parse_number(std::string_view tok) {
    if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::size_t resolve_column(const std::string& col, const std::vector<std::string>* header, std::size_t width,
                           bool value_column) {
    if (col.empty()) {
        return value_column ? width - 1 : width;
    }
    if (all_digits(col)) {
        return std::stoul(col);
    }
    if (header == nullptr) {
        throw InvalidInput("column '" + col + "' named but the file has no header");
    }
    const auto it = std::find(header->begin(), header->end(), col);
    if (it == header->end()) {
        throw InvalidInput("no column named '" + col + "'");
    }
    return static_cast<std::size_t>(it - header->begin());
}

std::string row_tag(std::size_t line) { return "row " + std::to_string(line); }

}  // namespace

Dataset parse_csv(const std::string& text, const CsvOptions& opt) {
    std::vector<std::pair<std::size_t, std::string>> lines;
    {
        std::istringstream in(text);
        std::string line;
        std::size_t number = 0;
        while (std::getline(in, line)) {
            ++number;
            lines.emplace_back(number, line);
        }
        while (!lines.empty() && trim(lines.back().second).empty()) {
            lines.pop_back();
        }
    }
    if (lines.empty()) {
        throw InvalidInput("CSV input is empty");
    }

    const auto first = split_fields(lines.front().second, opt.delimiter);
    const bool named = (!opt.column.empty() && !all_digits(opt.column)) ||
                       (!opt.label_column.empty() && !all_digits(opt.label_column));
    bool has_header = false;
    switch (opt.header) {
        case HeaderMode::Present: has_header = true; break;
        case HeaderMode::Absent: has_header = false; break;
        case HeaderMode::Auto: {
            if (named) {
                has_header = true;
            } else {
                const std::size_t c = resolve_column(opt.column, nullptr, first.size(), true);
                has_header = c < first.size() && !is_missing(first[c]) && !parse_number(first[c]);
            }
            break;
        }
    }
    const std::vector<std::string>* header = has_header ? &first : nullptr;
    const std::size_t col = resolve_column(opt.column, header, first.size(), true);
    const std::size_t label_col =
        opt.label_column.empty() ? first.size() : resolve_column(opt.label_column, header, first.size(), false);
    const bool want_labels = !opt.label_column.empty();

    Dataset ds;
    ds.units = opt.units;
    ds.frequency = opt.frequency;
    ds.scale = opt.scale;
    if (!opt.name.empty()) {
        ds.name = opt.name;
    } else if (has_header && col < first.size()) {
        ds.name = first[col];
    }
    if (!(opt.scale > 0.0) || !std::isfinite(opt.scale)) {
        throw InvalidInput("unit scale must be positive and finite");
    }

    std::size_t dropped = 0;
    for (std::size_t i = has_header ? 1 : 0; i < lines.size(); ++i) {
        const auto& [line_no, line] = lines[i];
        const auto fields = split_fields(line, opt.delimiter);
        if (col >= fields.size() || (want_labels && label_col >= fields.size())) {
            throw ParseError(row_tag(line_no) + ": expected at least " + std::to_string(std::max(col, label_col) + 1) +
                             " fields, found " + std::to_string(fields.size()));
        }
        const std::string& tok = fields[col];
        if (is_missing(tok)) {
            if (opt.na == NaPolicy::Strict) {
                throw MissingValue(row_tag(line_no) + ": missing value ('" + tok +
                                   "'); the drop policy must be requested explicitly");
            }
            ++dropped;
            ds.log.push_back("dropped missing " + row_tag(line_no));
            continue;
        }
        const auto v = parse_number(tok);
        if (!v) {
            throw ParseError(row_tag(line_no) + ": '" + tok + "' is not a number");
        }
        if (*v < 0.0) {
            throw NegativeValue(row_tag(line_no) + ": negative value " + tok);
        }
        ds.source_values.push_back(*v);
        ds.values.push_back(*v * opt.scale);
        if (want_labels) {
            ds.labels.push_back(fields[label_col]);
        }
    }
    if (ds.values.empty()) {
        throw InvalidInput("CSV column holds no values");
    }
    if (opt.scale != 1.0) {
        ds.log.insert(ds.log.begin(), "values multiplied by " + fmt_shortest(opt.scale) +
                                          (opt.units.empty() ? std::string() : " (units: " + opt.units + ")"));
    }
    if (dropped > 0) {
        ds.log.push_back("dropped " + std::to_string(dropped) + " missing rows; the series is no longer equally spaced");
    }
    ds.integer_flag = std::all_of(ds.values.begin(), ds.values.end(), [](double v) { return v == std::floor(v); });
    return ds;
}

Dataset load_csv(const std::string& path, const CsvOptions& opt) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidInput("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    Dataset ds = parse_csv(buf.str(), opt);
    if (ds.name.empty()) {
        ds.name = std::filesystem::path(path).stem().string();
    }
    return ds;
}

std::string serialize_csv(const Dataset& ds) {
    std::string out;
    const bool labels = ds.labels.size() == ds.values.size() && !ds.labels.empty();
    for (std::size_t i = 0; i < ds.values.size(); ++i) {
        if (labels) {
            out += ds.labels[i];
            out += ',';
        }
        out += fmt_shortest(ds.values[i]);
        out += '\n';
    }
    return out;
}

PersistenceRow persistence_row(const std::string& name, std::span<const double> values) {
    const EstimateResult est = ols(values);
    PersistenceRow r;
    r.name = name;
    r.n = values.size();
    r.alpha_hat = est.alpha_hat;
    r.mu_hat = est.mu_hat;
    r.sigma2_hat = est.sigma2_hat;
    r.alpha_at_or_above_one = !(est.alpha_hat < 1.0);
    r.k_hat = est.k_hat.value_or(NAN);
    r.k_hat_over_n = r.k_hat / static_cast<double>(r.n);
    r.tau_hat = est.tau_hat.value_or(NAN);
    r.k_exceeds_n = est.k_hat && *est.k_hat > static_cast<double>(r.n);
    return r;
}

PipelineResult apply_pipeline(const Dataset& ds, const PipelineOptions& opt) {
    if (ds.values.size() < kMinObservations) {
        throw InsufficientData("apply_pipeline needs at least " + std::to_string(kMinObservations) +
                               " observations, got " + std::to_string(ds.values.size()));
    }
    const std::span<const double> x(ds.values);
    PipelineResult r;
    r.row = persistence_row(ds.name, x);
    r.estimate = ols(x);

    try {
        r.plugin = plugin_ci(r.estimate, opt.level);
    } catch (const Error& e) {
        r.skipped.emplace_back("plugin", e.code());
    }

    BootstrapOptions bopt;
    bopt.B = opt.B;
    bopt.weights = opt.weights;
    bopt.seed = opt.seed;
    bopt.threads = opt.threads;
    try {
        r.bootstrap = bootstrap_ci(bootstrap(x, bopt), opt.level);
    } catch (const Error& e) {
        r.skipped.emplace_back("bootstrap", e.code());
    }

    for (TestMethod m : opt.methods) {
        TestOptions topt;
        topt.method = m;
        topt.bootstrap = bopt;
        try {
            r.curves.push_back(pvalue_curve(x, opt.grid, topt, 1.0 - opt.level));
        } catch (const Error& e) {
            r.skipped.emplace_back("pvalue_curve_" + std::string(to_string(m)), e.code());
        }
    }

    try {
        r.variance = variance_exponent(x);
    } catch (const Error& e) {
        r.skipped.emplace_back("variance_exponent", e.code());
    }

    if (r.row.alpha_at_or_above_one) r.flags.emplace_back("alpha_at_or_above_one");
    if (r.row.k_exceeds_n) r.flags.emplace_back("k_hat_exceeds_n");
    if (r.estimate.feller_warning) r.flags.emplace_back("feller_warning");
    if (r.plugin && r.plugin->capped) r.flags.emplace_back("plugin_interval_capped_at_one");
    if (r.bootstrap && r.bootstrap->capped) r.flags.emplace_back("bootstrap_interval_capped_at_one");
    if (!ds.integer_flag) r.flags.emplace_back("non_integer_values");
    return r;
}

std::vector<WindowRow> window_sensitivity(const Dataset& ds, const std::vector<Window>& windows, int threads) {
    for (const Window& w : windows) {
        if (w.end > ds.values.size() || w.start > w.end) {
            throw InvalidInput("window [" + std::to_string(w.start) + ", " + std::to_string(w.end) +
                               ") lies outside the " + std::to_string(ds.values.size()) + " observations");
        }
        if (w.end - w.start < kMinObservations) {
            throw WindowTooShort("window [" + std::to_string(w.start) + ", " + std::to_string(w.end) + ") has " +
                                 std::to_string(w.end - w.start) + " observations, need " +
                                 std::to_string(kMinObservations));
        }
    }
    std::vector<WindowRow> out(windows.size());
    const bool labels = ds.labels.size() == ds.values.size();
    parallel_for(windows.size(), threads, [&](std::size_t i) {
        const Window& w = windows[i];
        out[i].window = w;
        if (labels) {
            out[i].first_label = ds.labels[w.start];
            out[i].last_label = ds.labels[w.end - 1];
        }
        out[i].row = persistence_row(ds.name, std::span<const double>(ds.values).subspan(w.start, w.end - w.start));
    });
    return out;
}

std::size_t find_label(const Dataset& ds, const std::string& prefix) {
    for (std::size_t i = 0; i < ds.labels.size(); ++i) {
        if (ds.labels[i].rfind(prefix, 0) == 0) {
            return i;
        }
    }
    throw InvalidInput("no row label starts with '" + prefix + "'");
}

json to_json(const Dataset& ds, bool with_values) {
    json j;
    j["name"] = ds.name;
    j["observations"] = ds.values.size();
    j["frequency"] = ds.frequency;
    j["units"] = ds.units;
    j["integer"] = ds.integer_flag;
    j["scale"] = ds.scale;
    j["log"] = ds.log;
    if (!ds.labels.empty()) {
        j["first_label"] = ds.labels.front();
        j["last_label"] = ds.labels.back();
    }
    if (with_values) {
        json v = json::array();
        for (double x : ds.values) v.push_back(x);
        j["values"] = std::move(v);
    }
    return j;
}

json to_json(const PersistenceRow& r) {
    return {{"name", r.name},
            {"n", r.n},
            {"alpha_hat", num(r.alpha_hat)},
            {"mu_hat", num(r.mu_hat)},
            {"sigma2_hat", num(r.sigma2_hat)},
            {"k_hat", num(r.k_hat)},
            {"k_hat_over_n", num(r.k_hat_over_n)},
            {"tau_hat", num(r.tau_hat)},
            {"alpha_at_or_above_one", r.alpha_at_or_above_one},
            {"k_hat_exceeds_n", r.k_exceeds_n}};
}

json to_json(const PvalueCurve& c) {
    json region = json::array();
    for (const Interval& i : c.region) region.push_back(to_json(i));
    return {{"method", std::string(to_string(c.method))},
            {"alpha_hat", num(c.alpha_hat)},
            {"se", num(c.se)},
            {"level", c.level},
            {"grid_points", c.alpha0.size()},
            {"region", region},
            {"open_at_unity", c.open_at_unity}};
}

json to_json(const PipelineResult& r) {
    json j;
    j["persistence"] = to_json(r.row);
    j["estimate"] = to_json(r.estimate);
    j["plugin"] = r.plugin ? to_json(*r.plugin) : json(nullptr);
    j["bootstrap"] = r.bootstrap ? to_json(*r.bootstrap) : json(nullptr);
    json curves = json::array();
    for (const auto& c : r.curves) curves.push_back(to_json(c));
    j["pvalue_curves"] = curves;
    j["variance_exponent"] = r.variance ? to_json(*r.variance) : json(nullptr);
    json skipped = json::object();
    for (const auto& [stage, code] : r.skipped) skipped[stage] = code;
    j["skipped"] = skipped;
    j["flags"] = r.flags;
    return j;
}

Table curve_table(const PvalueCurve& c) {
    Table t({"alpha0", "p"});
    for (std::size_t i = 0; i < c.alpha0.size(); ++i) {
        t.add_row({c.alpha0[i], c.p[i]});
    }
    return t;
}

Table window_table(const std::vector<WindowRow>& rows) {
    Table t({"start", "end", "n", "alpha_hat", "mu_hat", "sigma2_hat", "k_hat", "k_hat_over_n", "tau_hat",
             "k_hat_exceeds_n"});
    for (const auto& w : rows) {
        t.add_row({static_cast<double>(w.window.start), static_cast<double>(w.window.end),
                   static_cast<double>(w.row.n), w.row.alpha_hat, w.row.mu_hat, w.row.sigma2_hat, w.row.k_hat,
                   w.row.k_hat_over_n, w.row.tau_hat, w.row.k_exceeds_n ? 1.0 : 0.0});
    }
    return t;
}

}  // namespace nearunit
