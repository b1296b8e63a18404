// nearunit: command-line front end to the estimation, inference and
// simulation library. Every run writes its outputs under --out together with
// manifest.json (argv, resolved options, version, seed).
//
// Exit codes: 0 success, 1 domain error, 2 usage error. Failures print one
// JSON line on stderr: {"error": <code>, "module": <module>, "message": ...}.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nearunit/affine_models.hpp"
#include "nearunit/cir.hpp"
#include "nearunit/dataio.hpp"
#include "nearunit/error.hpp"
#include "nearunit/estimation.hpp"
#include "nearunit/format.hpp"
#include "nearunit/inference.hpp"
#include "nearunit/model_config.hpp"
#include "nearunit/montecarlo.hpp"
#include "nearunit/report.hpp"

namespace fs = std::filesystem;
using namespace nearunit;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::string config;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    int threads = 0;
};

// Model keys accepted both in --config files and as flags.
const std::vector<std::string> kModelKeys = {"family", "mu",     "kappa", "c",   "theta", "b",  "sigma_eps",
                                             "regime", "gamma",  "tau",   "kn",  "n",     "x0"};

struct ModelFlags {
    std::map<std::string, std::string> values;
};

void add_model_flags(CLI::App* sub, ModelFlags& f) {
    for (const auto& key : kModelKeys) {
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        sub->add_option(flag, f.values[key], "model key '" + key + "' (overrides --config)");
    }
}

ModelConfig resolve_model(const Globals& g, const ModelFlags& f) {
    KeyValues kv;
    if (!g.config.empty()) {
        kv = read_key_values(g.config);
    }
    for (const auto& [k, v] : f.values) {
        if (!v.empty()) kv[k] = v;
    }
    ModelConfig cfg = model_config_from(kv);
    if (g.seed) cfg.seed = *g.seed;
    return cfg;
}

mc::ExperimentConfig experiment(const ModelConfig& m, const Globals& g, std::size_t M, std::size_t B) {
    mc::ExperimentConfig cfg;
    cfg.spec = m.spec;
    cfg.regime = m.regime;
    cfg.n = m.n;
    cfg.x0 = m.x0;
    cfg.seed = m.seed;
    cfg.threads = g.threads;
    cfg.M = M;
    cfg.B = B;
    return cfg;
}

struct InputFlags {
    std::string input;
    std::string column;
    std::string label_column;
    std::string delimiter = ",";
    std::string header = "auto";
    std::string na = "strict";
    double scale = 1.0;
    std::string units;
    std::string frequency;
    std::string name;
};

void add_input_flags(CLI::App* sub, InputFlags& f) {
    sub->add_option("--input,-i", f.input, "CSV file")->required()->check(CLI::ExistingFile);
    sub->add_option("--column", f.column, "value column: name or zero-based index (default: last)");
    sub->add_option("--label-column", f.label_column, "column of row labels, e.g. dates");
    sub->add_option("--delimiter", f.delimiter, "field delimiter")->capture_default_str();
    sub->add_option("--header", f.header, "auto | yes | no")->check(CLI::IsMember({"auto", "yes", "no"}))
        ->capture_default_str();
    sub->add_option("--na", f.na, "missing values: strict (error) | drop")->check(CLI::IsMember({"strict", "drop"}))
        ->capture_default_str();
    sub->add_option("--scale", f.scale, "unit multiplier, e.g. 100 for percent to basis points")
        ->capture_default_str();
    sub->add_option("--units", f.units, "unit label after scaling");
    sub->add_option("--frequency", f.frequency, "frequency label");
    sub->add_option("--name", f.name, "dataset name");
}

Dataset load_input(const InputFlags& f) {
    if (f.delimiter.size() != 1) {
        throw UsageError("--delimiter must be a single character");
    }
    CsvOptions o;
    o.column = f.column;
    o.label_column = f.label_column;
    o.delimiter = f.delimiter[0];
    o.header = f.header == "yes" ? HeaderMode::Present : f.header == "no" ? HeaderMode::Absent : HeaderMode::Auto;
    o.na = f.na == "drop" ? NaPolicy::Drop : NaPolicy::Strict;
    o.scale = f.scale;
    o.units = f.units;
    o.frequency = f.frequency;
    o.name = f.name;
    return load_csv(f.input, o);
}

json input_json(const InputFlags& f) {
    return {{"input", f.input},     {"column", f.column}, {"label_column", f.label_column},
            {"delimiter", f.delimiter}, {"header", f.header}, {"na", f.na},
            {"scale", f.scale},     {"units", f.units}};
}

json model_json(const ModelConfig& m) {
    json j = json::object();
    for (const auto& [k, v] : parse_key_values(format_model_config(m))) {
        j[k] = v;
    }
    return j;
}

struct BootFlags {
    std::size_t B = 5000;
    std::string weights = "exp1";
};

void add_boot_flags(CLI::App* sub, BootFlags& f) {
    sub->add_option("--B", f.B, "bootstrap draws")->capture_default_str();
    sub->add_option("--weights", f.weights, "exp1 | degenerate1 | lognormal11")->capture_default_str();
}

BootstrapOptions boot_options(const BootFlags& f, const Globals& g) {
    BootstrapOptions o;
    o.B = f.B;
    o.weights = parse_weight_dist(f.weights);
    o.seed = g.seed.value_or(1);
    o.threads = g.threads;
    return o;
}

std::vector<double> make_grid(double lo, double hi, double step) {
    if (!(step > 0.0) || hi < lo) {
        throw UsageError("grid needs step > 0 and hi >= lo");
    }
    std::vector<double> grid;
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= count; ++i) {
        grid.push_back(lo + step * static_cast<double>(i));
    }
    return grid;
}

// "START:END" with integer indices, "@label" prefixes, or "end".
Window parse_window(const Dataset& ds, const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
        throw UsageError("window '" + spec + "' must look like START:END");
    }
    auto bound = [&](const std::string& s, bool is_end) -> std::size_t {
        if (s == "end") return ds.values.size();
        if (!s.empty() && s[0] == '@') {
            const std::size_t i = find_label(ds, s.substr(1));
            return is_end ? i + 1 : i;
        }
        try {
            return std::stoul(s);
        } catch (const std::exception&) {
            throw UsageError("bad window bound '" + s + "'");
        }
    };
    return {bound(spec.substr(0, colon), false), bound(spec.substr(colon + 1), true)};
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

void write_json(const fs::path& dir, const std::string& file, const json& j) {
    write_text((dir / file).string(), j.dump(2) + "\n");
}

json error_line(const std::string& code, const std::string& module, const std::string& message) {
    return {{"error", code}, {"module", module}, {"message", message}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Near-unit-root affine processes: estimation, inference and simulation studies", "nearunit"};
    app.set_version_flag("--version", std::string(NEARUNIT_VERSION));
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config, "model config file (key = value lines)")->check(CLI::ExistingFile);
    app.add_option("--out,-o", g.out, "output directory")->capture_default_str();
    app.add_option("--seed", g.seed, "master seed; all randomness derives from it");
    app.add_option("--threads", g.threads, "worker threads, 0 = runtime default; never changes results");

    ModelFlags model;
    InputFlags in;
    BootFlags boot;
    json resolved = json::object();
    std::function<json()> action;

    // simulate
    auto* sim = app.add_subcommand("simulate", "simulate trajectories of an affine model");
    std::size_t reps = 1;
    add_model_flags(sim, model);
    sim->add_option("--reps", reps, "trajectories")->capture_default_str();
    sim->callback([&] {
        action = [&] {
            const ModelConfig m = resolve_model(g, model);
            resolved["model"] = model_json(m);
            resolved["reps"] = reps;
            std::vector<std::string> cols = {"t"};
            std::vector<Trajectory> paths;
            for (std::size_t r = 0; r < reps; ++r) {
                paths.push_back(simulate(m.spec, m.regime, m.n, m.x0, m.seed, r));
                cols.push_back("x" + std::to_string(r));
            }
            Table t(cols);
            std::vector<double> row(cols.size());
            for (std::size_t i = 0; i <= m.n; ++i) {
                row[0] = static_cast<double>(i);
                for (std::size_t r = 0; r < reps; ++r) row[r + 1] = paths[r].values[i];
                t.add_row(row);
            }
            write_text((fs::path(g.out) / "simulate.csv").string(), t.to_csv());
            const ResolvedAlpha ra = resolve_alpha(m.regime, m.n);
            json j = {{"alpha_n", ra.alpha}, {"kn", ra.kn ? num(*ra.kn) : json(nullptr)}, {"reps", reps},
                      {"n", m.n}, {"file", "simulate.csv"}};
            write_json(g.out, "simulate.json", j);
            return j;
        };
    });

    // estimate
    auto* est = app.add_subcommand("estimate", "fit X_t = alpha X_{t-1} + mu + W_t");
    std::string method = "ols";
    add_input_flags(est, in);
    est->add_option("--method", method, "ols | wls | poisson-qml")->capture_default_str();
    bool residuals = false;
    est->add_flag("--residuals", residuals, "include residuals in the output");
    est->callback([&] {
        action = [&] {
            resolved["input"] = input_json(in);
            resolved["method"] = method;
            const Dataset ds = load_input(in);
            json j = to_json(estimate(ds.values, parse_method(method)), residuals);
            j["dataset"] = to_json(ds);
            write_json(g.out, "estimate.json", j);
            return j;
        };
    });

    // bootstrap
    auto* bs = app.add_subcommand("bootstrap", "random-weighted bootstrap of the OLS fit");
    double level = 0.9;
    add_input_flags(bs, in);
    add_boot_flags(bs, boot);
    bs->add_option("--level", level, "confidence level")->capture_default_str();
    bs->callback([&] {
        action = [&] {
            resolved["input"] = input_json(in);
            resolved["B"] = boot.B;
            resolved["weights"] = boot.weights;
            resolved["level"] = level;
            const Dataset ds = load_input(in);
            const BootstrapDraws d = bootstrap(ds.values, boot_options(boot, g));
            Table t({"alpha", "mu"});
            for (std::size_t b = 0; b < d.B; ++b) t.add_row({d.alpha[b], d.mu[b]});
            write_text((fs::path(g.out) / "bootstrap_draws.csv").string(), t.to_csv());
            json j = to_json(bootstrap_ci(d, level));
            j["alpha_hat"] = d.base.alpha;
            j["mu_hat"] = d.base.mu;
            j["B"] = d.B;
            j["weights"] = std::string(to_string(d.weights));
            j["resample_count"] = d.resample_count;
            write_json(g.out, "bootstrap.json", j);
            return j;
        };
    });

    // plugin-ci
    auto* pc = app.add_subcommand("plugin-ci", "plug-in confidence intervals from k_hat = 1/(1 - alpha_hat)");
    std::optional<double> sigma2;
    add_input_flags(pc, in);
    pc->add_option("--level", level, "confidence level")->capture_default_str();
    pc->add_option("--sigma2", sigma2, "use this sigma^2 instead of sigma2_hat");
    pc->callback([&] {
        action = [&] {
            resolved["input"] = input_json(in);
            resolved["level"] = level;
            resolved["sigma2"] = sigma2 ? json(*sigma2) : json(nullptr);
            const Dataset ds = load_input(in);
            PluginOptions po;
            po.sigma2 = sigma2;
            const EstimateResult e = ols(ds.values);
            json j = to_json(plugin_ci(e, level, po));
            j["alpha_hat"] = e.alpha_hat;
            j["mu_hat"] = e.mu_hat;
            j["n"] = e.n;
            write_json(g.out, "plugin_ci.json", j);
            return j;
        };
    });

    // test
    auto* ts = app.add_subcommand("test", "two-sided test of alpha = alpha0");
    double alpha0 = 0.95;
    std::string test_method = "plugin";
    add_input_flags(ts, in);
    add_boot_flags(ts, boot);
    ts->add_option("--alpha0", alpha0, "null value, < 1")->required();
    ts->add_option("--method", test_method, "plugin | bootstrap | sandwich")->capture_default_str();
    ts->callback([&] {
        action = [&] {
            resolved["input"] = input_json(in);
            resolved["alpha0"] = alpha0;
            resolved["method"] = test_method;
            resolved["B"] = boot.B;
            resolved["weights"] = boot.weights;
            const Dataset ds = load_input(in);
            TestOptions o;
            o.method = parse_test_method(test_method);
            o.bootstrap = boot_options(boot, g);
            json j = to_json(test_alpha(ds.values, alpha0, o));
            write_json(g.out, "test.json", j);
            return j;
        };
    });

    // pvalue-curve
    auto* pv = app.add_subcommand("pvalue-curve", "p-values of alpha = alpha0 over a grid of alpha0");
    double grid_lo = 0.7;
    double grid_hi = 0.999;
    double grid_step = 0.001;
    double region_level = 0.10;
    add_input_flags(pv, in);
    add_boot_flags(pv, boot);
    pv->add_option("--method", test_method, "plugin | bootstrap | sandwich")->capture_default_str();
    pv->add_option("--grid-lo", grid_lo)->capture_default_str();
    pv->add_option("--grid-hi", grid_hi)->capture_default_str();
    pv->add_option("--grid-step", grid_step)->capture_default_str();
    pv->add_option("--region-level", region_level, "keep grid points with p >= this")->capture_default_str();
    pv->callback([&] {
        action = [&] {
            resolved["input"] = input_json(in);
            resolved["method"] = test_method;
            resolved["grid"] = {grid_lo, grid_hi, grid_step};
            resolved["region_level"] = region_level;
            resolved["B"] = boot.B;
            resolved["weights"] = boot.weights;
            const Dataset ds = load_input(in);
            TestOptions o;
            o.method = parse_test_method(test_method);
            o.bootstrap = boot_options(boot, g);
            const PvalueCurve c = pvalue_curve(ds.values, make_grid(grid_lo, grid_hi, grid_step), o, region_level);
            write_text((fs::path(g.out) / "pvalue_curve.csv").string(), curve_table(c).to_csv());
            json j = to_json(c);
            write_json(g.out, "pvalue_curve.json", j);
            return j;
        };
    });

    // tabulate-ltu
    auto* tab = app.add_subcommand("tabulate-ltu", "tabulate the local-to-unity limit by CIR simulation");
    cir::CirParams cp;
    cir::TabulateOptions topt;
    bool no_samples = false;
    tab->add_option("--gamma", cp.gamma)->capture_default_str();
    tab->add_option("--mu", cp.mu)->capture_default_str();
    tab->add_option("--sigma2", cp.sigma2)->capture_default_str();
    tab->add_option("--paths", topt.paths)->capture_default_str();
    tab->add_option("--steps", topt.steps)->capture_default_str();
    tab->add_flag("--no-samples", no_samples, "skip the per-path CSV");
    tab->callback([&] {
        action = [&] {
            topt.seed = g.seed.value_or(1);
            topt.threads = g.threads;
            resolved["gamma"] = cp.gamma;
            resolved["mu"] = cp.mu;
            resolved["sigma2"] = cp.sigma2;
            resolved["paths"] = topt.paths;
            resolved["steps"] = topt.steps;
            const LimitTable lt = cir::tabulate_ltu_limit(cp, topt);
            if (!no_samples) {
                write_text((fs::path(g.out) / "tabulate_ltu_samples.csv").string(), to_table(lt).to_csv());
            }
            json j = summary_json(lt);
            write_json(g.out, "tabulate_ltu.json", j);
            return j;
        };
    });

    // Replicated studies share the model flags and M / B.
    std::size_t M = 5000;
    std::size_t B_dist = 5000;
    std::size_t B_cov = 500;
    std::size_t B_pow = 500;
    auto add_study = [&](CLI::App* sub, std::size_t* B) {
        add_model_flags(sub, model);
        sub->add_option("--M", M, "replications")->capture_default_str();
        if (B != nullptr) {
            sub->add_option("--B", *B, "bootstrap draws")->capture_default_str();
        }
    };
    auto study_cfg = [&](std::size_t B) {
        const ModelConfig m = resolve_model(g, model);
        resolved["model"] = model_json(m);
        resolved["M"] = M;
        resolved["B"] = B;
        return experiment(m, g, M, B);
    };
    auto finish = [&](const StudyReport& r) {
        write_report(r, g.out);
        return r.summary;
    };

    // dist-study
    auto* ds_cmd = app.add_subcommand("dist-study", "sampling distribution of the OLS estimator (ltu or mild regime)");
    mc::LtuStudyOptions lopt;
    mc::MildStudyOptions mopt;
    add_study(ds_cmd, &B_dist);
    ds_cmd->add_option("--comparator-paths", lopt.comparator_paths, "ltu: CIR comparator paths")
        ->capture_default_str();
    ds_cmd->add_option("--comparator-steps", lopt.comparator_steps, "ltu: CIR comparator steps")
        ->capture_default_str();
    ds_cmd->add_flag("--wls", mopt.wls, "mild: add the WLS column");
    ds_cmd->add_flag("--qml", mopt.poisson_qml, "mild: add the Poisson-QML column");
    ds_cmd->add_flag("--sandwich", mopt.sandwich, "mild: add the studentized sandwich column");
    ds_cmd->callback([&] {
        action = [&] {
            const mc::ExperimentConfig cfg = study_cfg(B_dist);
            if (cfg.regime.kind == RegimeKind::LocalToUnity) {
                resolved["comparator_paths"] = lopt.comparator_paths;
                resolved["comparator_steps"] = lopt.comparator_steps;
                return finish(mc::dist_study_ltu(cfg, lopt));
            }
            resolved["wls"] = mopt.wls;
            resolved["qml"] = mopt.poisson_qml;
            resolved["sandwich"] = mopt.sandwich;
            return finish(mc::dist_study_mild(cfg, mopt));
        };
    });

    // coverage
    auto* cov = app.add_subcommand("coverage", "coverage of plug-in and bootstrap intervals");
    mc::CoverageOptions copt;
    bool estimated_sigma2 = false;
    add_study(cov, &B_cov);
    cov->add_option("--level", copt.level)->capture_default_str();
    cov->add_flag("--estimated-sigma2", estimated_sigma2, "plug-in uses sigma2_hat instead of the family limit");
    cov->callback([&] {
        action = [&] {
            copt.plugin_fixed_sigma2 = !estimated_sigma2;
            const mc::ExperimentConfig cfg = study_cfg(B_cov);
            resolved["level"] = copt.level;
            resolved["plugin_fixed_sigma2"] = copt.plugin_fixed_sigma2;
            return finish(mc::coverage_study(cfg, copt));
        };
    });

    // power
    auto* pw = app.add_subcommand("power", "raw and size-corrected power of the test of alpha = alpha0");
    mc::PowerOptions popt;
    add_study(pw, &B_pow);
    pw->add_option("--alpha0", popt.alpha0, "null values")->capture_default_str();
    pw->add_option("--alpha", popt.alpha_grid, "DGP values (default 0.800..1.000 step 0.004)");
    pw->add_option("--level", popt.level)->capture_default_str();
    pw->callback([&] {
        action = [&] {
            if (popt.alpha_grid.empty()) popt.alpha_grid = mc::default_power_grid();
            const mc::ExperimentConfig cfg = study_cfg(B_pow);
            resolved["alpha0"] = popt.alpha0;
            resolved["alpha"] = popt.alpha_grid;
            resolved["level"] = popt.level;
            return finish(mc::power_study(cfg, popt));
        };
    });

    // bubble
    auto* bub = app.add_subcommand("bubble", "block-maximum bubble statistics and the AR(1) comparator");
    mc::BubbleOptions bopt;
    add_study(bub, nullptr);
    bub->add_option("--blocks", bopt.block_count)->capture_default_str();
    bub->add_option("--threshold", bopt.threshold_multiple, "multiple of the marginal mean")->capture_default_str();
    bub->callback([&] {
        action = [&] {
            const mc::ExperimentConfig cfg = study_cfg(0);
            resolved["blocks"] = bopt.block_count;
            resolved["threshold"] = bopt.threshold_multiple;
            return finish(mc::bubble_study(cfg, bopt));
        };
    });

    // apply
    auto* ap = app.add_subcommand("apply", "full empirical pipeline on one series");
    PipelineOptions plo;
    std::vector<std::string> methods = {"plugin", "bootstrap"};
    add_input_flags(ap, in);
    add_boot_flags(ap, boot);
    ap->add_option("--level", level, "confidence level")->capture_default_str();
    ap->add_option("--methods", methods, "p-value curve methods")->capture_default_str();
    ap->add_option("--grid-lo", grid_lo)->capture_default_str();
    ap->add_option("--grid-hi", grid_hi)->capture_default_str();
    ap->add_option("--grid-step", grid_step)->capture_default_str();
    ap->callback([&] {
        action = [&] {
            resolved["input"] = input_json(in);
            resolved["B"] = boot.B;
            resolved["weights"] = boot.weights;
            resolved["level"] = level;
            resolved["methods"] = methods;
            resolved["grid"] = {grid_lo, grid_hi, grid_step};
            const Dataset ds = load_input(in);
            plo.B = boot.B;
            plo.weights = parse_weight_dist(boot.weights);
            plo.level = level;
            plo.seed = g.seed.value_or(1);
            plo.threads = g.threads;
            plo.grid = make_grid(grid_lo, grid_hi, grid_step);
            plo.methods.clear();
            for (const auto& name : methods) plo.methods.push_back(parse_test_method(name));
            const PipelineResult r = apply_pipeline(ds, plo);
            for (const auto& c : r.curves) {
                write_text((fs::path(g.out) / ("apply_pvalue_" + std::string(to_string(c.method)) + ".csv")).string(),
                           curve_table(c).to_csv());
            }
            json j = to_json(r);
            j["dataset"] = to_json(ds);
            write_json(g.out, "apply.json", j);
            return j;
        };
    });

    // window-scan
    auto* ws = app.add_subcommand("window-scan", "persistence estimates over sample windows");
    std::vector<std::string> windows;
    add_input_flags(ws, in);
    ws->add_option("--window", windows, "START:END (indices, @label-prefix, or end); repeatable")->required();
    ws->callback([&] {
        action = [&] {
            resolved["input"] = input_json(in);
            resolved["windows"] = windows;
            const Dataset ds = load_input(in);
            std::vector<Window> ranges;
            for (const auto& w : windows) ranges.push_back(parse_window(ds, w));
            const auto rows = window_sensitivity(ds, ranges, g.threads);
            write_text((fs::path(g.out) / "window_scan.csv").string(), window_table(rows).to_csv());
            json arr = json::array();
            for (const auto& w : rows) {
                json r = to_json(w.row);
                r["start"] = w.window.start;
                r["end"] = w.window.end;
                r["first_label"] = w.first_label;
                r["last_label"] = w.last_label;
                arr.push_back(std::move(r));
            }
            json j = {{"dataset", to_json(ds)}, {"windows", arr}};
            write_json(g.out, "window_scan.json", j);
            return j;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << error_line("UsageError", "cli", e.what()).dump() << '\n';
        return 2;
    }

    try {
        fs::create_directories(g.out);
        const json result = action();
        json manifest;
        manifest["version"] = NEARUNIT_VERSION;
        manifest["argv"] = std::vector<std::string>(argv, argv + argc);
        manifest["subcommand"] = app.get_subcommands().front()->get_name();
        manifest["seed"] = g.seed ? json(*g.seed) : json(nullptr);
        manifest["threads"] = g.threads;
        manifest["config_file"] = g.config;
        manifest["resolved"] = resolved;
        write_json(g.out, "manifest.json", manifest);
        emit(result);
    } catch (const UsageError& e) {
        std::cerr << error_line("UsageError", "cli", e.what()).dump() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << error_line(e.code(), e.module(), e.what()).dump() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << error_line(e.code(), e.module(), e.what()).dump() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << error_line("InternalError", "cli", e.what()).dump() << '\n';
        return 1;
    }
    return 0;
}
