#include "nearunit/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "nearunit/cir.hpp"
#include "nearunit/distributions.hpp"
#include "nearunit/error.hpp"
#include "nearunit/estimation.hpp"
#include "nearunit/format.hpp"
#include "nearunit/parallel.hpp"
#include "nearunit/stats.hpp"

namespace nearunit::mc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kMaxAttempts = 100;

json config_json(const ExperimentConfig& cfg, double alpha_n, std::optional<double> kn) {
    json j;
    j["family"] = std::string(to_string(cfg.spec.family));
    j["mu_n"] = num(coefficients(cfg.spec, alpha_n).mu);
    j["sigma2"] = num(sigma2_limit(cfg.spec));
    j["regime"] = cfg.regime.kind == RegimeKind::LocalToUnity ? "ltu" : "mild";
    j["gamma"] = num(cfg.regime.gamma);
    if (cfg.regime.kind == RegimeKind::MildlyIntegrated) {
        j["tau"] = num(cfg.regime.tau);
    }
    j["kn"] = kn ? num(*kn) : json(nullptr);
    j["alpha_n"] = num(alpha_n);
    j["n"] = cfg.n;
    j["M"] = cfg.M;
    j["seed"] = cfg.seed;
    j["x0"] = num(cfg.x0);
    return j;
}

/// Simulates and fits replication `rep`, redrawing degenerate designs.
/// Returns the number of redraws.
std::size_t fit_replication(const ExperimentConfig& cfg, double alpha_n, std::uint64_t key, std::size_t rep,
                            std::vector<double>& x, EstimateResult& est) {
    for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
        simulate_replication(cfg, alpha_n, key, rep, attempt, x);
        try {
            est = ols(x);
            return attempt;
        } catch (const DegenerateDesign&) {
        }
    }
    throw DegenerateDesign("replication " + std::to_string(rep) + " stayed degenerate after " +
                           std::to_string(kMaxAttempts) + " attempts");
}

std::size_t total(const std::vector<std::size_t>& v) {
    std::size_t s = 0;
    for (std::size_t x : v) s += x;
    return s;
}

std::vector<double> finite_only(const std::vector<double>& x) {
    std::vector<double> out;
    out.reserve(x.size());
    for (double v : x) {
        if (std::isfinite(v)) out.push_back(v);
    }
    return out;
}

/// Mean vector and covariance of the rows where both columns are finite.
json pair_summary(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> fa;
    std::vector<double> fb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::isfinite(a[i]) && std::isfinite(b[i])) {
            fa.push_back(a[i]);
            fb.push_back(b[i]);
        }
    }
    json j;
    j["count"] = fa.size();
    if (fa.empty()) {
        j["mean"] = nullptr;
        j["cov"] = nullptr;
        return j;
    }
    j["mean"] = json::array({num(stats::mean(fa)), num(stats::mean(fb))});
    j["cov"] = fa.size() >= 2 ? to_json(stats::covariance(fa, fb)) : json(nullptr);
    return j;
}

double rate(std::size_t hits, std::size_t total_count) {
    return total_count == 0 ? kNaN : static_cast<double>(hits) / static_cast<double>(total_count);
}

}  // namespace

std::uint64_t study_key(std::uint64_t seed, StudyId id) noexcept {
    return derive_key(seed, static_cast<std::uint64_t>(id));
}

void simulate_replication(const ExperimentConfig& cfg, double alpha_n, std::uint64_t key, std::size_t rep,
                          std::size_t attempt, std::vector<double>& out) {
    Stream rng(key, rep, attempt);
    simulate_into(cfg.spec, alpha_n, cfg.n, cfg.x0, rng, out);
}

StudyReport dist_study_ltu(const ExperimentConfig& cfg, const LtuStudyOptions& opt) {
    if (cfg.regime.kind != RegimeKind::LocalToUnity) {
        throw InvalidInput("dist_study_ltu needs a local-to-unity regime");
    }
    if (cfg.M == 0) {
        throw InvalidInput("need at least one replication");
    }
    cfg.spec.validate();
    const ResolvedAlpha ra = resolve_alpha(cfg.regime, cfg.n);
    const double alpha = ra.alpha;
    const double mu_n = coefficients(cfg.spec, alpha).mu;
    const auto n = static_cast<double>(cfg.n);
    const std::uint64_t key = study_key(cfg.seed, StudyId::LtuDistribution);

    std::vector<double> a(cfg.M);
    std::vector<double> m(cfg.M);
    std::vector<std::size_t> redraws(cfg.M, 0);
    parallel_for(cfg.M, cfg.threads, [&](std::size_t r) {
        thread_local std::vector<double> x;
        EstimateResult est;
        redraws[r] = fit_replication(cfg, alpha, key, r, x, est);
        a[r] = n * (est.alpha_hat - alpha);
        m[r] = est.mu_hat - mu_n;
    });

    StudyReport rep;
    rep.study = "dist_ltu";
    Table draws({"alpha_stat", "mu_stat"});
    for (std::size_t r = 0; r < cfg.M; ++r) {
        draws.add_row({a[r], m[r]});
    }
    rep.tables["draws"] = std::move(draws);
    rep.tables["hist_alpha"] = histogram_table(a, opt.bins);
    rep.tables["hist_mu"] = histogram_table(m, opt.bins);

    json& s = rep.summary;
    s["study"] = rep.study;
    s["config"] = config_json(cfg, alpha, std::nullopt);
    s["alpha_stat"] = column_stats(a);
    s["mu_stat"] = column_stats(m);
    s["cov"] = cfg.M >= 2 ? to_json(stats::covariance(a, m)) : json(nullptr);
    s["redraws"] = total(redraws);

    if (opt.comparator_paths > 0) {
        const cir::CirParams p{mu_limit(cfg.spec), cfg.regime.gamma, sigma2_limit(cfg.spec)};
        cir::TabulateOptions topt;
        topt.paths = opt.comparator_paths;
        topt.steps = opt.comparator_steps;
        topt.seed = derive_key(key, 0x4c494d4954ULL);
        topt.threads = cfg.threads;
        const LimitTable lt = cir::tabulate_ltu_limit(p, topt);
        json c = summary_json(lt);
        const std::vector<double> la = lt.column(0);
        const std::vector<double> lm = lt.column(1);
        // Discrepancy of the sample means in combined standard errors.
        if (cfg.M >= 2) {
            auto zscore = [](const std::vector<double>& x, const std::vector<double>& y) {
                const double se2 = stats::variance(x) / static_cast<double>(x.size()) +
                                   stats::variance(y) / static_cast<double>(y.size());
                return (stats::mean(x) - stats::mean(y)) / std::sqrt(se2);
            };
            c["z_alpha_mean"] = num(zscore(a, la));
            c["z_mu_mean"] = num(zscore(m, lm));
        }
        s["comparator"] = std::move(c);
    }

    if (opt.bootstrap_B > 0) {
        std::vector<double> x;
        simulate_replication(cfg, alpha, key, 0, redraws[0], x);
        BootstrapOptions bopt;
        bopt.B = opt.bootstrap_B;
        bopt.seed = derive_key(key, 0x424f4f54ULL);
        bopt.threads = cfg.threads;
        const BootstrapDraws bd = bootstrap(x, bopt);
        std::vector<double> ab(bd.B);
        Table bt({"alpha_boot_stat"});
        for (std::size_t b = 0; b < bd.B; ++b) {
            ab[b] = n * (bd.alpha[b] - bd.base.alpha);
            bt.add_row({ab[b]});
        }
        rep.tables["bootstrap"] = std::move(bt);
        s["bootstrap"] = {{"B", bd.B}, {"alpha_boot_stat", column_stats(ab)}, {"resample_count", bd.resample_count}};
    }
    return rep;
}

StudyReport dist_study_mild(const ExperimentConfig& cfg, const MildStudyOptions& opt) {
    if (cfg.regime.kind != RegimeKind::MildlyIntegrated || !(cfg.regime.gamma < 0.0)) {
        throw InvalidInput("dist_study_mild needs a mildly stationary regime (gamma = -1)");
    }
    if (cfg.M == 0) {
        throw InvalidInput("need at least one replication");
    }
    cfg.spec.validate();
    const ResolvedAlpha ra = resolve_alpha(cfg.regime, cfg.n);
    const double alpha = ra.alpha;
    const double k = *ra.kn;
    const double mu_n = coefficients(cfg.spec, alpha).mu;
    const auto n = static_cast<double>(cfg.n);
    const double sa = std::sqrt(n * k);
    const double sm = std::sqrt(n / k);
    const std::uint64_t key = study_key(cfg.seed, StudyId::MildDistribution);

    const std::size_t M = cfg.M;
    std::vector<double> ba(M), bm(M), pa(M, kNaN), pm(M, kNaN), wa(M, kNaN), qa(M, kNaN), st(M, kNaN);
    std::vector<double> sig(M);
    std::vector<std::size_t> redraws(M, 0);
    std::vector<unsigned char> qml_failed(M, 0);
    parallel_for(M, cfg.threads, [&](std::size_t r) {
        thread_local std::vector<double> x;
        EstimateResult est;
        redraws[r] = fit_replication(cfg, alpha, key, r, x, est);
        ba[r] = sa * (est.alpha_hat - alpha);
        bm[r] = sm * (est.mu_hat - mu_n);
        sig[r] = est.sigma2_hat;
        if (opt.plugin && est.alpha_hat < 1.0) {
            const double gap = 1.0 - est.alpha_hat;
            pa[r] = std::sqrt(n / gap) * (est.alpha_hat - alpha);
            pm[r] = std::sqrt(n * gap) * (est.mu_hat - mu_n);
        }
        if (opt.wls) {
            wa[r] = sa * (wls(x).alpha_hat - alpha);
        }
        if (opt.poisson_qml) {
            try {
                qa[r] = sa * (poisson_qmle(x).alpha_hat - alpha);
            } catch (const Error&) {
                qml_failed[r] = 1;
            }
        }
        if (opt.sandwich) {
            const double se = sandwich_se(x, est).se_alpha;
            st[r] = se > 0.0 ? (est.alpha_hat - alpha) / se : kNaN;
        }
    });

    StudyReport rep;
    rep.study = "dist_mild";
    std::vector<std::string> cols = {"bench_alpha", "bench_mu", "plugin_alpha", "plugin_mu", "sigma2_hat"};
    if (opt.wls) cols.push_back("wls_alpha");
    if (opt.poisson_qml) cols.push_back("qml_alpha");
    if (opt.sandwich) cols.push_back("sandwich_t");
    Table draws(cols);
    std::vector<double> row;
    for (std::size_t r = 0; r < M; ++r) {
        row = {ba[r], bm[r], pa[r], pm[r], sig[r]};
        if (opt.wls) row.push_back(wa[r]);
        if (opt.poisson_qml) row.push_back(qa[r]);
        if (opt.sandwich) row.push_back(st[r]);
        draws.add_row(row);
    }
    rep.tables["draws"] = std::move(draws);
    rep.tables["hist_bench_alpha"] = histogram_table(ba, opt.bins);
    rep.tables["hist_bench_mu"] = histogram_table(bm, opt.bins);

    json& s = rep.summary;
    s["study"] = rep.study;
    s["config"] = config_json(cfg, alpha, k);
    s["benchmark"] = pair_summary(ba, bm);
    s["bench_alpha"] = column_stats(ba);
    s["sigma2_hat"] = column_stats(sig);
    s["redraws"] = total(redraws);
    try {
        s["theoretical_cov"] = to_json(plugin_covariance(mu_limit(cfg.spec), sigma2_limit(cfg.spec)));
    } catch (const Error&) {
        s["theoretical_cov"] = nullptr;
    }
    if (opt.plugin) {
        const std::vector<double> fa = finite_only(pa);
        json p = pair_summary(pa, pm);
        p["skipped"] = M - fa.size();
        p["skip_rate"] = rate(M - fa.size(), M);
        s["plugin"] = std::move(p);
    }
    if (opt.wls) {
        s["wls_alpha"] = column_stats(wa);
    }
    if (opt.poisson_qml) {
        json q = column_stats(finite_only(qa));
        std::size_t failed = 0;
        for (unsigned char f : qml_failed) failed += f;
        q["failed"] = failed;
        s["qml_alpha"] = std::move(q);
    }
    if (opt.sandwich) {
        s["sandwich_t"] = column_stats(finite_only(st));
    }
    if (opt.bootstrap && cfg.B > 0) {
        std::vector<double> x;
        simulate_replication(cfg, alpha, key, 0, redraws[0], x);
        BootstrapOptions bopt;
        bopt.B = cfg.B;
        bopt.seed = derive_key(key, 0x424f4f54ULL);
        bopt.threads = cfg.threads;
        const BootstrapDraws bd = bootstrap(x, bopt);
        std::vector<double> xa(bd.B);
        std::vector<double> xm(bd.B);
        Table bt({"boot_alpha", "boot_mu"});
        for (std::size_t b = 0; b < bd.B; ++b) {
            xa[b] = sa * (bd.alpha[b] - bd.base.alpha);
            xm[b] = sm * (bd.mu[b] - bd.base.mu);
            bt.add_row({xa[b], xm[b]});
        }
        rep.tables["bootstrap"] = std::move(bt);
        json b = pair_summary(xa, xm);
        b["B"] = bd.B;
        b["trajectory"] = 0;
        b["resample_count"] = bd.resample_count;
        s["bootstrap"] = std::move(b);
    }
    return rep;
}

StudyReport coverage_study(const ExperimentConfig& cfg, const CoverageOptions& opt) {
    if (cfg.regime.kind != RegimeKind::MildlyIntegrated || !(cfg.regime.gamma < 0.0)) {
        throw InvalidInput("coverage_study needs a mildly stationary regime (gamma = -1)");
    }
    if (opt.bootstrap && cfg.B < 100) {
        throw InvalidInput("coverage_study bootstrap intervals need B >= 100");
    }
    cfg.spec.validate();
    const ResolvedAlpha ra = resolve_alpha(cfg.regime, cfg.n);
    const double alpha = ra.alpha;
    const double mu_n = coefficients(cfg.spec, alpha).mu;
    const std::uint64_t key = study_key(cfg.seed, StudyId::Coverage);
    const std::uint64_t boot_key = derive_key(key, 0x424f4f54ULL);
    const std::size_t M = cfg.M;

    PluginOptions popt;
    if (opt.plugin_fixed_sigma2) {
        popt.sigma2 = sigma2_limit(cfg.spec);
    }

    struct Row {
        double alpha_hat, mu_hat;
        Interval pa{kNaN, kNaN}, pm{kNaN, kNaN}, ba{kNaN, kNaN}, bm{kNaN, kNaN};
        bool plugin_ok = false;
    };
    std::vector<Row> rows(M);
    std::vector<std::size_t> redraws(M, 0);
    parallel_for(M, cfg.threads, [&](std::size_t r) {
        thread_local std::vector<double> x;
        thread_local std::vector<double> wbuf;
        thread_local BootstrapDraws bd;
        EstimateResult est;
        redraws[r] = fit_replication(cfg, alpha, key, r, x, est);
        Row& row = rows[r];
        row.alpha_hat = est.alpha_hat;
        row.mu_hat = est.mu_hat;
        try {
            const PluginInference p = plugin_ci(est, opt.level, popt);
            row.pa = p.ci_alpha;
            row.pm = p.ci_mu;
            row.plugin_ok = true;
        } catch (const AlphaAtOrAboveOne&) {
        } catch (const SingularOmega&) {
        }
        if (opt.bootstrap) {
            BootstrapOptions bopt;
            bopt.B = cfg.B;
            bopt.seed = derive_key(boot_key, r);
            bootstrap_into(x, bopt, bd, wbuf);
            const BootstrapCi c = bootstrap_ci(bd, opt.level);
            row.ba = c.ci_alpha;
            row.bm = c.ci_mu;
        }
    });

    std::size_t p_ok = 0, p_a = 0, p_m = 0, b_a = 0, b_m = 0;
    Table t({"alpha_hat", "mu_hat", "plugin_ok", "plugin_alpha_lo", "plugin_alpha_hi", "plugin_mu_lo",
             "plugin_mu_hi", "boot_alpha_lo", "boot_alpha_hi", "boot_mu_lo", "boot_mu_hi"});
    for (const Row& row : rows) {
        t.add_row({row.alpha_hat, row.mu_hat, row.plugin_ok ? 1.0 : 0.0, row.pa.lo, row.pa.hi, row.pm.lo,
                   row.pm.hi, row.ba.lo, row.ba.hi, row.bm.lo, row.bm.hi});
        if (row.plugin_ok) {
            ++p_ok;
            p_a += row.pa.contains(alpha);
            p_m += row.pm.contains(mu_n);
        }
        if (opt.bootstrap) {
            b_a += row.ba.contains(alpha);
            b_m += row.bm.contains(mu_n);
        }
    }
    StudyReport rep;
    rep.study = "coverage";
    rep.tables["intervals"] = std::move(t);
    json& s = rep.summary;
    s["study"] = rep.study;
    s["config"] = config_json(cfg, alpha, ra.kn);
    s["level"] = opt.level;
    s["B"] = opt.bootstrap ? json(cfg.B) : json(nullptr);
    s["plugin"] = {{"available", p_ok},
                   {"unavailable", M - p_ok},
                   {"sigma2", opt.plugin_fixed_sigma2 ? "family limit" : "estimated"},
                   {"alpha", num(rate(p_a, p_ok))},
                   {"mu", num(rate(p_m, p_ok))},
                   {"alpha_all_reps", num(rate(p_a, M))},
                   {"mu_all_reps", num(rate(p_m, M))}};
    if (opt.bootstrap) {
        s["bootstrap"] = {{"alpha", num(rate(b_a, M))}, {"mu", num(rate(b_m, M))}};
    }
    s["binomial_se_at_nominal"] = std::sqrt(opt.level * (1.0 - opt.level) / static_cast<double>(M));
    s["redraws"] = total(redraws);
    return rep;
}

std::vector<double> default_power_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 50; ++i) {
        g.push_back((800 + 4 * i) / 1000.0);
    }
    return g;
}

StudyReport power_study(const ExperimentConfig& cfg, const PowerOptions& opt) {
    if (opt.alpha0.empty()) {
        throw InvalidInput("power_study needs at least one alpha0");
    }
    for (double a0 : opt.alpha0) {
        if (!(a0 < 1.0)) {
            throw InvalidInput("alpha0 must be < 1");
        }
    }
    cfg.spec.validate();
    // Cells keyed by alpha in millionths so a value shared by the grid and an
    // H0 cell is simulated once and with the same streams.
    std::map<long long, double> cells;
    for (double a : opt.alpha_grid) cells.emplace(std::llround(a * 1e6), a);
    for (double a : opt.alpha0) cells.emplace(std::llround(a * 1e6), a);
    std::vector<std::pair<long long, double>> cell_list(cells.begin(), cells.end());
    const std::size_t C = cell_list.size();
    const std::size_t M = cfg.M;
    const std::uint64_t key = study_key(cfg.seed, StudyId::Power);

    std::vector<double> ahat(C * M), se_p(C * M, kNaN), se_b(C * M, kNaN);
    parallel_for(C * M, cfg.threads, [&](std::size_t idx) {
        const std::size_t c = idx / M;
        const std::size_t r = idx % M;
        const double alpha = cell_list[c].second;
        const std::uint64_t ckey = derive_key(key, static_cast<std::uint64_t>(cell_list[c].first));
        thread_local std::vector<double> x;
        thread_local std::vector<double> wbuf;
        thread_local BootstrapDraws bd;
        EstimateResult est;
        fit_replication(cfg, alpha, ckey, r, x, est);
        ahat[idx] = est.alpha_hat;
        if (opt.plugin && est.alpha_hat < 1.0) {
            try {
                se_p[idx] = plugin_ci(est, 0.9).se_alpha;
            } catch (const SingularOmega&) {
            }
        }
        if (opt.bootstrap) {
            BootstrapOptions bopt;
            bopt.B = cfg.B;
            bopt.seed = derive_key(derive_key(ckey, 0x424f4f54ULL), r);
            bootstrap_into(x, bopt, bd, wbuf);
            se_b[idx] = bootstrap_sd(bd.alpha);
        }
    });

    const double zcrit = stats::two_sided_z(1.0 - opt.level);
    StudyReport rep;
    rep.study = "power";
    Table t({"alpha", "alpha0", "method", "valid", "raw", "size_corrected", "critical_value"});
    json rows = json::array();
    json crit_json = json::object();
    for (double a0 : opt.alpha0) {
        const std::size_t h0 = std::distance(cells.begin(), cells.find(std::llround(a0 * 1e6)));
        for (int method = 0; method < 2; ++method) {
            if ((method == 0 && !opt.plugin) || (method == 1 && !opt.bootstrap)) continue;
            const std::vector<double>& se = method == 0 ? se_p : se_b;
            auto tstat = [&](std::size_t idx) { return std::abs((ahat[idx] - a0) / se[idx]); };
            std::vector<double> null_t;
            for (std::size_t r = 0; r < M; ++r) {
                const double tv = tstat(h0 * M + r);
                if (std::isfinite(tv)) null_t.push_back(tv);
            }
            std::sort(null_t.begin(), null_t.end());
            const double crit = stats::quantile_sorted(null_t, 1.0 - opt.level);
            crit_json[fmt_shortest(a0) + (method == 0 ? "_plugin" : "_bootstrap")] = num(crit);
            for (std::size_t c = 0; c < C; ++c) {
                std::size_t valid = 0, raw = 0, sc = 0;
                for (std::size_t r = 0; r < M; ++r) {
                    const double tv = tstat(c * M + r);
                    if (!std::isfinite(tv)) continue;
                    ++valid;
                    raw += tv > zcrit;
                    sc += tv > crit;
                }
                const double a = cell_list[c].second;
                t.add_row({a, a0, static_cast<double>(method), static_cast<double>(valid), rate(raw, valid),
                           rate(sc, valid), crit});
                rows.push_back({{"alpha", a},
                                {"alpha0", a0},
                                {"method", method == 0 ? "plugin" : "bootstrap"},
                                {"valid", valid},
                                {"raw", num(rate(raw, valid))},
                                {"size_corrected", num(rate(sc, valid))}});
            }
        }
    }
    rep.tables["curves"] = std::move(t);
    json& s = rep.summary;
    s["study"] = rep.study;
    s["n"] = cfg.n;
    s["M"] = M;
    s["B"] = opt.bootstrap ? json(cfg.B) : json(nullptr);
    s["level"] = opt.level;
    s["nominal_critical_value"] = zcrit;
    s["empirical_critical_values"] = crit_json;
    s["size_correction"] = "type-7 quantile of |t| under the alpha = alpha0 cell";
    s["plugin_sigma2"] = "estimated";
    s["rows"] = std::move(rows);
    return rep;
}

StudyReport bubble_study(const ExperimentConfig& cfg, const BubbleOptions& opt) {
    if (cfg.regime.kind != RegimeKind::MildlyIntegrated || !(cfg.regime.gamma < 0.0)) {
        throw InvalidInput("bubble_study needs a mildly stationary regime (gamma = -1)");
    }
    if (opt.block_count == 0 || cfg.n % opt.block_count != 0) {
        throw InvalidInput("n must split into block_count equal blocks");
    }
    cfg.spec.validate();
    const ResolvedAlpha ra = resolve_alpha(cfg.regime, cfg.n);
    const double alpha = ra.alpha;
    const double mean = marginal_mean(cfg.spec, alpha);
    const double threshold = opt.threshold_multiple * mean;
    const std::size_t L = cfg.n / opt.block_count;
    if (L < 4) {
        throw InvalidInput("blocks must hold at least 4 observations");
    }
    ExperimentConfig ar_cfg = cfg;
    ar_cfg.spec = AffineSpec::linear_ar1(mu_limit(cfg.spec), std::sqrt(sigma2_limit(cfg.spec)));
    const std::uint64_t key = study_key(cfg.seed, StudyId::Bubble);
    const std::uint64_t ar_key = derive_key(key, 0x41523131ULL);
    const std::size_t M = cfg.M;

    std::vector<std::size_t> exceed(M, 0), local_le1(M, 0), local_degenerate(M, 0), ar_exceed(M, 0);
    parallel_for(M, cfg.threads, [&](std::size_t r) {
        thread_local std::vector<double> x;
        simulate_replication(cfg, alpha, key, r, 0, x);
        for (std::size_t b = 0; b < opt.block_count; ++b) {
            const std::span<const double> block(x.data() + 1 + b * L, L);
            if (*std::max_element(block.begin(), block.end()) > threshold) {
                ++exceed[r];
                try {
                    local_le1[r] += weighted_ls(block).alpha <= 1.0;
                } catch (const DegenerateDesign&) {
                    ++local_degenerate[r];
                }
            }
        }
        simulate_replication(ar_cfg, alpha, ar_key, r, 0, x);
        for (std::size_t b = 0; b < opt.block_count; ++b) {
            const std::span<const double> block(x.data() + 1 + b * L, L);
            ar_exceed[r] += *std::max_element(block.begin(), block.end()) > threshold;
        }
    });

    std::size_t any = 0, ar_any = 0, blocks = 0, le1 = 0, degenerate = 0;
    Table t({"exceeding_blocks", "local_alpha_le_1", "ar1_exceeding_blocks"});
    for (std::size_t r = 0; r < M; ++r) {
        any += exceed[r] > 0;
        ar_any += ar_exceed[r] > 0;
        blocks += exceed[r];
        le1 += local_le1[r];
        degenerate += local_degenerate[r];
        t.add_row({static_cast<double>(exceed[r]), static_cast<double>(local_le1[r]),
                   static_cast<double>(ar_exceed[r])});
    }
    StudyReport rep;
    rep.study = "bubble";
    rep.tables["replications"] = std::move(t);
    json& s = rep.summary;
    s["study"] = rep.study;
    s["config"] = config_json(cfg, alpha, ra.kn);
    s["marginal_mean"] = mean;
    s["threshold"] = threshold;
    s["block_length"] = L;
    s["block_length_over_kn"] = num(static_cast<double>(L) / *ra.kn);
    s["p_any_block_exceeds"] = num(rate(any, M));
    s["exceeding_blocks"] = blocks;
    s["p_local_alpha_le_1"] = num(rate(le1, blocks));
    s["local_fit_degenerate"] = degenerate;
    s["ar1_sigma_eps"] = ar_cfg.spec.sigma_eps;
    s["ar1_p_any_block_exceeds"] = num(rate(ar_any, M));
    return rep;
}

StudyReport ar1_limit_check(const ExperimentConfig& cfg, const Ar1LimitOptions& opt) {
    const double mu = mu_limit(cfg.spec);
    const std::uint64_t key = study_key(cfg.seed, StudyId::Ar1Limit);
    StudyReport rep;
    rep.study = "ar1_limit";
    json& s = rep.summary;
    s["study"] = rep.study;
    s["mu"] = mu;
    s["sigma_eps"] = opt.sigma_eps;
    s["tau"] = opt.tau;
    s["s_max"] = opt.s_max;

    Table sup_table({"n", "kn", "mean_sup_deviation", "sd_sup_deviation", "noiseless_sup_deviation"});
    json rows = json::array();
    for (std::size_t idx = 0; idx < opt.ns.size(); ++idx) {
        ExperimentConfig c = cfg;
        c.n = opt.ns[idx];
        c.regime = RegimeSpec::mildly_integrated(-1.0, opt.tau);
        const ResolvedAlpha ra = resolve_alpha(c.regime, c.n);
        const double k = *ra.kn;
        auto sup_dev = [&](const std::vector<double>& x) {
            double worst = 0.0;
            for (std::size_t t = 0; t < x.size(); ++t) {
                const double sv = static_cast<double>(t) / k;
                if (sv > opt.s_max) break;
                worst = std::max(worst, std::abs(x[t] / k - mu * (1.0 - std::exp(-sv))));
            }
            return worst;
        };
        c.spec = AffineSpec::linear_ar1(mu, opt.sigma_eps);
        std::vector<double> dev(c.M);
        const std::uint64_t nkey = derive_key(key, c.n);
        parallel_for(c.M, c.threads, [&](std::size_t r) {
            thread_local std::vector<double> x;
            simulate_replication(c, ra.alpha, nkey, r, 0, x);
            dev[r] = sup_dev(x);
        });
        ExperimentConfig quiet = c;
        quiet.spec = AffineSpec::linear_ar1(mu, 0.0);
        std::vector<double> x;
        simulate_replication(quiet, ra.alpha, nkey, 0, 0, x);
        const double noiseless = sup_dev(x);
        const double sd = dev.size() >= 2 ? std::sqrt(stats::variance(dev)) : kNaN;
        sup_table.add_row({static_cast<double>(c.n), k, stats::mean(dev), sd, noiseless});
        rows.push_back({{"n", c.n},
                        {"kn", k},
                        {"mean_sup_deviation", num(stats::mean(dev))},
                        {"noiseless_sup_deviation", num(noiseless)},
                        {"noiseless_bound_2_over_kn", 2.0 / k}});
    }
    rep.tables["stationary_ar1"] = std::move(sup_table);
    s["stationary_ar1"] = std::move(rows);

    // Mildly explosive affine: X_n / (k e^{n/k}) against Gamma(2mu/sigma2, sigma2/2).
    ExperimentConfig c = cfg;
    c.n = opt.explosive_n;
    c.regime = RegimeSpec::mildly_integrated(1.0, opt.explosive_tau);
    const ResolvedAlpha ra = resolve_alpha(c.regime, c.n);
    const double k = *ra.kn;
    const double norm = k * std::exp(static_cast<double>(c.n) / k);
    std::vector<double> ratio(c.M);
    const std::uint64_t ekey = derive_key(key, 0x45585053ULL);
    parallel_for(c.M, c.threads, [&](std::size_t r) {
        thread_local std::vector<double> x;
        simulate_replication(c, ra.alpha, ekey, r, 0, x);
        ratio[r] = x.back() / norm;
    });
    const double s2 = sigma2_limit(cfg.spec);
    Table et({"ratio"});
    for (double v : ratio) et.add_row({v});
    rep.tables["explosive_ratio"] = std::move(et);
    s["explosive"] = {{"family", std::string(to_string(cfg.spec.family))},
                      {"n", c.n},
                      {"kn", k},
                      {"alpha_n", ra.alpha},
                      {"normalization", "kn * exp(n / kn)"},
                      {"ratio", column_stats(ratio)},
                      {"gamma_mean", mu},
                      {"gamma_var", mu * s2 / 2.0}};
    return rep;
}

void simulate_innovations(double mu, double alpha_n, std::size_t n, double x0, Stream& rng,
                          std::vector<double>& lagged, std::vector<double>& innovations) {
    lagged.resize(n);
    innovations.resize(n);
    double x = x0;
    for (std::size_t t = 0; t < n; ++t) {
        lagged[t] = x;
        const double m = alpha_n * x + mu;
        double w = 0.0;
        if (m <= distr::kPoissonExactLimit) {
            const double draw = distr::poisson(rng, m);
            w = draw - m;
            x = draw;
        } else {
            // Same normal draw the large-mean Poisson branch consumes.
            w = std::sqrt(m) * rng.normal();
            x = m + w;
        }
        innovations[t] = w;
    }
}

StudyReport explosive_study(const ExperimentConfig& cfg, std::size_t reference_draws) {
    if (cfg.spec.family != Family::INARCH) {
        throw InvalidInput("explosive_study supports the INARCH family");
    }
    if (cfg.regime.kind != RegimeKind::MildlyIntegrated || !(cfg.regime.gamma > 0.0)) {
        throw InvalidInput("explosive_study needs a mildly explosive regime (gamma = +1)");
    }
    cfg.spec.validate();
    const ResolvedAlpha ra = resolve_alpha(cfg.regime, cfg.n);
    const double alpha = ra.alpha;
    const long double k = *ra.kn;
    const long double half_power =
        std::exp(static_cast<long double>(cfg.n) / 2.0L * std::log1p(1.0L / k));
    const std::uint64_t key = study_key(cfg.seed, StudyId::ExplosiveRate);
    const std::size_t M = cfg.M;
    std::vector<double> stat(M), dmu(M);
    parallel_for(M, cfg.threads, [&](std::size_t r) {
        thread_local std::vector<double> lagged;
        thread_local std::vector<double> w;
        Stream rng(key, r);
        simulate_innovations(cfg.spec.mu, alpha, cfg.n, cfg.x0, rng, lagged, w);
        const OlsError e = ols_error(lagged, w);
        stat[r] = static_cast<double>(k * half_power * e.d_alpha);
        dmu[r] = static_cast<double>(e.d_mu);
    });
    const cir::CirParams p{mu_limit(cfg.spec), 1.0, sigma2_limit(cfg.spec)};
    const LimitTable ref = cir::sample_explosive_limit(p, reference_draws, derive_key(key, 0x524546ULL), cfg.threads);
    const std::vector<double> lim = ref.column(0);

    StudyReport rep;
    rep.study = "explosive";
    Table t({"scaled_alpha_error", "mu_error"});
    for (std::size_t r = 0; r < M; ++r) t.add_row({stat[r], dmu[r]});
    rep.tables["draws"] = std::move(t);
    json& s = rep.summary;
    s["study"] = rep.study;
    s["config"] = config_json(cfg, alpha, ra.kn);
    s["statistic"] = "kn * alpha_n^(n/2) * (alpha_hat - alpha_n)";
    s["scaled_alpha_error"] = column_stats(stat);
    s["mu_error"] = column_stats(dmu);
    s["reference"] = column_stats(lim);
    if (2.0 * p.mu > p.sigma2) {
        s["reference_var_exact"] = 4.0 / 3.0 / (p.mu - p.sigma2 / 2.0);
    }
    return rep;
}

StudyReport bootstrap_validity_study(const ExperimentConfig& cfg) {
    if (cfg.regime.kind != RegimeKind::MildlyIntegrated || !(cfg.regime.gamma < 0.0)) {
        throw InvalidInput("bootstrap_validity_study needs a mildly stationary regime (gamma = -1)");
    }
    if (cfg.B < 2) {
        throw InvalidInput("bootstrap_validity_study needs B >= 2");
    }
    cfg.spec.validate();
    const ResolvedAlpha ra = resolve_alpha(cfg.regime, cfg.n);
    const double k = *ra.kn;
    const auto n = static_cast<double>(cfg.n);
    const double sa = std::sqrt(n * k);
    const double sm = std::sqrt(n / k);
    const std::uint64_t key = study_key(cfg.seed, StudyId::BootstrapValidity);
    const std::uint64_t boot_key = derive_key(key, 0x424f4f54ULL);
    const std::size_t M = cfg.M;
    std::vector<Mat2> covs(M);
    parallel_for(M, cfg.threads, [&](std::size_t r) {
        thread_local std::vector<double> x;
        thread_local std::vector<double> wbuf;
        thread_local BootstrapDraws bd;
        EstimateResult est;
        fit_replication(cfg, ra.alpha, key, r, x, est);
        BootstrapOptions bopt;
        bopt.B = cfg.B;
        bopt.seed = derive_key(boot_key, r);
        bootstrap_into(x, bopt, bd, wbuf);
        std::vector<double> xa(bd.B), xm(bd.B);
        for (std::size_t b = 0; b < bd.B; ++b) {
            xa[b] = sa * (bd.alpha[b] - bd.base.alpha);
            xm[b] = sm * (bd.mu[b] - bd.base.mu);
        }
        covs[r] = stats::covariance(xa, xm);
    });
    Table t({"c11", "c12", "c22"});
    std::vector<double> c11(M), c12(M), c22(M);
    for (std::size_t r = 0; r < M; ++r) {
        c11[r] = covs[r].xx;
        c12[r] = covs[r].xy;
        c22[r] = covs[r].yy;
        t.add_row({c11[r], c12[r], c22[r]});
    }
    const Mat2 median{stats::quantile(c11, 0.5), stats::quantile(c12, 0.5), stats::quantile(c12, 0.5),
                      stats::quantile(c22, 0.5)};
    StudyReport rep;
    rep.study = "bootstrap_validity";
    rep.tables["covariances"] = std::move(t);
    json& s = rep.summary;
    s["study"] = rep.study;
    s["config"] = config_json(cfg, ra.alpha, k);
    s["B"] = cfg.B;
    s["median_cov"] = to_json(median);
    s["theoretical_cov"] = to_json(plugin_covariance(mu_limit(cfg.spec), sigma2_limit(cfg.spec)));
    return rep;
}

}  // namespace nearunit::mc
