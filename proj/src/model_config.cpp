#include "nearunit/model_config.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "nearunit/error.hpp"
#include "nearunit/format.hpp"

namespace nearunit {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("key '" + key + "': '" + value + "' is not a number");
    }
    return out;
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
    std::uint64_t out = 0;
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError("key '" + key + "': '" + value + "' is not a nonnegative integer");
    }
    return out;
}

}  // namespace

KeyValues parse_key_values(std::string_view text) {
    KeyValues kv;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string stripped = trim(line);
        if (stripped.empty()) {
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        std::string key = trim(std::string_view(stripped).substr(0, eq));
        std::string value = trim(std::string_view(stripped).substr(eq + 1));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        }
        kv[std::move(key)] = std::move(value);
    }
    return kv;
}

KeyValues read_key_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_key_values(buf.str());
}

ModelConfig model_config_from(const KeyValues& kv, bool allow_unknown) {
    static const std::set<std::string> known = {"family", "mu",     "kappa", "c",   "theta",
                                                "b",      "sigma_eps", "regime", "gamma", "tau",
                                                "kn",     "n",      "x0",    "seed"};
    if (!allow_unknown) {
        for (const auto& [key, value] : kv) {
            if (!known.contains(key)) {
                throw ConfigError("unknown config key '" + key + "'");
            }
        }
    }
    auto get = [&](const std::string& key) -> const std::string* {
        const auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    auto num = [&](const std::string& key, double fallback) {
        const std::string* v = get(key);
        return v ? to_double(key, *v) : fallback;
    };

    ModelConfig cfg;
    AffineSpec spec;
    spec.family = get("family") ? parse_family(*get("family")) : Family::INARCH;
    spec.mu = num("mu", 1.0);
    spec.kappa = num("kappa", 1.0);
    spec.c = num("c", 1.0);
    spec.theta = num("theta", 1.0);
    spec.b = num("b", 0.0);
    spec.sigma_eps = num("sigma_eps", 1.0);
    try {
        spec.validate();
    } catch (const InvalidInput& e) {
        throw ConfigError(e.what());
    }
    cfg.spec = spec;

    const std::string regime = get("regime") ? *get("regime") : std::string("mild");
    const double gamma = num("gamma", -1.0);
    if (regime == "ltu" || regime == "local-to-unity") {
        cfg.regime = RegimeSpec::local_to_unity(gamma);
    } else if (regime == "mild" || regime == "mildly-integrated") {
        try {
            if (const std::string* kn = get("kn")) {
                cfg.regime = RegimeSpec::mildly_integrated_kn(gamma, to_double("kn", *kn));
                cfg.regime.tau = num("tau", cfg.regime.tau);
            } else {
                cfg.regime = RegimeSpec::mildly_integrated(gamma, num("tau", 0.4));
            }
        } catch (const InvalidInput& e) {
            throw ConfigError(e.what());
        }
    } else {
        throw ConfigError("regime must be 'ltu' or 'mild', got '" + regime + "'");
    }
    if (const std::string* n = get("n")) {
        cfg.n = static_cast<std::size_t>(to_uint("n", *n));
    }
    cfg.x0 = num("x0", 0.0);
    if (const std::string* seed = get("seed")) {
        cfg.seed = to_uint("seed", *seed);
    }
    return cfg;
}

ModelConfig parse_model_config(std::string_view text) { return model_config_from(parse_key_values(text)); }

std::string format_model_config(const ModelConfig& cfg) {
    std::ostringstream out;
    const AffineSpec& s = cfg.spec;
    out << "family = " << to_string(s.family) << '\n';
    switch (s.family) {
        case Family::INARCH: out << "mu = " << fmt_num(s.mu) << '\n'; break;
        case Family::NBAR: out << "kappa = " << fmt_num(s.kappa) << '\n'; break;
        case Family::ARG:
            out << "c = " << fmt_num(s.c) << '\n' << "kappa = " << fmt_num(s.kappa) << '\n';
            break;
        case Family::ARG0:
            out << "theta = " << fmt_num(s.theta) << '\n' << "b = " << fmt_num(s.b) << '\n';
            break;
        case Family::LinearAR1:
            out << "mu = " << fmt_num(s.mu) << '\n' << "sigma_eps = " << fmt_num(s.sigma_eps) << '\n';
            break;
    }
    if (cfg.regime.kind == RegimeKind::LocalToUnity) {
        out << "regime = ltu\n";
    } else {
        out << "regime = mild\n" << "tau = " << fmt_num(cfg.regime.tau) << '\n';
        if (cfg.regime.kn) {
            out << "kn = " << fmt_num(*cfg.regime.kn) << '\n';
        }
    }
    out << "gamma = " << fmt_num(cfg.regime.gamma) << '\n';
    out << "n = " << cfg.n << '\n';
    out << "x0 = " << fmt_num(cfg.x0) << '\n';
    out << "seed = " << cfg.seed << '\n';
    return out.str();
}

}  // namespace nearunit
