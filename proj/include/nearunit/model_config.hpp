#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "nearunit/affine_models.hpp"

namespace nearunit {

/// Plain `key = value` text, one pair per line; `#` starts a comment.
using KeyValues = std::map<std::string, std::string>;

[[nodiscard]] KeyValues parse_key_values(std::string_view text);
[[nodiscard]] KeyValues read_key_values(const std::string& path);

/// A model + regime + run description shared by the CLI and the experiment
/// harness. Recognised keys:
///   family, mu, kappa, c, theta, b, sigma_eps,
///   regime (ltu | mild), gamma, tau, kn, n, x0, seed
struct ModelConfig {
    AffineSpec spec = AffineSpec::inarch(1.0);
    RegimeSpec regime = RegimeSpec::mildly_integrated(-1.0, 0.4);
    std::size_t n = 3000;
    double x0 = 0.0;
    std::uint64_t seed = 1;
};

/// Keys not listed above raise ConfigError unless `allow_unknown` is set.
[[nodiscard]] ModelConfig model_config_from(const KeyValues& kv, bool allow_unknown = false);
[[nodiscard]] ModelConfig parse_model_config(std::string_view text);

/// Inverse of parse_model_config; numbers at 17 significant digits.
[[nodiscard]] std::string format_model_config(const ModelConfig& cfg);

}  // namespace nearunit
