#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rispart/simulate.hpp"

namespace rispart {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kSeedEnv = "RISPART_SEED";

/// Flat `key = value` text. '#' starts a comment; blank lines are ignored.
/// Keys under `manifest.` are metadata and never affect a run.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::istream& in, const std::string& origin = "<input>");
KeyValues load_key_values(const std::filesystem::path& path);

/// Applies `key=value` override strings on top of `base`.
void apply_overrides(KeyValues& base, std::span<const std::string> overrides);

/// Resolves keys into a validated config. Unknown keys and malformed values
/// raise ConfigError naming the key.
SweepConfig config_from_key_values(const KeyValues& kv);

/// Every config key with round-trip precision.
KeyValues to_key_values(const SweepConfig& config);

/// Documented keys with their defaults, as written by `rispart config`.
std::string default_config_text();

struct RunManifest {
    std::string command;
    SweepConfig config;
    std::string timestamp;
    std::vector<std::string> outputs;
};

/// Manifest text is itself a loadable config file.
void write_manifest(std::ostream& out, const RunManifest& manifest);

/// x_value,mode,estimate,ci_low,ci_high,source; numbers with 9 significant digits.
void write_csv(std::ostream& out, std::span<const CurveResult> curves);
std::string format_number(double x);

}  // namespace rispart
