#include "rispart/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "rispart/error.hpp"

namespace rispart {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (trim(text.substr(used)).empty()) return v;
    } catch (const std::exception&) {
    }
    throw ConfigError(key, "expected a number, got '" + text + "'");
}

long long parse_integer(const std::string& key, const std::string& text) {
    long long v = 0;
    const std::string t = trim(text);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ConfigError(key, "expected an integer, got '" + text + "'");
    }
    return v;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    const std::string t = trim(text);
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size()) {
        throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes") return true;
    if (t == "false" || t == "0" || t == "no") return false;
    throw ConfigError(key, "expected true/false, got '" + text + "'");
}

// "a, b, c" or "start:step:stop" (inclusive, rounded to the step count).
std::vector<double> parse_grid(const std::string& key, const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        std::vector<double> parts;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(parse_double(key, trim(item)));
        if (parts.size() != 3 || !(parts[1] > 0.0) || parts[2] < parts[0]) {
            throw ConfigError(key, "range must be start:step:stop with step > 0");
        }
        const auto steps = static_cast<long long>(std::floor((parts[2] - parts[0]) / parts[1] + 1e-9));
        for (long long k = 0; k <= steps; ++k) out.push_back(parts[0] + static_cast<double>(k) * parts[1]);
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string t = trim(item);
        if (!t.empty()) out.push_back(parse_double(key, t));
    }
    if (out.empty()) throw ConfigError(key, "grid is empty");
    return out;
}

// shortest text that parses back to the same double
std::string exact(double x) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + exact(v[i]);
    return out;
}

std::string join(const std::vector<int>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    return os.str();
}

struct KeySpec {
    const char* key;
    const char* doc;
    std::function<void(SweepConfig&, const std::string&, const std::string&)> apply;
    std::function<std::string(const SweepConfig&)> show;
};

const std::vector<KeySpec>& key_specs() {
    static const std::vector<KeySpec> specs = {
        {"geometry.rows", "RIS rows",
         [](SweepConfig& c, const std::string& k, const std::string& v) { c.geometry.rows = static_cast<int>(parse_integer(k, v)); },
         [](const SweepConfig& c) { return std::to_string(c.geometry.rows); }},
        {"geometry.cols", "RIS columns",
         [](SweepConfig& c, const std::string& k, const std::string& v) { c.geometry.cols = static_cast<int>(parse_integer(k, v)); },
         [](const SweepConfig& c) { return std::to_string(c.geometry.cols); }},
        {"geometry.spacing", "element pitch in wavelengths",
         [](SweepConfig& c, const std::string& k, const std::string& v) { c.geometry.spacing = parse_double(k, v); },
         [](const SweepConfig& c) { return exact(c.geometry.spacing); }},
        {"geometry.carrier_hz", "carrier frequency [Hz]",
         [](SweepConfig& c, const std::string& k, const std::string& v) { c.geometry.carrier_hz = parse_double(k, v); },
         [](const SweepConfig& c) { return exact(c.geometry.carrier_hz); }},
        {"link.noise_dbm", "noise power [dBm]",
         [](SweepConfig& c, const std::string& k, const std::string& v) { c.noise_dbm = parse_double(k, v); },
         [](const SweepConfig& c) { return exact(c.noise_dbm); }},
        {"link.tx_ris_m", "Tx - RIS distance [m] (g)",
         [](SweepConfig& c, const std::string& k, const std::string& v) { c.distances.tx_ris = parse_double(k, v); },
         [](const SweepConfig& c) { return exact(c.distances.tx_ris); }},
        {"link.ris_ue1_m", "RIS - UE1 distance [m] (v)",
         [](SweepConfig& c, const std::string& k, const std::string& v) { c.distances.ris_ue1 = parse_double(k, v); },
         [](const SweepConfig& c) { return exact(c.distances.ris_ue1); }},
        {"link.ris_ue2_m", "RIS - UE2 distance [m] (h)",
         [](SweepConfig& c, const std::string& k, const std::string& v) { c.distances.ris_ue2 = parse_double(k, v); },
         [](const SweepConfig& c) { return exact(c.distances.ris_ue2); }},
        {"link.path_loss_exponent", "log-distance path-loss exponent",
         [](SweepConfig& c, const std::string& k, const std::string& v) { c.distances.exponent = parse_double(k, v); },
         [](const SweepConfig& c) { return exact(c.distances.exponent); }},
        {"link.pt_dbm_grid", "transmit powers [dBm]: list or start:step:stop",
         [](SweepConfig& c, const std::string& k, const std::string& v) { c.pt_dbm_grid = parse_grid(k, v); },
         [](const SweepConfig& c) { return join(c.pt_dbm_grid); }},
        {"partition.n_id", "IDset size N' (-1: N/2)",
         [](SweepConfig& c, const std::string& k, const std::string& v) { c.n_id = static_cast<int>(parse_integer(k, v)); },
         [](const SweepConfig& c) { return std::to_string(c.n_id); }},
        {"sweep.trials", "Monte-Carlo trials per point",
         [](SweepConfig& c, const std::string& k, const std::string& v) { c.trials = parse_unsigned(k, v); },
         [](const SweepConfig& c) { return std::to_string(c.trials); }},
        {"sweep.seed", "master seed",
         [](SweepConfig& c, const std::string& k, const std::string& v) { c.seed = parse_unsigned(k, v); },
         [](const SweepConfig& c) { return std::to_string(c.seed); }},
        {"sweep.workers", "worker threads (0: all cores); never changes results",
         [](SweepConfig& c, const std::string& k, const std::string& v) { c.workers = static_cast<unsigned>(parse_unsigned(k, v)); },
         [](const SweepConfig& c) { return std::to_string(c.workers); }},
        {"outage.threshold", "SINR outage threshold r (linear)",
         [](SweepConfig& c, const std::string& k, const std::string& v) { c.sinr_threshold = parse_double(k, v); },
         [](const SweepConfig& c) { return exact(c.sinr_threshold); }},
        {"outage.include_probe_terms", "keep UE1 probe terms (h) in the interference B",
         [](SweepConfig& c, const std::string& k, const std::string& v) { c.include_probe_terms = parse_bool(k, v); },
         [](const SweepConfig& c) { return std::string(c.include_probe_terms ? "true" : "false"); }},
        {"detector.rbar_grid", "normalised detection thresholds in [0, 1]",
         [](SweepConfig& c, const std::string& k, const std::string& v) { c.rbar_grid = parse_grid(k, v); },
         [](const SweepConfig& c) { return join(c.rbar_grid); }},
        {"detector.psrp_length", "PSRP symbols M per detection",
         [](SweepConfig& c, const std::string& k, const std::string& v) { c.psrp_length = static_cast<int>(parse_integer(k, v)); },
         [](const SweepConfig& c) { return std::to_string(c.psrp_length); }},
        {"detector.psrp_id", "PSRP signature identifier",
         [](SweepConfig& c, const std::string& k, const std::string& v) { c.psrp_id = parse_unsigned(k, v); },
         [](const SweepConfig& c) { return std::to_string(c.psrp_id); }},
        {"detector.pt_dbm", "transmit power for the P_miss sweep [dBm]",
         [](SweepConfig& c, const std::string& k, const std::string& v) { c.detector_pt_dbm = parse_double(k, v); },
         [](const SweepConfig& c) { return exact(c.detector_pt_dbm); }},
        {"detector.n_set", "RIS sizes for the P_miss sweep",
         [](SweepConfig& c, const std::string& k, const std::string& v) {
             c.pmiss_n_set.clear();
             for (double x : parse_grid(k, v)) {
                 if (x != std::floor(x)) throw ConfigError(k, "element counts must be integers");
                 c.pmiss_n_set.push_back(static_cast<int>(x));
             }
         },
         [](const SweepConfig& c) { return join(c.pmiss_n_set); }},
        {"theory.tolerance", "absolute tolerance of the CDF inversion",
         [](SweepConfig& c, const std::string& k, const std::string& v) { c.inversion.tolerance = parse_double(k, v); },
         [](const SweepConfig& c) { return exact(c.inversion.tolerance); }},
        {"theory.truncation", "normalised upper frequency limit (0: automatic)",
         [](SweepConfig& c, const std::string& k, const std::string& v) { c.inversion.truncation = parse_double(k, v); },
         [](const SweepConfig& c) { return exact(c.inversion.truncation); }},
        {"theory.sorted_trials", "trials for the sorted order-statistic moments",
         [](SweepConfig& c, const std::string& k, const std::string& v) { c.sorted_moment_trials = parse_unsigned(k, v); },
         [](const SweepConfig& c) { return std::to_string(c.sorted_moment_trials); }},
    };
    return specs;
}

}  // namespace

KeyValues parse_key_values(std::istream& in, const std::string& origin) {
    KeyValues kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("", origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
        }
        const std::string key = trim(t.substr(0, eq));
        if (key.empty()) throw ConfigError("", origin + ":" + std::to_string(lineno) + ": empty key");
        kv[key] = trim(t.substr(eq + 1));
    }
    return kv;
}

KeyValues load_key_values(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open config file '" + path.string() + "'");
    return parse_key_values(in, path.string());
}

void apply_overrides(KeyValues& base, std::span<const std::string> overrides) {
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos || trim(o.substr(0, eq)).empty()) {
            throw ConfigError("", "override '" + o + "' is not key=value");
        }
        base[trim(o.substr(0, eq))] = trim(o.substr(eq + 1));
    }
}

SweepConfig config_from_key_values(const KeyValues& kv) {
    SweepConfig c;
    for (const auto& [key, value] : kv) {
        if (key.rfind("manifest.", 0) == 0) continue;
        const auto& specs = key_specs();
        auto it = std::find_if(specs.begin(), specs.end(), [&](const KeySpec& s) { return key == s.key; });
        if (it == specs.end()) throw ConfigError(key, "unknown configuration key");
        it->apply(c, key, value);
    }
    try {
        c.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError("", e.what());
    }
    return c;
}

KeyValues to_key_values(const SweepConfig& config) {
    KeyValues kv;
    for (const auto& s : key_specs()) kv[s.key] = s.show(config);
    return kv;
}

std::string default_config_text() {
    const SweepConfig c;
    std::ostringstream os;
    os << "# rispart configuration (defaults)\n";
    for (const auto& s : key_specs()) os << "\n# " << s.doc << "\n" << s.key << " = " << s.show(c) << "\n";
    return os.str();
}

void write_manifest(std::ostream& out, const RunManifest& m) {
    out << "# rispart run manifest; replay with: rispart " << m.command << " --config <this file>\n";
    out << "manifest.command = " << m.command << "\n";
    out << "manifest.version = " << kVersion << "\n";
    out << "manifest.timestamp = " << m.timestamp << "\n";
    for (std::size_t i = 0; i < m.outputs.size(); ++i) {
        out << "manifest.output" << i << " = " << m.outputs[i] << "\n";
    }
    for (const auto& [k, v] : to_key_values(m.config)) out << k << " = " << v << "\n";
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

void write_csv(std::ostream& out, std::span<const CurveResult> curves) {
    out << "x_value,mode,estimate,ci_low,ci_high,source\n";
    for (const auto& c : curves) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            const bool missing = std::isnan(c.estimates[i]);
            out << format_number(c.x_values[i]) << ',' << c.mode << ','
                << format_number(c.estimates[i]) << ','
                << (missing ? "nan" : format_number(c.ci_low(i))) << ','
                << (missing ? "nan" : format_number(c.ci_high(i))) << ',' << c.source << '\n';
        }
    }
}

}  // namespace rispart
