// rispart: sweeps, theory curves and acceptance checks for the RIS element
// partitioning scheme. Exit codes: 0 ok, 1 validation failed, 2 bad
// configuration, 3 numerical failure.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "rispart/config.hpp"
#include "rispart/error.hpp"
#include "rispart/simulate.hpp"
#include "rispart/validation.hpp"

namespace fs = std::filesystem;
using namespace rispart;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
    std::string out_dir = ".";
};

void add_common(CLI::App* app, CommonOptions& o) {
    app->add_option("-c,--config", o.config_path, "key = value config file");
    app->add_option("-s,--set", o.overrides, "override a config key (key=value), repeatable");
    app->add_option("--seed", o.seed, "master seed (overrides " + std::string(kSeedEnv) + " and the file)");
    app->add_option("-w,--workers", o.workers, "worker threads; results do not depend on it");
    app->add_option("-o,--out", o.out_dir, "output directory")->capture_default_str();
}

SweepConfig resolve(const CommonOptions& o) {
    KeyValues kv;
    if (!o.config_path.empty()) kv = load_key_values(o.config_path);
    if (const char* env = std::getenv(kSeedEnv)) kv["sweep.seed"] = env;
    apply_overrides(kv, o.overrides);
    if (o.seed) kv["sweep.seed"] = std::to_string(*o.seed);
    if (o.workers) kv["sweep.workers"] = std::to_string(*o.workers);
    return config_from_key_values(kv);
}

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

void write_outputs(const std::string& command, const SweepConfig& config, const std::string& out_dir,
                   const std::vector<std::pair<std::string, std::vector<CurveResult>>>& files) {
    fs::create_directories(out_dir);
    RunManifest manifest{command, config, utc_now(), {}};
    for (const auto& [name, curves] : files) {
        const fs::path path = fs::path(out_dir) / name;
        std::ofstream out(path);
        if (!out) throw ConfigError("", "cannot write '" + path.string() + "'");
        write_csv(out, curves);
        manifest.outputs.push_back(name);
        std::cerr << "wrote " << path.string() << "\n";
    }
    const fs::path mpath = fs::path(out_dir) / (command + "_manifest.cfg");
    std::ofstream mout(mpath);
    if (!mout) throw ConfigError("", "cannot write '" + mpath.string() + "'");
    write_manifest(mout, manifest);
    std::cerr << "wrote " << mpath.string() << "\n";
}

std::vector<Mode> modes_for(const std::string& m) {
    if (m == "both") return {Mode::sorted, Mode::unsorted};
    return {parse_mode(m)};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RIS element partitioning: simultaneous beamforming and user identification"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    CommonOptions common;
    std::string mode = "both";
    bool with_theory = false;
    double scale = 0.0;
    bool resolved_only = false;

    auto* outage = app.add_subcommand("outage", "UE1 outage probability versus transmit power");
    add_common(outage, common);
    outage->add_option("-m,--mode", mode, "sorted, unsorted or both")->capture_default_str();
    outage->add_flag("--theory", with_theory, "append the analytical curves");

    auto* snr = app.add_subcommand("snr", "mean UE1 beamforming SNR versus transmit power");
    add_common(snr, common);
    snr->add_option("-m,--mode", mode, "sorted, unsorted or both")->capture_default_str();

    auto* pmiss = app.add_subcommand("pmiss", "UE2 missed-detection probability versus threshold");
    add_common(pmiss, common);
    pmiss->add_option("-m,--mode", mode, "sorted, unsorted or both")->capture_default_str();

    auto* theory = app.add_subcommand("theory", "analytical outage curves only");
    add_common(theory, common);
    theory->add_option("-m,--mode", mode, "sorted, unsorted or both")->capture_default_str();

    auto* repro = app.add_subcommand("reproduce", "every curve: snr.csv, pmiss.csv, outage.csv");
    add_common(repro, common);

    auto* validate = app.add_subcommand("validate", "run the acceptance checks");
    validate->add_option("--seed", common.seed, "master seed");
    validate->add_option("-w,--workers", common.workers, "worker threads");
    validate->add_option("--trial-scale", scale,
                         "scale every Monte-Carlo budget (default 1, or $" +
                             std::string(validation::kTrialScaleEnv) + ")");

    auto* config = app.add_subcommand("config", "print the default (or resolved) configuration");
    add_common(config, common);
    config->add_flag("--resolved", resolved_only, "print the config after file, env and overrides");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*config) {
            if (!resolved_only) {
                std::cout << default_config_text();
            } else {
                for (const auto& [k, v] : to_key_values(resolve(common))) std::cout << k << " = " << v << "\n";
            }
            return kExitOk;
        }
        if (*validate) {
            auto opts = validation::Options::from_environment();
            if (scale > 0.0) opts.trial_scale = scale;
            if (common.seed) opts.seed = *common.seed;
            if (common.workers) opts.workers = *common.workers;
            const auto results = validation::run_all(opts, &std::cout);
            validation::print_table(std::cout, results);
            for (const auto& r : results) {
                if (!r.passed) return kExitValidation;
            }
            return kExitOk;
        }

        const SweepConfig cfg = resolve(common);
        if (*outage) {
            std::vector<CurveResult> curves;
            for (Mode m : modes_for(mode)) curves.push_back(run_outage_sweep(cfg, m));
            if (with_theory) {
                for (Mode m : modes_for(mode)) curves.push_back(theory_outage_curve(cfg, m));
            }
            write_outputs("outage", cfg, common.out_dir, {{"outage.csv", curves}});
        } else if (*snr) {
            std::vector<CurveResult> curves;
            for (Mode m : modes_for(mode)) curves.push_back(run_snr_sweep(cfg, m));
            write_outputs("snr", cfg, common.out_dir, {{"snr.csv", curves}});
        } else if (*pmiss) {
            std::vector<CurveResult> curves;
            for (Mode m : modes_for(mode)) {
                for (auto& c : run_pmiss_sweep(cfg, m)) curves.push_back(std::move(c));
            }
            write_outputs("pmiss", cfg, common.out_dir, {{"pmiss.csv", curves}});
        } else if (*theory) {
            std::vector<CurveResult> curves;
            for (Mode m : modes_for(mode)) curves.push_back(theory_outage_curve(cfg, m));
            write_outputs("theory", cfg, common.out_dir, {{"theory.csv", curves}});
        } else if (*repro) {
            const Dataset d = reproduce(cfg);
            write_outputs("reproduce", cfg, common.out_dir,
                          {{"snr.csv", d.snr}, {"pmiss.csv", d.pmiss}, {"outage.csv", d.outage}});
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const InvalidArgument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return kExitConfig;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
