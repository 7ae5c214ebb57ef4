// Command-line front end: run, calibrate, validate, plots.
//
// Exit codes: 0 success, 1 validation, 2 runtime divergence, 3 I/O.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "resest/resest.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitIo = 3;

std::filesystem::path output_dir(const resest::ScenarioConfig& cfg, const std::string& flag) {
    if (!flag.empty()) return flag;
    if (cfg.output_dir) return *cfg.output_dir;
    if (const char* env = std::getenv("RESEST_OUT_DIR"); env && *env) return std::filesystem::path(env) / cfg.name;
    return std::filesystem::path("resest_out") / cfg.name;
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-observer secure state estimation under sensor attacks"};
    app.require_subcommand(1);

    std::string config_path, out_dir, in_dir, cal_output;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> horizon, window;
    std::size_t trials = 0, cal_horizon = 0;

    auto* run = app.add_subcommand("run", "simulate a scenario and write its artifacts");
    run->add_option("--config", config_path, "scenario JSON")->required();
    run->add_option("--seed", seed, "override scenario.seed");
    run->add_option("--horizon", horizon, "override scenario.horizon (records k = 0..T)");
    run->add_option("--window", window, "override isolation.window");
    run->add_option("--out", out_dir, "output directory (default: output.dir, then $RESEST_OUT_DIR/<name>)");

    auto* calibrate = app.add_subcommand("calibrate", "Monte-Carlo ISS gains, written to a new bundle file");
    calibrate->add_option("--config", config_path, "scenario JSON")->required();
    calibrate->add_option("--trials", trials, "Monte-Carlo trials per observer")->required();
    calibrate->add_option("--horizon", cal_horizon, "steps per trial")->required();
    calibrate->add_option("--output", cal_output, "destination (default: <config>.calibrated.json)");

    auto* validate = app.add_subcommand("validate", "load, build and certify a scenario");
    validate->add_option("--config", config_path, "scenario JSON")->required();

    auto* plots = app.add_subcommand("plots", "plot-ready tables from a run directory");
    plots->add_option("--in", in_dir, "run directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            const auto cfg = resest::load_config(config_path);
            resest::RunOptions opt;
            opt.seed = seed;
            opt.horizon = horizon;
            opt.window = window;
            const auto result = resest::run_scenario(cfg, opt);
            print_warnings(result.certification.warnings);
            const auto dir = output_dir(cfg, out_dir);
            for (const auto& f : resest::write_artifacts(cfg, result, dir)) std::cout << f.string() << "\n";
            if (result.isolation) {
                for (const auto& w : result.isolation->windows)
                    std::cout << "window " << w.index << " [" << w.k_start << "," << w.k_end << "] isolated {"
                              << resest::csv::join_ints(w.isolated) << "}" << (w.no_quorum ? " no quorum" : "") << "\n";
            }
        } else if (*calibrate) {
            const auto cfg = resest::load_config(config_path);
            if (trials < 1) throw resest::ConfigError("calibrate: --trials must be >= 1");
            if (cal_horizon < 2) throw resest::ConfigError("calibrate: --horizon must be >= 2");
            const auto cal = resest::calibrate_bundle(cfg, trials, cal_horizon);
            for (const auto& f : cal.failures) std::cerr << "calibration failed: " << f << "\n";
            if (cal_output.empty()) {
                std::filesystem::path p(config_path);
                cal_output = (p.parent_path() / (p.stem().string() + ".calibrated.json")).string();
            }
            if (std::filesystem::weakly_canonical(cal_output) == std::filesystem::weakly_canonical(config_path))
                throw resest::ConfigError("calibrate: refusing to overwrite the input config");
            resest::write_atomic(cal_output, resest::calibrated_document(cfg, cal).dump(2) + "\n");
            std::cout << cal_output << "\n";
            if (!cal.failures.empty()) return kExitRuntime;
        } else if (*validate) {
            const auto cfg = resest::load_config(config_path);
            const auto sum = resest::validate_config(cfg);
            print_warnings(sum.warnings);
            std::cout << cfg.name << ": p=" << cfg.plant->p << " q=" << cfg.q << " observers=" << cfg.bank.observer_count()
                      << " (" << cfg.bank.J_list.size() << " J, " << cfg.bank.S_list.size() << " S) ok\n";
        } else if (*plots) {
            const auto res = resest::emit_plots(in_dir);
            print_warnings(res.warnings);
            for (const auto& f : res.files) std::cout << f.string() << "\n";
        }
    } catch (const resest::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const resest::ConfigError& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitValidation;
    } catch (const resest::RuntimeFailure& e) {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const resest::CalibrationError& e) {
        std::cerr << "calibration failure: " << e.what() << "\n";
        return kExitRuntime;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitOk;
}
