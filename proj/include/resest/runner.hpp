#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "resest/calibration.hpp"
#include "resest/config.hpp"
#include "resest/csv.hpp"
#include "resest/errors.hpp"
#include "resest/estimator.hpp"
#include "resest/isolation.hpp"
#include "resest/model.hpp"

namespace resest {

inline constexpr const char* kVersion = "0.1.0";

struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> horizon;
    std::optional<std::size_t> window;
    double attack_scale = 1.0;   // multiplies every attack generator
    bool attacks_enabled = true; // false replaces every attack with zero
};

struct RunResult {
    std::string name;
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    std::size_t horizon = 0;
    BankIndex bank;
    Trajectory trajectory;
    std::vector<EstimatorFrame> frames;
    std::optional<ThresholdTable> thresholds;
    std::optional<IsolationReport> isolation;
    CertificationSummary certification;
    double wall_seconds = 0.0;
};

inline SignalSpec scale_signal(const SignalSpec& s, double f) {
    return std::visit(
        [f](const auto& g) -> SignalSpec {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, ZeroSignal>) return g;
            else if constexpr (std::is_same_v<T, UniformSignal>) {
                double lo = f * g.lo, hi = f * g.hi;
                if (lo > hi) std::swap(lo, hi);
                return UniformSignal{lo, hi};
            } else if constexpr (std::is_same_v<T, NormalSignal>) return NormalSignal{f * g.mean, std::abs(f) * g.stddev};
            else if constexpr (std::is_same_v<T, ConstantSignal>) return ConstantSignal{f * g.value};
            else {
                TableSignal t = g;
                for (auto& v : t.values) v *= f;
                return t;
            }
        },
        s);
}

/// The scenario after command-line overrides.
inline AttackScenario effective_scenario(const ScenarioConfig& cfg, const RunOptions& opt) {
    AttackScenario sc = cfg.scenario;
    if (opt.seed) sc.seed = *opt.seed;
    if (opt.horizon) sc.horizon = *opt.horizon;
    for (auto& a : sc.attack) a = opt.attacks_enabled ? scale_signal(a, opt.attack_scale) : SignalSpec{ZeroSignal{}};
    if (!opt.attacks_enabled) sc.attacked.clear();
    return sc;
}

/// End-to-end: simulate the plant, run the bank and the estimator, then isolation when enabled.
inline RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opt = {}) {
    const auto t0 = std::chrono::steady_clock::now();
    RunResult r;
    r.name = cfg.name;
    r.config_hash = cfg.config_hash;
    r.bank = cfg.bank;
    const AttackScenario sc = effective_scenario(cfg, opt);
    r.seed = sc.seed;
    r.horizon = sc.horizon;
    const std::string tag = " [config " + hash_hex(cfg.config_hash) + ", seed " + std::to_string(sc.seed) + "]";
    const PlantModel& plant = *cfg.plant;

    ObserverBank bank = make_bank(cfg);
    r.certification = certify_bank(cfg, bank);
    if (cfg.isolation.enabled) {
        ThresholdTable t = compute_thresholds(cfg.bank, cfg.iss_table(), cfg.m_bar(), cfg.d_bar(), cfg.isolation.epsilon);
        if (cfg.isolation.k_bar_star) t.k_bar_star = *cfg.isolation.k_bar_star;
        r.thresholds = std::move(t);
    }

    RngStream x0_rng(sc.seed, "initial_state");
    const Vector x0 = cfg.initial_state.draw(plant.n, x0_rng);
    try {
        r.trajectory = simulate(plant, sc, x0);
    } catch (const SimulationDiverged& e) {
        throw SimulationDiverged(e.base() + tag, e.step());
    }

    RngStream xh_rng(sc.seed, "initial_estimate");
    bank.initialize(cfg.observers.initial_estimate.draw(plant.n, xh_rng, &x0));
    r.frames.reserve(r.trajectory.size());
    try {
        for (const auto& rec : r.trajectory) r.frames.push_back(bank.step(rec.k, rec.y, rec.u, rec.x));
    } catch (const EstimatorStarved& e) {
        throw EstimatorStarved(e.base() + tag, e.step());
    }

    if (r.thresholds)
        r.isolation = windowed_isolation(cfg.bank, r.frames, *r.thresholds, opt.window ? *opt.window : cfg.isolation.window);
    r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// ---------------------------------------------------------------------------
// Artifacts
// ---------------------------------------------------------------------------

/// Write `content` to `path` through a temporary file and a rename.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw IoError("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename into '" + path.string() + "'");
    }
}

inline std::string trajectory_csv(const Trajectory& traj, int n, int p, int s) {
    std::vector<std::string> head{"k"};
    for (int i = 1; i <= n; ++i) head.push_back("x" + std::to_string(i));
    for (const char* pre : {"y", "a", "m"})
        for (int i = 1; i <= p; ++i) head.push_back(pre + std::to_string(i));
    for (int i = 1; i <= s; ++i) head.push_back("d" + std::to_string(i));
    std::string out = csv::join_row(head) + "\n";
    for (const auto& rec : traj) {
        std::vector<std::string> row{std::to_string(rec.k)};
        for (const Vector* v : {&rec.x, &rec.y, &rec.a, &rec.m, &rec.d})
            for (Eigen::Index i = 0; i < v->size(); ++i) row.push_back(csv::num((*v)(i)));
        out += csv::join_row(row) + "\n";
    }
    return out;
}

inline std::string frames_csv(const BankIndex& bank, const std::vector<EstimatorFrame>& frames, int n) {
    std::vector<std::string> head{"k", "sigma"};
    for (int i = 1; i <= n; ++i) head.push_back("xhat" + std::to_string(i));
    head.push_back("e_norm");
    for (const auto& J : bank.J_list) head.push_back("pi_" + J.joined());
    std::string out = csv::join_row(head) + "\n";
    for (const auto& f : frames) {
        std::vector<std::string> row{std::to_string(f.k), bank.J_list[f.sigma].joined()};
        for (Eigen::Index i = 0; i < f.x_hat.size(); ++i) row.push_back(csv::num(f.x_hat(i)));
        row.push_back(f.e_norm ? csv::num(*f.e_norm) : "");
        for (double v : f.pi) row.push_back(csv::num(v));
        out += csv::join_row(row) + "\n";
    }
    return out;
}

/// An empty isolated set is written as "0".
inline std::string isolation_windows_csv(const IsolationReport& rep) {
    std::string out = "window_i,k_start,k_end,winner_J,isolated_set,no_quorum\n";
    for (const auto& w : rep.windows) {
        out += csv::join_row({std::to_string(w.index), std::to_string(w.k_start), std::to_string(w.k_end),
                              w.winner ? w.winner->joined() : "", w.isolated.empty() ? "0" : csv::join_ints(w.isolated),
                              w.no_quorum ? "1" : "0"}) +
               "\n";
    }
    return out;
}

inline std::string isolation_steps_csv(const IsolationReport& rep) {
    std::string out = "k,Wbar\n";
    for (const auto& [k, w] : rep.per_step) out += csv::join_row({std::to_string(k), csv::join_ints(w)}) + "\n";
    return out;
}

inline std::string metadata_json(const ScenarioConfig& cfg, const RunResult& r) {
    nlohmann::ordered_json m;
    m["name"] = r.name;
    m["version"] = kVersion;
    m["config_path"] = cfg.source_path;
    m["config_hash"] = hash_hex(r.config_hash);
    m["seed"] = r.seed;
    m["horizon"] = r.horizon;
    m["records"] = r.trajectory.size();
    m["observers"] = r.bank.observer_count();
    m["family"] = cfg.observers.family;
    m["wall_time_s"] = r.wall_seconds;
    auto certs = nlohmann::ordered_json::array();
    for (const auto& c : r.certification.gains)
        certs.push_back({{"subset", c.subset}, {"spectral_radius", c.gain.spectral_radius}, {"pass", c.gain.pass}});
    m["certificates"] = certs;
    if (r.certification.slope)
        m["slope_condition"] = {{"pass", r.certification.slope->pass}, {"checked", r.certification.slope->checked}};
    m["warnings"] = r.certification.warnings;
    if (r.thresholds) {
        nlohmann::ordered_json t;
        for (std::size_t j = 0; j < r.bank.J_list.size(); ++j) t[r.bank.J_list[j].key()] = r.thresholds->pi_bar[j];
        m["thresholds"] = t;
        m["k_bar_star"] = r.thresholds->k_bar_star;
        m["window"] = r.isolation->window_length;
    }
    return m.dump(2) + "\n";
}

/// trajectory.csv, frames.csv, isolation CSVs when present, metadata.json.
inline std::vector<std::filesystem::path> write_artifacts(const ScenarioConfig& cfg, const RunResult& r,
                                                          const std::filesystem::path& dir) {
    const PlantModel& pm = *cfg.plant;
    std::vector<std::filesystem::path> written;
    auto put = [&](const char* name, const std::string& body) {
        write_atomic(dir / name, body);
        written.push_back(dir / name);
    };
    put("trajectory.csv", trajectory_csv(r.trajectory, pm.n, pm.p, pm.s));
    put("frames.csv", frames_csv(r.bank, r.frames, pm.n));
    if (r.isolation) {
        put("isolation_windows.csv", isolation_windows_csv(*r.isolation));
        put("isolation_steps.csv", isolation_steps_csv(*r.isolation));
    }
    put("metadata.json", metadata_json(cfg, r));
    return written;
}

// ---------------------------------------------------------------------------
// Calibration of a whole bundle
// ---------------------------------------------------------------------------

struct BundleCalibration {
    std::vector<std::optional<ISSGainModel>> gains;  // aligned with BankIndex::all()
    std::vector<std::string> failures;
};

inline CalibrationOptions calibration_options(const ScenarioConfig& cfg, std::size_t trials, std::size_t horizon) {
    CalibrationOptions o;
    o.trials = trials;
    o.horizon = horizon;
    o.seed = cfg.calibration.seed;
    o.safety_factor = cfg.calibration.safety_factor;
    o.init_error_scale = cfg.calibration.init_error_scale;
    o.transient_tol = cfg.calibration.transient_tol;
    o.epsilon = cfg.isolation.epsilon;
    o.divergence_ceiling = cfg.scenario.divergence_ceiling;
    const InitialSpec init = cfg.calibration.initial_state ? *cfg.calibration.initial_state : cfg.initial_state;
    const int n = cfg.plant->n;
    o.initial_state = [init, n](RngStream& rng) { return init.draw(n, rng); };
    return o;
}

inline BundleCalibration calibrate_bundle(const ScenarioConfig& cfg, std::size_t trials, std::size_t horizon) {
    if (trials < 1) throw ConfigError("calibrate: trials must be >= 1");
    const auto opt = calibration_options(cfg, trials, horizon);
    BundleCalibration out;
    ObserverBank bank = make_bank(cfg);
    for (std::size_t i = 0; i < bank.size(); ++i) {
        try {
            out.gains.push_back(estimate_iss_gains(bank.at(i), *cfg.plant, cfg.m_bar(), cfg.d_bar(), opt));
        } catch (const CalibrationError& e) {
            out.gains.push_back(std::nullopt);
            out.failures.push_back(bank.at(i).subset().key() + ": " + e.what());
        }
    }
    return out;
}

inline nlohmann::json iss_to_json(const ISSGainModel& g) {
    return {{"c", g.c}, {"lambda", g.lambda}, {"gamma1", g.gamma1}, {"gamma2", g.gamma2}, {"nu", g.nu}, {"k_star", g.k_star}};
}

/// The config document with every calibrated ISS block replaced.
inline nlohmann::json calibrated_document(const ScenarioConfig& cfg, const BundleCalibration& cal) {
    nlohmann::json doc = cfg.document;
    const auto all = cfg.bank.all();
    for (std::size_t i = 0; i < all.size(); ++i)
        if (cal.gains[i]) doc["observers"]["bundle"][all[i].key()]["iss"] = iss_to_json(*cal.gains[i]);
    return doc;
}

}  // namespace resest
