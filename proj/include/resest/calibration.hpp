#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "resest/errors.hpp"
#include "resest/linalg.hpp"
#include "resest/model.hpp"
#include "resest/observers.hpp"
#include "resest/rng.hpp"

namespace resest {

struct CalibrationOptions {
    std::size_t trials = 100;
    std::size_t horizon = 300;
    std::uint64_t seed = 0;
    double safety_factor = 1.2;
    double init_error_scale = 1.0;   // stddev of the randomised initial estimation error
    double transient_tol = 1e-3;     // used for k* when epsilon == 0
    double epsilon = 0.0;
    double divergence_ceiling = 1e12;
    double envelope_floor = 1e-10;   // relative error below which decay samples are ignored
    std::function<Vector(RngStream&)> initial_state;  // defaults to N(0, 1) per coordinate
};

namespace detail {

enum class Excitation { None, Noise, Disturbance };

/// One attack-free run of `obs` against the plant; returns |e(k)| for k = 0..horizon.
inline std::vector<double> calibration_run(const Observer& proto, const PlantModel& plant, const CalibrationOptions& opt,
                                           std::uint64_t trial_seed, Excitation mode, double bound, bool perturb) {
    RngStream x0_rng(trial_seed, "calibration_x0");
    RngStream e0_rng(trial_seed, "calibration_e0");
    RngStream m_rng(trial_seed, "calibration_noise");
    RngStream d_rng(trial_seed, "calibration_disturbance");

    Vector x(plant.n);
    if (opt.initial_state) x = opt.initial_state(x0_rng);
    else
        for (int i = 0; i < plant.n; ++i) x(i) = x0_rng.normal(0.0, 1.0);
    Vector xhat0 = x;
    if (perturb)
        for (int i = 0; i < plant.n; ++i) xhat0(i) += e0_rng.normal(0.0, opt.init_error_scale);

    auto obs = proto.clone();
    obs->initialize(xhat0);
    const auto rows = obs->subset().zero_based();
    const Vector u = Vector::Zero(plant.n_u);
    std::vector<double> err;
    err.reserve(opt.horizon + 1);
    for (std::size_t k = 0; k <= opt.horizon; ++k) {
        Vector m = Vector::Zero(plant.p);
        Vector d = Vector::Zero(plant.s);
        if (mode == Excitation::Noise)
            for (int i = 0; i < plant.p; ++i) m(i) = m_rng.uniform(-bound, bound);
        if (mode == Excitation::Disturbance)
            for (int i = 0; i < plant.s; ++i) d(i) = d_rng.uniform(-bound, bound);
        const Vector y = plant.output(x, u) + m;
        const auto out = obs->observe(select(y, rows), u);
        const double e = (out.estimate - x).norm();
        if (exceeds_ceiling(x, opt.divergence_ceiling))
            throw CalibrationError("plant state diverged in calibration trial seed " + std::to_string(trial_seed) +
                                   " at step " + std::to_string(k) + " (observer " + obs->subset().key() + ")");
        if (out.diverged || !std::isfinite(e) || e > opt.divergence_ceiling)
            throw CalibrationError("observer " + obs->subset().key() + " diverged in calibration trial seed " +
                                   std::to_string(trial_seed) + " at step " + std::to_string(k));
        err.push_back(e);
        x = plant.dynamics(x, u, d, k);
    }
    return err;
}

}  // namespace detail

/// Monte-Carlo ISS gains for one observer.
///
/// Noise-free runs from perturbed initial estimates fit (c, lambda) and the
/// practical offset nu. Runs started at the true state with noise only (then
/// disturbance only) at the given bounds set gamma1 and gamma2. Every
/// observed magnitude is inflated by the safety factor.
inline ISSGainModel estimate_iss_gains(const Observer& proto, const PlantModel& plant, double mbar, double dbar,
                                       const CalibrationOptions& opt) {
    if (opt.trials < 1) throw ConfigError("calibration: trials must be >= 1");
    if (opt.horizon < 2) throw ConfigError("calibration: horizon must be >= 2");
    if (mbar < 0.0 || dbar < 0.0) throw ConfigError("calibration: bounds must be >= 0");

    std::vector<std::vector<double>> decay;
    double steady_free = 0.0;
    double e0_max = 0.0;
    for (std::size_t t = 0; t < opt.trials; ++t) {
        const std::uint64_t ts = opt.seed + t;
        auto err = detail::calibration_run(proto, plant, opt, ts, detail::Excitation::None, 0.0, true);
        for (std::size_t k = opt.horizon / 2; k < err.size(); ++k) steady_free = std::max(steady_free, err[k]);
        e0_max = std::max(e0_max, err.front());
        decay.push_back(std::move(err));
    }

    // Pooled log-linear fit of |e(k)|/|e(0)| over the samples above the floor.
    double sk = 0, sy = 0, skk = 0, sky = 0, cnt = 0;
    for (const auto& err : decay) {
        if (!(err.front() > 0.0)) continue;
        for (std::size_t k = 0; k < err.size(); ++k) {
            const double r = err[k] / err.front();
            if (r <= opt.envelope_floor) break;
            const double kd = static_cast<double>(k), ly = std::log(r);
            sk += kd;
            sy += ly;
            skk += kd * kd;
            sky += kd * ly;
            cnt += 1;
        }
    }
    double lambda = 1e-3;
    if (cnt >= 2 && skk * cnt - sk * sk > 0) {
        const double slope = (cnt * sky - sk * sy) / (cnt * skk - sk * sk);
        lambda = std::exp(slope);
    }
    lambda = std::clamp(lambda, 1e-3, 1.0 - 1e-6);

    double c = 1.0;
    for (const auto& err : decay) {
        if (!(err.front() > 0.0)) continue;
        for (std::size_t k = 0; k < err.size(); ++k) {
            const double r = err[k] / err.front();
            if (r <= opt.envelope_floor) continue;
            c = std::max(c, r / std::pow(lambda, static_cast<double>(k)));
        }
    }

    ISSGainModel g;
    g.lambda = lambda;
    g.c = opt.safety_factor * c;
    g.nu = opt.safety_factor * steady_free;

    auto excited_max = [&](detail::Excitation mode, double bound) {
        double worst = 0.0;
        for (std::size_t t = 0; t < opt.trials; ++t) {
            const auto err = detail::calibration_run(proto, plant, opt, opt.seed + t, mode, bound, false);
            worst = std::max(worst, *std::max_element(err.begin(), err.end()));
        }
        return opt.safety_factor * worst;
    };
    if (mbar > 0.0) g.gamma1 = std::max(excited_max(detail::Excitation::Noise, mbar) - g.nu, 0.0) / mbar;
    if (dbar > 0.0 && plant.s > 0)
        g.gamma2 = std::max(excited_max(detail::Excitation::Disturbance, dbar) - g.nu, 0.0) / dbar;

    const double tol = opt.epsilon > 0.0 ? opt.epsilon : opt.transient_tol;
    g.k_star = 0;
    if (e0_max > 0.0) {
        while (g.transient(e0_max, g.k_star) > tol && g.k_star < 100000) ++g.k_star;
    }
    return g;
}

}  // namespace resest
