#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "resest/errors.hpp"
#include "resest/linalg.hpp"
#include "resest/nonlinearity.hpp"
#include "resest/rng.hpp"

namespace resest {

// ---------------------------------------------------------------------------
// Signal generators
// ---------------------------------------------------------------------------

struct ZeroSignal {};
struct UniformSignal {
    double lo;
    double hi;
};
struct NormalSignal {
    double mean;
    double stddev;
};
struct ConstantSignal {
    double value;
};
struct TableSignal {
    std::vector<double> values;  // values[k]; must cover the horizon
};

using SignalSpec = std::variant<ZeroSignal, UniformSignal, NormalSignal, ConstantSignal, TableSignal>;

inline bool is_zero(const SignalSpec& s) {
    if (std::holds_alternative<ZeroSignal>(s)) return true;
    if (const auto* c = std::get_if<ConstantSignal>(&s)) return c->value == 0.0;
    return false;
}

inline void validate_signal(const SignalSpec& spec, const std::string& what) {
    if (const auto* u = std::get_if<UniformSignal>(&spec)) {
        if (!(u->lo < u->hi)) throw ConfigError(what + ": uniform requires lo < hi");
    } else if (const auto* n = std::get_if<NormalSignal>(&spec)) {
        if (!(n->stddev >= 0.0)) throw ConfigError(what + ": normal requires stddev >= 0");
    }
}

/// Sup-norm bound of a generator; +inf for unbounded (normal with stddev > 0).
inline double signal_bound(const SignalSpec& spec) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ZeroSignal>) return 0.0;
            else if constexpr (std::is_same_v<T, UniformSignal>) return std::max(std::abs(s.lo), std::abs(s.hi));
            else if constexpr (std::is_same_v<T, NormalSignal>)
                return s.stddev == 0.0 ? std::abs(s.mean) : std::numeric_limits<double>::infinity();
            else if constexpr (std::is_same_v<T, ConstantSignal>) return std::abs(s.value);
            else {
                double b = 0.0;
                for (double v : s.values) b = std::max(b, std::abs(v));
                return b;
            }
        },
        spec);
}

/// Draw the value of `spec` at step k from `rng`. Each call consumes at most one draw.
inline double sample_signal(const SignalSpec& spec, std::size_t k, RngStream& rng) {
    validate_signal(spec, "signal");
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ZeroSignal>) return 0.0;
            else if constexpr (std::is_same_v<T, UniformSignal>) return rng.uniform(s.lo, s.hi);
            else if constexpr (std::is_same_v<T, NormalSignal>) return rng.normal(s.mean, s.stddev);
            else if constexpr (std::is_same_v<T, ConstantSignal>) return s.value;
            else {
                if (k >= s.values.size())
                    throw ConfigError("table signal has " + std::to_string(s.values.size()) +
                                      " entries, step " + std::to_string(k) + " requested");
                return s.values[k];
            }
        },
        spec);
}

// ---------------------------------------------------------------------------
// Plant
// ---------------------------------------------------------------------------

/// Structural payload for plants of the form
///   x+ = A x + G phi(H x) + b + B u + E d,   y = C x.
struct LureStructure {
    Matrix A, G, H, C, B, E;
    Vector b;
    std::vector<ScalarNonlinearity> phi;  // one per row of H

    Vector apply_phi(const Vector& v) const {
        Vector out(v.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = phi[static_cast<std::size_t>(i)](v(i));
        return out;
    }

    /// Everything except the A x part: G phi(Hx) + b + B u + E d.
    Vector drift(const Vector& x, const Vector& u, const Vector& d) const {
        Vector out = G * apply_phi(H * x) + b;
        if (B.cols() > 0) out += B * u;
        if (E.cols() > 0) out += E * d;
        return out;
    }

    void validate(int n, int p) const {
        const auto r = H.rows();
        if (A.rows() != n || A.cols() != n) throw ConfigError("plant.A must be n x n");
        if (G.rows() != n || G.cols() != r) throw ConfigError("plant.G must be n x r with r = rows(H)");
        if (H.cols() != n) throw ConfigError("plant.H must be r x n");
        if (C.rows() != p || C.cols() != n) throw ConfigError("plant.C must be p x n");
        if (b.size() != n) throw ConfigError("plant.b must have length n");
        if (static_cast<Eigen::Index>(phi.size()) != r)
            throw ConfigError("plant nonlinearity count must equal rows(H)");
        if (B.cols() > 0 && B.rows() != n) throw ConfigError("plant.B must have n rows");
        if (E.cols() > 0 && E.rows() != n) throw ConfigError("plant.E must have n rows");
    }
};

using DynamicsFn = std::function<Vector(const Vector& x, const Vector& u, const Vector& d, std::size_t k)>;
using OutputFn = std::function<Vector(const Vector& x, const Vector& u)>;

struct PlantModel {
    std::string name;
    int n = 0;
    int n_u = 0;
    int p = 0;
    int s = 0;
    DynamicsFn dynamics;           // F(x, u, d, k)
    OutputFn output;               // h(x, u), stacked over all p sensors, attack/noise free
    std::optional<LureStructure> lure;

    void validate() const {
        if (n < 1) throw ConfigError("plant: n must be >= 1");
        if (p < 1) throw ConfigError("plant: p must be >= 1");
        if (n_u < 0 || s < 0) throw ConfigError("plant: n_u and s must be >= 0");
        if (!dynamics || !output) throw ConfigError("plant: dynamics and output maps are required");
        if (lure) lure->validate(n, p);
    }
};

inline PlantModel make_lure_plant(std::string name, LureStructure structure, int n_u = 0, int s = 0) {
    PlantModel m;
    m.name = std::move(name);
    m.n = static_cast<int>(structure.A.rows());
    m.p = static_cast<int>(structure.C.rows());
    m.n_u = n_u;
    m.s = s;
    if (structure.b.size() == 0) structure.b = Vector::Zero(m.n);
    if (structure.B.size() == 0) structure.B = Matrix(m.n, 0);
    if (structure.E.size() == 0) structure.E = Matrix(m.n, 0);
    m.lure = std::move(structure);
    // The closures hold their own copy so the model stays valid when moved.
    LureStructure copy = *m.lure;
    m.dynamics = [copy](const Vector& x, const Vector& u, const Vector& d, std::size_t) {
        return Vector(copy.A * x + copy.drift(x, u, d));
    };
    m.output = [C = copy.C](const Vector& x, const Vector&) { return Vector(C * x); };
    m.validate();
    return m;
}

inline void check_length(const Vector& v, int expected, const char* what) {
    if (v.size() != expected)
        throw ConfigError(std::string(what) + ": expected length " + std::to_string(expected) + ", got " +
                          std::to_string(v.size()));
}

/// One application of the plant map F(x, u, d). Pure.
inline Vector step_plant(const PlantModel& model, const Vector& x, const Vector& u, const Vector& d, std::size_t k) {
    check_length(x, model.n, "step_plant x");
    check_length(u, model.n_u, "step_plant u");
    check_length(d, model.s, "step_plant d");
    return model.dynamics(x, u, d, k);
}

/// Stacked measurement y = h(x, u) + m + a. Pure.
inline Vector measure(const PlantModel& model, const Vector& x, const Vector& u, const Vector& m, const Vector& a) {
    check_length(x, model.n, "measure x");
    check_length(u, model.n_u, "measure u");
    check_length(m, model.p, "measure noise");
    check_length(a, model.p, "measure attack");
    return model.output(x, u) + m + a;
}

// ---------------------------------------------------------------------------
// Scenario and trajectory
// ---------------------------------------------------------------------------

struct AttackScenario {
    std::vector<int> attacked;                 // W, 1-based sensor indices
    std::vector<SignalSpec> attack;            // one per sensor
    std::vector<SignalSpec> noise;             // one per sensor
    std::vector<SignalSpec> disturbance;       // one per disturbance channel
    std::size_t horizon = 0;                   // steps; records cover k = 0..horizon
    std::uint64_t seed = 0;
    std::optional<int> claimed_q;              // when set, card(W) <= q < p/2 is enforced
    double divergence_ceiling = 1e12;

    double noise_bound() const {
        double b = 0.0;
        for (const auto& s : noise) b = std::max(b, signal_bound(s));
        return b;
    }

    double disturbance_bound() const {
        double b = 0.0;
        for (const auto& s : disturbance) b = std::max(b, signal_bound(s));
        return b;
    }

    void validate(const PlantModel& model) const {
        const auto p = static_cast<std::size_t>(model.p);
        if (attack.size() != p) throw ConfigError("scenario: need one attack generator per sensor");
        if (noise.size() != p) throw ConfigError("scenario: need one noise generator per sensor");
        if (disturbance.size() != static_cast<std::size_t>(model.s))
            throw ConfigError("scenario: need one disturbance generator per disturbance channel");
        if (horizon < 1) throw ConfigError("scenario: horizon must be >= 1");
        for (int i : attacked)
            if (i < 1 || i > model.p) throw ConfigError("scenario: attacked sensor index out of range");
        for (std::size_t i = 0; i < p; ++i) {
            const bool in_w = std::find(attacked.begin(), attacked.end(), static_cast<int>(i + 1)) != attacked.end();
            validate_signal(attack[i], "attack " + std::to_string(i + 1));
            validate_signal(noise[i], "noise " + std::to_string(i + 1));
            if (!in_w && !is_zero(attack[i]))
                throw ConfigError("scenario: sensor " + std::to_string(i + 1) +
                                  " is not in W but has a nonzero attack generator");
        }
        for (std::size_t j = 0; j < disturbance.size(); ++j)
            validate_signal(disturbance[j], "disturbance " + std::to_string(j + 1));
        if (claimed_q) {
            const int q = *claimed_q;
            if (!(2 * q < model.p)) throw AssumptionViolated("q < p/2 fails for q=" + std::to_string(q));
            if (static_cast<int>(attacked.size()) > q)
                throw AssumptionViolated("card(W) exceeds q=" + std::to_string(q));
        }
    }
};

struct StepRecord {
    std::size_t k = 0;
    Vector x, u, d, m, a, y;
};

using Trajectory = std::vector<StepRecord>;

/// Input sequence accessor: empty means the zero input.
inline Vector input_at(const std::vector<Vector>& inputs, std::size_t k, int n_u) {
    if (inputs.empty()) return Vector::Zero(n_u);
    if (k >= inputs.size()) throw ConfigError("input sequence shorter than horizon");
    return inputs[k];
}

inline bool exceeds_ceiling(const Vector& x, double ceiling) {
    return !x.allFinite() || x.cwiseAbs().maxCoeff() > ceiling;
}

/// Drive the plant forward from x0 for scenario.horizon steps (horizon + 1 records).
inline Trajectory simulate(const PlantModel& model, const AttackScenario& scenario, const Vector& x0,
                           const std::vector<Vector>& inputs = {}) {
    model.validate();
    scenario.validate(model);
    check_length(x0, model.n, "simulate x0");

    const auto p = static_cast<std::size_t>(model.p);
    std::vector<RngStream> attack_rng, noise_rng, dist_rng;
    for (std::size_t i = 0; i < p; ++i) {
        attack_rng.emplace_back(scenario.seed, "attack_" + std::to_string(i + 1));
        noise_rng.emplace_back(scenario.seed, "noise_" + std::to_string(i + 1));
    }
    for (std::size_t j = 0; j < scenario.disturbance.size(); ++j)
        dist_rng.emplace_back(scenario.seed, "disturbance_" + std::to_string(j + 1));

    Trajectory traj;
    traj.reserve(scenario.horizon + 1);
    Vector x = x0;
    for (std::size_t k = 0; k <= scenario.horizon; ++k) {
        if (exceeds_ceiling(x, scenario.divergence_ceiling)) throw SimulationDiverged("plant state diverged", k);
        StepRecord rec;
        rec.k = k;
        rec.x = x;
        rec.u = input_at(inputs, k, model.n_u);
        rec.d = Vector(model.s);
        for (std::size_t j = 0; j < scenario.disturbance.size(); ++j)
            rec.d(static_cast<Eigen::Index>(j)) = sample_signal(scenario.disturbance[j], k, dist_rng[j]);
        rec.m = Vector(model.p);
        rec.a = Vector(model.p);
        for (std::size_t i = 0; i < p; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            rec.m(ii) = sample_signal(scenario.noise[i], k, noise_rng[i]);
            rec.a(ii) = sample_signal(scenario.attack[i], k, attack_rng[i]);
        }
        rec.y = measure(model, rec.x, rec.u, rec.m, rec.a);
        if (k < scenario.horizon) x = step_plant(model, rec.x, rec.u, rec.d, k);
        traj.push_back(std::move(rec));
    }
    return traj;
}

}  // namespace resest
