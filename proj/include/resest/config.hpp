#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "resest/calibration.hpp"
#include "resest/combinatorics.hpp"
#include "resest/errors.hpp"
#include "resest/estimator.hpp"
#include "resest/linalg.hpp"
#include "resest/model.hpp"
#include "resest/observers.hpp"
#include "resest/plants.hpp"
#include "resest/rng.hpp"

namespace resest {

using json = nlohmann::json;

/// How an initial vector (plant state or observer estimate) is produced.
struct InitialSpec {
    enum class Kind { Zero, Fixed, Normal, Truth };
    Kind kind = Kind::Zero;
    Vector value;
    double mean = 0.0;
    double stddev = 1.0;

    Vector draw(int n, RngStream& rng, const Vector* truth = nullptr) const {
        switch (kind) {
            case Kind::Zero: return Vector::Zero(n);
            case Kind::Fixed: return value;
            case Kind::Normal: {
                Vector v(n);
                for (int i = 0; i < n; ++i) v(i) = rng.normal(mean, stddev);
                return v;
            }
            case Kind::Truth:
                if (!truth) throw ConfigError("initial spec 'truth' needs the true state");
                return *truth;
        }
        return Vector::Zero(n);
    }
};

struct ObserverEntry {
    SubsetIndex subset;
    Matrix K;
    Matrix L;  // reduced: L_J; circle: output injection gain
    std::optional<ISSGainModel> iss;
};

struct ObserverSection {
    std::string family;  // luenberger | reduced | circle
    InitialSpec initial_estimate;
    bool require_certified = true;
    double certify_margin = 1e-3;
    Vector jacobian_point;
    double loop_shift = 0.0;
    std::optional<std::pair<Vector, Vector>> slope_box;
    std::size_t slope_samples = 100000;
    std::vector<ObserverEntry> entries;  // aligned with BankIndex::all()
};

struct IsolationSection {
    bool enabled = false;
    double epsilon = 0.0;
    std::size_t window = 100;
    std::optional<double> m_bar;
    std::optional<double> d_bar;
    std::optional<std::size_t> k_bar_star;
};

struct CalibrationSection {
    std::size_t trials = 100;
    std::size_t horizon = 300;
    std::uint64_t seed = 1000;
    double safety_factor = 1.2;
    double init_error_scale = 1.0;
    double transient_tol = 1e-3;
    std::optional<InitialSpec> initial_state;  // defaults to scenario.initial_state
};

struct ScenarioConfig {
    std::string name;
    std::string source_path;
    std::uint64_t config_hash = 0;
    json document;

    std::shared_ptr<const PlantModel> plant;
    int q = 0;
    BankIndex bank;
    AttackScenario scenario;
    InitialSpec initial_state;
    ObserverSection observers;
    IsolationSection isolation;
    CalibrationSection calibration;
    std::optional<std::string> output_dir;

    double m_bar() const { return isolation.m_bar ? *isolation.m_bar : scenario.noise_bound(); }
    double d_bar() const { return isolation.d_bar ? *isolation.d_bar : scenario.disturbance_bound(); }

    std::vector<std::optional<ISSGainModel>> iss_table() const {
        std::vector<std::optional<ISSGainModel>> out;
        for (const auto& e : observers.entries) out.push_back(e.iss);
        return out;
    }
};

inline std::string hash_hex(std::uint64_t h) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) s[static_cast<std::size_t>(i)] = digits[h & 0xF];
    return s;
}

namespace detail {

/// Accumulates problems with their field paths instead of stopping at the first.
class Problems {
public:
    void add(const std::string& path, const std::string& msg) { items_.push_back(path + ": " + msg); }

    template <class Fn>
    void guard(const std::string& path, Fn&& fn) {
        try {
            fn();
        } catch (const AssumptionViolated& e) {
            assumption_ = true;
            add(path, e.what());
        } catch (const ConfigError& e) {
            add(path, e.what());
        } catch (const json::exception& e) {
            add(path, e.what());
        }
    }

    bool empty() const { return items_.empty(); }
    bool assumption() const { return assumption_; }
    const std::vector<std::string>& items() const { return items_; }

private:
    std::vector<std::string> items_;
    bool assumption_ = false;
};

inline const json& field(const json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
    return obj.at(key);
}

inline std::size_t count(const json& v) {
    if (!v.is_number_unsigned()) throw ConfigError("expected a non-negative integer");
    return v.get<std::size_t>();
}

inline double number(const json& v) {
    if (!v.is_number()) throw ConfigError("expected a number");
    return v.get<double>();
}

inline Matrix matrix(const json& v, const std::string& what) {
    if (!v.is_array()) throw ConfigError("expected a row-major nested array");
    std::vector<std::vector<double>> rows;
    for (const auto& r : v) {
        if (!r.is_array()) throw ConfigError("expected a row-major nested array");
        std::vector<double> row;
        for (const auto& x : r) row.push_back(number(x));
        rows.push_back(std::move(row));
    }
    return matrix_from_rows(rows, what);
}

inline Vector vec(const json& v) {
    if (!v.is_array()) throw ConfigError("expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) out.push_back(number(x));
    return vector_from(out);
}

inline SignalSpec signal(const json& v) {
    const std::string type = field(v, "type").get<std::string>();
    SignalSpec s;
    if (type == "zero") s = ZeroSignal{};
    else if (type == "uniform") s = UniformSignal{number(field(v, "lo")), number(field(v, "hi"))};
    else if (type == "normal") s = NormalSignal{number(field(v, "mean")), number(field(v, "stddev"))};
    else if (type == "constant") s = ConstantSignal{number(field(v, "value"))};
    else if (type == "table") {
        std::vector<double> vals;
        for (const auto& x : field(v, "values")) vals.push_back(number(x));
        s = TableSignal{std::move(vals)};
    } else
        throw ConfigError("unknown generator type '" + type + "'");
    validate_signal(s, "generator");
    return s;
}

/// A single generator object applies to every channel; an array lists one per
/// channel; an object keyed by 1-based channel index leaves the rest at zero.
inline std::vector<SignalSpec> signal_list(const json* v, int count) {
    std::vector<SignalSpec> out(static_cast<std::size_t>(count), ZeroSignal{});
    if (!v || v->is_null()) return out;
    if (v->is_array()) {
        if (static_cast<int>(v->size()) != count)
            throw ConfigError("expected " + std::to_string(count) + " generators, got " + std::to_string(v->size()));
        for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = signal((*v)[static_cast<std::size_t>(i)]);
        return out;
    }
    if (v->is_object() && v->contains("type")) {
        const auto s = signal(*v);
        std::fill(out.begin(), out.end(), s);
        return out;
    }
    if (v->is_object()) {
        for (const auto& [key, spec] : v->items()) {
            int idx = 0;
            try {
                idx = std::stoi(key);
            } catch (const std::exception&) {
                throw ConfigError("channel key '" + key + "' is not an index");
            }
            if (idx < 1 || idx > count) throw ConfigError("channel index " + key + " out of range");
            out[static_cast<std::size_t>(idx - 1)] = signal(spec);
        }
        return out;
    }
    throw ConfigError("expected a generator, an array of generators or an index-keyed object");
}

inline InitialSpec initial(const json& v, int n) {
    InitialSpec s;
    const std::string type = field(v, "type").get<std::string>();
    if (type == "zero") s.kind = InitialSpec::Kind::Zero;
    else if (type == "truth") s.kind = InitialSpec::Kind::Truth;
    else if (type == "fixed") {
        s.kind = InitialSpec::Kind::Fixed;
        s.value = vec(field(v, "value"));
        if (s.value.size() != n) throw ConfigError("fixed initial vector must have length n");
    } else if (type == "normal") {
        s.kind = InitialSpec::Kind::Normal;
        s.mean = v.contains("mean") ? number(v.at("mean")) : 0.0;
        s.stddev = v.contains("stddev") ? number(v.at("stddev")) : 1.0;
        if (s.stddev < 0) throw ConfigError("stddev must be >= 0");
    } else
        throw ConfigError("unknown initial type '" + type + "'");
    return s;
}

inline NonlinearityParams nonlinearity(const json& v) {
    NonlinearityParams p;
    if (v.is_string()) {
        p.name = v.get<std::string>();
        return p;
    }
    p.name = field(v, "name").get<std::string>();
    if (v.contains("scale")) p.scale = number(v.at("scale"));
    if (v.contains("linear")) p.linear = number(v.at("linear"));
    if (v.contains("coefficients"))
        for (const auto& c : v.at("coefficients")) p.coefficients.push_back(number(c));
    return p;
}

inline PlantModel plant(const json& v) {
    const std::string type = field(v, "type").get<std::string>();
    if (type == "registered") return make_registered_plant(field(v, "name").get<std::string>());
    if (type != "lure") throw ConfigError("plant.type must be 'registered' or 'lure'");
    LureStructure s;
    s.A = matrix(field(v, "A"), "plant.A");
    s.G = matrix(field(v, "G"), "plant.G");
    s.H = matrix(field(v, "H"), "plant.H");
    s.C = matrix(field(v, "C"), "plant.C");
    if (v.contains("b")) s.b = vec(v.at("b"));
    if (v.contains("B")) s.B = matrix(v.at("B"), "plant.B");
    if (v.contains("E")) s.E = matrix(v.at("E"), "plant.E");
    const json& nl = field(v, "nonlinearity");
    if (nl.is_array()) {
        for (const auto& e : nl) s.phi.emplace_back(nonlinearity(e));
    } else {
        for (Eigen::Index i = 0; i < s.H.rows(); ++i) s.phi.emplace_back(nonlinearity(nl));
    }
    const int n_u = v.contains("n_u") ? v.at("n_u").get<int>() : static_cast<int>(s.B.cols());
    const int sd = v.contains("s") ? v.at("s").get<int>() : static_cast<int>(s.E.cols());
    std::string name = v.contains("name") ? v.at("name").get<std::string>() : "lure";
    return make_lure_plant(std::move(name), std::move(s), n_u, sd);
}

inline ISSGainModel iss(const json& v) {
    ISSGainModel g;
    g.c = number(field(v, "c"));
    g.lambda = number(field(v, "lambda"));
    g.gamma1 = number(field(v, "gamma1"));
    g.gamma2 = v.contains("gamma2") ? number(v.at("gamma2")) : 0.0;
    g.nu = v.contains("nu") ? number(v.at("nu")) : 0.0;
    g.k_star = v.contains("k_star") ? count(v.at("k_star")) : 0;
    g.validate("iss");
    return g;
}

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace detail

/// Parse and validate a scenario document. Every problem found is reported
/// together in one ValidationError (or AssumptionViolated when q >= p/2).
inline ScenarioConfig parse_config(const std::string& text, const std::string& source = "<memory>") {
    ScenarioConfig cfg;
    cfg.source_path = source;
    cfg.config_hash = fnv1a64(text);
    try {
        cfg.document = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = detail::line_column(text, e.byte);
        throw ValidationError({source + ": JSON parse error at line " + std::to_string(line) + ", column " +
                               std::to_string(col) + ": " + e.what()});
    }
    const json& doc = cfg.document;
    detail::Problems probs;
    if (!doc.is_object()) probs.add("$", "top level must be an object");
    cfg.name = doc.is_object() && doc.contains("name") && doc.at("name").is_string() ? doc.at("name").get<std::string>()
                                                                                     : "scenario";

    probs.guard("plant", [&] { cfg.plant = std::make_shared<const PlantModel>(detail::plant(detail::field(doc, "plant"))); });
    if (!cfg.plant) throw ValidationError(probs.items());
    const PlantModel& pm = *cfg.plant;

    const json empty = json::object();
    const json& sc = doc.contains("scenario") ? doc.at("scenario") : empty;
    if (!doc.contains("scenario")) probs.add("scenario", "missing section");
    probs.guard("scenario.q", [&] {
        cfg.q = detail::field(sc, "q").get<int>();
        cfg.bank = bank_index(pm.p, cfg.q);
    });
    probs.guard("scenario.attacked", [&] {
        if (sc.contains("attacked"))
            for (const auto& i : sc.at("attacked")) cfg.scenario.attacked.push_back(i.get<int>());
        std::sort(cfg.scenario.attacked.begin(), cfg.scenario.attacked.end());
    });
    probs.guard("scenario.attack", [&] {
        cfg.scenario.attack = detail::signal_list(sc.contains("attack") ? &sc.at("attack") : nullptr, pm.p);
    });
    probs.guard("scenario.noise", [&] {
        cfg.scenario.noise = detail::signal_list(sc.contains("noise") ? &sc.at("noise") : nullptr, pm.p);
    });
    probs.guard("scenario.disturbance", [&] {
        cfg.scenario.disturbance =
            detail::signal_list(sc.contains("disturbance") ? &sc.at("disturbance") : nullptr, pm.s);
    });
    probs.guard("scenario.horizon", [&] { cfg.scenario.horizon = detail::count(detail::field(sc, "horizon")); });
    probs.guard("scenario.seed", [&] {
        cfg.scenario.seed = sc.contains("seed") ? static_cast<std::uint64_t>(detail::count(sc.at("seed"))) : 0;
    });
    probs.guard("scenario.divergence_ceiling", [&] {
        if (sc.contains("divergence_ceiling")) cfg.scenario.divergence_ceiling = detail::number(sc.at("divergence_ceiling"));
        if (!(cfg.scenario.divergence_ceiling > 0)) throw ConfigError("must be > 0");
    });
    probs.guard("scenario.initial_state", [&] {
        cfg.initial_state = sc.contains("initial_state") ? detail::initial(sc.at("initial_state"), pm.n)
                                                         : InitialSpec{InitialSpec::Kind::Normal, {}, 0.0, 1.0};
        if (cfg.initial_state.kind == InitialSpec::Kind::Truth) throw ConfigError("the plant state cannot be 'truth'");
    });
    cfg.scenario.claimed_q = cfg.q;
    if (cfg.scenario.attack.size() == static_cast<std::size_t>(pm.p) &&
        cfg.scenario.noise.size() == static_cast<std::size_t>(pm.p))
        probs.guard("scenario", [&] { cfg.scenario.validate(pm); });

    const json& ob = doc.contains("observers") ? doc.at("observers") : empty;
    if (!doc.contains("observers")) probs.add("observers", "missing section");
    auto& os = cfg.observers;
    probs.guard("observers.family", [&] {
        os.family = detail::field(ob, "family").get<std::string>();
        if (os.family != "luenberger" && os.family != "reduced" && os.family != "circle")
            throw ConfigError("must be one of luenberger, reduced, circle");
        if (os.family != "luenberger" && !pm.lure) throw ConfigError("family '" + os.family + "' needs a lure plant");
    });
    probs.guard("observers.initial_estimate", [&] {
        os.initial_estimate = ob.contains("initial_estimate") ? detail::initial(ob.at("initial_estimate"), pm.n) : InitialSpec{};
    });
    probs.guard("observers.require_certified", [&] {
        if (ob.contains("require_certified")) os.require_certified = ob.at("require_certified").get<bool>();
    });
    probs.guard("observers.certify_margin", [&] {
        if (ob.contains("certify_margin")) os.certify_margin = detail::number(ob.at("certify_margin"));
    });
    probs.guard("observers.jacobian_point", [&] {
        os.jacobian_point = ob.contains("jacobian_point") ? detail::vec(ob.at("jacobian_point")) : Vector::Zero(pm.n);
        if (os.jacobian_point.size() != pm.n) throw ConfigError("must have length n");
    });
    probs.guard("observers.loop_shift", [&] {
        if (ob.contains("loop_shift")) os.loop_shift = detail::number(ob.at("loop_shift"));
    });
    probs.guard("observers.slope_box", [&] {
        if (!ob.contains("slope_box")) return;
        const auto& b = ob.at("slope_box");
        Vector lo = detail::vec(detail::field(b, "lo")), hi = detail::vec(detail::field(b, "hi"));
        if (lo.size() != pm.n || hi.size() != pm.n) throw ConfigError("lo and hi must have length n");
        os.slope_box = std::make_pair(lo, hi);
    });
    probs.guard("observers.slope_samples", [&] {
        if (ob.contains("slope_samples")) os.slope_samples = detail::count(ob.at("slope_samples"));
    });

    if (!cfg.bank.J_list.empty()) {
        const json& bundle = ob.contains("bundle") ? ob.at("bundle") : empty;
        if (!ob.contains("bundle")) probs.add("observers.bundle", "missing");
        const auto all = cfg.bank.all();
        for (const auto& sub : all) {
            const std::string key = sub.key();
            const std::string path = "observers.bundle." + key;
            if (!bundle.contains(key)) {
                probs.add("observers.bundle", "missing subset " + key);
                continue;
            }
            ObserverEntry e;
            e.subset = sub;
            const json& entry = bundle.at(key);
            probs.guard(path + ".K", [&] { e.K = detail::matrix(detail::field(entry, "K"), path + ".K"); });
            probs.guard(path + ".L", [&] {
                if (os.family != "luenberger") e.L = detail::matrix(detail::field(entry, "L"), path + ".L");
            });
            probs.guard(path + ".iss", [&] {
                if (entry.contains("iss") && !entry.at("iss").is_null()) e.iss = detail::iss(entry.at("iss"));
            });
            os.entries.push_back(std::move(e));
        }
        if (bundle.is_object())
            for (const auto& [key, _] : bundle.items()) {
                bool known = false;
                for (const auto& sub : all) known = known || sub.key() == key;
                if (!known) probs.add("observers.bundle", "unexpected subset " + key);
            }
    }

    const json& est = doc.contains("estimator") ? doc.at("estimator") : empty;
    probs.guard("estimator", [&] {
        if (est.contains("norm") && est.at("norm") != "euclidean") throw ConfigError("norm is fixed to 'euclidean'");
        if (est.contains("tie_break") && est.at("tie_break") != "lexicographic")
            throw ConfigError("tie_break is fixed to 'lexicographic'");
    });

    const json& iso = doc.contains("isolation") ? doc.at("isolation") : empty;
    auto& is = cfg.isolation;
    probs.guard("isolation", [&] {
        if (iso.contains("enabled")) is.enabled = iso.at("enabled").get<bool>();
        if (iso.contains("epsilon")) is.epsilon = detail::number(iso.at("epsilon"));
        if (iso.contains("window")) is.window = detail::count(iso.at("window"));
        if (iso.contains("m_bar")) is.m_bar = detail::number(iso.at("m_bar"));
        if (iso.contains("d_bar")) is.d_bar = detail::number(iso.at("d_bar"));
        if (iso.contains("k_bar_star") && !iso.at("k_bar_star").is_null()) is.k_bar_star = detail::count(iso.at("k_bar_star"));
        if (is.epsilon < 0) throw ConfigError("epsilon must be >= 0");
        if (is.window < 1) throw ConfigError("window must be >= 1");
    });

    const json& cal = doc.contains("calibration") ? doc.at("calibration") : empty;
    auto& cs = cfg.calibration;
    probs.guard("calibration", [&] {
        if (cal.contains("trials")) cs.trials = detail::count(cal.at("trials"));
        if (cal.contains("horizon")) cs.horizon = detail::count(cal.at("horizon"));
        if (cal.contains("seed")) cs.seed = static_cast<std::uint64_t>(detail::count(cal.at("seed")));
        if (cal.contains("safety_factor")) cs.safety_factor = detail::number(cal.at("safety_factor"));
        if (cal.contains("init_error_scale")) cs.init_error_scale = detail::number(cal.at("init_error_scale"));
        if (cal.contains("transient_tol")) cs.transient_tol = detail::number(cal.at("transient_tol"));
        if (cal.contains("initial_state")) {
            cs.initial_state = detail::initial(cal.at("initial_state"), pm.n);
            if (cs.initial_state->kind == InitialSpec::Kind::Truth) throw ConfigError("initial_state cannot be 'truth'");
        }
        if (cs.safety_factor < 1.0) throw ConfigError("safety_factor must be >= 1");
        if (cs.init_error_scale < 0.0) throw ConfigError("init_error_scale must be >= 0");
    });

    if (doc.contains("output")) {
        probs.guard("output.dir", [&] {
            if (doc.at("output").contains("dir")) cfg.output_dir = doc.at("output").at("dir").get<std::string>();
        });
    }

    if (!probs.empty()) {
        if (probs.assumption()) {
            std::string msg;
            for (const auto& p : probs.items()) msg += (msg.empty() ? "" : "; ") + p;
            throw AssumptionViolated(msg);
        }
        throw ValidationError(probs.items());
    }
    return cfg;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline ScenarioConfig load_config(const std::string& path) { return parse_config(read_file(path), path); }

/// Instantiate one observer from its bundle entry.
inline std::unique_ptr<Observer> make_observer(const ScenarioConfig& cfg, const ObserverEntry& e) {
    std::unique_ptr<Observer> obs;
    const auto& family = cfg.observers.family;
    if (family == "luenberger") obs = std::make_unique<LuenbergerObserver>(cfg.plant, e.subset, e.K);
    else if (family == "reduced") obs = build_reduced_observer(cfg.plant, e.subset, e.L, e.K);
    else if (family == "circle")
        obs = std::make_unique<CircleCriterionObserver>(cfg.plant, e.subset, e.K, e.L, cfg.observers.loop_shift);
    else
        throw ConfigError("unknown observer family '" + family + "'");
    obs->iss = e.iss;
    return obs;
}

inline ObserverBank make_bank(const ScenarioConfig& cfg) {
    std::vector<std::unique_ptr<Observer>> obs;
    std::vector<std::string> problems;
    for (const auto& e : cfg.observers.entries) {
        try {
            obs.push_back(make_observer(cfg, e));
        } catch (const ConfigError& ex) {
            problems.push_back(ex.what());
        }
    }
    if (!problems.empty()) throw ValidationError(problems);
    return ObserverBank(cfg.bank, std::move(obs));
}

struct CertificationRecord {
    std::string subset;
    GainCertificate gain;
};

struct CertificationSummary {
    std::vector<CertificationRecord> gains;
    std::optional<SlopeCertificate> slope;
    std::vector<std::string> warnings;

    bool all_pass() const {
        for (const auto& g : gains)
            if (!g.gain.pass) return false;
        return !slope || slope->pass;
    }
};

/// Gain and slope certificates for the whole bank. With require_certified a
/// failure is a validation error; otherwise it is reported as a warning.
inline CertificationSummary certify_bank(const ScenarioConfig& cfg, const ObserverBank& bank) {
    CertificationSummary sum;
    for (std::size_t i = 0; i < bank.size(); ++i) {
        const auto& o = bank.at(i);
        auto cert = o.certify(cfg.observers.jacobian_point, cfg.observers.certify_margin);
        if (!cert.pass)
            sum.warnings.push_back("observer " + o.subset().key() + " fails the gain certificate (spectral radius " +
                                   std::to_string(cert.spectral_radius) + ")");
        sum.gains.push_back({o.subset().key(), cert});
    }
    if (cfg.observers.family == "circle") {
        Vector lo = Vector::Constant(cfg.plant->n, -10.0), hi = Vector::Constant(cfg.plant->n, 10.0);
        if (cfg.observers.slope_box) std::tie(lo, hi) = *cfg.observers.slope_box;
        const auto& circle = dynamic_cast<const CircleCriterionObserver&>(bank.at(0));
        sum.slope = circle.slope_certificate(lo, hi, cfg.observers.slope_samples, cfg.scenario.seed);
        if (!sum.slope->pass)
            sum.warnings.push_back("slope condition fails on channel " + std::to_string(sum.slope->channel + 1) +
                                   " at (" + std::to_string(sum.slope->v) + ", " + std::to_string(sum.slope->w) + ")");
    }
    if (cfg.observers.require_certified && !sum.warnings.empty()) throw ValidationError(sum.warnings);
    return sum;
}

/// Full load-time validation: parse, build every observer, certify.
inline CertificationSummary validate_config(const ScenarioConfig& cfg) {
    auto bank = make_bank(cfg);
    return certify_bank(cfg, bank);
}

}  // namespace resest
