#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "resest/combinatorics.hpp"
#include "resest/errors.hpp"
#include "resest/linalg.hpp"
#include "resest/observers.hpp"

namespace resest {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// pi_J = max over S in contained[j] of |x^_J - x^_S|. `estimates` is aligned
/// with bank.all() (J-class first, then S-class). Non-finite results map to +inf.
inline double compute_pi(const BankIndex& bank, std::size_t j, const std::vector<Vector>& estimates) {
    if (j >= bank.J_list.size()) throw ConsistencyError("compute_pi: J index out of range");
    if (estimates.size() != bank.observer_count()) throw ConsistencyError("compute_pi: bank frame is incomplete");
    const Vector& xj = estimates[j];
    double pi = 0.0;
    for (std::size_t s : bank.contained[j]) {
        const Vector& xs = estimates[bank.J_list.size() + s];
        if (xs.size() != xj.size()) throw ConsistencyError("compute_pi: estimate missing for " + bank.S_list[s].key());
        const double dev = (xj - xs).norm();
        if (!std::isfinite(dev)) return kInfinity;
        pi = std::max(pi, dev);
    }
    return std::isfinite(pi) ? pi : kInfinity;
}

/// Index of the smallest pi; ties go to the earliest subset. NaN counts as +inf.
inline std::size_t select_sigma(const std::vector<double>& pi, std::size_t k = 0) {
    if (pi.empty()) throw ConsistencyError("select_sigma: empty pi table");
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < pi.size(); ++j) {
        const double v = pi[j];
        if (!std::isfinite(v)) continue;
        if (!best || v < pi[*best]) best = j;
    }
    if (!best) throw EstimatorStarved("every J-class observer has infinite deviation", k);
    return *best;
}

struct EstimatorFrame {
    std::size_t k = 0;
    std::vector<Vector> estimates;   // aligned with BankIndex::all()
    std::vector<bool> diverged;
    std::vector<double> pi;          // aligned with J_list
    std::size_t sigma = 0;           // index into J_list
    Vector x_hat;
    std::optional<double> e_norm;
};

inline EstimatorFrame estimator_step(const BankIndex& bank, std::size_t k, std::vector<Vector> estimates,
                                     std::vector<bool> diverged, const std::optional<Vector>& truth = std::nullopt) {
    EstimatorFrame frame;
    frame.k = k;
    frame.estimates = std::move(estimates);
    frame.diverged = std::move(diverged);
    frame.diverged.resize(frame.estimates.size(), false);
    frame.pi.resize(bank.J_list.size());
    for (std::size_t j = 0; j < bank.J_list.size(); ++j) {
        frame.pi[j] = frame.diverged[j] ? kInfinity : compute_pi(bank, j, frame.estimates);
        for (std::size_t s : bank.contained[j])
            if (frame.diverged[bank.J_list.size() + s]) frame.pi[j] = kInfinity;
    }
    frame.sigma = select_sigma(frame.pi, k);
    frame.x_hat = frame.estimates[frame.sigma];
    if (truth) frame.e_norm = (frame.x_hat - *truth).norm();
    return frame;
}

/// The full bank of J- and S-class observers, stepped in lockstep.
class ObserverBank {
public:
    ObserverBank(BankIndex index, std::vector<std::unique_ptr<Observer>> observers)
        : index_(std::move(index)), observers_(std::move(observers)) {
        const auto all = index_.all();
        if (observers_.size() != all.size()) throw ConfigError("observer bank: wrong number of observers");
        for (std::size_t i = 0; i < all.size(); ++i)
            if (!observers_[i] || !(observers_[i]->subset() == all[i]))
                throw ConfigError("observer bank: observer " + std::to_string(i) + " does not match " + all[i].key());
    }

    ObserverBank(const ObserverBank& other) : index_(other.index_) {
        for (const auto& o : other.observers_) observers_.push_back(o->clone());
    }
    ObserverBank& operator=(const ObserverBank& other) {
        if (this != &other) *this = ObserverBank(other);
        return *this;
    }
    ObserverBank(ObserverBank&&) noexcept = default;
    ObserverBank& operator=(ObserverBank&&) noexcept = default;

    const BankIndex& index() const noexcept { return index_; }
    std::size_t size() const noexcept { return observers_.size(); }
    Observer& at(std::size_t i) { return *observers_.at(i); }
    const Observer& at(std::size_t i) const { return *observers_.at(i); }

    void initialize(const Vector& xhat0) {
        for (auto& o : observers_) o->initialize(xhat0);
    }

    /// Feed y(k), u(k) to every observer and fuse.
    EstimatorFrame step(std::size_t k, const Vector& y, const Vector& u, const std::optional<Vector>& truth = std::nullopt) {
        std::vector<Vector> est;
        std::vector<bool> div;
        est.reserve(observers_.size());
        div.reserve(observers_.size());
        for (auto& o : observers_) {
            auto out = o->observe(select(y, o->subset().zero_based()), u);
            div.push_back(out.diverged);
            est.push_back(std::move(out.estimate));
        }
        return estimator_step(index_, k, std::move(est), std::move(div), truth);
    }

private:
    BankIndex index_;
    std::vector<std::unique_ptr<Observer>> observers_;
};

}  // namespace resest
