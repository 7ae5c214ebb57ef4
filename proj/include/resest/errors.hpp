#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace resest {

/// Malformed or inconsistent input: dimensions, missing subsets, bad generator specs.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The redundancy assumption card(W) <= q < p/2 cannot hold for the requested bank.
class AssumptionViolated : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Collects every validation problem found while loading a config.
class ValidationError : public ConfigError {
public:
    explicit ValidationError(std::vector<std::string> problems)
        : ConfigError(join(problems)), problems_(std::move(problems)) {}

    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& items) {
        std::string out;
        for (const auto& s : items) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out;
    }

    std::vector<std::string> problems_;
};

/// Base for failures that happen while a run is in progress and carry the step index.
class RuntimeFailure : public std::runtime_error {
public:
    RuntimeFailure(const std::string& what, std::size_t step)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"), base_(what), step_(step) {}

    std::size_t step() const noexcept { return step_; }
    /// Message without the step suffix.
    const std::string& base() const noexcept { return base_; }

private:
    std::string base_;
    std::size_t step_;
};

class SimulationDiverged : public RuntimeFailure {
public:
    using RuntimeFailure::RuntimeFailure;
};

/// Every J-class observer reported a non-finite deviation at the same step.
class EstimatorStarved : public RuntimeFailure {
public:
    using RuntimeFailure::RuntimeFailure;
};

class CalibrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Internal invariant broken (e.g. an estimate missing from a bank frame).
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace resest
