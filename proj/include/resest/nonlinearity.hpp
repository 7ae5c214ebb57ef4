#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "resest/errors.hpp"

namespace resest {

/// Parameters for a registered scalar nonlinearity: phi(v) = scale * base(v) + linear * v.
struct NonlinearityParams {
    std::string name = "identity";
    double scale = 1.0;
    double linear = 0.0;
    std::vector<double> coefficients;  // "polynomial" only: c0 + c1 v + c2 v^2 + ...
};

/// A named scalar map used channel-wise in Lur'e-type plants (f(Hx) with one entry per row of H).
class ScalarNonlinearity {
public:
    ScalarNonlinearity() : ScalarNonlinearity(NonlinearityParams{}) {}

    explicit ScalarNonlinearity(NonlinearityParams params) : params_(std::move(params)) {
        base_ = lookup(params_);
    }

    double operator()(double v) const { return params_.scale * base_(v) + params_.linear * v; }

    /// Same map with `extra` added to the linear term (loop transformation).
    ScalarNonlinearity shifted(double extra) const {
        NonlinearityParams p = params_;
        p.linear += extra;
        return ScalarNonlinearity(std::move(p));
    }

    const NonlinearityParams& params() const noexcept { return params_; }

    static std::vector<std::string> registered_names() {
        return {"identity", "sin", "tanh", "cubic", "polynomial", "zero"};
    }

private:
    static std::function<double(double)> lookup(const NonlinearityParams& p) {
        static const std::map<std::string, std::function<double(double)>> table = {
            {"identity", [](double v) { return v; }},
            {"sin", [](double v) { return std::sin(v); }},
            {"tanh", [](double v) { return std::tanh(v); }},
            {"cubic", [](double v) { return v * v * v; }},
            {"zero", [](double) { return 0.0; }},
        };
        if (p.name == "polynomial") {
            auto c = p.coefficients;
            if (c.empty()) throw ConfigError("nonlinearity 'polynomial' needs coefficients");
            return [c](double v) {
                double acc = 0.0;
                for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * v + *it;
                return acc;
            };
        }
        auto it = table.find(p.name);
        if (it == table.end()) throw ConfigError("unknown nonlinearity '" + p.name + "'");
        return it->second;
    }

    NonlinearityParams params_;
    std::function<double(double)> base_;
};

}  // namespace resest
