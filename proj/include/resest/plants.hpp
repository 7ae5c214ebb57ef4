#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "resest/errors.hpp"
#include "resest/linalg.hpp"
#include "resest/model.hpp"

namespace resest {

/// Central-difference Jacobian of a vector map at x.
inline Matrix numeric_jacobian(const std::function<Vector(const Vector&)>& fn, const Vector& x) {
    const Vector f0 = fn(x);
    Matrix jac(f0.size(), x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double h = 1e-6 * std::max(1.0, std::abs(x(j)));
        Vector xp = x, xm = x;
        xp(j) += h;
        xm(j) -= h;
        jac.col(j) = (fn(xp) - fn(xm)) / (2.0 * h);
    }
    return jac;
}

/// Two-state polynomial plant with one quadratic and two linear sensors:
///   x1+ = x1 - x1^3 + x2 x1^2 - x2^2 x1^3,  x2+ = -x2
///   y = (2 x1 + x1^2, x1 + x2, 2 x1 + x2)
inline PlantModel make_example1_plant() {
    PlantModel m;
    m.name = "example1";
    m.n = 2;
    m.p = 3;
    m.dynamics = [](const Vector& x, const Vector&, const Vector&, std::size_t) {
        const double x1 = x(0), x2 = x(1);
        Vector out(2);
        out << x1 - x1 * x1 * x1 + x2 * x1 * x1 - x2 * x2 * x1 * x1 * x1, -x2;
        return out;
    };
    m.output = [](const Vector& x, const Vector&) {
        const double x1 = x(0), x2 = x(1);
        Vector out(3);
        out << 2.0 * x1 + x1 * x1, x1 + x2, 2.0 * x1 + x2;
        return out;
    };
    return m;
}

/// Plants that need a hand-written closure. Everything of the form
/// x+ = A x + G phi(H x) + b is built from matrices instead.
inline const std::map<std::string, std::function<PlantModel()>>& plant_registry() {
    static const std::map<std::string, std::function<PlantModel()>> reg = {
        {"example1", make_example1_plant},
    };
    return reg;
}

inline PlantModel make_registered_plant(const std::string& name) {
    const auto& reg = plant_registry();
    auto it = reg.find(name);
    if (it == reg.end()) throw ConfigError("unknown registered plant '" + name + "'");
    return it->second();
}

}  // namespace resest
