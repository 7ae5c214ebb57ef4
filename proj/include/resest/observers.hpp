#pragma once

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "resest/combinatorics.hpp"
#include "resest/errors.hpp"
#include "resest/linalg.hpp"
#include "resest/model.hpp"
#include "resest/plants.hpp"
#include "resest/rng.hpp"

namespace resest {

/// Linear-coefficient ISS bound for one observer:
///   |e(k)| <= c lambda^k |e(0)| + gamma1 mbar + gamma2 dbar + nu.
struct ISSGainModel {
    double c = 1.0;
    double lambda = 0.5;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double nu = 0.0;
    std::size_t k_star = 0;

    double transient(double e0, std::size_t k) const { return c * std::pow(lambda, static_cast<double>(k)) * e0; }
    double steady(double mbar, double dbar) const { return gamma1 * mbar + gamma2 * dbar + nu; }

    void validate(const std::string& who) const {
        if (!(lambda > 0.0 && lambda < 1.0)) throw ConfigError(who + ": iss.lambda must lie in (0,1)");
        if (!(c >= 0.0) || !(gamma1 >= 0.0) || !(gamma2 >= 0.0) || !(nu >= 0.0))
            throw ConfigError(who + ": iss gains must be >= 0");
        if (!std::isfinite(c) || !std::isfinite(gamma1) || !std::isfinite(gamma2) || !std::isfinite(nu))
            throw ConfigError(who + ": iss gains must be finite");
    }
};

enum class GainKind { Full, Reduced };

struct GainCertificate {
    double spectral_radius = 0.0;
    bool pass = false;
};

/// Spectral radius of the linearised error matrix A - K C against 1 - margin.
/// For reduced observers pass A_L and the equivalent output matrix C^J A N.
inline GainCertificate certify_linear_gain(const Matrix& A, const Matrix& C_J, const Matrix& K, GainKind kind = GainKind::Full,
                                           double margin = 1e-3) {
    (void)kind;
    if (A.rows() != A.cols()) throw ConfigError("certify_linear_gain: A must be square");
    if (K.rows() != A.rows() || K.cols() != C_J.rows() || C_J.cols() != A.cols())
        throw ConfigError("certify_linear_gain: inconsistent dimensions");
    GainCertificate cert;
    cert.spectral_radius = spectral_radius(A - K * C_J);
    cert.pass = cert.spectral_radius < 1.0 - margin;
    return cert;
}

struct SlopeCertificate {
    bool pass = true;
    std::size_t checked = 0;
    // witness, meaningful when pass == false
    std::size_t channel = 0;
    double v = 0.0;
    double w = 0.0;
    double quotient = 0.0;
};

/// Sampled check of (f_i(v) - f_i(w)) / (v - w) >= 0 for every channel i.
/// The box is given in x-space; each channel samples over the interval that
/// row i of H maps the box onto.
inline SlopeCertificate check_slope_condition(const std::vector<ScalarNonlinearity>& f, const Matrix& H,
                                              std::size_t samples, const Vector& lo, const Vector& hi,
                                              std::uint64_t seed = 0) {
    if (samples < 2) throw ConfigError("check_slope_condition: samples must be >= 2");
    if (static_cast<Eigen::Index>(f.size()) != H.rows()) throw ConfigError("check_slope_condition: one map per row of H");
    if (lo.size() != H.cols() || hi.size() != H.cols()) throw ConfigError("check_slope_condition: box dimension");
    SlopeCertificate cert;
    RngStream rng(seed, "slope_check");
    for (Eigen::Index i = 0; i < H.rows(); ++i) {
        double vlo = 0.0, vhi = 0.0;
        for (Eigen::Index j = 0; j < H.cols(); ++j) {
            const double a = H(i, j) * lo(j), b = H(i, j) * hi(j);
            vlo += std::min(a, b);
            vhi += std::max(a, b);
        }
        if (!(vlo < vhi)) continue;
        const auto& fi = f[static_cast<std::size_t>(i)];
        for (std::size_t s = 0; s < samples; ++s) {
            const double v = rng.uniform(vlo, vhi), w = rng.uniform(vlo, vhi);
            if (std::abs(v - w) < 1e-12) continue;
            const double qt = (fi(v) - fi(w)) / (v - w);
            ++cert.checked;
            if (qt < -1e-12) {
                cert.pass = false;
                cert.channel = static_cast<std::size_t>(i);
                cert.v = v;
                cert.w = w;
                cert.quotient = qt;
                return cert;
            }
        }
    }
    return cert;
}

/// Scalar convenience form on an interval of the argument.
inline SlopeCertificate check_slope_condition(const ScalarNonlinearity& f, double lo, double hi, std::size_t samples,
                                              std::uint64_t seed = 0) {
    Matrix H = Matrix::Ones(1, 1);
    return check_slope_condition({f}, H, samples, Vector::Constant(1, lo), Vector::Constant(1, hi), seed);
}

struct ObserverOutput {
    Vector estimate;
    bool diverged = false;
};

/// One member of the bank. observe(y^J(k), u(k)) returns the estimate of x(k).
class Observer {
public:
    explicit Observer(SubsetIndex J) : subset_(std::move(J)) {}
    virtual ~Observer() = default;

    const SubsetIndex& subset() const noexcept { return subset_; }

    virtual std::string family() const = 0;
    virtual std::size_t state_size() const = 0;
    virtual void initialize(const Vector& xhat0) = 0;
    virtual ObserverOutput observe(const Vector& y_J, const Vector& u) = 0;
    virtual std::unique_ptr<Observer> clone() const = 0;
    /// Linearised certificate at the operating point x_point.
    virtual GainCertificate certify(const Vector& x_point, double margin) const = 0;

    std::optional<ISSGainModel> iss;

protected:
    void check_measurement(const Vector& y_J) const {
        if (y_J.size() != static_cast<Eigen::Index>(subset_.size()))
            throw ConfigError("observer " + subset_.key() + ": measurement slice has wrong length");
    }

private:
    SubsetIndex subset_;
};

/// x^+ = f(x^, u) + K (y^J - h^J(x^, u)).
class LuenbergerObserver final : public Observer {
public:
    LuenbergerObserver(std::shared_ptr<const PlantModel> plant, SubsetIndex J, Matrix K)
        : Observer(std::move(J)), plant_(std::move(plant)), K_(std::move(K)), rows_(subset().zero_based()) {
        if (K_.rows() != plant_->n || K_.cols() != static_cast<Eigen::Index>(subset().size()))
            throw ConfigError("observer " + subset().key() + ": K must be n x card(J)");
        xhat_ = Vector::Zero(plant_->n);
    }

    std::string family() const override { return "luenberger"; }
    std::size_t state_size() const override { return static_cast<std::size_t>(plant_->n); }

    void initialize(const Vector& xhat0) override {
        check_length(xhat0, plant_->n, "observer initial estimate");
        xhat_ = xhat0;
        k_ = 0;
    }

    ObserverOutput observe(const Vector& y_J, const Vector& u) override {
        check_measurement(y_J);
        ObserverOutput out{xhat_, !xhat_.allFinite()};
        const Vector d = Vector::Zero(plant_->s);
        const Vector innovation = y_J - select(plant_->output(xhat_, u), rows_);
        xhat_ = plant_->dynamics(xhat_, u, d, k_) + K_ * innovation;
        ++k_;
        return out;
    }

    std::unique_ptr<Observer> clone() const override { return std::make_unique<LuenbergerObserver>(*this); }

    GainCertificate certify(const Vector& x_point, double margin) const override {
        const Vector u = Vector::Zero(plant_->n_u), d = Vector::Zero(plant_->s);
        const Matrix A = numeric_jacobian([&](const Vector& x) { return plant_->dynamics(x, u, d, 0); }, x_point);
        const Matrix C = numeric_jacobian([&](const Vector& x) { return select(plant_->output(x, u), rows_); }, x_point);
        return certify_linear_gain(A, C, K_, GainKind::Full, margin);
    }

    const Matrix& K() const noexcept { return K_; }

private:
    std::shared_ptr<const PlantModel> plant_;
    Matrix K_;
    std::vector<int> rows_;
    Vector xhat_;
    std::size_t k_ = 0;
};

/// Observer for x^+ = A x + G f(H x) + rho with nondecreasing f:
///   x^+ = A x^ + G f(H x^ + K r) + L r + rho,   r = C^J x^ - y^J.
/// A nonzero loop_shift s rewrites the same plant as (A - s G H, f + s v) so
/// that a nonlinearity with slope bounded below by -s becomes monotone.
class CircleCriterionObserver final : public Observer {
public:
    CircleCriterionObserver(std::shared_ptr<const PlantModel> plant, SubsetIndex J, Matrix K, Matrix L,
                            double loop_shift = 0.0)
        : Observer(std::move(J)), plant_(std::move(plant)), K_(std::move(K)), L_(std::move(L)), shift_(loop_shift) {
        if (!plant_->lure) throw ConfigError("observer " + subset().key() + ": circle-criterion family needs a Lur'e plant");
        const auto& s = *plant_->lure;
        const auto card = static_cast<Eigen::Index>(subset().size());
        if (K_.rows() != s.H.rows() || K_.cols() != card)
            throw ConfigError("observer " + subset().key() + ": K must be r x card(J)");
        if (L_.rows() != plant_->n || L_.cols() != card)
            throw ConfigError("observer " + subset().key() + ": L must be n x card(J)");
        A_ = s.A - shift_ * s.G * s.H;
        for (const auto& f : s.phi) phi_.push_back(f.shifted(shift_));
        C_ = select_rows(s.C, subset().zero_based());
        xhat_ = Vector::Zero(plant_->n);
    }

    std::string family() const override { return "circle"; }
    std::size_t state_size() const override { return static_cast<std::size_t>(plant_->n); }

    void initialize(const Vector& xhat0) override {
        check_length(xhat0, plant_->n, "observer initial estimate");
        xhat_ = xhat0;
    }

    ObserverOutput observe(const Vector& y_J, const Vector& u) override {
        check_measurement(y_J);
        ObserverOutput out{xhat_, !xhat_.allFinite()};
        const auto& s = *plant_->lure;
        const Vector r = C_ * xhat_ - y_J;
        Vector next = A_ * xhat_ + s.G * apply(s.H * xhat_ + K_ * r) + L_ * r + s.b;
        if (s.B.cols() > 0) next += s.B * u;
        xhat_ = std::move(next);
        return out;
    }

    std::unique_ptr<Observer> clone() const override { return std::make_unique<CircleCriterionObserver>(*this); }

    GainCertificate certify(const Vector& x_point, double margin) const override {
        const auto& s = *plant_->lure;
        const Vector v = s.H * x_point;
        Matrix slope = Matrix::Zero(v.size(), v.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            const auto& f = phi_[static_cast<std::size_t>(i)];
            const double h = 1e-6 * std::max(1.0, std::abs(v(i)));
            slope(i, i) = (f(v(i) + h) - f(v(i) - h)) / (2.0 * h);
        }
        // e+ = (A + G S H) e + (L + G S K) C e, written as A_eff - K_eff C.
        const Matrix A_eff = A_ + s.G * slope * s.H;
        const Matrix K_eff = -(L_ + s.G * slope * K_);
        return certify_linear_gain(A_eff, C_, K_eff, GainKind::Full, margin);
    }

    /// Slope certificate for the (shifted) nonlinearity over an x-space box.
    SlopeCertificate slope_certificate(const Vector& lo, const Vector& hi, std::size_t samples,
                                       std::uint64_t seed = 0) const {
        return check_slope_condition(phi_, plant_->lure->H, samples, lo, hi, seed);
    }

    double loop_shift() const noexcept { return shift_; }

private:
    Vector apply(const Vector& v) const {
        Vector out(v.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = phi_[static_cast<std::size_t>(i)](v(i));
        return out;
    }

    std::shared_ptr<const PlantModel> plant_;
    Matrix K_, L_, A_, C_;
    double shift_;
    std::vector<ScalarNonlinearity> phi_;
    Vector xhat_;
};

/// Reduced-order observer on zeta = L_J x for x^+ = A x + f(x), y = C x:
///   z^+ = A_L z + L_J phi(z, y) + B_L y + K (y^+ - C^J x^pred),   x^ = N z + M y.
/// x^pred is the model prediction A x^ + f(x^) made from the previous estimate.
class ReducedOrderObserver final : public Observer {
public:
    ReducedOrderObserver(std::shared_ptr<const PlantModel> plant, SubsetIndex J, Matrix L, Matrix K, Matrix N, Matrix M)
        : Observer(std::move(J)), plant_(std::move(plant)), L_(std::move(L)), K_(std::move(K)), N_(std::move(N)),
          M_(std::move(M)) {
        const Matrix& A = plant_->lure->A;
        C_ = select_rows(plant_->lure->C, subset().zero_based());
        A_L_ = L_ * A * N_;
        B_L_ = L_ * A * M_;
        z_ = Vector::Zero(L_.rows());
    }

    std::string family() const override { return "reduced"; }
    std::size_t state_size() const override { return static_cast<std::size_t>(L_.rows()); }

    void initialize(const Vector& xhat0) override {
        check_length(xhat0, plant_->n, "observer initial estimate");
        z_ = L_ * xhat0;
        has_prev_ = false;
        k_ = 0;
    }

    ObserverOutput observe(const Vector& y_J, const Vector& u) override {
        check_measurement(y_J);
        if (has_prev_) {
            const Vector xp = N_ * z_ + M_ * y_prev_;
            const Vector d = Vector::Zero(plant_->s);
            const Vector phi = plant_->dynamics(xp, u_prev_, d, k_) - plant_->lure->A * xp;
            const Vector pred = plant_->lure->A * xp + phi;
            z_ = A_L_ * z_ + L_ * phi + B_L_ * y_prev_ + K_ * (y_J - C_ * pred);
            ++k_;
        }
        y_prev_ = y_J;
        u_prev_ = u;
        has_prev_ = true;
        Vector xhat = N_ * z_ + M_ * y_J;
        const bool bad = !xhat.allFinite();
        return {std::move(xhat), bad};
    }

    std::unique_ptr<Observer> clone() const override { return std::make_unique<ReducedOrderObserver>(*this); }

    GainCertificate certify(const Vector& x_point, double margin) const override {
        const Vector u = Vector::Zero(plant_->n_u), d = Vector::Zero(plant_->s);
        const Matrix A = numeric_jacobian([&](const Vector& x) { return plant_->dynamics(x, u, d, 0); }, x_point);
        return certify_linear_gain(L_ * A * N_, C_ * A * N_, K_, GainKind::Reduced, margin);
    }

    const Matrix& N() const noexcept { return N_; }
    const Matrix& M() const noexcept { return M_; }
    const Matrix& L() const noexcept { return L_; }
    const Matrix& C_J() const noexcept { return C_; }
    const Matrix& A_L() const noexcept { return A_L_; }
    const Matrix& B_L() const noexcept { return B_L_; }

    /// max |N L + M C^J - I| entry.
    double reconstruction_residual() const {
        const auto n = N_.rows();
        return (N_ * L_ + M_ * C_ - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    }

private:
    std::shared_ptr<const PlantModel> plant_;
    Matrix L_, K_, N_, M_, C_, A_L_, B_L_;
    Vector z_, y_prev_, u_prev_;
    bool has_prev_ = false;
    std::size_t k_ = 0;
};

/// Build a reduced-order observer: invert [L_J; C^J] and verify x = N (L x) + M (C^J x).
inline std::unique_ptr<ReducedOrderObserver> build_reduced_observer(std::shared_ptr<const PlantModel> plant,
                                                                    const SubsetIndex& J, const Matrix& L_J,
                                                                    const Matrix& K_J, double condition_cap = 1e12) {
    const std::string who = "observer " + J.key();
    if (!plant->lure) throw ConfigError(who + ": reduced-order family needs a plant with linear part A and output C");
    const int n = plant->n;
    const auto card = static_cast<Eigen::Index>(J.size());
    if (L_J.rows() != n - card || L_J.cols() != n) throw ConfigError(who + ": L must be (n - card(J)) x n");
    if (K_J.rows() != n - card || K_J.cols() != card) throw ConfigError(who + ": K must be (n - card(J)) x card(J)");
    const Matrix C_J = select_rows(plant->lure->C, J.zero_based());
    Matrix stack(n, n);
    stack << L_J, C_J;
    Eigen::JacobiSVD<Matrix> svd(stack);
    const auto sv = svd.singularValues();
    const double smin = sv(sv.size() - 1), smax = sv(0);
    if (!(smin > 0.0) || smax / smin > condition_cap)
        throw ConfigError(who + ": [L; C^J] is singular or ill-conditioned");
    const Matrix inv = stack.inverse();
    Matrix N = inv.leftCols(n - card);
    Matrix M = inv.rightCols(card);

    RngStream rng(0, "reconstruction_" + J.key());
    for (int t = 0; t < n; ++t) {
        Vector x(n);
        for (int i = 0; i < n; ++i) x(i) = rng.normal(0.0, 1.0);
        const Vector back = N * (L_J * x) + M * (C_J * x);
        if ((back - x).norm() > 1e-8 * std::max(1.0, x.norm()))
            throw ConfigError(who + ": block-inverse reconstruction check failed");
    }
    return std::make_unique<ReducedOrderObserver>(std::move(plant), J, L_J, K_J, std::move(N), std::move(M));
}

}  // namespace resest
