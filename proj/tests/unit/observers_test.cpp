#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

using namespace resest;
using testing_support::bundled;

namespace {

/// Gelfand-formula check: ||M^k||^(1/k) for large k, an independent route to the spectral radius.
double gelfand_radius(const Matrix& M, int k = 400) {
    Matrix P = Matrix::Identity(M.rows(), M.cols());
    double log_scale = 0.0;
    for (int i = 0; i < k; ++i) {
        P = P * M;
        const double n = P.norm();
        if (n == 0.0) return 0.0;
        P /= n;
        log_scale += std::log(n);
    }
    return std::exp(log_scale / k);
}

/// Power iteration on a symmetric matrix.
double power_iteration(const Matrix& M) {
    Vector v = Vector::Ones(M.rows());
    double lambda = 0.0;
    for (int i = 0; i < 5000; ++i) {
        Vector w = M * v;
        lambda = w.norm() / v.norm();
        v = w.normalized();
    }
    return lambda;
}

Vector v2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

}  // namespace

TEST(CertifyLinearGain, StableDiagonal) {
    const auto c = certify_linear_gain(0.5 * Matrix::Identity(2, 2), Matrix::Ones(1, 2), Matrix::Zero(2, 1));
    EXPECT_NEAR(c.spectral_radius, 0.5, 1e-12);
    EXPECT_TRUE(c.pass);
}

TEST(CertifyLinearGain, MarginalIdentityFails) {
    const auto c = certify_linear_gain(Matrix::Identity(2, 2), Matrix::Ones(1, 2), Matrix::Zero(2, 1));
    EXPECT_NEAR(c.spectral_radius, 1.0, 1e-12);
    EXPECT_FALSE(c.pass);
}

TEST(CertifyLinearGain, DimensionMismatchIsConfigError) {
    EXPECT_THROW(certify_linear_gain(Matrix::Identity(2, 2), Matrix::Ones(1, 2), Matrix::Zero(3, 1)), ConfigError);
}

TEST(SpectralRadius, AgreesWithPowerIterationOnSymmetricMatrices) {
    RngStream g(5, "sym");
    for (int c = 0; c < 50; ++c) {
        const int n = 2 + c % 5;
        Matrix A(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = g.normal(0, 1);
        const Matrix S = A + A.transpose();
        EXPECT_NEAR(spectral_radius(S), power_iteration(S), 1e-6 * std::max(1.0, power_iteration(S)));
    }
}

TEST(CertifyLinearGain, Example3BundlePassesForAllFifteenObservers) {
    const auto cfg = bundled("example3");
    const auto bank = make_bank(cfg);
    ASSERT_EQ(bank.size(), 15u);
    const auto& s = *cfg.plant->lure;
    for (std::size_t i = 0; i < bank.size(); ++i) {
        const auto cert = bank.at(i).certify(cfg.observers.jacobian_point, 1e-3);
        EXPECT_TRUE(cert.pass) << bank.at(i).subset().key();
        // Independent error matrix at the operating point: slope of sin(v) + shift*v is cos(pi) + 1 = 0,
        // so the linear part is (A - shift G H) + L C.
        const auto& e = cfg.observers.entries[i];
        const Matrix C = select_rows(s.C, e.subset.zero_based());
        const Matrix M = s.A - cfg.observers.loop_shift * s.G * s.H + e.L * C;
        const double ref = gelfand_radius(M);
        EXPECT_LT(ref, 1.0);
        EXPECT_NEAR(cert.spectral_radius, ref, 2e-2) << e.subset.key();
    }
}

TEST(SlopeCondition, SinOnSmallBoxPasses) {
    EXPECT_TRUE(check_slope_condition(testing_support::named("sin"), -0.4, 0.4, 100000).pass);
}

TEST(SlopeCondition, IdentityPassesAnywhere) {
    EXPECT_TRUE(check_slope_condition(testing_support::named("identity"), -1e6, 1e6, 10000).pass);
}

TEST(SlopeCondition, NegationFailsWithWitness) {
    NonlinearityParams p;
    p.name = "identity";
    p.scale = -1;
    const auto cert = check_slope_condition(ScalarNonlinearity(p), -1, 1, 1000);
    ASSERT_FALSE(cert.pass);
    EXPECT_LT(cert.quotient, 0.0);
    EXPECT_NE(cert.v, cert.w);
    EXPECT_NEAR(cert.quotient, -1.0, 1e-9);
}

TEST(SlopeCondition, TooFewSamplesIsConfigError) {
    EXPECT_THROW(check_slope_condition(testing_support::named("sin"), -1, 1, 1), ConfigError);
}

TEST(SlopeCondition, ShiftedSinIsMonotoneOnWideBox) {
    const auto cfg = bundled("example3");
    const auto bank = make_bank(cfg);
    const auto& obs = dynamic_cast<const CircleCriterionObserver&>(bank.at(0));
    EXPECT_TRUE(obs.slope_certificate(Vector::Constant(2, -50), Vector::Constant(2, 50), 100000).pass);
    EXPECT_FALSE(check_slope_condition(cfg.plant->lure->phi, cfg.plant->lure->H, 100000, Vector::Constant(2, -5),
                                       Vector::Constant(2, 5))
                     .pass);
}

TEST(ReducedObserver, Example2FullSetUsesSelectorColumns) {
    auto cfg = bundled("example2");
    Matrix L = Matrix::Zero(1, 4);
    L(0, 0) = 1;
    const auto obs = build_reduced_observer(cfg.plant, SubsetIndex({1, 2, 3}), L, Matrix::Zero(1, 3));
    // [L; C] is the identity, so N = e1 and M = [e2 e3 e4].
    Matrix expected_N = Matrix::Zero(4, 1);
    expected_N(0, 0) = 1;
    Matrix expected_M = Matrix::Zero(4, 3);
    expected_M(1, 0) = expected_M(2, 1) = expected_M(3, 2) = 1;
    EXPECT_TRUE(obs->N().isApprox(expected_N, 1e-15));
    EXPECT_TRUE(obs->M().isApprox(expected_M, 1e-15));
    EXPECT_LE(obs->reconstruction_residual(), 1e-8);
}

TEST(ReducedObserver, PermutedStackStillReconstructs) {
    auto cfg = bundled("example2");
    Matrix L = Matrix::Zero(2, 4);
    L(0, 3) = 1;
    L(1, 0) = 2;
    const auto obs = build_reduced_observer(cfg.plant, SubsetIndex({1, 2}, SubsetClass::J), L, Matrix::Zero(2, 2));
    EXPECT_LE(obs->reconstruction_residual(), 1e-8);
    EXPECT_TRUE(obs->A_L().isApprox(L * cfg.plant->lure->A * obs->N()));
    EXPECT_TRUE(obs->B_L().isApprox(L * cfg.plant->lure->A * obs->M()));
}

TEST(ReducedObserver, DependentLIsRejectedNamingTheSubset) {
    auto cfg = bundled("example2");
    Matrix L = Matrix::Zero(2, 4);
    L(0, 0) = 1;
    L(1, 1) = 1;  // x2 is already measured by sensor 1
    try {
        build_reduced_observer(cfg.plant, SubsetIndex({1, 2}, SubsetClass::J), L, Matrix::Zero(2, 2));
        FAIL() << "expected a construction error";
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("J:1,2"), std::string::npos);
    }
}

TEST(ReducedObserver, Example2AttackFreeErrorVanishes) {
    auto cfg = bundled("example2");
    for (const auto& e : cfg.observers.entries) {
        auto obs = make_observer(cfg, e);
        Vector x(4);
        x << 0.7, -1.2, 0.4, 2.0;
        obs->initialize(Vector::Zero(4));
        double first = 0, last = 0;
        for (std::size_t k = 0; k < 200; ++k) {
            const auto out = obs->observe(select(cfg.plant->output(x, Vector(0)), e.subset.zero_based()), Vector(0));
            const double err = (out.estimate - x).norm();
            if (k == 0) first = err;
            last = err;
            x = cfg.plant->dynamics(x, Vector(0), Vector(0), k);
        }
        EXPECT_GT(first, 0.1);
        EXPECT_LT(last, 1e-9) << e.subset.key();
    }
}

TEST(LuenbergerObserver, AttackFreeFromTruthStaysExact) {
    const auto cfg = bundled("example1");
    for (const auto& e : cfg.observers.entries) {
        auto obs = make_observer(cfg, e);
        Vector x = v2(0.3, -0.2);
        obs->initialize(x);
        for (std::size_t k = 0; k < 50; ++k) {
            const auto out = obs->observe(select(cfg.plant->output(x, Vector(0)), e.subset.zero_based()), Vector(0));
            ASSERT_LE((out.estimate - x).norm(), 1e-14) << e.subset.key() << " k=" << k;
            x = cfg.plant->dynamics(x, Vector(0), Vector(0), k);
        }
    }
}

TEST(Observer, WrongSliceLengthIsConfigError) {
    const auto cfg = bundled("example1");
    auto obs = make_observer(cfg, cfg.observers.entries[0]);
    EXPECT_THROW(obs->observe(Vector::Zero(3), Vector(0)), ConfigError);
}

TEST(Observer, NonFiniteStateIsFlaggedNotThrown) {
    const auto cfg = bundled("example1");
    auto obs = make_observer(cfg, cfg.observers.entries[0]);
    obs->initialize(v2(NAN, 0));
    const auto out = obs->observe(Vector::Zero(2), Vector(0));
    EXPECT_TRUE(out.diverged);
}

TEST(CircleObserver, Example3FullSetFollowsFittedEnvelope) {
    const auto cfg = bundled("example3");
    const auto& entry = cfg.observers.entries[0];  // J:1,2,3
    ASSERT_EQ(entry.subset.key(), "J:1,2,3");
    // Reference simulation, then an exponential envelope fitted to it.
    auto run = [&](const Vector& x0, const Vector& xh0) {
        auto obs = make_observer(cfg, entry);
        obs->initialize(xh0);
        Vector x = x0;
        std::vector<double> err;
        for (std::size_t k = 0; k < 80; ++k) {
            const auto out = obs->observe(select(cfg.plant->output(x, Vector(0)), entry.subset.zero_based()), Vector(0));
            err.push_back((out.estimate - x).norm());
            x = cfg.plant->dynamics(x, Vector(0), Vector(0), k);
        }
        return err;
    };
    const auto ref = run(v2(0.5, -0.3), v2(0, 0));
    double lambda = 0.0;
    for (std::size_t k = 1; k < 20; ++k)
        if (ref[k] > 1e-12) lambda = std::max(lambda, std::pow(ref[k] / ref[0], 1.0 / static_cast<double>(k)));
    ASSERT_LT(lambda, 1.0);
    double c = 1.0;
    for (std::size_t k = 0; k < ref.size(); ++k) c = std::max(c, ref[k] / (ref[0] * std::pow(lambda, double(k))));
    const auto fresh = run(v2(-0.4, 0.6), v2(0.1, 0.2));
    for (std::size_t k = 0; k < fresh.size(); ++k)
        EXPECT_LE(fresh[k], 1.5 * c * std::pow(lambda, double(k)) * fresh[0] + 1e-12) << k;
}

TEST(CircleObserver, WrongGainShapeIsConfigError) {
    const auto cfg = bundled("example3");
    EXPECT_THROW(CircleCriterionObserver(cfg.plant, SubsetIndex({1, 2, 3}), Matrix::Zero(2, 3), Matrix::Zero(2, 3)),
                 ConfigError);
    EXPECT_THROW(CircleCriterionObserver(cfg.plant, SubsetIndex({1, 2, 3}), Matrix::Zero(1, 3), Matrix::Zero(3, 3)),
                 ConfigError);
}
