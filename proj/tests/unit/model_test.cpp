#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

using namespace resest;
using testing_support::bundled;

namespace {

Vector v2(double a, double b) {
    Vector v(2);
    v << a, b;
    return v;
}

}  // namespace

TEST(StepPlant, Example1UnitStateMapsToOrigin) {
    const auto plant = make_example1_plant();
    const Vector next = step_plant(plant, v2(1, 0), Vector(0), Vector(0), 0);
    EXPECT_DOUBLE_EQ(next(0), 0.0);
    EXPECT_DOUBLE_EQ(next(1), 0.0);
}

TEST(StepPlant, Example1SecondCoordinateAlternates) {
    const auto plant = make_example1_plant();
    Vector x = v2(0, 0.7);
    for (int k = 1; k <= 6; ++k) {
        x = step_plant(plant, x, Vector(0), Vector(0), static_cast<std::size_t>(k));
        EXPECT_DOUBLE_EQ(x(0), 0.0);
        EXPECT_DOUBLE_EQ(x(1), std::pow(-1.0, k) * 0.7);
    }
}

TEST(StepPlant, Example3OriginIsFixedPoint) {
    const auto cfg = bundled("example3");
    const Vector next = step_plant(*cfg.plant, v2(0, 0), Vector(0), Vector(0), 0);
    EXPECT_EQ(next, v2(0, 0));
}

TEST(StepPlant, DimensionMismatchIsConfigError) {
    const auto plant = make_example1_plant();
    EXPECT_THROW(step_plant(plant, Vector::Zero(3), Vector(0), Vector(0), 0), ConfigError);
    EXPECT_THROW(step_plant(plant, Vector::Zero(2), Vector::Zero(1), Vector(0), 0), ConfigError);
}

TEST(StepPlant, IsPure) {
    const auto plant = make_example1_plant();
    const Vector x = v2(0.3, -0.2);
    EXPECT_EQ(step_plant(plant, x, Vector(0), Vector(0), 0), step_plant(plant, x, Vector(0), Vector(0), 5));
}

TEST(Measure, Example3UnitVectorGivesFirstColumn) {
    const auto cfg = bundled("example3");
    const Vector y = measure(*cfg.plant, v2(1, 0), Vector(0), Vector::Zero(5), Vector::Zero(5));
    Vector expected(5);
    expected << 3, 3, 6, 1.2, 1.5;
    EXPECT_TRUE(y.isApprox(expected, 1e-15));
}

TEST(Measure, AttackFreeEqualsOutputMap) {
    const auto plant = make_example1_plant();
    const Vector x = v2(0.4, -1.1);
    EXPECT_EQ(measure(plant, x, Vector(0), Vector::Zero(3), Vector::Zero(3)), plant.output(x, Vector(0)));
}

TEST(Measure, Example4AttackOnThirdSensor) {
    const auto cfg = bundled("example4");
    Vector a = Vector::Zero(4);
    a(2) = 5;
    const Vector y = measure(*cfg.plant, v2(0, 1), Vector(0), Vector::Zero(4), a);
    EXPECT_DOUBLE_EQ(y(0), 0.3);
    EXPECT_DOUBLE_EQ(y(1), 0.6);
    EXPECT_DOUBLE_EQ(y(2), 0.9 + 5);
    EXPECT_DOUBLE_EQ(y(3), 12);
}

TEST(Measure, LengthMismatchIsConfigError) {
    const auto plant = make_example1_plant();
    EXPECT_THROW(measure(plant, v2(0, 0), Vector(0), Vector::Zero(2), Vector::Zero(3)), ConfigError);
    EXPECT_THROW(measure(plant, v2(0, 0), Vector(0), Vector::Zero(3), Vector::Zero(4)), ConfigError);
}

TEST(SampleSignal, UniformDrawsStayInsideOpenInterval) {
    RngStream rng(3, "u");
    for (int i = 0; i < 100000; ++i) {
        const double v = sample_signal(UniformSignal{-0.1, 0.1}, static_cast<std::size_t>(i), rng);
        ASSERT_GT(v, -0.1);
        ASSERT_LT(v, 0.1);
    }
}

TEST(SampleSignal, ConstantZero) {
    RngStream rng(0, "c");
    EXPECT_EQ(sample_signal(ConstantSignal{0.0}, 4, rng), 0.0);
    EXPECT_EQ(sample_signal(ZeroSignal{}, 4, rng), 0.0);
}

TEST(SampleSignal, NormalSampleMeanIsNearZero) {
    RngStream rng(12345, "n");
    double sum = 0;
    const int draws = 100000;
    for (int i = 0; i < draws; ++i) sum += sample_signal(NormalSignal{0.0, 1.0}, 0, rng);
    EXPECT_LT(std::abs(sum / draws), 0.02);
}

TEST(SampleSignal, InvalidSpecsAreConfigErrors) {
    RngStream rng(0, "x");
    EXPECT_THROW(sample_signal(UniformSignal{1.0, 1.0}, 0, rng), ConfigError);
    EXPECT_THROW(sample_signal(UniformSignal{2.0, 1.0}, 0, rng), ConfigError);
    EXPECT_THROW(sample_signal(NormalSignal{0.0, -1.0}, 0, rng), ConfigError);
    EXPECT_THROW(sample_signal(TableSignal{{1.0, 2.0}}, 2, rng), ConfigError);
}

TEST(SampleSignal, TableIsIndexedByStep) {
    RngStream rng(0, "t");
    const TableSignal t{{4.0, 5.0, 6.0}};
    EXPECT_EQ(sample_signal(t, 1, rng), 5.0);
}

TEST(SignalBound, MatchesGenerator) {
    EXPECT_EQ(signal_bound(UniformSignal{-0.5, 0.2}), 0.5);
    EXPECT_EQ(signal_bound(ZeroSignal{}), 0.0);
    EXPECT_TRUE(std::isinf(signal_bound(NormalSignal{0, 1})));
    EXPECT_EQ(signal_bound(TableSignal{{1, -3, 2}}), 3.0);
}

TEST(Rng, OpenUnitIsStrictlyInside) {
    RngStream rng(1, "open");
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.open_unit();
        ASSERT_GT(u, 0.0);
        ASSERT_LT(u, 1.0);
    }
}

TEST(Rng, NamedStreamsAreIndependentAndReproducible) {
    RngStream a(9, "noise_1"), b(9, "noise_1"), c(9, "noise_2"), d(10, "noise_1");
    const double va = a.open_unit();
    EXPECT_EQ(va, b.open_unit());
    EXPECT_NE(va, c.open_unit());
    EXPECT_NE(va, d.open_unit());
}

TEST(Simulate, Example1HasFiftyRecordsAndAttackOnlyOnSensorTwo) {
    const auto cfg = bundled("example1");
    RngStream x0(cfg.scenario.seed, "initial_state");
    const auto traj = simulate(*cfg.plant, cfg.scenario, cfg.initial_state.draw(2, x0));
    ASSERT_EQ(traj.size(), 50u);
    for (const auto& r : traj) {
        EXPECT_EQ(r.a(0), 0.0);
        EXPECT_EQ(r.a(2), 0.0);
        EXPECT_GT(r.a(1), -10.0);
        EXPECT_LT(r.a(1), 10.0);
    }
}

TEST(Simulate, ZeroDynamicsFromOriginStaysZero) {
    PlantModel m;
    m.n = 2;
    m.p = 1;
    m.dynamics = [](const Vector&, const Vector&, const Vector&, std::size_t) { return Vector(Vector::Zero(2)); };
    m.output = [](const Vector& x, const Vector&) { return Vector(x.head(1)); };
    AttackScenario sc;
    sc.attack = {ZeroSignal{}};
    sc.noise = {ZeroSignal{}};
    sc.horizon = 10;
    const auto traj = simulate(m, sc, Vector::Zero(2));
    ASSERT_EQ(traj.size(), 11u);
    for (const auto& r : traj) {
        EXPECT_TRUE(r.x.isZero(0));
        EXPECT_TRUE(r.y.isZero(0));
    }
}

TEST(Simulate, SameSeedGivesIdenticalTrajectories) {
    const auto cfg = bundled("example3");
    const Vector x0 = v2(0.2, -0.4);
    const auto a = simulate(*cfg.plant, cfg.scenario, x0);
    const auto b = simulate(*cfg.plant, cfg.scenario, x0);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a[k].x, b[k].x);
        EXPECT_EQ(a[k].y, b[k].y);
    }
}

TEST(Simulate, ScalingAttacksLeavesNoiseDrawsUntouched) {
    auto cfg = bundled("example3");
    auto scaled = cfg.scenario;
    for (auto& a : scaled.attack) a = scale_signal(a, 10.0);
    const auto a = simulate(*cfg.plant, cfg.scenario, v2(0.1, 0.1));
    const auto b = simulate(*cfg.plant, scaled, v2(0.1, 0.1));
    for (std::size_t k = 0; k < a.size(); ++k) {
        EXPECT_EQ(a[k].m, b[k].m);
        EXPECT_NEAR(b[k].a(1), 10 * a[k].a(1), 1e-12);
    }
}

TEST(Simulate, DivergenceReportsStep) {
    PlantModel m;
    m.n = 1;
    m.p = 1;
    m.dynamics = [](const Vector& x, const Vector&, const Vector&, std::size_t) { return Vector(x * 1e6); };
    m.output = [](const Vector& x, const Vector&) { return x; };
    AttackScenario sc;
    sc.attack = {ZeroSignal{}};
    sc.noise = {ZeroSignal{}};
    sc.horizon = 20;
    try {
        simulate(m, sc, Vector::Ones(1));
        FAIL() << "expected divergence";
    } catch (const SimulationDiverged& e) {
        EXPECT_EQ(e.step(), 3u);  // 1e18 > 1e12 first at k = 3
    }
}

TEST(Simulate, HorizonZeroIsRejected) {
    const auto cfg = bundled("example1");
    auto sc = cfg.scenario;
    sc.horizon = 0;
    EXPECT_THROW(simulate(*cfg.plant, sc, v2(0, 0)), ConfigError);
}

TEST(AttackScenario, AttackOutsideWIsRejected) {
    const auto cfg = bundled("example1");
    auto sc = cfg.scenario;
    sc.attack[0] = UniformSignal{-1, 1};
    EXPECT_THROW(sc.validate(*cfg.plant), ConfigError);
}

TEST(AttackScenario, TooManyAttackedSensorsViolatesAssumption) {
    const auto cfg = bundled("example1");
    auto sc = cfg.scenario;
    sc.attacked = {1, 2};
    EXPECT_THROW(sc.validate(*cfg.plant), AssumptionViolated);
}

TEST(Nonlinearity, RegistryAndParameters) {
    NonlinearityParams p;
    p.name = "tanh";
    p.scale = -1.25;
    p.linear = 0.5;
    const ScalarNonlinearity f(p);
    EXPECT_DOUBLE_EQ(f(0.3), -1.25 * std::tanh(0.3) + 0.15);
    p.name = "polynomial";
    p.scale = 1;
    p.linear = 0;
    p.coefficients = {1, 0, 2};
    EXPECT_DOUBLE_EQ(ScalarNonlinearity(p)(3.0), 19.0);
    p.name = "nope";
    EXPECT_THROW(ScalarNonlinearity{p}, ConfigError);
}

TEST(LurePlant, InconsistentDimensionsAreRejected) {
    LureStructure s;
    s.A = Matrix::Identity(2, 2);
    s.G = Matrix::Zero(3, 1);
    s.H = Matrix::Zero(1, 2);
    s.C = Matrix::Identity(2, 2);
    s.phi = {testing_support::named("sin")};
    EXPECT_THROW(make_lure_plant("bad", s), ConfigError);
}
