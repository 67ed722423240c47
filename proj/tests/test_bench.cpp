#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "cubepu/bench.hpp"

using namespace cubepu;

TEST(Franke, F1PointValues) {
    // Reference values from a 30-digit evaluation of the printed formula.
    EXPECT_NEAR(franke_f1({2.0 / 9, 2.0 / 9, 2.0 / 9}), 1.0926231006802315, 1e-15);
    EXPECT_NEAR(franke_f1({4.0 / 9, 7.0 / 9, 5.0 / 9}), -0.087941007165533700, 1e-15);
}

TEST(Franke, F1BoundedOnGrid) {
    double m = 0.0;
    for (const auto& p : eval_grid(21)) {
        const double v = franke_f1(p);
        ASSERT_TRUE(std::isfinite(v));
        m = std::max(m, std::abs(v));
    }
    EXPECT_LT(m, 2.0);
    EXPECT_NEAR(m, 1.0929296028832473, 1e-12);
}

TEST(Franke, F2PointValuesAndBound) {
    EXPECT_DOUBLE_EQ(franke_f2({1.0 / 3, 0, 0}), 0.375);
    EXPECT_NEAR(franke_f2({1.0 / 3, 0, M_PI / 12}), 0.0, 1e-16);
    for (const auto& p : eval_grid(21)) EXPECT_LE(std::abs(franke_f2(p)), 0.375 + 1e-15);
    EXPECT_EQ(parse_test_function("f2"), TestFunction::f2);
    EXPECT_THROW((void)parse_test_function("f3"), std::invalid_argument);
}

TEST(Rmse, Examples) {
    const std::vector<double> a{1.0, 2.0, 3.0};
    EXPECT_EQ(rmse(a, a), 0.0);
    EXPECT_EQ(rmse(std::vector<double>{0, 0}, std::vector<double>{1, 1}), 1.0);
    EXPECT_EQ(rmse(std::vector<double>{0, 0, 0, 0}, std::vector<double>{2, 0, 0, 0}), 1.0);
    EXPECT_EQ(max_abs_error(std::vector<double>{0, 0, 0, 0}, std::vector<double>{2, 0, 0, 0}), 2.0);
    EXPECT_THROW((void)rmse(std::vector<double>{1.0}, std::vector<double>{1.0, 2.0}), std::invalid_argument);
    EXPECT_THROW((void)rmse(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
}

TEST(EvalGrid, VertexLattice) {
    const auto g = eval_grid(11);
    ASSERT_EQ(g.size(), 1331u);
    EXPECT_EQ(g.front(), (Point3{0, 0, 0}));
    EXPECT_EQ(g.back(), (Point3{1, 1, 1}));
    EXPECT_DOUBLE_EQ(g[1].x, 0.1);
    EXPECT_THROW((void)eval_grid(1), std::invalid_argument);
}

TEST(ShapeRangeValues, Equispaced) {
    const auto v = ShapeRange{1.0, 10.0, 19}.values();
    ASSERT_EQ(v.size(), 19u);
    EXPECT_EQ(v.front(), 1.0);
    EXPECT_EQ(v.back(), 10.0);
    EXPECT_DOUBLE_EQ(v[1], 1.5);
    EXPECT_EQ((ShapeRange{2.5, 2.5, 1}.values()), (std::vector<double>{2.5}));
    EXPECT_THROW((void)(ShapeRange{0.0, 1.0, 3}.values()), std::invalid_argument);
}

TEST(RunExperiment, SmallRunReportsGridAndErrors) {
    ExperimentSpec spec;
    spec.kernel = {KernelFamily::wendland_c4, 0.54};
    const auto r = run_experiment(spec);
    EXPECT_EQ(r.q, 6);
    EXPECT_EQ(r.q_used, 5);
    EXPECT_EQ(r.spec.node_count, 4913u);
    EXPECT_GT(r.rmse, 0.0);
    EXPECT_LE(r.rmse, r.max_abs_error);
    EXPECT_LT(r.rmse, 1e-2);
    EXPECT_EQ(r.warn_uncovered, 0u);
    EXPECT_GE(r.total_seconds, r.fit_seconds);

    spec.mode = SearchMode::no_cube;
    const auto b = run_experiment(spec);
    EXPECT_EQ(b.rmse, r.rmse);
    EXPECT_EQ(b.max_abs_error, r.max_abs_error);
}

TEST(RunExperiment, CappedRunStaysAccurate) {
    ExperimentSpec spec;
    spec.kernel = {KernelFamily::matern_c4, 2.6};
    spec.function = TestFunction::f2;
    const auto full = run_experiment(spec);
    spec.m_max = 50;
    const auto capped = run_experiment(spec);
    EXPECT_LT(capped.rmse, 100 * full.rmse);
}

TEST(SweepShape, SinglePointMatchesExperiment) {
    ExperimentSpec spec;
    spec.kernel = {KernelFamily::gaussian, 4.0};
    spec.sweep = ShapeRange{4.0, 4.0, 1};
    const auto sweep = sweep_shape(spec);
    ASSERT_EQ(sweep.curve.size(), 1u);
    EXPECT_EQ(sweep.curve[0].rmse, run_experiment(spec).rmse);
    EXPECT_EQ(sweep.best_shape, 4.0);
    EXPECT_THROW((void)sweep_shape(ExperimentSpec{}), std::invalid_argument);
}

TEST(SweepShape, ArgminIsCurveMinimum) {
    ExperimentSpec spec;
    spec.kernel = {KernelFamily::wendland_c4, 1.0};
    spec.sweep = ShapeRange{0.1, 1.9, 7};
    const auto sweep = sweep_shape(spec);
    ASSERT_EQ(sweep.curve.size(), 7u);
    for (const auto& p : sweep.curve) EXPECT_GE(p.rmse, sweep.best_rmse);
}
