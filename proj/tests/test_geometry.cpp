#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "cubepu/geometry.hpp"

using namespace cubepu;

TEST(SquaredDistance, Examples) {
    EXPECT_EQ(squared_distance({0, 0, 0}, {0, 0, 0}), 0.0);
    EXPECT_EQ(squared_distance({1, 0, 0}, {0, 0, 0}), 1.0);
    EXPECT_EQ(squared_distance({1, 1, 1}, {0, 0, 0}), 3.0);
}

TEST(SquaredDistance, MetricProperties) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto draw = [&] { return Point3{u(rng), u(rng), u(rng)}; };
    for (int i = 0; i < 2000; ++i) {
        const Point3 a = draw(), b = draw(), c = draw();
        EXPECT_EQ(squared_distance(a, b), squared_distance(b, a));
        EXPECT_GE(squared_distance(a, b), 0.0);
        EXPECT_LE(distance(a, c), distance(a, b) + distance(b, c) + 1e-15);
        EXPECT_EQ(squared_distance(a, a), 0.0);
        if (!(a == b)) EXPECT_GT(squared_distance(a, b), 0.0);
    }
}

TEST(UnitCube, ContainsIsClosed) {
    const UnitCube cube;
    EXPECT_TRUE(contains(cube, {0.5, 0.5, 0.5}));
    EXPECT_TRUE(contains(cube, {1, 1, 1}));
    EXPECT_TRUE(contains(cube, {0, 0, 0}));
    EXPECT_FALSE(contains(cube, {1.0001, 0.5, 0.5}));
    EXPECT_FALSE(contains(cube, {0.5, -1e-12, 0.5}));
    EXPECT_FALSE(in_unit_cube({std::nan(""), 0.5, 0.5}));
}
