#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "memforage/memristor.hpp"
#include "support/reference.hpp"

namespace memforage {
namespace {

TEST(Memristance, StartsAtROn) {
  EXPECT_DOUBLE_EQ(memristance(MemristorParams{1.0, 100.0, 1.0}, 0.0), 1.0);
}

TEST(Memristance, LinearRegion) {
  const MemristorParams p{1.0, 100.0, 1.0};
  EXPECT_DOUBLE_EQ(memristance(p, 0.5), 51.0);
  // Complement form anchored at R_on: r_off - r_off*r_on*beta*(q* - q) gives the same value.
  const double q_star = (p.r_off - p.r_on) / (p.r_off * p.r_on * p.beta);
  EXPECT_NEAR(p.r_off - p.r_off * p.r_on * p.beta * (q_star - 0.5), 51.0, 1e-12);
}

TEST(Memristance, ClampsAtROff) {
  const MemristorParams p{15.0, 100.0, 1.0};
  EXPECT_DOUBLE_EQ(linear_memristance(p, 1.0), 1515.0);
  EXPECT_DOUBLE_EQ(memristance(p, 1.0), 100.0);
}

TEST(DepletionCharge, Examples) {
  EXPECT_DOUBLE_EQ(depletion_charge({100.0, 100.0, 1.0}), 0.0);
  EXPECT_NEAR(depletion_charge({15.0, 100.0, 1.0}), 17.0 / 300.0, 1e-15);
  EXPECT_NEAR(depletion_charge({0.5, 100.0, 1.0}), 1.99, 1e-14);
}

TEST(DepletionCharge, MemristanceReachesROffExactly) {
  for (double r_on : {0.5, 1.0, 2.0, 4.0, 15.0, 60.0, 99.0}) {
    const MemristorParams p{r_on, 100.0, 1.0};
    EXPECT_NEAR(linear_memristance(p, depletion_charge(p)), 100.0, 1e-12) << r_on;
    EXPECT_DOUBLE_EQ(memristance(p, depletion_charge(p) * 1.0000001), 100.0);
  }
}

TEST(Accumulate, SingleEulerStep) {
  const auto s = make_state({1.0, 100.0, 1.0}, "a");
  const auto next = accumulate(s, 0.2, 1.0);
  EXPECT_DOUBLE_EQ(next.q, 0.2);
  EXPECT_FALSE(next.clamped);
}

TEST(Accumulate, CrossesDepletionCharge) {
  auto s = make_state({15.0, 100.0, 1.0}, "worst");
  s.q = 0.05;
  const auto next = accumulate(s, 0.5, 0.02);
  EXPECT_NEAR(next.q, 0.06, 1e-15);
  EXPECT_TRUE(next.clamped);
  EXPECT_DOUBLE_EQ(memristance(next), 100.0);
}

TEST(Accumulate, ZeroCurrentLeavesStateAlone) {
  auto s = make_state({2.0, 100.0, 1.0}, "b");
  s.q = 0.1;
  const auto next = accumulate(s, 0.0, 3.0);
  EXPECT_EQ(next.q, s.q);
  EXPECT_EQ(next.clamped, s.clamped);
}

TEST(Accumulate, KeepsIntegratingAfterClamp) {
  auto s = make_state({4.0, 100.0, 1.0});
  s = accumulate(s, 1.0, 1.0);
  ASSERT_TRUE(s.clamped);
  const double q = s.q;
  s = accumulate(s, 0.05, 2.0);
  EXPECT_DOUBLE_EQ(s.q, q + 0.1);
  EXPECT_DOUBLE_EQ(memristance(s), 100.0);
}

TEST(Accumulate, RejectsBadArguments) {
  const auto s = make_state({1.0, 100.0, 1.0});
  EXPECT_THROW(accumulate(s, -0.1, 1.0), std::invalid_argument);
  EXPECT_THROW(accumulate(s, 0.1, 0.0), std::invalid_argument);
  EXPECT_THROW(accumulate(s, 0.1, -1.0), std::invalid_argument);
}

TEST(MemristorParams, Validation) {
  EXPECT_NO_THROW(validate(MemristorParams{1.0, 100.0, 1.0}));
  EXPECT_NO_THROW(validate(MemristorParams{100.0, 100.0, 1.0}));
  EXPECT_THROW(validate(MemristorParams{0.0, 100.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(validate(MemristorParams{101.0, 100.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(validate(MemristorParams{1.0, 100.0, 0.0}), std::invalid_argument);
}

TEST(MakeState, ClampedIffAlreadyAtROff) {
  EXPECT_TRUE(make_state({100.0, 100.0, 1.0}).clamped);
  EXPECT_FALSE(make_state({99.0, 100.0, 1.0}).clamped);
}

// Property checks over random devices.
TEST(MemristorProperties, BoundedMonotoneAndAdditive) {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> r_on_dist(0.05, 100.0);
  std::uniform_real_distribution<double> beta_dist(0.1, 5.0);
  std::uniform_real_distribution<double> q_dist(0.0, 3.0);
  for (int trial = 0; trial < 500; ++trial) {
    const MemristorParams p{r_on_dist(rng), 100.0, beta_dist(rng)};
    const double q1 = q_dist(rng);
    const double q2 = q1 + q_dist(rng);
    const double m1 = memristance(p, q1);
    const double m2 = memristance(p, q2);
    ASSERT_GE(m1, p.r_on);
    ASSERT_LE(m1, p.r_off);
    ASSERT_LE(m1, m2);
    if (q1 >= depletion_charge(p)) ASSERT_EQ(m1, p.r_off);

    // Complement form re-anchored at R_on clamps at the same charge.
    const double bisected = testing::ref_clamp_charge({p.r_on, p.r_off, p.beta});
    ASSERT_NEAR(depletion_charge(p), bisected, 1e-12 * std::max(1.0, bisected));

    auto s = make_state(p);
    const double current = q_dist(rng);
    const double dt = 0.01 + q_dist(rng);
    const auto twice = accumulate(accumulate(s, current, dt), current, dt);
    const auto once = accumulate(s, current, 2.0 * dt);
    ASSERT_NEAR(twice.q, once.q, 1e-12 * std::max(1.0, once.q));
    ASSERT_EQ(twice.clamped, once.clamped);
  }
}

}  // namespace
}  // namespace memforage
