#include <gtest/gtest.h>

#include <cmath>

#include "gt/skc.hpp"

namespace gt {
namespace {

TEST(Skc, CEpsilonPinned) {
  EXPECT_NEAR(c_epsilon(0.1), 3.163975735111126, 1e-12);
  EXPECT_NEAR(c_epsilon(0.5), 5.7548875021634685, 1e-12);
  EXPECT_NEAR(c_epsilon(1e-12), 2.5849625007211562, 1e-10);
  EXPECT_THROW(c_epsilon(0.0), std::invalid_argument);
  EXPECT_THROW(c_epsilon(1.0), std::invalid_argument);
}

TEST(Skc, CEpsilonIncreasing) {
  double previous = 0.0;
  for (int k = 1; k < 100; ++k) {
    const double c = c_epsilon(k / 100.0);
    EXPECT_GT(c, previous);
    previous = c;
  }
}

TEST(Skc, PureLossPinned) {
  EXPECT_NEAR(pure_loss_bound(0.5, 100.0, 0.1), 1.0316397573511113, 1e-12);
  EXPECT_NEAR(pure_loss_bound(0.9, 1000.0, 0.01), 3.3245707671134279, 1e-12);
  EXPECT_EQ(pure_loss_bound(0.5, std::nullopt, 0.1), 1.0);
  EXPECT_GT(pure_loss_bound(0.5, 10.0, 0.1), pure_loss_bound(0.5, 100.0, 0.1));
  for (double n : {1.0, 7.0, 100.0, 1e6}) {
    EXPECT_NEAR(pure_loss_bound(0.3, n, 0.2) - pure_loss_bound(0.3, std::nullopt, 0.2), c_epsilon(0.2) / n, 1e-15);
  }
  EXPECT_THROW(pure_loss_bound(1.0, 10.0, 0.1), std::invalid_argument);
  EXPECT_THROW(pure_loss_bound(0.5, 0.5, 0.1), std::invalid_argument);
}

TEST(Skc, ThermalPinnedAndDecomposed) {
  EXPECT_NEAR(thermal_bound(0.5, 1.0, 100.0, 0.1, 2.0), 0.24245826802900322, 1e-12);
  const auto t = thermal_bound_terms(0.5, 1.0, 100.0, 0.1, 2.0);
  EXPECT_NEAR(t.leading + t.entropy + t.second_order + t.finite_size, thermal_bound(0.5, 1.0, 100.0, 0.1, 2.0), 1e-14);
  EXPECT_NEAR(t.entropy, -2.0, 1e-15);
  EXPECT_NEAR(thermal_bound(0.5, 0.0, 100.0, 0.1, 0.0), pure_loss_bound(0.5, 100.0, 0.1), 1e-15);
  EXPECT_THROW(thermal_bound(0.5, 1.0, 100.0, 0.1, -1.0), std::invalid_argument);
}

TEST(Skc, BosonicEntropy) {
  EXPECT_EQ(bosonic_entropy(0.0), 0.0);
  EXPECT_NEAR(bosonic_entropy(1.0), 2.0, 1e-15);
  EXPECT_NEAR(bosonic_entropy(1e-300), 0.0, 1e-200);
}

}  // namespace
}  // namespace gt
