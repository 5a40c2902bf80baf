#include <gtest/gtest.h>

#include <cmath>

#include "gt/channels.hpp"

namespace gt {
namespace {

GaussianState random_state(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> photons(0.0, 2.0);
  std::normal_distribution<double> shift(0.0, 1.0);
  GaussianState s = GaussianState::thermal(photons(rng));
  for (int k = 1; k < m; ++k) s = tensor(s, GaussianState::thermal(photons(rng)));
  Vector z(2 * m);
  for (int i = 0; i < 2 * m; ++i) z(i) = shift(rng);
  return displace(transform(s, random_symplectic(m, rng)), z);
}

double state_diff(const GaussianState& a, const GaussianState& b) {
  return std::max((a.mean() - b.mean()).cwiseAbs().maxCoeff(), (a.cov() - b.cov()).cwiseAbs().maxCoeff());
}

// A valid random channel: random symplectic times sqrt(eta) plus enough noise.
GaussianChannel random_channel(int m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 0.9);
  const Matrix s = random_symplectic(m, rng);
  const Matrix x = std::sqrt(u(rng)) * s.transpose();
  const Matrix omega = SymplecticForm(m).matrix();
  const Matrix gap = omega - x.transpose() * omega * x;
  const double lift = gap.jacobiSvd().singularValues().maxCoeff();
  Vector d(2 * m);
  for (int i = 0; i < 2 * m; ++i) d(i) = u(rng) - 0.5;
  return GaussianChannel(x, (lift + u(rng)) * Matrix::Identity(2 * m, 2 * m), d);
}

TEST(Apply, IdentityLeavesStateUnchanged) {
  std::mt19937_64 rng(1);
  const auto s = random_state(2, rng);
  EXPECT_EQ(state_diff(apply(identity_channel(2), s), s), 0.0);
}

TEST(Apply, AdditiveNoiseOnVacuum) {
  const auto out = apply(make_additive_noise(0.3), GaussianState::vacuum(1));
  EXPECT_NEAR((out.cov() - 1.6 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.0, 1e-15);
}

TEST(Apply, PureLossFixesVacuum) {
  const auto out = apply(make_thermal(0.5, 0.0), GaussianState::vacuum(1));
  EXPECT_NEAR((out.cov() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.0, 1e-15);
}

TEST(ApplyOnSubsystem, NoiseOnModeAOfTmsv) {
  const std::array<int, 1> a{1};
  const double n = 1.0, sigma = 0.25;
  const auto out = apply_on_subsystem(make_additive_noise(sigma), make_tmsv_state(n), a);
  Matrix expected = make_tmsv_state(n).cov();
  expected(1, 1) += 2 * sigma;
  expected(3, 3) += 2 * sigma;
  EXPECT_LT((out.cov() - expected).cwiseAbs().maxCoeff(), 1e-15);
  const std::array<int, 1> r{0};
  EXPECT_EQ(state_diff(apply_on_subsystem(identity_channel(1), make_tmsv_state(n), r), make_tmsv_state(n)), 0.0);
}

TEST(ApplyOnSubsystem, AgreesWithPermutationConjugation) {
  std::mt19937_64 rng(2);
  const auto state = random_state(2, rng);
  const auto ch = make_thermal(0.3, 0.7);
  const std::array<int, 1> first{0};
  const std::array<int, 1> second{1};
  const Matrix swap = beamsplitter(2, 0, 1, M_PI / 2);  // swaps modes up to a sign
  const auto direct = apply_on_subsystem(ch, state, first);
  const auto via_swap = transform(apply_on_subsystem(ch, transform(state, swap), second), swap.transpose());
  EXPECT_LT(state_diff(direct, via_swap), 1e-12);
  EXPECT_THROW(apply_on_subsystem(ch, state, std::array<int, 1>{2}), std::out_of_range);
}

TEST(Compose, ThermalAfterTeleportationNoise) {
  for (double eta : {0.1, 0.5, 0.9}) {
    for (double n_b : {0.0, 1.0}) {
      for (double sigma : {0.01, 0.2}) {
        const auto lhs = compose(make_thermal(eta, n_b), make_additive_noise(sigma));
        const auto rhs = make_thermal(eta, n_b + eta * sigma / (1 - eta));
        EXPECT_LT(max_abs_diff(lhs, rhs), 1e-12);
      }
    }
  }
}

TEST(Compose, AmplifierAfterTeleportationNoise) {
  const auto lhs = compose(make_amplifier(2.0, 0.0), make_additive_noise(0.1));
  EXPECT_LT(max_abs_diff(lhs, make_amplifier(2.0, 0.2)), 1e-12);
}

TEST(Compose, AdditiveNoiseVariancesAdd) {
  const auto lhs = compose(make_additive_noise(0.3), make_additive_noise(0.1));
  EXPECT_LT(max_abs_diff(lhs, make_additive_noise(0.4)), 1e-15);
}

TEST(Compose, MatchesSequentialApplicationAndIsAssociative) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 1 + trial % 3;
    const auto f = random_channel(m, rng);
    const auto g = random_channel(m, rng);
    const auto h = random_channel(m, rng);
    const auto s = random_state(m, rng);
    EXPECT_LT(state_diff(apply(compose(g, f), s), apply(g, apply(f, s))), 1e-12);
    EXPECT_LT(max_abs_diff(compose(h, compose(g, f)), compose(compose(h, g), f)), 1e-12);
  }
}

TEST(Constructors, SatisfyCompletePositivity) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double eta = 0.01 + 0.98 * u(rng);
    const double n_b = 3 * u(rng);
    const double gain = 1.01 + 4 * u(rng);
    for (const auto& ch : {make_thermal(eta, n_b), make_amplifier(gain, n_b), make_additive_noise(0.01 + u(rng)),
                           make_pure_loss(eta), make_pure_amplifier(gain)}) {
      EXPECT_TRUE(check_complete_positivity(ch.x(), ch.y()).valid);
    }
  }
  EXPECT_THROW(make_thermal(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(make_amplifier(1.0, 0.0), std::invalid_argument);
  EXPECT_THROW(make_additive_noise(0.0), std::invalid_argument);
}

TEST(Constructors, PureLossIsZeroTemperatureThermal) {
  EXPECT_EQ(max_abs_diff(make_pure_loss(0.4), make_thermal(0.4, 0.0)), 0.0);
  EXPECT_EQ(max_abs_diff(make_pure_amplifier(1.5), make_amplifier(1.5, 0.0)), 0.0);
}

TEST(Constructors, RejectsNonCompletelyPositiveMatrices) {
  // Amplification without added noise.
  EXPECT_THROW(GaussianChannel(std::sqrt(2.0) * Matrix::Identity(2, 2), Matrix::Zero(2, 2), Vector::Zero(2)),
               std::invalid_argument);
}

TEST(Dilation, ReproducesThermalAndAmplifier) {
  std::mt19937_64 rng(4);
  for (const auto& ch : {make_pure_loss(0.3), make_thermal(0.7, 1.5), make_pure_amplifier(2.0),
                         make_amplifier(1.4, 0.6)}) {
    const auto dil = dilate(ch);
    EXPECT_LT(symplectic_residual(dil.symplectic), 1e-9);
    for (int trial = 0; trial < 5; ++trial) {
      const auto s = random_state(1, rng);
      EXPECT_LT(state_diff(dilation_output(dil, s), apply(ch, s)), 1e-9);
    }
  }
}

TEST(Dilation, BeamsplitterEntriesForPureLoss) {
  const auto dil = dilate(make_pure_loss(0.36));
  EXPECT_NEAR(dil.symplectic(0, 0), 0.6, 1e-15);
  EXPECT_NEAR(dil.symplectic(0, 1), 0.8, 1e-15);
  EXPECT_NEAR(dil.symplectic(1, 0), -0.8, 1e-15);
  EXPECT_EQ((dil.env_state.cov() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Dilation, TensorProductIsBlockDiagonal) {
  const auto ch = tensor(make_thermal(0.5, 1.0), make_thermal(0.2, 0.0));
  const auto dil = dilate(ch);
  EXPECT_EQ(dil.system_modes, 2);
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 5; ++trial) {
    const auto s = random_state(2, rng);
    EXPECT_LT(state_diff(dilation_output(dil, s), apply(ch, s)), 1e-9);
  }
  EXPECT_THROW(dilate(make_additive_noise(0.1)), std::invalid_argument);
}

TEST(DisplacementCovariance, ResidualVanishes) {
  std::mt19937_64 rng(8);
  EXPECT_EQ(check_displacement_covariance(make_thermal(0.5, 1.0), Vector::Zero(2), GaussianState::vacuum(1)), 0.0);
  std::normal_distribution<double> n(0.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 1 + trial % 2;
    Vector z(2 * m);
    for (int i = 0; i < 2 * m; ++i) z(i) = n(rng);
    EXPECT_LT(check_displacement_covariance(random_channel(m, rng), z, random_state(m, rng)), 1e-12);
  }
}

TEST(ChannelJson, NamedRoundTrip) {
  const auto ch = tensor(make_thermal(0.5, 1.0), make_additive_noise(0.2));
  const auto doc = channel_to_json(ch);
  EXPECT_EQ(doc["kind"], "tensor");
  EXPECT_LT(max_abs_diff(channel_from_json(doc), ch), 1e-15);
}

TEST(ChannelJson, RawRoundTripAndValidation) {
  std::mt19937_64 rng(10);
  const auto ch = random_channel(2, rng);
  EXPECT_LT(max_abs_diff(channel_from_json(channel_to_json(ch)), ch), 1e-15);
  EXPECT_THROW(channel_from_json(nlohmann::json::parse(R"({"kind":"thermal","params":{"eta":0.5}})")),
               std::invalid_argument);
  EXPECT_THROW(channel_from_json(nlohmann::json::parse(R"({"kind":"thermal","params":{"eta":0.5,"n_b":0,"x":1}})")),
               std::invalid_argument);
  EXPECT_THROW(channel_from_json(nlohmann::json::parse(R"({"kind":"warp"})")), std::invalid_argument);
}

}  // namespace
}  // namespace gt
