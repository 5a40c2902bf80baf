#include <gtest/gtest.h>

#include <cmath>

#include "gt/fidelity.hpp"
#include "gt/fock.hpp"
#include "gt/teleport.hpp"

namespace gt {
namespace {

TEST(Simulate, ThermalShiftsEnvironmentPhotons) {
  const auto sim = simulate(make_thermal(0.5, 1.0), 0.2);
  ASSERT_TRUE(sim.simulated.descriptor());
  EXPECT_EQ(sim.simulated.descriptor()->kind, ChannelKind::thermal);
  EXPECT_NEAR(sim.simulated.descriptor()->params[1], 1.2, 1e-15);
  EXPECT_LT(max_abs_diff(sim.simulated, make_thermal(0.5, 1.2)), 1e-12);
  EXPECT_LT(max_abs_diff(sim.simulated, compose(make_thermal(0.5, 1.0), make_additive_noise(0.2))), 1e-15);
}

TEST(Simulate, AmplifierAndAdditiveNoise) {
  const auto amp = simulate(make_pure_amplifier(2.0), 0.1);
  EXPECT_NEAR(amp.simulated.descriptor()->params[1], 0.2, 1e-15);
  EXPECT_LT(max_abs_diff(amp.simulated, make_amplifier(2.0, 0.2)), 1e-12);
  const auto add = simulate(make_additive_noise(0.3), 0.1);
  EXPECT_NEAR(add.simulated.descriptor()->params[0], 0.4, 1e-15);
  EXPECT_LT(max_abs_diff(add.simulated, make_additive_noise(0.4)), 1e-15);
  EXPECT_THROW(simulate(make_thermal(0.5, 0.0), 0.0), std::invalid_argument);
}

TEST(Simulate, ActionEqualsNoiseThenChannel) {
  std::mt19937_64 rng(31);
  const auto ch = tensor(make_thermal(0.3, 0.5), make_amplifier(1.5, 0.2));
  const auto sim = simulate(ch, 0.15);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = transform(tensor(GaussianState::thermal(0.4), GaussianState::thermal(1.0)), random_symplectic(2, rng));
    const auto direct = apply(sim.simulated, s);
    const auto sequential = apply(ch, apply(make_teleport_channel(0.15, 2), s));
    EXPECT_LT((direct.cov() - sequential.cov()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ThermalBound, PinnedValues) {
  EXPECT_NEAR(uniform_bound_thermal(0.5, 0.0, 0.5).bound_value, 0.57735026918962576, 1e-14);
  EXPECT_EQ(uniform_bound_thermal(0.5, 0.0, 0.5).kind, BoundKind::pure_loss);
  EXPECT_NEAR(uniform_bound_thermal(0.5, 1.0, 0.2).bound_value, 0.06581066204815532, 1e-14);
  EXPECT_NEAR(uniform_bound_thermal(0.5, 1.0, 0.2).bound_value,
              p_distance(fidelity_fock(make_thermal_fock(1.0, 80), make_thermal_fock(1.2, 80))), 1e-6);
  EXPECT_THROW(uniform_bound_thermal(1.0, 0.0, 0.1), std::invalid_argument);
}

TEST(AmplifierBound, PinnedValues) {
  EXPECT_NEAR(uniform_bound_amplifier(2.0, 0.0, 0.1).bound_value, 0.40824829046386302, 1e-14);
  EXPECT_NEAR(uniform_bound_amplifier(2.0, 0.0, 0.1).bound_value, std::sqrt(1.0 - 1.0 / 1.2), 1e-15);
  EXPECT_NEAR(uniform_bound_amplifier(3.0, 1.0, 0.2).bound_value, 0.095438813395746429, 1e-14);
  EXPECT_NEAR(uniform_bound_amplifier(3.0, 1.0, 0.2).bound_value,
              p_distance(fidelity_fock(make_thermal_fock(1.0, 80), make_thermal_fock(1.3, 80))), 1e-6);
  EXPECT_THROW(uniform_bound_amplifier(1.0, 0.0, 0.1), std::invalid_argument);
}

TEST(AdditiveBound, PinnedValues) {
  EXPECT_NEAR(uniform_bound_additive(1.0, 0.5).bound_value, 0.2, 1e-15);
  EXPECT_NEAR(uniform_bound_additive(1.0, 0.5).bound_value, fidelity_classical_gaussian(1.0, 1.5).p_distance, 1e-15);
  EXPECT_GT(uniform_bound_additive(0.01, 0.5).bound_value, 0.95);
  EXPECT_THROW(uniform_bound_additive(0.0, 0.5), std::invalid_argument);
}

TEST(Bounds, DecreaseToZeroWithSigma) {
  for (const auto& desc : {ChannelDescriptor{ChannelKind::thermal, {0.5, 1.0}, {}},
                           ChannelDescriptor{ChannelKind::amplifier, {2.0, 0.5}, {}},
                           ChannelDescriptor{ChannelKind::additive_noise, {0.3}, {}},
                           ChannelDescriptor{ChannelKind::pure_loss, {0.9}, {}}}) {
    double previous = 1.1;
    for (double sigma : {1.0, 0.1, 0.01, 1e-3, 1e-5, 1e-8}) {
      const double e = uniform_bound(desc, sigma).bound_value;
      EXPECT_LT(e, previous);
      previous = e;
    }
    EXPECT_LT(previous, 1e-3);
  }
  EXPECT_THROW(uniform_bound(ChannelDescriptor{ChannelKind::identity, {}, {}}, 0.1), std::invalid_argument);
}

TEST(MultimodeBound, SingleModeThermalMatchesClosedForm) {
  // The multimode noise is referred to the output: sigma_out = eta sigma_in.
  const double eta = 0.4, n_b = 0.7, sigma = 0.3;
  const auto ch = make_thermal(eta, n_b);
  const double multimode = uniform_bound_multimode(ch, eta * sigma, phase_insensitive_environment(ch)).bound_value;
  EXPECT_NEAR(multimode, uniform_bound_thermal(eta, n_b, sigma).bound_value, 1e-10);
}

TEST(MultimodeBound, ThermalProductFactorizes) {
  const auto ch = tensor(make_thermal(0.5, 1.0), make_thermal(0.2, 0.3));
  const double sigma = 0.1;
  const double f1 = fidelity_thermal_thermal(1.0, 1.0 + sigma / 0.5).fidelity;
  const double f2 = fidelity_thermal_thermal(0.3, 0.3 + sigma / 0.8).fidelity;
  const double p = uniform_bound_multimode(ch, sigma, phase_insensitive_environment(ch)).bound_value;
  EXPECT_NEAR(p, std::sqrt(1.0 - f1 * f2), 1e-8);
}

TEST(MultimodeBound, TwoModePureLossPattern) {
  const auto ch = tensor(make_pure_loss(0.6), make_pure_loss(0.6));
  const double sigma = 0.2;
  const double f = fidelity_thermal_thermal(0.0, sigma / 0.4).fidelity;
  const double p = uniform_bound_multimode(ch, sigma, phase_insensitive_environment(ch)).bound_value;
  EXPECT_NEAR(p * p, 1.0 - f * f, 1e-10);
}

TEST(MultimodeBound, VanishesAlongSigmaGrid) {
  const auto ch = tensor(make_amplifier(1.5, 0.5), make_thermal(0.7, 0.0));
  const auto env = phase_insensitive_environment(ch);
  double previous = 1.1;
  for (double sigma : {1.0, 0.1, 0.01, 1e-3, 1e-4}) {
    const double p = uniform_bound_multimode(ch, sigma, env).bound_value;
    EXPECT_LT(p, previous);
    previous = p;
  }
  EXPECT_LT(previous, 0.02);
}

TEST(MultimodeBound, RejectsIdentityLikeChannels) {
  const auto env = [](const Matrix& y) { return GaussianState(Vector::Zero(y.rows()), Matrix(y + Matrix::Identity(y.rows(), y.cols()))); };
  EXPECT_THROW(uniform_bound_multimode(identity_channel(2), 0.1, env), std::invalid_argument);
  std::mt19937_64 rng(2);
  EXPECT_THROW(uniform_bound_multimode(make_symplectic_channel(random_symplectic(2, rng)), 0.1, env),
               std::invalid_argument);
}

TEST(Telescoping, SumsAndCaps) {
  EXPECT_EQ(telescoping_bound_parallel(std::vector<double>{0.0, 0.0, 0.0}), 0.0);
  EXPECT_NEAR(telescoping_bound_serial(std::vector<double>{0.1, 0.1, 0.1}), 0.3, 1e-15);
  EXPECT_EQ(telescoping_bound_parallel(std::vector<double>{0.7, 0.6}), 1.0);
  EXPECT_THROW(telescoping_bound_parallel(std::vector<double>{1.2}), std::invalid_argument);
}

TEST(Telescoping, TwoCopyPureLossOracle) {
  // TMSV shared between the two channel uses; both modes go through the channel.
  const double eta = 0.5, sigma = 0.3;
  const int cutoff = 40;
  const auto psi = make_tmsv_fock(1.0, cutoff);
  const auto ideal_map = pure_loss_map(eta, cutoff, cutoff);
  const auto sim_map = thermal_map(eta, eta * sigma / (1 - eta), cutoff, cutoff);
  const auto ideal = apply_map(ideal_map, apply_map(ideal_map, psi, 0), 1);
  const auto sim = apply_map(sim_map, apply_map(sim_map, psi, 0), 1);
  const double p = p_distance(fidelity_fock(ideal, sim));
  const double e = uniform_bound_thermal(eta, 0.0, sigma).bound_value;
  EXPECT_GT(p, 0.0);
  EXPECT_LE(p, telescoping_bound_parallel(std::vector<double>{e, e}));
}

TEST(UniformBound, DominatesTmsvOracleAndIsApproachedFromBelow) {
  const double eta = 0.5, n_b = 0.0, sigma = 0.3;
  const double e = uniform_bound_thermal(eta, n_b, sigma).bound_value;
  double previous = 0.0;
  double previous_gap = 1.0;
  for (double n_s : {0.5, 1.0, 2.0, 4.0}) {
    const int cutoff = 80;
    const auto psi = make_tmsv_fock(n_s, cutoff);
    const auto ideal = apply_map(pure_loss_map(eta, cutoff, cutoff), psi, 1);
    const auto sim = apply_map(thermal_map(eta, n_b + eta * sigma / (1 - eta), cutoff, cutoff), psi, 1);
    const double p = p_distance(fidelity_fock(ideal, sim));
    EXPECT_LE(p, e + 1e-4);
    EXPECT_GE(p, previous);
    EXPECT_LE(e - p, previous_gap);
    previous = p;
    previous_gap = e - p;
  }
}

}  // namespace
}  // namespace gt
