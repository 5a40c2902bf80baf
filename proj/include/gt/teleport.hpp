#pragma once

// Teleportation simulation G -> G o T(sigma) and the uniform bounds on the
// distance between a channel and its simulation.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "gt/channels.hpp"
#include "gt/fock.hpp"

namespace gt {

/// Noise added per quadrature by teleportation with imperfection sigma:
/// Y = kTeleportNoiseScale * sigma * I.
inline constexpr double kTeleportNoiseScale = 2.0;

GaussianChannel make_teleport_channel(double sigma_bar, int modes = 1);

struct SimulationMap {
  GaussianChannel original;
  double sigma_bar;
  GaussianChannel simulated;
  std::string param_note;
};

/// simulated = compose(original, T(sigma)) exactly; named families are
/// re-expressed in closed form (thermal N_B + eta sigma / (1 - eta), amplifier
/// N_B + G sigma / (G - 1), additive noise xi + sigma).
SimulationMap simulate(const GaussianChannel& channel, double sigma_bar);

enum class BoundKind { thermal, pure_loss, amplifier, pure_amplifier, additive_noise, multimode };

std::string to_string(BoundKind kind);

struct BoundReport {
  ChannelDescriptor channel;
  double sigma_bar = 0.0;
  double bound_value = 0.0;  // P-distance in [0, 1]
  BoundKind kind = BoundKind::thermal;
};

/// P(theta(N_B), theta(N_B + eta sigma / (1 - eta))).
BoundReport uniform_bound_thermal(double eta, double n_b, double sigma_bar);
/// P(theta(N_B), theta(N_B + G sigma / (G - 1))).
BoundReport uniform_bound_amplifier(double gain, double n_b, double sigma_bar);
/// sqrt(1 - 4 xi (xi + sigma) / (2 xi + sigma)^2).
BoundReport uniform_bound_additive(double xi, double sigma_bar);
/// Dispatches on the named family; tensor products get the sum of the
/// per-factor bounds (capped at 1). Throws for the identity channel.
BoundReport uniform_bound(const ChannelDescriptor& channel, double sigma_bar);

/// Maps a channel noise matrix Y to the environment state whose
/// distinguishability controls the bound.
using EnvironmentStateBuilder = std::function<GaussianState(const Matrix& noise)>;

/// Environment builder for tensor products of thermal / amplifier channels:
/// per mode, V_E = Y / (1 - eta) or Y / (G - 1).
EnvironmentStateBuilder phase_insensitive_environment(const GaussianChannel& channel);

/// P(gamma_E(Y), gamma_E(Y + kTeleportNoiseScale * sigma * I)), with sigma the
/// noise referred to the channel output. Throws std::invalid_argument if
/// Omega - X^T Omega X is not full rank.
BoundReport uniform_bound_multimode(const GaussianChannel& channel, double sigma_bar,
                                    const EnvironmentStateBuilder& environment);

/// Transfer-form map of a named single-mode phase-insensitive channel.
PhaseInsensitiveMap fock_map_for(const ChannelDescriptor& channel, int input_cutoff, int output_cutoff);

/// min(1, sum of per-use distances).
double telescoping_bound_parallel(std::span<const double> per_use_p);
double telescoping_bound_serial(std::span<const double> per_step_p);

}  // namespace gt
