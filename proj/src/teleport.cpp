#include "gt/teleport.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "gt/fidelity.hpp"

namespace gt {

namespace {

void require_sigma(double sigma_bar) {
  if (!(sigma_bar > 0.0)) throw std::invalid_argument(fmt::format("sigma must be positive, got {}", sigma_bar));
}

std::optional<ChannelDescriptor> simulated_descriptor(const ChannelDescriptor& d, double sigma, std::string& note) {
  switch (d.kind) {
    case ChannelKind::thermal:
    case ChannelKind::pure_loss: {
      const double eta = d.params[0];
      const double n_b = d.kind == ChannelKind::thermal ? d.params[1] : 0.0;
      const double shifted = n_b + eta * sigma / (1.0 - eta);
      note = fmt::format("thermal: N_B -> N_B + eta sigma / (1 - eta) = {:.17g}", shifted);
      return ChannelDescriptor{ChannelKind::thermal, {eta, shifted}, {}};
    }
    case ChannelKind::amplifier:
    case ChannelKind::pure_amplifier: {
      const double gain = d.params[0];
      const double n_b = d.kind == ChannelKind::amplifier ? d.params[1] : 0.0;
      const double shifted = n_b + gain * sigma / (gain - 1.0);
      note = fmt::format("amplifier: N_B -> N_B + G sigma / (G - 1) = {:.17g}", shifted);
      return ChannelDescriptor{ChannelKind::amplifier, {gain, shifted}, {}};
    }
    case ChannelKind::additive_noise:
      note = fmt::format("additive noise: xi -> xi + sigma = {:.17g}", d.params[0] + sigma);
      return ChannelDescriptor{ChannelKind::additive_noise, {d.params[0] + sigma}, {}};
    case ChannelKind::identity:
      note = "identity: becomes additive noise with variance sigma";
      return ChannelDescriptor{ChannelKind::additive_noise, {sigma}, {}};
    case ChannelKind::tensor: {
      ChannelDescriptor out{ChannelKind::tensor, {}, {}};
      std::vector<std::string> parts;
      for (const auto& f : d.factors) {
        std::string part;
        auto sim = simulated_descriptor(f, sigma, part);
        if (!sim) return std::nullopt;
        out.factors.push_back(*sim);
        parts.push_back(part);
      }
      note = "per mode: " + fmt::format("{}", fmt::join(parts, "; "));
      return out;
    }
    case ChannelKind::raw: break;
  }
  return std::nullopt;
}

double thermal_distance(double n_b, double shifted) { return fidelity_thermal_thermal(n_b, shifted).p_distance; }

}  // namespace

std::string to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::thermal: return "thermal";
    case BoundKind::pure_loss: return "pure_loss";
    case BoundKind::amplifier: return "amplifier";
    case BoundKind::pure_amplifier: return "pure_amplifier";
    case BoundKind::additive_noise: return "additive_noise";
    case BoundKind::multimode: return "multimode";
  }
  return "unknown";
}

GaussianChannel make_teleport_channel(double sigma_bar, int modes) {
  require_sigma(sigma_bar);
  return make_additive_noise(sigma_bar, modes);
}

SimulationMap simulate(const GaussianChannel& channel, double sigma_bar) {
  require_sigma(sigma_bar);
  const auto noise = make_teleport_channel(sigma_bar, channel.modes());
  const auto composed = compose(channel, noise);
  std::string note = "Y -> Y + 2 sigma X^T X";
  std::optional<ChannelDescriptor> named;
  if (channel.descriptor()) named = simulated_descriptor(*channel.descriptor(), sigma_bar, note);
  GaussianChannel simulated(composed.x(), composed.y(), composed.d(), named);
  return {channel, sigma_bar, std::move(simulated), std::move(note)};
}

BoundReport uniform_bound_thermal(double eta, double n_b, double sigma_bar) {
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("thermal bound needs eta in (0, 1)");
  if (n_b < 0.0) throw std::invalid_argument("thermal bound needs N_B >= 0");
  require_sigma(sigma_bar);
  const double value = thermal_distance(n_b, n_b + eta * sigma_bar / (1.0 - eta));
  return n_b == 0.0 ? BoundReport{{ChannelKind::pure_loss, {eta}, {}}, sigma_bar, value, BoundKind::pure_loss}
                    : BoundReport{{ChannelKind::thermal, {eta, n_b}, {}}, sigma_bar, value, BoundKind::thermal};
}

BoundReport uniform_bound_amplifier(double gain, double n_b, double sigma_bar) {
  if (!(gain > 1.0)) throw std::invalid_argument("amplifier bound needs G > 1");
  if (n_b < 0.0) throw std::invalid_argument("amplifier bound needs N_B >= 0");
  require_sigma(sigma_bar);
  const double value = thermal_distance(n_b, n_b + gain * sigma_bar / (gain - 1.0));
  return n_b == 0.0
             ? BoundReport{{ChannelKind::pure_amplifier, {gain}, {}}, sigma_bar, value, BoundKind::pure_amplifier}
             : BoundReport{{ChannelKind::amplifier, {gain, n_b}, {}}, sigma_bar, value, BoundKind::amplifier};
}

BoundReport uniform_bound_additive(double xi, double sigma_bar) {
  if (!(xi > 0.0)) throw std::invalid_argument("additive-noise bound needs xi > 0");
  require_sigma(sigma_bar);
  const double s = 2.0 * xi + sigma_bar;
  const double value = std::sqrt(std::max(0.0, 1.0 - 4.0 * xi * (xi + sigma_bar) / (s * s)));
  return {{ChannelKind::additive_noise, {xi}, {}}, sigma_bar, value, BoundKind::additive_noise};
}

BoundReport uniform_bound(const ChannelDescriptor& channel, double sigma_bar) {
  switch (channel.kind) {
    case ChannelKind::thermal: return uniform_bound_thermal(channel.params.at(0), channel.params.at(1), sigma_bar);
    case ChannelKind::pure_loss: return uniform_bound_thermal(channel.params.at(0), 0.0, sigma_bar);
    case ChannelKind::amplifier: return uniform_bound_amplifier(channel.params.at(0), channel.params.at(1), sigma_bar);
    case ChannelKind::pure_amplifier: return uniform_bound_amplifier(channel.params.at(0), 0.0, sigma_bar);
    case ChannelKind::additive_noise: return uniform_bound_additive(channel.params.at(0), sigma_bar);
    case ChannelKind::tensor: {
      std::vector<double> parts;
      for (const auto& f : channel.factors) parts.push_back(uniform_bound(f, sigma_bar).bound_value);
      return {channel, sigma_bar, telescoping_bound_parallel(parts), BoundKind::multimode};
    }
    case ChannelKind::identity:
      throw std::invalid_argument("the identity channel has no uniform bound: its simulation converges only strongly");
    case ChannelKind::raw: break;
  }
  throw std::invalid_argument("uniform bound needs a named channel family");
}

EnvironmentStateBuilder phase_insensitive_environment(const GaussianChannel& channel) {
  const auto& desc = channel.descriptor();
  if (!desc) throw std::invalid_argument("environment builder needs a named channel");
  const auto factors = desc->kind == ChannelKind::tensor ? desc->factors : std::vector<ChannelDescriptor>{*desc};
  const int m = static_cast<int>(factors.size());
  Vector scale(2 * m);
  for (int k = 0; k < m; ++k) {
    const auto& f = factors[k];
    double s = 0.0;
    switch (f.kind) {
      case ChannelKind::thermal:
      case ChannelKind::pure_loss: s = 1.0 / (1.0 - f.params[0]); break;
      case ChannelKind::amplifier:
      case ChannelKind::pure_amplifier: s = 1.0 / (f.params[0] - 1.0); break;
      default:
        throw std::invalid_argument(
            fmt::format("no environment-state builder for channel family '{}'", to_string(f.kind)));
    }
    scale(k) = scale(k + m) = std::sqrt(s);
  }
  return [scale](const Matrix& noise) {
    return GaussianState(Vector::Zero(noise.rows()), scale.asDiagonal() * noise * scale.asDiagonal());
  };
}

BoundReport uniform_bound_multimode(const GaussianChannel& channel, double sigma_bar,
                                    const EnvironmentStateBuilder& environment) {
  require_sigma(sigma_bar);
  const int m = channel.modes();
  const Matrix omega = SymplecticForm(m).matrix();
  const Matrix gap = omega - channel.x().transpose() * omega * channel.x();
  const double smallest = gap.jacobiSvd().singularValues().minCoeff();
  if (smallest < 1e-10) {
    throw std::invalid_argument(fmt::format(
        "Omega - X^T Omega X is rank deficient (smallest singular value {:.3g}); the teleportation "
        "simulation of this channel converges only strongly, not uniformly",
        smallest));
  }
  const Matrix noisy = channel.y() + kTeleportNoiseScale * sigma_bar * Matrix::Identity(2 * m, 2 * m);
  const auto f = fidelity_gaussian_zero_mean(environment(channel.y()), environment(noisy));
  ChannelDescriptor desc = channel.descriptor().value_or(ChannelDescriptor{});
  return {desc, sigma_bar, f.p_distance, BoundKind::multimode};
}

PhaseInsensitiveMap fock_map_for(const ChannelDescriptor& d, int input_cutoff, int output_cutoff) {
  switch (d.kind) {
    case ChannelKind::thermal: return thermal_map(d.params[0], d.params[1], input_cutoff, output_cutoff);
    case ChannelKind::pure_loss: return pure_loss_map(d.params[0], input_cutoff, output_cutoff);
    case ChannelKind::amplifier: return amplifier_map(d.params[0], d.params[1], input_cutoff, output_cutoff);
    case ChannelKind::pure_amplifier: return quantum_limited_amplifier_map(d.params[0], input_cutoff, output_cutoff);
    case ChannelKind::additive_noise: return additive_noise_map(d.params[0], input_cutoff, output_cutoff);
    default: break;
  }
  throw std::invalid_argument(fmt::format("no Fock map for channel '{}'", d.label()));
}

double telescoping_bound_parallel(std::span<const double> per_use_p) {
  for (double p : per_use_p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("per-use distances must lie in [0, 1]");
  }
  return std::min(1.0, std::accumulate(per_use_p.begin(), per_use_p.end(), 0.0));
}

double telescoping_bound_serial(std::span<const double> per_step_p) { return telescoping_bound_parallel(per_step_p); }

}  // namespace gt
