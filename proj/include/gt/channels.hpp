#pragma once

// Gaussian channels in (X, Y, d) form acting on moments as
//   mu -> X^T mu + d,   V -> X^T V X + Y,
// valid iff Y + i (Omega - X^T Omega X) >= 0.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gt/symplectic.hpp"

namespace gt {

enum class ChannelKind {
  identity,
  thermal,         // params: eta, n_b
  amplifier,       // params: gain, n_b
  additive_noise,  // params: xi
  pure_loss,       // params: eta
  pure_amplifier,  // params: gain
  tensor,          // factors
  raw,
};

std::string to_string(ChannelKind kind);
ChannelKind channel_kind_from_string(const std::string& name);

/// Named-family provenance of a channel, used for closed-form shortcuts and
/// dilations.
struct ChannelDescriptor {
  ChannelKind kind = ChannelKind::raw;
  std::vector<double> params;
  std::vector<ChannelDescriptor> factors;

  std::string label() const;
  int modes() const;
};

struct CpDiagnostics {
  bool valid = false;
  double min_eigenvalue = 0.0;  // of Y + i (Omega - X^T Omega X)
  double min_y_eigenvalue = 0.0;
};

CpDiagnostics check_complete_positivity(const Matrix& x, const Matrix& y);

class GaussianChannel {
 public:
  /// Throws std::invalid_argument if the matrices have inconsistent sizes or
  /// violate the CP condition.
  GaussianChannel(Matrix x, Matrix y, Vector d, std::optional<ChannelDescriptor> descriptor = {});

  int modes() const { return static_cast<int>(x_.rows()) / 2; }
  const Matrix& x() const { return x_; }
  const Matrix& y() const { return y_; }
  const Vector& d() const { return d_; }
  const std::optional<ChannelDescriptor>& descriptor() const { return descriptor_; }

 private:
  Matrix x_;
  Matrix y_;
  Vector d_;
  std::optional<ChannelDescriptor> descriptor_;
};

GaussianChannel identity_channel(int modes);
GaussianChannel make_thermal(double eta, double n_b);
GaussianChannel make_amplifier(double gain, double n_b);
/// Random displacement with variance xi per mode: X = I, Y = 2 xi I.
GaussianChannel make_additive_noise(double xi, int modes = 1);
GaussianChannel make_pure_loss(double eta);
GaussianChannel make_pure_amplifier(double gain);
/// Gaussian unitary V -> S V S^T as a channel (X = S^T, Y = 0).
GaussianChannel make_symplectic_channel(const Matrix& s);
GaussianChannel make_channel(const ChannelDescriptor& descriptor);

GaussianState apply(const GaussianChannel& channel, const GaussianState& state);

/// id (x) channel, with `channel` acting on `target_modes` of `state`.
GaussianState apply_on_subsystem(const GaussianChannel& channel, const GaussianState& state,
                                 std::span<const int> target_modes);

/// The channel acting on `target_modes` of a `total_modes` system, identity
/// elsewhere.
GaussianChannel embed(const GaussianChannel& channel, std::span<const int> target_modes,
                      int total_modes);

/// `first` followed by `second`.
GaussianChannel compose(const GaussianChannel& second, const GaussianChannel& first);

/// Parallel composition; the modes of `b` follow those of `a`.
GaussianChannel tensor(const GaussianChannel& a, const GaussianChannel& b);

/// Symplectic dilation on system (+) environment. Modes 0..m-1 are the system,
/// m..2m-1 the environment; quadrature ordering as everywhere else.
struct Dilation {
  Matrix symplectic;
  GaussianState env_state;
  int system_modes = 0;
};

/// Supported for thermal / amplifier families (including pure-loss and
/// pure-amplifier) and tensor products of them.
Dilation dilate(const GaussianChannel& channel);

/// Tr_E[ U (rho (x) env) U^dag ] at the moment level.
GaussianState dilation_output(const Dilation& dilation, const GaussianState& input);

/// Moment-level residual of N(D(z) rho D(z)^dag) = D(X^T z) N(rho) D(X^T z)^dag.
double check_displacement_covariance(const GaussianChannel& channel, const Vector& z,
                                     const GaussianState& state);

double max_abs_diff(const GaussianChannel& a, const GaussianChannel& b);

// JSON: {"kind": "...", "params": {...}} for named channels (and
// {"kind": "tensor", "factors": [...]}) or {"X": [[...]], "Y": [[...]], "d": [...]}
// with row-major nested arrays.
nlohmann::json channel_to_json(const GaussianChannel& channel);
GaussianChannel channel_from_json(const nlohmann::json& doc);
nlohmann::json descriptor_to_json(const ChannelDescriptor& descriptor);
ChannelDescriptor descriptor_from_json(const nlohmann::json& doc);

}  // namespace gt
