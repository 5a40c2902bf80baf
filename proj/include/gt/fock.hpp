#pragma once

// Truncated photon-number representation of one- and two-mode states.
//
// Density matrices are stored block-diagonally by a conserved charge:
//   * number            (one mode)  charge n, the state is diagonal;
//   * number_difference (two modes) charge n0 - n1;
//   * none              a single dense block.
// Phase-insensitive channels preserve both symmetries, which keeps two-mode
// oracles at cutoff 60 to blocks of at most 61 x 61.
//
// Channel outputs are truncated, not renormalized: the lost trace is
// reported as leakage.

#include <array>
#include <complex>
#include <functional>
#include <map>
#include <vector>

#include "gt/symplectic.hpp"

namespace gt {

enum class FockSymmetry { none, number, number_difference };

inline constexpr double kDefaultTruncationFloor = 1.0 - 1e-6;

using Occupation = std::array<int, 2>;  // unused second entry is 0 for one mode

class FockState {
 public:
  /// Empty (zero) state with the given layout.
  FockState(int modes, std::vector<int> cutoffs, FockSymmetry symmetry);

  int modes() const { return modes_; }
  const std::vector<int>& cutoffs() const { return cutoffs_; }
  int cutoff() const;
  FockSymmetry symmetry() const { return symmetry_; }

  /// Trace of the untruncated state captured by the basis.
  double truncation_weight() const { return truncation_weight_; }
  void set_truncation_weight(double w) { truncation_weight_ = w; }
  /// Trace lost to the cutoff by channels applied to this state.
  double leakage() const { return leakage_; }
  void set_leakage(double l) { leakage_ = l; }
  bool trusted(double floor = kDefaultTruncationFloor) const;

  const std::map<int, CMatrix>& blocks() const { return blocks_; }
  /// Block of the given charge, created (zero) if absent.
  CMatrix& block(int charge);

  /// Basis of a block, in storage order.
  std::vector<Occupation> block_basis(int charge) const;
  int charge_of(const Occupation& n) const;
  /// Position of `n` inside its block, or -1 if outside the cutoffs.
  int position_in_block(const Occupation& n) const;

  std::complex<double> element(const Occupation& row, const Occupation& col) const;
  void add_to_element(const Occupation& row, const Occupation& col, std::complex<double> value);

  double trace() const;
  /// Full matrix in lexicographic order (mode 0 most significant).
  CMatrix to_dense() const;
  std::size_t dimension() const;

  /// Calls fn(row, col, value) for every stored entry.
  void for_each_entry(const std::function<void(const Occupation&, const Occupation&, std::complex<double>)>& fn) const;

 private:
  int modes_;
  std::vector<int> cutoffs_;
  FockSymmetry symmetry_;
  std::map<int, CMatrix> blocks_;
  double truncation_weight_ = 1.0;
  double leakage_ = 0.0;
};

FockState make_vacuum_fock(int modes, int cutoff);
/// Pure two-mode state sum_n c_n |n, n>, normalized over n <= cutoff.
FockState make_correlated_pure(const std::vector<double>& amplitudes, double truncation_weight);
/// Entangled state with amplitudes proportional to 1/n, n = 1..cutoff.
FockState make_basel_state(int cutoff);
/// Classically correlated mixture with weights proportional to 1/n^2.
FockState make_basel_classical(int cutoff);
FockState make_tmsv_fock(double n_s, int cutoff);
FockState make_thermal_fock(double n_b, int cutoff);
/// Single-mode diagonal state from populations p_0..p_c (used as given).
FockState make_diagonal_fock(const std::vector<double>& populations, double truncation_weight = 1.0);
/// Single-mode state from a dense matrix, no symmetry assumed.
FockState make_dense_fock(const CMatrix& rho, double truncation_weight = 1.0);

/// (6 / pi^2) sum_{n <= cutoff} 1/n^2.
double basel_weight(int cutoff);

/// Reduced state of one mode of a two-mode state.
FockState partial_trace(const FockState& state, int keep_mode);
FockState tensor(const FockState& a, const FockState& b);
/// Re-expresses the state without symmetry (single dense block).
FockState densify(const FockState& state);

/// Phase-insensitive channel in transfer form:
///   N(|n><n+d|) = sum_j transfer[d](j, n) |j><j+d|,   d >= 0,
/// with j ranging over 0..output_cutoff.
struct PhaseInsensitiveMap {
  int input_cutoff = 0;
  int output_cutoff = 0;
  std::vector<Matrix> transfer;  // transfer[d] is (output_cutoff+1) x (input_cutoff+1)
};

PhaseInsensitiveMap pure_loss_map(double eta, int input_cutoff, int output_cutoff);
PhaseInsensitiveMap quantum_limited_amplifier_map(double gain, int input_cutoff, int output_cutoff);
/// `second` after `first`; the intermediate space has first.output_cutoff.
PhaseInsensitiveMap compose_maps(const PhaseInsensitiveMap& second, const PhaseInsensitiveMap& first);

/// Thermal, amplifier and additive-noise channels written as a quantum-limited
/// amplifier after a pure loss. `intermediate_cutoff` bounds the space between
/// the two stages.
PhaseInsensitiveMap thermal_map(double eta, double n_b, int input_cutoff, int output_cutoff);
PhaseInsensitiveMap amplifier_map(double gain, double n_b, int input_cutoff, int output_cutoff);
PhaseInsensitiveMap additive_noise_map(double xi, int input_cutoff, int output_cutoff);

/// Teleportation channel transfer matrices by direct quadrature of the
/// Gaussian-weighted displacement integral; converged to `tolerance`.
PhaseInsensitiveMap teleport_map_quadrature(double sigma_bar, int input_cutoff, int output_cutoff,
                                            double tolerance = 1e-10);

/// Radial part of <m|D(alpha)|n> at u = |alpha|^2, for all m, n <= cutoff:
/// result(m, n).
Matrix displacement_radial(double u, int cutoff);

/// Applies the map to `target_mode`; the output keeps the input symmetry and
/// the target mode takes map.output_cutoff.
FockState apply_map(const PhaseInsensitiveMap& map, const FockState& state, int target_mode);

/// The teleportation channel on `target_mode`, output cutoff equal to the
/// input cutoff unless given.
FockState apply_teleport_channel_fock(const FockState& state, double sigma_bar, int target_mode,
                                      int output_cutoff = -1);

/// Fock-level unitary / reset adaptors.
FockState apply_unitary(const FockState& state, const CMatrix& unitary);
FockState swap_modes(const FockState& state);
FockState phase_rotate(const FockState& state, int mode, double phi);
FockState reset_mode_to_vacuum(const FockState& state, int mode);

/// Uhlmann fidelity ||sqrt(a) sqrt(b)||_1^2, computed blockwise when the
/// layouts agree.
double fidelity_fock(const FockState& a, const FockState& b);
/// (1/2)||a - b||_1.
double trace_distance_fock(const FockState& a, const FockState& b);

/// chi(u) for a number-diagonal state at u = |alpha|^2:
///   sum_n p_n e^{-u/2} L_n(u).
class CharacteristicFunction {
 public:
  explicit CharacteristicFunction(std::vector<double> populations);
  double operator()(double u) const;
  double operator()(std::complex<double> alpha) const { return (*this)(std::norm(alpha)); }

 private:
  std::vector<double> populations_;
};

CharacteristicFunction char_function_fock_diagonal(const FockState& state);

struct InfidelityResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
};

/// 1 - int d^2 alpha G(alpha) |chi(alpha)|^2 for a purification of the given
/// number-diagonal reduced state.
InfidelityResult entanglement_infidelity_teleport(const FockState& reduced_state, double sigma_bar);

/// Mean photon number of a one-mode state.
double mean_photon_number(const FockState& state);

/// First and second moments in the covariance convention (vacuum = I).
struct FockMoments {
  Vector mean;
  Matrix cov;
};

FockMoments fock_moments(const FockState& state);

}  // namespace gt
