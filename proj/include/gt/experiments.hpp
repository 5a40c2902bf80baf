#pragma once

// Sweeps over the teleportation imperfection and probe energy: strong
// convergence on fixed states, divergence of the worst case for the ideal
// channel, tensor powers, adaptive protocols and bound-versus-oracle tables.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gt/channels.hpp"
#include "gt/fock.hpp"
#include "gt/json_fields.hpp"

namespace gt {

enum class ExperimentKind { strong_fixed_state, uniform_divergence, tensor_power, adaptive_serial, bound_vs_oracle };

std::string to_string(ExperimentKind kind);

enum class ProbeKind { vacuum, tmsv, basel, product_vacuum };

std::string to_string(ProbeKind kind);

struct ProbeSpec {
  ProbeKind kind = ProbeKind::tmsv;
  double n_s = 1.0;  // tmsv only
};

enum class AdaptorKind { identity, random_symplectic, swap, phase_rotation, reset };

std::string to_string(AdaptorKind kind);

struct SweepSpec {
  ExperimentKind experiment = ExperimentKind::strong_fixed_state;
  std::vector<ProbeSpec> probes;             // one entry except for bound_vs_oracle
  std::vector<double> sigma_grid;            // strictly decreasing, positive
  std::vector<double> n_s_grid;              // strictly increasing, >= 0
  int cutoff = 60;                           // Fock cutoff of the probe, 0 disables the oracle
  int output_cutoff = -1;                    // channel output cutoff, defaults to `cutoff`
  double truncation_floor = kDefaultTruncationFloor;
  std::optional<ChannelDescriptor> channel;  // adaptive_serial, bound_vs_oracle
  int uses = 2;                              // adaptive_serial
  AdaptorKind adaptor = AdaptorKind::identity;
  int instances = 1;                         // adaptive_serial, random adaptors per sigma
  std::uint64_t seed = 0;
  std::string output_path;
};

/// Throws std::invalid_argument on any violated precondition.
void validate(const SweepSpec& spec);

SweepSpec sweep_spec_from_json(const Json& doc);
Json sweep_spec_to_json(const SweepSpec& spec);

struct SweepRow {
  std::string probe;
  double sigma_bar = 0.0;
  std::optional<double> n_s;
  std::optional<int> instance;
  std::string metric;                  // "infidelity" or "p_distance"
  double value = 0.0;                  // primary result
  std::optional<double> analytic;      // closed form or covariance-level exact value
  std::optional<double> oracle;        // Fock-level value
  std::optional<double> bound;         // telescoping or uniform bound
  std::optional<double> uniform_bound;  // uses * e for adaptive protocols
  double truncation_weight = 1.0;
};

/// Raised when a probe or channel output loses more weight to the cutoff
/// than the truncation floor allows.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(std::size_t row, const std::string& message)
      : std::runtime_error(message), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

std::vector<SweepRow> run_strong_convergence(const SweepSpec& spec, int threads = 1);
std::vector<SweepRow> run_uniform_divergence(const SweepSpec& spec, int threads = 1);
std::vector<SweepRow> run_tensor_power(const SweepSpec& spec, int threads = 1);
std::vector<SweepRow> run_adaptive_serial(const SweepSpec& spec, int threads = 1);
std::vector<SweepRow> run_bound_vs_oracle(const SweepSpec& spec, int threads = 1);
std::vector<SweepRow> run_sweep(const SweepSpec& spec, int threads = 1);

/// Invariants the rows of a sweep must satisfy; one message per violation.
std::vector<std::string> check_rows(const SweepSpec& spec, const std::vector<SweepRow>& rows);

/// Closed forms used by the sweeps.
double tmsv_teleport_infidelity(double n_s, double sigma_bar);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// CSV with a header row, 17 significant digits and a trailing
/// "# gtsim <version> config_hash=<hex> experiment=<kind>" line.
std::string rows_to_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows);

}  // namespace gt
