#pragma once

// Finite-block upper bounds on secret-key rates over loss channels, in bits
// per channel use.

#include <optional>

namespace gt {

/// log2 6 + 2 log2((1 + eps) / (1 - eps)), eps in (0, 1).
double c_epsilon(double eps);

/// Bosonic entropy (N + 1) log2(N + 1) - N log2 N, with g(0) = 0.
double bosonic_entropy(double n);

/// -log2(1 - eta) + C(eps) / n. `uses` may be omitted for the asymptotic
/// value.
double pure_loss_bound(double eta, std::optional<double> uses, double eps);

struct ThermalBoundTerms {
  double leading = 0.0;       // -log2((1 - eta) eta^N_B)
  double entropy = 0.0;       // -g(N_B)
  double second_order = 0.0;  // sqrt(2 V / (n (1 - eps)))
  double finite_size = 0.0;   // C(eps) / n
  double total() const { return leading + entropy + second_order + finite_size; }
};

/// Thermal-loss bound with an externally supplied variance term V >= 0.
ThermalBoundTerms thermal_bound_terms(double eta, double n_b, double uses, double eps, double variance);
double thermal_bound(double eta, double n_b, double uses, double eps, double variance);

}  // namespace gt
