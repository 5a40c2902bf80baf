#pragma once

// Fidelity F = ||sqrt(a) sqrt(b)||_1^2 and the sine distance P = sqrt(1 - F).

#include <string>

#include "gt/symplectic.hpp"

namespace gt {

enum class FidelityMethod {
  closed_form_thermal,
  two_mode_overlap,
  multimode_zero_mean,
  classical_gaussian,
  fock_oracle,
};

std::string to_string(FidelityMethod method);

struct MetricValue {
  double fidelity = 1.0;
  double p_distance = 0.0;
  FidelityMethod method = FidelityMethod::closed_form_thermal;
};

/// Clamps F into [0, 1]; throws std::domain_error if F lies outside
/// [-1e-12, 1 + 1e-12] or is NaN.
MetricValue make_metric(double fidelity, FidelityMethod method);

double p_distance(double fidelity);

/// Tr(a b) for two zero-mean Gaussian states: 2^m / sqrt(det(V1 + V2)).
/// For pure `a` this is the fidelity.
double overlap_zero_mean(const Matrix& v1, const Matrix& v2);

/// Two-mode special case, 4 / sqrt(det(V1 + V2)).
double overlap_two_mode_zero_mean(const Matrix& v1, const Matrix& v2);

MetricValue fidelity_thermal_thermal(double n1, double n2);

/// Fidelity of two circularly symmetric complex Gaussian densities with
/// variances xi1, xi2: 4 xi1 xi2 / (xi1 + xi2)^2.
MetricValue fidelity_classical_gaussian(double xi1, double xi2);

/// Uhlmann fidelity of two zero-mean m-mode Gaussian states.
MetricValue fidelity_gaussian_zero_mean(const GaussianState& a, const GaussianState& b);

/// Bounds on the trace distance (1/2)||a - b||_1 implied by a fidelity.
struct TraceDistanceBounds {
  double lower = 0.0;  // 1 - sqrt(F)
  double upper = 0.0;  // sqrt(1 - F)
};

TraceDistanceBounds fuchs_van_de_graaf_bounds(double fidelity);

}  // namespace gt
