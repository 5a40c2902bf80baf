#include "gt/fidelity.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include <fmt/format.h>

namespace gt {

std::string to_string(FidelityMethod method) {
  switch (method) {
    case FidelityMethod::closed_form_thermal: return "closed_form_thermal";
    case FidelityMethod::two_mode_overlap: return "two_mode_overlap";
    case FidelityMethod::multimode_zero_mean: return "multimode_zero_mean";
    case FidelityMethod::classical_gaussian: return "classical_gaussian";
    case FidelityMethod::fock_oracle: return "fock_oracle";
  }
  return "unknown";
}

MetricValue make_metric(double fidelity, FidelityMethod method) {
  if (!(fidelity >= -1e-12 && fidelity <= 1.0 + 1e-12)) {
    throw std::domain_error(fmt::format("fidelity {:.17g} outside [0, 1] ({})", fidelity, to_string(method)));
  }
  const double f = std::clamp(fidelity, 0.0, 1.0);
  return {f, std::sqrt(1.0 - f), method};
}

double p_distance(double fidelity) { return std::sqrt(std::max(0.0, 1.0 - fidelity)); }

double overlap_zero_mean(const Matrix& v1, const Matrix& v2) {
  if (v1.rows() != v2.rows() || v1.cols() != v2.cols() || v1.rows() % 2 != 0) {
    throw std::invalid_argument("overlap: covariance matrices must have equal even dimension");
  }
  const double det = (v1 + v2).determinant();
  if (!(det > 0.0)) throw std::domain_error("overlap: V1 + V2 is singular");
  return std::pow(2.0, static_cast<double>(v1.rows() / 2)) / std::sqrt(det);
}

double overlap_two_mode_zero_mean(const Matrix& v1, const Matrix& v2) {
  if (v1.rows() != 4) throw std::invalid_argument("two-mode overlap needs 4x4 covariance matrices");
  return overlap_zero_mean(v1, v2);
}

MetricValue fidelity_thermal_thermal(double n1, double n2) {
  if (n1 < 0.0 || n2 < 0.0) throw std::invalid_argument("thermal fidelity needs nonnegative photon numbers");
  const double root = std::sqrt((n1 + 1.0) * (n2 + 1.0)) - std::sqrt(n1 * n2);
  return make_metric(1.0 / (root * root), FidelityMethod::closed_form_thermal);
}

MetricValue fidelity_classical_gaussian(double xi1, double xi2) {
  if (!(xi1 > 0.0 && xi2 > 0.0)) throw std::invalid_argument("classical Gaussian fidelity needs positive variances");
  const double s = xi1 + xi2;
  return make_metric(4.0 * xi1 * xi2 / (s * s), FidelityMethod::classical_gaussian);
}

// Closed form for zero-mean states with covariances written in the
// vacuum = I/2 normalization:
//   V_aux = Omega^T (V1 + V2)^{-1} (Omega / 4 + V2 Omega V1),
//   F^2 = det[2 (sqrt(I + (V_aux Omega)^{-2} / 4) + I) V_aux] / det(V1 + V2).
// The matrix square root is evaluated on the eigenvalues of V_aux Omega.
MetricValue fidelity_gaussian_zero_mean(const GaussianState& a, const GaussianState& b) {
  if (a.modes() != b.modes()) throw std::invalid_argument("fidelity: states have different mode counts");
  if (!a.is_zero_mean() || !b.is_zero_mean()) {
    throw std::invalid_argument("fidelity: only zero-mean Gaussian states are supported");
  }
  const int m = a.modes();
  // For a pure argument F = Tr(a b); this avoids the square-root branch point
  // of the general formula.
  const auto is_pure = [](const GaussianState& s) {
    return (williamson(s).nus.array() - 1.0).abs().maxCoeff() < 1e-11 * std::max(1.0, s.cov().cwiseAbs().maxCoeff());
  };
  if (is_pure(a) || is_pure(b)) {
    return make_metric(overlap_zero_mean(a.cov(), b.cov()), FidelityMethod::multimode_zero_mean);
  }
  const Matrix omega = SymplecticForm(m).matrix();
  const Matrix v1 = 0.5 * a.cov();
  const Matrix v2 = 0.5 * b.cov();
  const Matrix sum = v1 + v2;
  const Eigen::PartialPivLU<Matrix> lu(sum);
  const Matrix aux = omega.transpose() * lu.solve(0.25 * omega + v2 * omega * v1);
  const Eigen::ComplexEigenSolver<CMatrix> es((aux * omega).cast<std::complex<double>>(), false);
  std::complex<double> prod(1.0, 0.0);
  for (const auto& lambda : es.eigenvalues()) {
    prod *= 1.0 + std::sqrt(1.0 + 1.0 / (4.0 * lambda * lambda));
  }
  const double ratio = std::pow(4.0, m) * prod.real() * aux.determinant() / lu.determinant();
  return make_metric(std::sqrt(std::max(0.0, ratio)), FidelityMethod::multimode_zero_mean);
}

TraceDistanceBounds fuchs_van_de_graaf_bounds(double fidelity) {
  if (!(fidelity >= 0.0 && fidelity <= 1.0)) throw std::invalid_argument("fidelity must lie in [0, 1]");
  return {1.0 - std::sqrt(fidelity), std::sqrt(1.0 - fidelity)};
}

}  // namespace gt
