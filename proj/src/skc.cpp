#include "gt/skc.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace gt {

namespace {

void require_open_unit(double value, const char* name) {
  if (!(value > 0.0 && value < 1.0)) throw std::invalid_argument(fmt::format("{} must lie in (0, 1), got {}", name, value));
}

void require_uses(double uses) {
  if (!(uses >= 1.0)) throw std::invalid_argument(fmt::format("channel uses must be >= 1, got {}", uses));
}

}  // namespace

double c_epsilon(double eps) {
  require_open_unit(eps, "eps");
  return std::log2(6.0) + 2.0 * std::log2((1.0 + eps) / (1.0 - eps));
}

double bosonic_entropy(double n) {
  if (!(n >= 0.0)) throw std::invalid_argument(fmt::format("photon number must be >= 0, got {}", n));
  if (n == 0.0) return 0.0;
  return (n + 1.0) * std::log2(n + 1.0) - n * std::log2(n);
}

double pure_loss_bound(double eta, std::optional<double> uses, double eps) {
  require_open_unit(eta, "eta");
  const double asymptotic = -std::log2(1.0 - eta);
  if (!uses) {
    require_open_unit(eps, "eps");
    return asymptotic;
  }
  require_uses(*uses);
  return asymptotic + c_epsilon(eps) / *uses;
}

ThermalBoundTerms thermal_bound_terms(double eta, double n_b, double uses, double eps, double variance) {
  require_open_unit(eta, "eta");
  require_uses(uses);
  if (!(variance >= 0.0)) throw std::invalid_argument(fmt::format("variance term must be >= 0, got {}", variance));
  ThermalBoundTerms t;
  t.leading = -(std::log2(1.0 - eta) + n_b * std::log2(eta));
  t.entropy = -bosonic_entropy(n_b);
  t.finite_size = c_epsilon(eps) / uses;
  t.second_order = std::sqrt(2.0 * variance / (uses * (1.0 - eps)));
  return t;
}

double thermal_bound(double eta, double n_b, double uses, double eps, double variance) {
  return thermal_bound_terms(eta, n_b, uses, eps, variance).total();
}

}  // namespace gt
