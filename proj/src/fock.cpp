#include "gt/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <fmt/format.h>

namespace gt {

namespace {

using cd = std::complex<double>;

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

int dimension_of(const std::vector<int>& cutoffs) {
  int d = 1;
  for (int c : cutoffs) d *= c + 1;
  return d;
}

Occupation with_mode(Occupation n, int mode, int value) {
  n[mode] = value;
  return n;
}

bool same_layout(const FockState& a, const FockState& b) {
  return a.modes() == b.modes() && a.cutoffs() == b.cutoffs() && a.symmetry() == b.symmetry();
}

// sqrt of a Hermitian PSD matrix, negative eigenvalues clipped.
CMatrix psd_sqrt(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (a + a.adjoint()));
  const Vector ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

double root_fidelity_block(const CMatrix& a, const CMatrix& b) {
  const CMatrix ra = psd_sqrt(a);
  const CMatrix m = ra * b * ra;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s += std::sqrt(std::max(0.0, es.eigenvalues()(i)));
  return s;
}

double trace_norm_hermitian(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

}  // namespace

FockState::FockState(int modes, std::vector<int> cutoffs, FockSymmetry symmetry)
    : modes_(modes), cutoffs_(std::move(cutoffs)), symmetry_(symmetry) {
  if (modes < 1 || modes > 2) throw std::invalid_argument("Fock states support one or two modes");
  if (static_cast<int>(cutoffs_.size()) != modes) throw std::invalid_argument("one cutoff per mode required");
  for (int c : cutoffs_) {
    if (c < 0) throw std::invalid_argument("cutoff must be nonnegative");
  }
  if (symmetry == FockSymmetry::number && modes != 1) throw std::invalid_argument("number symmetry is single-mode");
  if (symmetry == FockSymmetry::number_difference && modes != 2) {
    throw std::invalid_argument("number-difference symmetry is two-mode");
  }
}

int FockState::cutoff() const { return *std::max_element(cutoffs_.begin(), cutoffs_.end()); }

bool FockState::trusted(double floor) const { return truncation_weight_ >= floor && 1.0 - leakage_ >= floor; }

int FockState::charge_of(const Occupation& n) const {
  switch (symmetry_) {
    case FockSymmetry::none: return 0;
    case FockSymmetry::number: return n[0];
    case FockSymmetry::number_difference: return n[0] - n[1];
  }
  return 0;
}

int FockState::position_in_block(const Occupation& n) const {
  for (int k = 0; k < modes_; ++k) {
    if (n[k] < 0 || n[k] > cutoffs_[k]) return -1;
  }
  switch (symmetry_) {
    case FockSymmetry::none: return modes_ == 1 ? n[0] : n[0] * (cutoffs_[1] + 1) + n[1];
    case FockSymmetry::number: return 0;
    case FockSymmetry::number_difference: return n[0] - std::max(0, n[0] - n[1]);
  }
  return -1;
}

std::vector<Occupation> FockState::block_basis(int charge) const {
  std::vector<Occupation> out;
  switch (symmetry_) {
    case FockSymmetry::none:
      if (modes_ == 1) {
        for (int n = 0; n <= cutoffs_[0]; ++n) out.push_back({n, 0});
      } else {
        for (int a = 0; a <= cutoffs_[0]; ++a)
          for (int b = 0; b <= cutoffs_[1]; ++b) out.push_back({a, b});
      }
      break;
    case FockSymmetry::number:
      if (charge >= 0 && charge <= cutoffs_[0]) out.push_back({charge, 0});
      break;
    case FockSymmetry::number_difference:
      for (int a = std::max(0, charge); a <= std::min(cutoffs_[0], cutoffs_[1] + charge); ++a) {
        out.push_back({a, a - charge});
      }
      break;
  }
  return out;
}

CMatrix& FockState::block(int charge) {
  auto it = blocks_.find(charge);
  if (it == blocks_.end()) {
    const auto n = static_cast<Eigen::Index>(block_basis(charge).size());
    if (n == 0) throw std::out_of_range(fmt::format("no basis states carry charge {}", charge));
    it = blocks_.emplace(charge, CMatrix::Zero(n, n)).first;
  }
  return it->second;
}

std::complex<double> FockState::element(const Occupation& row, const Occupation& col) const {
  const int q = charge_of(row);
  if (q != charge_of(col)) return 0.0;
  const int r = position_in_block(row), c = position_in_block(col);
  if (r < 0 || c < 0) return 0.0;
  const auto it = blocks_.find(q);
  return it == blocks_.end() ? cd(0.0) : it->second(r, c);
}

void FockState::add_to_element(const Occupation& row, const Occupation& col, std::complex<double> value) {
  const int q = charge_of(row);
  if (q != charge_of(col)) {
    if (value == 0.0) return;
    throw std::logic_error("entry breaks the state's number symmetry");
  }
  const int r = position_in_block(row), c = position_in_block(col);
  if (r < 0 || c < 0) throw std::out_of_range("entry outside the cutoff");
  block(q)(r, c) += value;
}

double FockState::trace() const {
  double t = 0.0;
  for (const auto& [_, b] : blocks_) t += b.diagonal().real().sum();
  return t;
}

std::size_t FockState::dimension() const { return static_cast<std::size_t>(dimension_of(cutoffs_)); }

void FockState::for_each_entry(
    const std::function<void(const Occupation&, const Occupation&, std::complex<double>)>& fn) const {
  for (const auto& [q, b] : blocks_) {
    const auto basis = block_basis(q);
    for (Eigen::Index c = 0; c < b.cols(); ++c) {
      for (Eigen::Index r = 0; r < b.rows(); ++r) {
        if (b(r, c) != 0.0) fn(basis[r], basis[c], b(r, c));
      }
    }
  }
}

CMatrix FockState::to_dense() const {
  const int dim = dimension_of(cutoffs_);
  CMatrix out = CMatrix::Zero(dim, dim);
  const auto index = [&](const Occupation& n) { return modes_ == 1 ? n[0] : n[0] * (cutoffs_[1] + 1) + n[1]; };
  for_each_entry([&](const Occupation& r, const Occupation& c, cd v) { out(index(r), index(c)) = v; });
  return out;
}

FockState densify(const FockState& state) {
  FockState out(state.modes(), state.cutoffs(), FockSymmetry::none);
  out.block(0) = state.to_dense();
  out.set_truncation_weight(state.truncation_weight());
  out.set_leakage(state.leakage());
  return out;
}

double basel_weight(int cutoff) {
  double s = 0.0;
  for (int n = cutoff; n >= 1; --n) s += 1.0 / (static_cast<double>(n) * n);
  return 6.0 / (std::numbers::pi * std::numbers::pi) * s;
}

FockState make_vacuum_fock(int modes, int cutoff) {
  FockState s(modes, std::vector<int>(modes, cutoff),
              modes == 1 ? FockSymmetry::number : FockSymmetry::number_difference);
  s.add_to_element({0, 0}, {0, 0}, 1.0);
  return s;
}

FockState make_correlated_pure(const std::vector<double>& amplitudes, double truncation_weight) {
  if (amplitudes.empty()) throw std::invalid_argument("need at least one amplitude");
  const int cutoff = static_cast<int>(amplitudes.size()) - 1;
  Vector c = Eigen::Map<const Vector>(amplitudes.data(), cutoff + 1);
  const double norm = c.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("amplitudes must not all vanish");
  c /= norm;
  FockState s(2, {cutoff, cutoff}, FockSymmetry::number_difference);
  s.block(0) = (c * c.transpose()).cast<cd>();
  s.set_truncation_weight(truncation_weight);
  return s;
}

FockState make_basel_state(int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("Basel state needs cutoff >= 1");
  std::vector<double> amps(cutoff + 1, 0.0);
  for (int n = 1; n <= cutoff; ++n) amps[n] = 1.0 / n;
  return make_correlated_pure(amps, basel_weight(cutoff));
}

FockState make_basel_classical(int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("Basel state needs cutoff >= 1");
  FockState s(2, {cutoff, cutoff}, FockSymmetry::number_difference);
  double total = 0.0;
  for (int n = 1; n <= cutoff; ++n) total += 1.0 / (static_cast<double>(n) * n);
  for (int n = 1; n <= cutoff; ++n) s.add_to_element({n, n}, {n, n}, 1.0 / (static_cast<double>(n) * n) / total);
  s.set_truncation_weight(basel_weight(cutoff));
  return s;
}

FockState make_tmsv_fock(double n_s, int cutoff) {
  if (n_s < 0.0) throw std::invalid_argument("TMSV needs N_S >= 0");
  if (cutoff < 0) throw std::invalid_argument("cutoff must be nonnegative");
  const double ratio = n_s / (n_s + 1.0);
  std::vector<double> amps(cutoff + 1);
  for (int n = 0; n <= cutoff; ++n) amps[n] = std::sqrt(std::pow(ratio, n) / (n_s + 1.0));
  return make_correlated_pure(amps, 1.0 - std::pow(ratio, cutoff + 1));
}

FockState make_thermal_fock(double n_b, int cutoff) {
  if (n_b < 0.0) throw std::invalid_argument("thermal state needs N >= 0");
  const double ratio = n_b / (n_b + 1.0);
  std::vector<double> p(cutoff + 1);
  for (int n = 0; n <= cutoff; ++n) p[n] = std::pow(ratio, n) / (n_b + 1.0);
  const double weight = 1.0 - std::pow(ratio, cutoff + 1);
  for (auto& x : p) x /= weight;
  return make_diagonal_fock(p, weight);
}

FockState make_diagonal_fock(const std::vector<double>& populations, double truncation_weight) {
  if (populations.empty()) throw std::invalid_argument("need at least one population");
  FockState s(1, {static_cast<int>(populations.size()) - 1}, FockSymmetry::number);
  for (std::size_t n = 0; n < populations.size(); ++n) {
    if (populations[n] < 0.0) throw std::invalid_argument("populations must be nonnegative");
    if (populations[n] != 0.0) {
      const int k = static_cast<int>(n);
      s.add_to_element({k, 0}, {k, 0}, populations[n]);
    }
  }
  s.set_truncation_weight(truncation_weight);
  return s;
}

FockState make_dense_fock(const CMatrix& rho, double truncation_weight) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw std::invalid_argument("density matrix must be square");
  FockState s(1, {static_cast<int>(rho.rows()) - 1}, FockSymmetry::none);
  s.block(0) = rho;
  s.set_truncation_weight(truncation_weight);
  return s;
}

FockState partial_trace(const FockState& state, int keep_mode) {
  if (state.modes() != 2) throw std::invalid_argument("partial trace needs a two-mode state");
  if (keep_mode < 0 || keep_mode > 1) throw std::out_of_range("keep_mode must be 0 or 1");
  const int other = 1 - keep_mode;
  const auto sym = state.symmetry() == FockSymmetry::number_difference ? FockSymmetry::number : FockSymmetry::none;
  FockState out(1, {state.cutoffs()[keep_mode]}, sym);
  state.for_each_entry([&](const Occupation& r, const Occupation& c, cd v) {
    if (r[other] == c[other]) out.add_to_element({r[keep_mode], 0}, {c[keep_mode], 0}, v);
  });
  out.set_truncation_weight(state.truncation_weight());
  out.set_leakage(state.leakage());
  return out;
}

FockState tensor(const FockState& a, const FockState& b) {
  if (a.modes() != 1 || b.modes() != 1) throw std::invalid_argument("tensor expects two single-mode states");
  const bool diag = a.symmetry() == FockSymmetry::number && b.symmetry() == FockSymmetry::number;
  FockState out(2, {a.cutoffs()[0], b.cutoffs()[0]}, diag ? FockSymmetry::number_difference : FockSymmetry::none);
  a.for_each_entry([&](const Occupation& ra, const Occupation& ca, cd va) {
    b.for_each_entry([&](const Occupation& rb, const Occupation& cb, cd vb) {
      out.add_to_element({ra[0], rb[0]}, {ca[0], cb[0]}, va * vb);
    });
  });
  out.set_truncation_weight(a.truncation_weight() * b.truncation_weight());
  out.set_leakage(a.leakage() + b.leakage() - a.leakage() * b.leakage());
  return out;
}

// ---------------------------------------------------------------------------
// Phase-insensitive maps

PhaseInsensitiveMap pure_loss_map(double eta, int input_cutoff, int output_cutoff) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("pure loss needs eta in (0, 1]");
  PhaseInsensitiveMap map{input_cutoff, output_cutoff, {}};
  const double log_eta = std::log(eta);
  const double log_rest = eta < 1.0 ? std::log1p(-eta) : -INFINITY;
  for (int d = 0; d <= input_cutoff; ++d) {
    Matrix t = Matrix::Zero(output_cutoff + 1, input_cutoff + 1);
    for (int n = 0; n + d <= input_cutoff; ++n) {
      for (int l = 0; l <= n; ++l) {
        const int j = n - l;
        if (j + d > output_cutoff) continue;
        if (l > 0 && eta == 1.0) continue;
        const double lg = 0.5 * (log_binomial(n, l) + log_binomial(n + d, l)) +
                          0.5 * (2.0 * n + d - 2.0 * l) * log_eta + (l > 0 ? l * log_rest : 0.0);
        t(j, n) = std::exp(lg);
      }
    }
    map.transfer.push_back(std::move(t));
  }
  return map;
}

PhaseInsensitiveMap quantum_limited_amplifier_map(double gain, int input_cutoff, int output_cutoff) {
  if (!(gain >= 1.0)) throw std::invalid_argument("amplifier needs G >= 1");
  PhaseInsensitiveMap map{input_cutoff, output_cutoff, {}};
  const double log_g = std::log(gain);
  const double log_rest = gain > 1.0 ? std::log1p(-1.0 / gain) : -INFINITY;
  for (int d = 0; d <= input_cutoff; ++d) {
    Matrix t = Matrix::Zero(output_cutoff + 1, input_cutoff + 1);
    for (int n = 0; n + d <= input_cutoff; ++n) {
      for (int l = 0; n + l + d <= output_cutoff; ++l) {
        if (l > 0 && gain == 1.0) break;
        const double lg = 0.5 * (log_binomial(n + l, l) + log_binomial(n + d + l, l)) -
                          0.5 * (2.0 * n + d + 2.0) * log_g + (l > 0 ? l * log_rest : 0.0);
        t(n + l, n) = std::exp(lg);
      }
    }
    map.transfer.push_back(std::move(t));
  }
  return map;
}

PhaseInsensitiveMap compose_maps(const PhaseInsensitiveMap& second, const PhaseInsensitiveMap& first) {
  if (second.input_cutoff != first.output_cutoff) throw std::invalid_argument("map cutoffs do not chain");
  PhaseInsensitiveMap out{first.input_cutoff, second.output_cutoff, {}};
  const int dmax = std::min(first.input_cutoff, static_cast<int>(second.transfer.size()) - 1);
  for (int d = 0; d <= first.input_cutoff; ++d) {
    if (d <= dmax) {
      out.transfer.push_back(second.transfer[d] * first.transfer[d]);
    } else {
      out.transfer.push_back(Matrix::Zero(second.output_cutoff + 1, first.input_cutoff + 1));
    }
  }
  return out;
}

PhaseInsensitiveMap thermal_map(double eta, double n_b, int input_cutoff, int output_cutoff) {
  if (!(eta > 0.0 && eta < 1.0) || n_b < 0.0) throw std::invalid_argument("thermal map needs eta in (0,1), N_B >= 0");
  if (n_b == 0.0) return pure_loss_map(eta, input_cutoff, output_cutoff);
  const double gain = 1.0 + n_b * (1.0 - eta);
  return compose_maps(quantum_limited_amplifier_map(gain, input_cutoff, output_cutoff),
                      pure_loss_map(eta / gain, input_cutoff, input_cutoff));
}

PhaseInsensitiveMap amplifier_map(double gain, double n_b, int input_cutoff, int output_cutoff) {
  if (!(gain > 1.0) || n_b < 0.0) throw std::invalid_argument("amplifier map needs G > 1, N_B >= 0");
  if (n_b == 0.0) return quantum_limited_amplifier_map(gain, input_cutoff, output_cutoff);
  const double outer = gain + n_b * (gain - 1.0);
  return compose_maps(quantum_limited_amplifier_map(outer, input_cutoff, output_cutoff),
                      pure_loss_map(gain / outer, input_cutoff, input_cutoff));
}

PhaseInsensitiveMap additive_noise_map(double xi, int input_cutoff, int output_cutoff) {
  if (!(xi > 0.0)) throw std::invalid_argument("additive-noise map needs xi > 0");
  const double gain = 1.0 + xi;
  return compose_maps(quantum_limited_amplifier_map(gain, input_cutoff, output_cutoff),
                      pure_loss_map(1.0 / gain, input_cutoff, input_cutoff));
}

Matrix displacement_radial(double u, int cutoff) {
  Matrix out = Matrix::Zero(cutoff + 1, cutoff + 1);
  for (int delta = 0; delta <= cutoff; ++delta) {
    double h_prev = 0.0;
    double h = (u > 0.0) ? std::exp(0.5 * delta * std::log(u) - 0.5 * u - 0.5 * std::lgamma(delta + 1.0))
                         : (delta == 0 ? 1.0 : 0.0);
    const double sign = (delta % 2 == 0) ? 1.0 : -1.0;
    for (int k = 0; k + delta <= cutoff; ++k) {
      out(k + delta, k) = h;
      out(k, k + delta) = sign * h;
      const double next =
          ((2.0 * k + 1.0 + delta - u) * h - std::sqrt(static_cast<double>(k) * (k + delta)) * h_prev) /
          std::sqrt((k + 1.0) * (k + 1.0 + delta));
      h_prev = h;
      h = next;
    }
  }
  return out;
}

PhaseInsensitiveMap teleport_map_quadrature(double sigma_bar, int input_cutoff, int output_cutoff,
                                            double tolerance) {
  if (!(sigma_bar > 0.0)) throw std::invalid_argument("teleportation needs sigma > 0");
  constexpr double t_max = 45.0;
  const int k_max = std::max(input_cutoff, output_cutoff);
  const auto& nodes = boost::math::quadrature::gauss<double, 20>::abscissa();
  const auto& weights = boost::math::quadrature::gauss<double, 20>::weights();

  const auto evaluate = [&](int panels) {
    std::vector<Matrix> acc(input_cutoff + 1, Matrix::Zero(output_cutoff + 1, input_cutoff + 1));
    const double h = t_max / panels;
    const auto add_node = [&](double t, double w) {
      const double weight = w * std::exp(-t);
      const Matrix f = displacement_radial(sigma_bar * t, k_max);
      for (int d = 0; d <= input_cutoff; ++d) {
        auto& m = acc[d];
        for (int n = 0; n + d <= input_cutoff; ++n) {
          for (int j = 0; j + d <= output_cutoff; ++j) m(j, n) += weight * f(j, n) * f(j + d, n + d);
        }
      }
    };
    for (int p = 0; p < panels; ++p) {
      const double mid = (p + 0.5) * h;
      // boost stores the nonnegative half of a symmetric rule
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double x = 0.5 * h * nodes[i];
        const double w = 0.5 * h * weights[i];
        add_node(mid + x, w);
        if (nodes[i] != 0.0) add_node(mid - x, w);
      }
    }
    return acc;
  };

  int panels = 8;
  auto current = evaluate(panels);
  for (; panels <= 512; panels *= 2) {
    auto refined = evaluate(2 * panels);
    double diff = 0.0;
    for (int d = 0; d <= input_cutoff; ++d) diff = std::max(diff, (refined[d] - current[d]).cwiseAbs().maxCoeff());
    current = std::move(refined);
    if (diff < tolerance) return {input_cutoff, output_cutoff, std::move(current)};
  }
  throw std::runtime_error("teleportation map quadrature did not converge");
}

FockState apply_map(const PhaseInsensitiveMap& map, const FockState& state, int target_mode) {
  if (target_mode < 0 || target_mode >= state.modes()) throw std::out_of_range("target mode out of range");
  if (state.cutoffs()[target_mode] > map.input_cutoff) {
    throw std::invalid_argument("state cutoff exceeds the map's input cutoff");
  }
  auto cutoffs = state.cutoffs();
  cutoffs[target_mode] = map.output_cutoff;
  FockState out(state.modes(), cutoffs, state.symmetry());
  const int oc = map.output_cutoff;

  // Output blocks cached by charge to keep the inner loop free of map lookups.
  const int lo = state.symmetry() == FockSymmetry::number_difference ? -cutoffs[1] : 0;
  const int hi = state.symmetry() == FockSymmetry::none ? 0 : cutoffs[0];
  std::vector<CMatrix*> slot(hi - lo + 1, nullptr);
  const auto block_for = [&](int q) -> CMatrix& {
    auto& p = slot[q - lo];
    if (!p) p = &out.block(q);
    return *p;
  };

  state.for_each_entry([&](const Occupation& r, const Occupation& c, cd v) {
    const int n = r[target_mode], np = c[target_mode];
    const int d = np - n;
    if (d >= 0) {
      const Matrix& t = map.transfer[d];
      for (int j = 0; j + d <= oc; ++j) {
        const double coef = t(j, n);
        if (coef == 0.0) continue;
        const Occupation ro = with_mode(r, target_mode, j), co = with_mode(c, target_mode, j + d);
        block_for(out.charge_of(ro))(out.position_in_block(ro), out.position_in_block(co)) += coef * v;
      }
    } else {
      const int e = -d;
      const Matrix& t = map.transfer[e];
      for (int j = 0; j + e <= oc; ++j) {
        const double coef = t(j, np);
        if (coef == 0.0) continue;
        const Occupation ro = with_mode(r, target_mode, j + e), co = with_mode(c, target_mode, j);
        block_for(out.charge_of(ro))(out.position_in_block(ro), out.position_in_block(co)) += coef * v;
      }
    }
  });
  out.set_truncation_weight(state.truncation_weight());
  out.set_leakage(state.leakage() + std::max(0.0, state.trace() - out.trace()));
  return out;
}

FockState apply_teleport_channel_fock(const FockState& state, double sigma_bar, int target_mode, int output_cutoff) {
  if (target_mode < 0 || target_mode >= state.modes()) throw std::out_of_range("target mode out of range");
  const int ic = state.cutoffs()[target_mode];
  const int oc = output_cutoff < 0 ? ic : output_cutoff;
  return apply_map(teleport_map_quadrature(sigma_bar, ic, oc), state, target_mode);
}

FockState apply_unitary(const FockState& state, const CMatrix& unitary) {
  const auto dim = static_cast<Eigen::Index>(state.dimension());
  if (unitary.rows() != dim || unitary.cols() != dim) throw std::invalid_argument("unitary has the wrong dimension");
  FockState out(state.modes(), state.cutoffs(), FockSymmetry::none);
  out.block(0) = unitary * state.to_dense() * unitary.adjoint();
  out.set_truncation_weight(state.truncation_weight());
  out.set_leakage(state.leakage());
  return out;
}

FockState swap_modes(const FockState& state) {
  if (state.modes() != 2) throw std::invalid_argument("swap needs a two-mode state");
  FockState out(2, {state.cutoffs()[1], state.cutoffs()[0]}, state.symmetry());
  state.for_each_entry([&](const Occupation& r, const Occupation& c, cd v) {
    out.add_to_element({r[1], r[0]}, {c[1], c[0]}, v);
  });
  out.set_truncation_weight(state.truncation_weight());
  out.set_leakage(state.leakage());
  return out;
}

FockState phase_rotate(const FockState& state, int mode, double phi) {
  if (mode < 0 || mode >= state.modes()) throw std::out_of_range("mode out of range");
  FockState out(state.modes(), state.cutoffs(), state.symmetry());
  state.for_each_entry([&](const Occupation& r, const Occupation& c, cd v) {
    out.add_to_element(r, c, v * std::polar(1.0, -phi * (r[mode] - c[mode])));
  });
  out.set_truncation_weight(state.truncation_weight());
  out.set_leakage(state.leakage());
  return out;
}

FockState reset_mode_to_vacuum(const FockState& state, int mode) {
  if (state.modes() != 2) throw std::invalid_argument("reset needs a two-mode state");
  const auto kept = partial_trace(state, 1 - mode);
  auto vac = make_vacuum_fock(1, state.cutoffs()[mode]);
  return mode == 1 ? tensor(kept, vac) : tensor(vac, kept);
}

double fidelity_fock(const FockState& a, const FockState& b) {
  if (a.modes() != b.modes() || a.cutoffs() != b.cutoffs()) {
    throw std::invalid_argument("fidelity needs states with matching modes and cutoffs");
  }
  if (!same_layout(a, b)) return fidelity_fock(densify(a), densify(b));
  double root = 0.0;
  for (const auto& [q, block_a] : a.blocks()) {
    const auto it = b.blocks().find(q);
    if (it != b.blocks().end()) root += root_fidelity_block(block_a, it->second);
  }
  return std::clamp(root * root, 0.0, 1.0);
}

double trace_distance_fock(const FockState& a, const FockState& b) {
  if (a.modes() != b.modes() || a.cutoffs() != b.cutoffs()) {
    throw std::invalid_argument("trace distance needs states with matching modes and cutoffs");
  }
  if (!same_layout(a, b)) return trace_distance_fock(densify(a), densify(b));
  double norm = 0.0;
  for (const auto& [q, block_a] : a.blocks()) {
    const auto it = b.blocks().find(q);
    norm += trace_norm_hermitian(it == b.blocks().end() ? block_a : CMatrix(block_a - it->second));
  }
  for (const auto& [q, block_b] : b.blocks()) {
    if (!a.blocks().contains(q)) norm += trace_norm_hermitian(block_b);
  }
  return std::clamp(0.5 * norm, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Characteristic function and entanglement infidelity

CharacteristicFunction::CharacteristicFunction(std::vector<double> populations)
    : populations_(std::move(populations)) {}

double CharacteristicFunction::operator()(double u) const {
  double prev = 0.0;
  double cur = std::exp(-0.5 * u);
  double sum = 0.0;
  for (std::size_t n = 0; n < populations_.size(); ++n) {
    sum += populations_[n] * cur;
    const double k = static_cast<double>(n);
    const double next = ((2.0 * k + 1.0 - u) * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return sum;
}

CharacteristicFunction char_function_fock_diagonal(const FockState& state) {
  if (state.modes() != 1) throw std::invalid_argument("characteristic function needs a single-mode state");
  std::vector<double> p(state.cutoffs()[0] + 1, 0.0);
  bool diagonal = true;
  state.for_each_entry([&](const Occupation& r, const Occupation& c, cd v) {
    if (r[0] != c[0]) {
      diagonal = diagonal && std::abs(v) < 1e-14;
    } else {
      p[r[0]] = v.real();
    }
  });
  if (!diagonal) throw std::invalid_argument("characteristic function needs a number-diagonal state");
  return CharacteristicFunction(std::move(p));
}

InfidelityResult entanglement_infidelity_teleport(const FockState& reduced_state, double sigma_bar) {
  if (!(sigma_bar > 0.0)) throw std::invalid_argument("teleportation needs sigma > 0");
  const auto chi = char_function_fock_diagonal(reduced_state);
  const double trace = reduced_state.trace();
  // With t = u / sigma the weight is e^{-t}; with t = s^2 the Laguerre
  // oscillations are roughly uniform in s. Composite Gauss-Legendre panels
  // are doubled until successive totals agree.
  constexpr double s_max = 6.7082039324993694;  // sqrt(45)
  const auto& nodes = boost::math::quadrature::gauss<double, 20>::abscissa();
  const auto& weights = boost::math::quadrature::gauss<double, 20>::weights();
  const auto integrand = [&](double s) {
    const double t = s * s;
    const double c = chi(sigma_bar * t) / trace;
    return 2.0 * s * std::exp(-t) * c * c;
  };
  const auto integrate = [&](int panels) {
    const double h = s_max / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double mid = (p + 0.5) * h;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double x = 0.5 * h * nodes[i];
        const double w = 0.5 * h * weights[i];
        total += w * integrand(mid + x);
        if (nodes[i] != 0.0) total += w * integrand(mid - x);
      }
    }
    return total;
  };
  InfidelityResult out;
  double previous = integrate(4);
  for (int panels = 8; panels <= 4096; panels *= 2) {
    const double current = integrate(panels);
    out.error_estimate = std::abs(current - previous);
    previous = current;
    if (out.error_estimate < 1e-12) break;
  }
  out.value = std::clamp(1.0 - previous, 0.0, 1.0);
  out.converged = out.error_estimate < 1e-8;
  return out;
}

double mean_photon_number(const FockState& state) {
  if (state.modes() != 1) throw std::invalid_argument("mean photon number needs a single-mode state");
  double n = 0.0;
  state.for_each_entry([&](const Occupation& r, const Occupation& c, cd v) {
    if (r[0] == c[0]) n += r[0] * v.real();
  });
  return n;
}

FockMoments fock_moments(const FockState& state) {
  const int m = state.modes();
  // <a_k>, <a_j a_k>, <a_j^dag a_k> from Tr(rho O) = sum rho(r, c) <c|O|r>.
  CVector a1 = CVector::Zero(m);
  CMatrix aa = CMatrix::Zero(m, m);
  CMatrix ada = CMatrix::Zero(m, m);
  state.for_each_entry([&](const Occupation& r, const Occupation& c, cd v) {
    for (int k = 0; k < m; ++k) {
      if (r[k] < 1) continue;
      Occupation r1 = r;
      r1[k] -= 1;
      const double ck = std::sqrt(static_cast<double>(r[k]));
      if (r1 == c) a1(k) += v * ck;
      for (int j = 0; j < m; ++j) {
        if (r1[j] >= 1) {
          Occupation r2 = r1;
          r2[j] -= 1;
          if (r2 == c) aa(j, k) += v * ck * std::sqrt(static_cast<double>(r1[j]));
        }
        Occupation r3 = r1;
        r3[j] += 1;
        if (r3 == c) ada(j, k) += v * ck * std::sqrt(static_cast<double>(r3[j]));
      }
    }
  });
  // R_i = sum_l u(i,l) a_l + w(i,l) a_l^dag with q = a + a^dag, p = -i (a - a^dag).
  const cd I(0.0, 1.0);
  CMatrix u = CMatrix::Zero(2 * m, m), w = CMatrix::Zero(2 * m, m);
  for (int k = 0; k < m; ++k) {
    u(k, k) = 1.0;
    w(k, k) = 1.0;
    u(m + k, k) = -I;
    w(m + k, k) = I;
  }
  const CMatrix a_adag = ada.transpose() + CMatrix::Identity(m, m);  // <a_l a_k^dag>
  const CMatrix adag_adag = aa.conjugate();
  FockMoments out;
  const CVector mean_c = u * a1 + w * a1.conjugate();
  out.mean = mean_c.real();
  const CMatrix second = u * aa * u.transpose() + u * a_adag * w.transpose() + w * ada * u.transpose() +
                         w * adag_adag * w.transpose();
  out.cov = (second - mean_c * mean_c.transpose()).real();
  out.cov = 0.5 * (out.cov + out.cov.transpose()).eval();
  return out;
}

}  // namespace gt
