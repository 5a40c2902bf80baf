#include "gt/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "gt/fidelity.hpp"
#include "gt/parallel.hpp"
#include "gt/seeding.hpp"
#include "gt/teleport.hpp"

namespace gt {

namespace {

constexpr std::array<int, 1> kChannelMode{1};
constexpr double kBoundTolerance = 1e-4;

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

std::string probe_label(const ProbeSpec& p) {
  return p.kind == ProbeKind::tmsv ? fmt::format("tmsv({:.17g})", p.n_s) : to_string(p.kind);
}

std::optional<double> probe_n_s(const ProbeSpec& p) {
  switch (p.kind) {
    case ProbeKind::tmsv: return p.n_s;
    case ProbeKind::vacuum:
    case ProbeKind::product_vacuum: return 0.0;
    case ProbeKind::basel: break;
  }
  return std::nullopt;
}

int output_cutoff_of(const SweepSpec& s) { return s.output_cutoff >= 0 ? s.output_cutoff : s.cutoff; }

/// Reduced state of one half of the probe, as photon-number populations.
FockState reduced_probe(const ProbeSpec& p, int cutoff) {
  switch (p.kind) {
    case ProbeKind::vacuum:
    case ProbeKind::product_vacuum: return make_diagonal_fock({1.0});
    case ProbeKind::tmsv: return make_thermal_fock(p.n_s, cutoff);
    case ProbeKind::basel: {
      std::vector<double> pops(cutoff + 1, 0.0);
      double total = 0.0;
      for (int n = 1; n <= cutoff; ++n) total += 1.0 / (static_cast<double>(n) * n);
      for (int n = 1; n <= cutoff; ++n) pops[n] = 1.0 / (static_cast<double>(n) * n) / total;
      return make_diagonal_fock(pops, basel_weight(cutoff));
    }
  }
  throw std::invalid_argument("unknown probe");
}

FockState two_mode_probe(const ProbeSpec& p, int cutoff) {
  switch (p.kind) {
    case ProbeKind::vacuum:
    case ProbeKind::product_vacuum: return make_tmsv_fock(0.0, cutoff);
    case ProbeKind::tmsv: return make_tmsv_fock(p.n_s, cutoff);
    case ProbeKind::basel: return make_basel_state(cutoff);
  }
  throw std::invalid_argument("unknown probe");
}

GaussianState gaussian_probe(const ProbeSpec& p) {
  switch (p.kind) {
    case ProbeKind::vacuum:
    case ProbeKind::product_vacuum: return GaussianState::vacuum(2);
    case ProbeKind::tmsv: return make_tmsv_state(p.n_s);
    case ProbeKind::basel: break;
  }
  throw std::invalid_argument("the Basel probe has no Gaussian representation");
}

double fock_p(const FockState& a, const FockState& b) { return p_distance(fidelity_fock(a, b)); }

double gaussian_p(const GaussianState& a, const GaussianState& b) { return fidelity_gaussian_zero_mean(a, b).p_distance; }

void require_trusted_output(const FockState& s, double floor, std::size_t row, const std::string& what) {
  if (1.0 - s.leakage() < floor) {
    throw TruncationError(row, fmt::format("row {}: {} lost {:.3g} of its trace to the cutoff (floor {})", row, what,
                                           s.leakage(), floor));
  }
}

SweepRow start_row(std::string probe, double sigma, std::optional<double> n_s, std::optional<int> instance,
                   std::string metric) {
  SweepRow row;
  row.probe = std::move(probe);
  row.sigma_bar = sigma;
  row.n_s = n_s;
  row.instance = instance;
  row.metric = std::move(metric);
  return row;
}

template <class Row>
std::vector<SweepRow> rows_in_parallel(std::size_t n, int threads, Row&& make_row) {
  std::vector<SweepRow> rows(n);
  parallel_for(n, threads, [&](std::size_t i) { rows[i] = make_row(i); });
  return rows;
}

std::optional<double> uniform_bound_if_any(const ChannelDescriptor& d, double sigma) {
  if (d.kind == ChannelKind::identity || d.kind == ChannelKind::raw) return std::nullopt;
  return uniform_bound(d, sigma).bound_value;
}

ExperimentKind experiment_from_string(const std::string& s) {
  for (auto k : {ExperimentKind::strong_fixed_state, ExperimentKind::uniform_divergence, ExperimentKind::tensor_power,
                 ExperimentKind::adaptive_serial, ExperimentKind::bound_vs_oracle}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument(fmt::format("sweep: unknown experiment '{}'", s));
}

AdaptorKind adaptor_from_string(const std::string& s) {
  for (auto k : {AdaptorKind::identity, AdaptorKind::random_symplectic, AdaptorKind::swap, AdaptorKind::phase_rotation,
                 AdaptorKind::reset}) {
    if (to_string(k) == s) return k;
  }
  throw std::invalid_argument(fmt::format("sweep: unsupported adaptor kind '{}'", s));
}

ProbeSpec probe_from_json(const Json& doc, std::string_view where) {
  reject_unknown_fields(doc, {"kind", "n_s"}, where);
  const auto kind = get_string(doc, "kind", where);
  ProbeSpec p;
  if (kind == "vacuum") {
    p.kind = ProbeKind::vacuum;
  } else if (kind == "product_vacuum") {
    p.kind = ProbeKind::product_vacuum;
  } else if (kind == "basel") {
    p.kind = ProbeKind::basel;
  } else if (kind == "tmsv") {
    p.kind = ProbeKind::tmsv;
    p.n_s = get_number(doc, "n_s", where);
  } else {
    throw std::invalid_argument(fmt::format("{}: unknown probe kind '{}'", where, kind));
  }
  if (p.kind != ProbeKind::tmsv) require(!doc.contains("n_s"), fmt::format("{}: n_s applies to tmsv probes only", where));
  return p;
}

Json probe_to_json(const ProbeSpec& p) {
  Json out{{"kind", to_string(p.kind)}};
  if (p.kind == ProbeKind::tmsv) out["n_s"] = p.n_s;
  return out;
}

bool covariance_level(AdaptorKind a) { return a == AdaptorKind::identity || a == AdaptorKind::random_symplectic; }

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::strong_fixed_state: return "strong_fixed_state";
    case ExperimentKind::uniform_divergence: return "uniform_divergence";
    case ExperimentKind::tensor_power: return "tensor_power";
    case ExperimentKind::adaptive_serial: return "adaptive_serial";
    case ExperimentKind::bound_vs_oracle: return "bound_vs_oracle";
  }
  return "unknown";
}

std::string to_string(ProbeKind kind) {
  switch (kind) {
    case ProbeKind::vacuum: return "vacuum";
    case ProbeKind::tmsv: return "tmsv";
    case ProbeKind::basel: return "basel";
    case ProbeKind::product_vacuum: return "product_vacuum";
  }
  return "unknown";
}

std::string to_string(AdaptorKind kind) {
  switch (kind) {
    case AdaptorKind::identity: return "identity";
    case AdaptorKind::random_symplectic: return "random_symplectic";
    case AdaptorKind::swap: return "swap";
    case AdaptorKind::phase_rotation: return "phase_rotation";
    case AdaptorKind::reset: return "reset";
  }
  return "unknown";
}

double tmsv_teleport_infidelity(double n_s, double sigma_bar) {
  const double x = sigma_bar * (1.0 + 2.0 * n_s);
  return x / (1.0 + x);
}

void validate(const SweepSpec& s) {
  require(!s.sigma_grid.empty(), "sigma_grid must not be empty");
  for (std::size_t k = 0; k < s.sigma_grid.size(); ++k) {
    require(s.sigma_grid[k] > 0.0, "sigma_grid entries must be positive");
    if (k > 0) require(s.sigma_grid[k] < s.sigma_grid[k - 1], "sigma_grid must be strictly decreasing");
  }
  for (std::size_t k = 0; k < s.n_s_grid.size(); ++k) {
    require(s.n_s_grid[k] >= 0.0, "n_s_grid entries must be >= 0");
    if (k > 0) require(s.n_s_grid[k] > s.n_s_grid[k - 1], "n_s_grid must be strictly increasing");
  }
  require(s.cutoff >= 0, "cutoff must be >= 0");
  require(s.truncation_floor > 0.0 && s.truncation_floor <= 1.0, "truncation_floor must lie in (0, 1]");
  for (const auto& p : s.probes) require(p.kind != ProbeKind::tmsv || p.n_s >= 0.0, "probe n_s must be >= 0");

  switch (s.experiment) {
    case ExperimentKind::strong_fixed_state:
      require(s.probes.size() == 1, "strong_fixed_state needs exactly one state");
      require(s.probes[0].kind != ProbeKind::basel || s.cutoff >= 1, "the Basel state needs cutoff >= 1");
      break;
    case ExperimentKind::uniform_divergence:
      require(!s.n_s_grid.empty(), "uniform_divergence needs a nonempty n_s_grid");
      break;
    case ExperimentKind::tensor_power:
      require(s.probes.size() == 1, "tensor_power needs exactly one state");
      require(s.probes[0].kind != ProbeKind::basel, "tensor_power supports vacuum and tmsv states");
      break;
    case ExperimentKind::adaptive_serial:
      require(s.probes.size() == 1, "adaptive_serial needs exactly one state");
      require(s.channel.has_value(), "adaptive_serial needs a channel");
      require(s.channel->modes() == 1, "adaptive_serial needs a single-mode channel");
      require(s.uses >= 1 && s.uses <= 3, "adaptive_serial supports 1 to 3 channel uses");
      require(s.instances >= 1, "instances must be >= 1");
      if (covariance_level(s.adaptor)) {
        require(s.probes[0].kind != ProbeKind::basel, "covariance-level protocols need a Gaussian state");
      } else {
        require(s.cutoff >= 1, "Fock-level adaptors need cutoff >= 1");
        require(s.output_cutoff < 0 || s.output_cutoff == s.cutoff, "Fock-level adaptors keep the probe cutoff");
      }
      break;
    case ExperimentKind::bound_vs_oracle:
      require(!s.probes.empty(), "bound_vs_oracle needs at least one probe");
      require(s.channel.has_value(), "bound_vs_oracle needs a channel");
      require(s.channel->modes() == 1, "bound_vs_oracle needs a single-mode channel");
      require(s.cutoff >= 1, "bound_vs_oracle needs cutoff >= 1");
      uniform_bound(*s.channel, s.sigma_grid.front());
      break;
  }
}

std::vector<SweepRow> run_strong_convergence(const SweepSpec& spec, int threads) {
  validate(spec);
  const auto& probe = spec.probes.front();
  const auto reduced = reduced_probe(probe, spec.cutoff);
  if (reduced.truncation_weight() < spec.truncation_floor) {
    throw TruncationError(0, fmt::format("row 0: state {} keeps weight {:.17g} at cutoff {}, below the floor {}",
                                         probe_label(probe), reduced.truncation_weight(), spec.cutoff,
                                         spec.truncation_floor));
  }
  return rows_in_parallel(spec.sigma_grid.size(), threads, [&](std::size_t i) {
    const double sigma = spec.sigma_grid[i];
    auto row = start_row(probe_label(probe), sigma, probe_n_s(probe), std::nullopt, "infidelity");
    const auto quad = entanglement_infidelity_teleport(reduced, sigma);
    if (!quad.converged) throw std::runtime_error(fmt::format("row {}: infidelity quadrature did not converge", i));
    row.oracle = quad.value;
    if (const auto n_s = probe_n_s(probe)) row.analytic = tmsv_teleport_infidelity(*n_s, sigma);
    row.value = row.analytic.value_or(quad.value);
    row.truncation_weight = reduced.truncation_weight();
    return row;
  });
}

std::vector<SweepRow> run_uniform_divergence(const SweepSpec& spec, int threads) {
  validate(spec);
  const std::size_t per_sigma = spec.n_s_grid.size();
  return rows_in_parallel(spec.sigma_grid.size() * per_sigma, threads, [&](std::size_t i) {
    const double sigma = spec.sigma_grid[i / per_sigma];
    const double n_s = spec.n_s_grid[i % per_sigma];
    const ProbeSpec probe{ProbeKind::tmsv, n_s};
    auto row = start_row(probe_label(probe), sigma, n_s, std::nullopt, "infidelity");
    row.analytic = tmsv_teleport_infidelity(n_s, sigma);
    const auto state = make_tmsv_state(n_s);
    const auto output = apply_on_subsystem(make_teleport_channel(sigma), state, kChannelMode);
    row.value = 1.0 - overlap_two_mode_zero_mean(state.cov(), output.cov());
    if (spec.cutoff > 0) {
      const auto psi = make_tmsv_fock(n_s, spec.cutoff);
      row.truncation_weight = psi.truncation_weight();
      if (psi.trusted(spec.truncation_floor)) {
        const auto out = apply_teleport_channel_fock(psi, sigma, 1, output_cutoff_of(spec));
        if (1.0 - out.leakage() >= spec.truncation_floor) row.oracle = 1.0 - fidelity_fock(psi, out);
      }
    }
    return row;
  });
}

std::vector<SweepRow> run_tensor_power(const SweepSpec& spec, int threads) {
  validate(spec);
  const auto& probe = spec.probes.front();
  const double n_s = probe_n_s(probe).value();
  std::optional<FockState> psi;
  if (spec.cutoff > 0) {
    psi = two_mode_probe(probe, spec.cutoff);
    if (!psi->trusted(spec.truncation_floor)) {
      throw TruncationError(0, fmt::format("row 0: state {} keeps weight {:.17g} at cutoff {}, below the floor {}",
                                           probe_label(probe), psi->truncation_weight(), spec.cutoff,
                                           spec.truncation_floor));
    }
  }
  return rows_in_parallel(spec.sigma_grid.size(), threads, [&](std::size_t i) {
    const double sigma = spec.sigma_grid[i];
    auto row = start_row(probe_label(probe), sigma, n_s, std::nullopt, "p_distance");
    const auto state = gaussian_probe(probe);
    const auto output = apply(make_teleport_channel(sigma, 2), state);
    row.value = p_distance(std::min(1.0, overlap_zero_mean(state.cov(), output.cov())));
    if (probe.kind != ProbeKind::tmsv || n_s == 0.0) {
      const double f = 1.0 / (1.0 + sigma);
      row.analytic = std::sqrt(1.0 - f * f);
    }
    const double per_use = std::sqrt(tmsv_teleport_infidelity(n_s, sigma));
    row.bound = telescoping_bound_parallel(std::vector<double>{per_use, per_use});
    if (psi) {
      const auto once = apply_teleport_channel_fock(*psi, sigma, 0, output_cutoff_of(spec));
      const auto twice = apply_teleport_channel_fock(once, sigma, 1, output_cutoff_of(spec));
      require_trusted_output(twice, spec.truncation_floor, i, "the two-use output");
      if (twice.cutoffs() == psi->cutoffs()) row.oracle = fock_p(*psi, twice);
      row.truncation_weight = psi->truncation_weight();
    }
    return row;
  });
}

std::vector<SweepRow> run_adaptive_serial(const SweepSpec& spec, int threads) {
  validate(spec);
  const auto& probe = spec.probes.front();
  const auto& base = *spec.channel;
  const int uses = spec.uses;
  const int instances = spec.instances;
  const std::size_t total = spec.sigma_grid.size() * static_cast<std::size_t>(instances);

  if (covariance_level(spec.adaptor)) {
    const auto ideal = make_channel(base);
    return rows_in_parallel(total, threads, [&](std::size_t i) {
      const double sigma = spec.sigma_grid[i / instances];
      const int instance = static_cast<int>(i % instances);
      const auto simulated = simulate(ideal, sigma).simulated;
      std::mt19937_64 rng(derive_seed(spec.seed, static_cast<std::uint64_t>(instance)));
      std::vector<Matrix> adaptors;
      for (int j = 0; j + 1 < uses; ++j) {
        adaptors.push_back(spec.adaptor == AdaptorKind::random_symplectic ? random_symplectic(2, rng)
                                                                          : Matrix(Matrix::Identity(4, 4)));
      }
      auto ideal_state = gaussian_probe(probe);
      auto sim_state = ideal_state;
      std::vector<double> steps;
      for (int j = 0; j < uses; ++j) {
        steps.push_back(gaussian_p(apply_on_subsystem(ideal, sim_state, kChannelMode),
                                   apply_on_subsystem(simulated, sim_state, kChannelMode)));
        ideal_state = apply_on_subsystem(ideal, ideal_state, kChannelMode);
        sim_state = apply_on_subsystem(simulated, sim_state, kChannelMode);
        if (j + 1 < uses) {
          ideal_state = transform(ideal_state, adaptors[j]);
          sim_state = transform(sim_state, adaptors[j]);
        }
      }
      auto row = start_row(probe_label(probe), sigma, probe_n_s(probe), instance, "p_distance");
      row.value = gaussian_p(ideal_state, sim_state);
      row.bound = telescoping_bound_serial(steps);
      if (const auto e = uniform_bound_if_any(base, sigma)) row.uniform_bound = std::min(1.0, uses * *e);
      return row;
    });
  }

  const auto psi = two_mode_probe(probe, spec.cutoff);
  const auto ideal_map = fock_map_for(base, spec.cutoff, spec.cutoff);
  return rows_in_parallel(total, threads, [&](std::size_t i) {
    const double sigma = spec.sigma_grid[i / instances];
    const int instance = static_cast<int>(i % instances);
    const auto sim_desc = *simulate(make_channel(base), sigma).simulated.descriptor();
    const auto sim_map = fock_map_for(sim_desc, spec.cutoff, spec.cutoff);
    std::mt19937_64 rng(derive_seed(spec.seed, static_cast<std::uint64_t>(instance)));
    auto adapt = [&](const FockState& s, double phi) {
      switch (spec.adaptor) {
        case AdaptorKind::swap: return swap_modes(s);
        case AdaptorKind::phase_rotation: return phase_rotate(s, 1, phi);
        case AdaptorKind::reset: return reset_mode_to_vacuum(s, 0);
        default: break;
      }
      throw std::invalid_argument(fmt::format("unsupported Fock adaptor '{}'", to_string(spec.adaptor)));
    };
    FockState ideal_state = psi, sim_state = psi;
    std::vector<double> steps;
    for (int j = 0; j < uses; ++j) {
      steps.push_back(fock_p(apply_map(ideal_map, sim_state, 1), apply_map(sim_map, sim_state, 1)));
      ideal_state = apply_map(ideal_map, ideal_state, 1);
      sim_state = apply_map(sim_map, sim_state, 1);
      if (j + 1 < uses) {
        const double phi = 2.0 * std::numbers::pi * uniform01(rng);
        ideal_state = adapt(ideal_state, phi);
        sim_state = adapt(sim_state, phi);
      }
    }
    require_trusted_output(ideal_state, spec.truncation_floor, i, "the ideal protocol output");
    require_trusted_output(sim_state, spec.truncation_floor, i, "the simulated protocol output");
    auto row = start_row(probe_label(probe), sigma, probe_n_s(probe), instance, "p_distance");
    row.value = fock_p(ideal_state, sim_state);
    row.oracle = row.value;
    row.bound = telescoping_bound_serial(steps);
    if (const auto e = uniform_bound_if_any(base, sigma)) row.uniform_bound = std::min(1.0, uses * *e);
    row.truncation_weight = psi.truncation_weight();
    return row;
  });
}

std::vector<SweepRow> run_bound_vs_oracle(const SweepSpec& spec, int threads) {
  validate(spec);
  const auto& base = *spec.channel;
  const int out_cutoff = output_cutoff_of(spec);
  const auto ideal = make_channel(base);
  const auto ideal_map = fock_map_for(base, spec.cutoff, out_cutoff);
  const std::size_t per_sigma = spec.probes.size();
  return rows_in_parallel(spec.sigma_grid.size() * per_sigma, threads, [&](std::size_t i) {
    const double sigma = spec.sigma_grid[i / per_sigma];
    const auto& probe = spec.probes[i % per_sigma];
    const auto simulated = simulate(ideal, sigma).simulated;
    const auto sim_map = fock_map_for(*simulated.descriptor(), spec.cutoff, out_cutoff);
    const auto psi = two_mode_probe(probe, spec.cutoff);
    const auto a = apply_map(ideal_map, psi, 1);
    const auto b = apply_map(sim_map, psi, 1);
    require_trusted_output(a, spec.truncation_floor, i, "the channel output");
    require_trusted_output(b, spec.truncation_floor, i, "the simulated channel output");
    auto row = start_row(probe_label(probe), sigma, probe_n_s(probe), std::nullopt, "p_distance");
    row.oracle = fock_p(a, b);
    row.value = *row.oracle;
    if (probe.kind != ProbeKind::basel) {
      const auto g = gaussian_probe(probe);
      row.analytic = gaussian_p(apply_on_subsystem(ideal, g, kChannelMode), apply_on_subsystem(simulated, g, kChannelMode));
    }
    row.bound = uniform_bound(base, sigma).bound_value;
    row.truncation_weight = psi.truncation_weight();
    return row;
  });
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, int threads) {
  switch (spec.experiment) {
    case ExperimentKind::strong_fixed_state: return run_strong_convergence(spec, threads);
    case ExperimentKind::uniform_divergence: return run_uniform_divergence(spec, threads);
    case ExperimentKind::tensor_power: return run_tensor_power(spec, threads);
    case ExperimentKind::adaptive_serial: return run_adaptive_serial(spec, threads);
    case ExperimentKind::bound_vs_oracle: return run_bound_vs_oracle(spec, threads);
  }
  throw std::invalid_argument("unknown experiment");
}

std::vector<std::string> check_rows(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  std::vector<std::string> problems;
  auto flag = [&](std::size_t i, const std::string& what) { problems.push_back(fmt::format("row {}: {}", i, what)); };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (!(r.value >= -1e-12 && r.value <= 1.0 + 1e-12)) flag(i, fmt::format("value {:.17g} outside [0, 1]", r.value));
    if (r.bound) {
      if (r.value > *r.bound + kBoundTolerance) flag(i, fmt::format("value {:.17g} exceeds bound {:.17g}", r.value, *r.bound));
      if (r.oracle && *r.oracle > *r.bound + kBoundTolerance) {
        flag(i, fmt::format("oracle {:.17g} exceeds bound {:.17g}", *r.oracle, *r.bound));
      }
    }
    if (r.uniform_bound && r.bound && *r.bound > *r.uniform_bound + 1e-12) {
      flag(i, fmt::format("telescoping sum {:.17g} exceeds uses * e = {:.17g}", *r.bound, *r.uniform_bound));
    }
    if (r.oracle && r.analytic && spec.experiment != ExperimentKind::strong_fixed_state &&
        std::abs(*r.oracle - *r.analytic) > kBoundTolerance) {
      flag(i, fmt::format("oracle {:.17g} and analytic {:.17g} differ by more than {}", *r.oracle, *r.analytic,
                          kBoundTolerance));
    }
  }
  switch (spec.experiment) {
    case ExperimentKind::strong_fixed_state:
      for (std::size_t i = 1; i < rows.size(); ++i) {
        if (!(rows[i].value < rows[i - 1].value)) flag(i, "infidelity does not decrease with sigma");
      }
      break;
    case ExperimentKind::uniform_divergence: {
      const std::size_t per_sigma = spec.n_s_grid.size();
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i % per_sigma != 0 && rows[i].value < rows[i - 1].value) flag(i, "infidelity decreases with N_S");
        const double scale = rows[i].sigma_bar * rows[i].n_s.value_or(0.0);
        if (scale > 0.0 && rows[i].value < 1.0 - 1.0 / scale) flag(i, "infidelity below 1 - 1/(sigma N_S)");
      }
      break;
    }
    case ExperimentKind::tensor_power:
      for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].value > rows[i - 1].value) flag(i, "two-use distance increases as sigma decreases");
      }
      break;
    case ExperimentKind::bound_vs_oracle: {
      const std::size_t per_sigma = spec.probes.size();
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const std::size_t base = i - i % per_sigma;
        for (std::size_t j = base; j < i; ++j) {
          if (spec.probes[j - base].kind != ProbeKind::basel && spec.probes[i - base].kind != ProbeKind::basel &&
              rows[j].n_s <= rows[i].n_s && rows[j].value > rows[i].value + 1e-12) {
            flag(i, "distance decreases with probe N_S");
          }
        }
      }
      break;
    }
    case ExperimentKind::adaptive_serial: break;
  }
  return problems;
}

SweepSpec sweep_spec_from_json(const Json& doc) {
  constexpr std::string_view where = "sweep";
  reject_unknown_fields(doc, {"experiment", "state", "probes", "sigma_grid", "n_s_grid", "cutoff", "output_cutoff",
                              "truncation_floor", "channel", "uses", "adaptor", "instances", "seed", "output_path"},
                        where);
  SweepSpec s;
  s.experiment = experiment_from_string(get_string(doc, "experiment", where));
  require(!(doc.contains("state") && doc.contains("probes")), "sweep: give either 'state' or 'probes', not both");
  if (doc.contains("state")) s.probes.push_back(probe_from_json(doc["state"], "sweep.state"));
  if (doc.contains("probes")) {
    require(doc["probes"].is_array(), "sweep: 'probes' must be an array");
    for (std::size_t k = 0; k < doc["probes"].size(); ++k) {
      s.probes.push_back(probe_from_json(doc["probes"][k], fmt::format("sweep.probes[{}]", k)));
    }
  }
  s.sigma_grid = get_number_list(doc, "sigma_grid", where);
  if (doc.contains("n_s_grid")) s.n_s_grid = get_number_list(doc, "n_s_grid", where);
  s.cutoff = static_cast<int>(get_integer_or(doc, "cutoff", s.cutoff, where));
  s.output_cutoff = static_cast<int>(get_integer_or(doc, "output_cutoff", s.output_cutoff, where));
  s.truncation_floor = get_number_or(doc, "truncation_floor", s.truncation_floor, where);
  if (doc.contains("channel")) s.channel = descriptor_from_json(doc["channel"]);
  s.uses = static_cast<int>(get_integer_or(doc, "uses", s.uses, where));
  if (doc.contains("adaptor")) s.adaptor = adaptor_from_string(get_string(doc, "adaptor", where));
  s.instances = static_cast<int>(get_integer_or(doc, "instances", s.instances, where));
  const auto seed = get_integer_or(doc, "seed", 0, where);
  require(seed >= 0, "sweep: seed must be >= 0");
  s.seed = static_cast<std::uint64_t>(seed);
  if (doc.contains("output_path")) s.output_path = get_string(doc, "output_path", where);
  validate(s);
  return s;
}

Json sweep_spec_to_json(const SweepSpec& s) {
  Json probes = Json::array();
  for (const auto& p : s.probes) probes.push_back(probe_to_json(p));
  Json out{{"experiment", to_string(s.experiment)},
           {"probes", probes},
           {"sigma_grid", s.sigma_grid},
           {"n_s_grid", s.n_s_grid},
           {"cutoff", s.cutoff},
           {"output_cutoff", s.output_cutoff},
           {"truncation_floor", s.truncation_floor},
           {"uses", s.uses},
           {"adaptor", to_string(s.adaptor)},
           {"instances", s.instances},
           {"seed", s.seed}};
  if (s.channel) out["channel"] = descriptor_to_json(*s.channel);
  if (!s.output_path.empty()) out["output_path"] = s.output_path;
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string rows_to_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  auto num = [](std::optional<double> v) { return v ? fmt::format("{:.17g}", *v) : std::string(); };
  std::string out =
      "experiment,probe,sigma_bar,n_s,instance,metric,value,analytic,oracle,bound,uniform_bound,truncation_weight\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", to_string(spec.experiment), r.probe, num(r.sigma_bar),
                       num(r.n_s), r.instance ? std::to_string(*r.instance) : std::string(), r.metric, num(r.value),
                       num(r.analytic), num(r.oracle), num(r.bound), num(r.uniform_bound), num(r.truncation_weight));
  }
  auto hashed = sweep_spec_to_json(spec);
  hashed.erase("output_path");
  out += fmt::format("# gtsim {} config_hash=fnv1a64:{:016x} experiment={}\n", GTSIM_VERSION, fnv1a64(hashed.dump()),
                     to_string(spec.experiment));
  return out;
}

}  // namespace gt
